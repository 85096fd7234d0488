//! Dense big-integer matrices and the exact reductions built on them:
//! row echelon form with unimodular transforms, Hermite and Smith normal
//! forms, integral kernels, saturations and Gram determinants.
//!
//! Basis matrices throughout the crate store basis vectors as *columns*.
//! Chain modules act on row vectors by right multiplication, so the kernel
//! that matters for cycles is the left kernel `{x : x M = 0}`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Dense row-major matrix over Z.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMat {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMat {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(size: usize) -> Self {
        let mut m = Self::zero(size, size);
        for i in 0..size {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        IntMat { rows, cols, data }
    }

    pub fn from_rows_i64(rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        Self::from_fn(r, c, |i, j| BigInt::from(rows[i][j]))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn add_assign_at(&mut self, i: usize, j: usize, v: &BigInt) {
        self.data[i * self.cols + j] += v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_empty(&self) -> bool {
        self.rows == 0 || self.cols == 0
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(
            self.cols, rhs.rows,
            "matrix shapes do not compose: {}x{} * {}x{}",
            self.rows, self.cols, rhs.rows, rhs.cols
        );
        let mut out = Self::zero(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        let prod = a * b;
                        out.data[i * rhs.cols + j] += prod;
                    }
                }
            }
        }
        out
    }

    /// Horizontal concatenation `[self | rhs]`.
    pub fn hcat(&self, rhs: &Self) -> Self {
        assert_eq!(self.rows, rhs.rows, "row counts differ");
        Self::from_fn(self.rows, self.cols + rhs.cols, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                rhs.get(i, j - self.cols).clone()
            }
        })
    }

    /// Keeps the listed columns, in order.
    pub fn select_cols(&self, cols: &[usize]) -> Self {
        Self::from_fn(self.rows, cols.len(), |i, j| self.get(i, cols[j]).clone())
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let v = -self.get(r, j).clone();
            self.set(r, j, v);
        }
    }

    /// row[dst] += c * row[src]
    fn add_mul_row(&mut self, src: usize, dst: usize, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = self.get(dst, j) + c * self.get(src, j);
            self.set(dst, j, v);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    fn negate_col(&mut self, c: usize) {
        for i in 0..self.rows {
            let v = -self.get(i, c).clone();
            self.set(i, c, v);
        }
    }

    /// col[dst] += c * col[src]
    fn add_mul_col(&mut self, src: usize, dst: usize, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = self.get(i, dst) + c * self.get(i, src);
            self.set(i, dst, v);
        }
    }

    /// Integer row echelon form `E * self = H` with `E` unimodular.
    ///
    /// Pivot selection takes the minimal nonzero absolute value in the
    /// working column, which keeps entry growth moderate. When `track` is
    /// set, `e` and its inverse are maintained so callers can read off
    /// integral kernel bases and express vectors in them.
    pub fn row_echelon(&self, track: bool) -> RowEchelon {
        let mut h = self.clone();
        let mut e = track.then(|| Self::identity(self.rows));
        let mut einv = track.then(|| Self::identity(self.rows));
        let mut pivot_row = 0usize;
        let mut pivots = Vec::new();

        for col in 0..self.cols {
            if pivot_row == self.rows {
                break;
            }
            // Euclidean reduction in this column until one nonzero remains.
            loop {
                let mut best: Option<usize> = None;
                for i in pivot_row..self.rows {
                    if h.get(i, col).is_zero() {
                        continue;
                    }
                    best = match best {
                        None => Some(i),
                        Some(b) if h.get(i, col).abs() < h.get(b, col).abs() => Some(i),
                        keep => keep,
                    };
                }
                let Some(b) = best else { break };
                if b != pivot_row {
                    h.swap_rows(b, pivot_row);
                    if let Some(e) = e.as_mut() {
                        e.swap_rows(b, pivot_row);
                    }
                    if let Some(einv) = einv.as_mut() {
                        einv.swap_cols(b, pivot_row);
                    }
                }
                let mut done = true;
                let p = h.get(pivot_row, col).clone();
                for i in pivot_row + 1..self.rows {
                    if h.get(i, col).is_zero() {
                        continue;
                    }
                    let q = -h.get(i, col).div_floor(&p);
                    h.add_mul_row(pivot_row, i, &q);
                    if let Some(e) = e.as_mut() {
                        e.add_mul_row(pivot_row, i, &q);
                    }
                    if let Some(einv) = einv.as_mut() {
                        // (I + qE_{i,p})^{-1} = I - qE_{i,p}: col p -= q * col i
                        let nq = -q;
                        einv.add_mul_col(i, pivot_row, &nq);
                    }
                    if !h.get(i, col).is_zero() {
                        done = false;
                    }
                }
                if done {
                    break;
                }
            }
            if !h.get(pivot_row, col).is_zero() {
                if h.get(pivot_row, col).is_negative() {
                    h.negate_row(pivot_row);
                    if let Some(e) = e.as_mut() {
                        e.negate_row(pivot_row);
                    }
                    if let Some(einv) = einv.as_mut() {
                        einv.negate_col(pivot_row);
                    }
                }
                pivots.push((pivot_row, col));
                pivot_row += 1;
            }
        }

        RowEchelon {
            h,
            e,
            einv,
            rank: pivot_row,
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.row_echelon(false).rank
    }

    /// Columns form a basis of the left kernel `{x : x * self = 0}`.
    ///
    /// The kernel of an integer matrix is a primitive lattice, so the
    /// returned basis is primitive by construction.
    pub fn left_kernel(&self) -> IntMat {
        let ech = self.row_echelon(true);
        let e = ech.e.expect("tracked");
        let nullity = self.rows - ech.rank;
        IntMat::from_fn(self.rows, nullity, |i, j| {
            e.get(ech.rank + j, i).clone()
        })
    }

    /// Columns form a basis of the saturation of the row space,
    /// i.e. the primitive lattice `(rowspace tensor Q) cap Z^cols`.
    ///
    /// Computed by taking the kernel of the transpose twice: the saturation
    /// is the integral orthogonal of the integral orthogonal of the rows.
    pub fn saturate_rowspace(&self) -> IntMat {
        // Columns of `ortho` span {y : self * y = 0}; the saturation is the
        // integral orthogonal of that space inside Z^cols.
        let ortho = self.transpose().left_kernel();
        ortho.left_kernel()
    }

    /// Canonical column-style Hermite basis of the column span: pivots
    /// positive, entries left of a pivot reduced, zero columns dropped.
    pub fn column_hermite_basis(&self) -> IntMat {
        let mut h = self.transpose().row_echelon(false).h;
        // Reduce entries above each pivot to make the form canonical.
        let mut pivots = Vec::new();
        for i in 0..h.rows {
            if let Some(c) = (0..h.cols).find(|&c| !h.get(i, c).is_zero()) {
                pivots.push((i, c));
            }
        }
        for &(pi, pc) in &pivots {
            let p = h.get(pi, pc).clone();
            for i in 0..pi {
                let q = -h.get(i, pc).div_floor(&p);
                h.add_mul_row(pi, i, &q);
            }
        }
        let nonzero: Vec<usize> = (0..h.rows)
            .filter(|&i| (0..h.cols).any(|c| !h.get(i, c).is_zero()))
            .collect();
        let basis_rows = IntMat::from_fn(nonzero.len(), h.cols, |i, j| h.get(nonzero[i], j).clone());
        basis_rows.transpose()
    }

    /// Smith normal form `U * self * V = D` with unimodular transforms.
    ///
    /// Pivoting takes the minimal nonzero absolute value of the remaining
    /// block; the divisibility chain d_i | d_{i+1} is enforced.
    pub fn smith(&self, track: bool) -> SmithForm {
        let mut d = self.clone();
        let mut u = track.then(|| Self::identity(self.rows));
        let mut uinv = track.then(|| Self::identity(self.rows));
        let mut v = track.then(|| Self::identity(self.cols));
        let mut vinv = track.then(|| Self::identity(self.cols));
        let steps = self.rows.min(self.cols);

        for k in 0..steps {
            'pivot: loop {
                let mut best: Option<(usize, usize)> = None;
                for i in k..d.rows {
                    for j in k..d.cols {
                        if d.get(i, j).is_zero() {
                            continue;
                        }
                        best = match best {
                            None => Some((i, j)),
                            Some(b) if d.get(i, j).abs() < d.get(b.0, b.1).abs() => Some((i, j)),
                            keep => keep,
                        };
                    }
                }
                let Some((pi, pj)) = best else { break 'pivot };
                if pi != k {
                    d.swap_rows(pi, k);
                    if let Some(u) = u.as_mut() {
                        u.swap_rows(pi, k);
                    }
                    if let Some(uinv) = uinv.as_mut() {
                        uinv.swap_cols(pi, k);
                    }
                }
                if pj != k {
                    d.swap_cols(pj, k);
                    if let Some(v) = v.as_mut() {
                        v.swap_cols(pj, k);
                    }
                    if let Some(vinv) = vinv.as_mut() {
                        vinv.swap_rows(pj, k);
                    }
                }
                let p = d.get(k, k).clone();
                let mut clean = true;
                for i in k + 1..d.rows {
                    if d.get(i, k).is_zero() {
                        continue;
                    }
                    let q = -d.get(i, k).div_floor(&p);
                    d.add_mul_row(k, i, &q);
                    if let Some(u) = u.as_mut() {
                        u.add_mul_row(k, i, &q);
                    }
                    if let Some(uinv) = uinv.as_mut() {
                        let nq = -&q;
                        uinv.add_mul_col(i, k, &nq);
                    }
                    if !d.get(i, k).is_zero() {
                        clean = false;
                    }
                }
                for j in k + 1..d.cols {
                    if d.get(k, j).is_zero() {
                        continue;
                    }
                    let q = -d.get(k, j).div_floor(&p);
                    d.add_mul_col(k, j, &q);
                    if let Some(v) = v.as_mut() {
                        v.add_mul_col(k, j, &q);
                    }
                    if let Some(vinv) = vinv.as_mut() {
                        let nq = -&q;
                        vinv.add_mul_row(j, k, &nq);
                    }
                    if !d.get(k, j).is_zero() {
                        clean = false;
                    }
                }
                if !clean {
                    continue 'pivot;
                }
                // Row and column are clear; enforce divisibility.
                let p = d.get(k, k).clone();
                let offender = (k + 1..d.rows)
                    .flat_map(|i| (k + 1..d.cols).map(move |j| (i, j)))
                    .find(|&(i, j)| !d.get(i, j).mod_floor(&p).is_zero());
                match offender {
                    None => break 'pivot,
                    Some((i, _)) => {
                        let one = BigInt::one();
                        d.add_mul_row(i, k, &one);
                        if let Some(u) = u.as_mut() {
                            u.add_mul_row(i, k, &one);
                        }
                        if let Some(uinv) = uinv.as_mut() {
                            let m1 = -BigInt::one();
                            uinv.add_mul_col(k, i, &m1);
                        }
                    }
                }
            }
            if d.get(k, k).is_negative() {
                d.negate_row(k);
                if let Some(u) = u.as_mut() {
                    u.negate_row(k);
                }
                if let Some(uinv) = uinv.as_mut() {
                    uinv.negate_col(k);
                }
            }
        }

        let diag: Vec<BigInt> = (0..steps).map(|k| d.get(k, k).clone()).collect();
        let rank = diag.iter().filter(|x| !x.is_zero()).count();
        SmithForm {
            diag,
            u,
            uinv,
            v,
            vinv,
            rank,
        }
    }

    /// Determinant by fraction-free Bareiss elimination.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant needs a square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = 1i8;
        let mut prev = BigInt::one();
        for k in 0..n {
            let pivot = (k..n)
                .filter(|&i| !a.get(i, k).is_zero())
                .min_by_key(|&i| a.get(i, k).abs());
            let Some(p) = pivot else {
                return BigInt::zero();
            };
            if p != k {
                a.swap_rows(p, k);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = a.get(k, k) * a.get(i, j) - a.get(i, k) * a.get(k, j);
                    let (q, r) = num.div_rem(&prev);
                    debug_assert!(r.is_zero(), "Bareiss division must be exact");
                    a.set(i, j, q);
                }
                a.set(i, k, BigInt::zero());
            }
            prev = a.get(k, k).clone();
        }
        let mut out = a.get(n - 1, n - 1).clone();
        if sign < 0 {
            out = -out;
        }
        out
    }

    /// Gram matrix of the columns: `self^T * self`.
    pub fn gram(&self) -> IntMat {
        let t = self.transpose();
        t.matmul(self)
    }

    /// Squared volume of the column span: determinant of the Gram matrix.
    /// The empty family has squared volume 1.
    pub fn gram_det(&self) -> BigInt {
        if self.cols == 0 {
            return BigInt::one();
        }
        self.gram().det()
    }

    /// Squared volume of a *primitive* lattice given by column basis,
    /// computed through the smaller of the lattice and its integral
    /// orthogonal complement (their volumes agree for saturated lattices).
    pub fn primitive_volume_sq(&self) -> BigInt {
        let s = self.cols;
        let r = self.rows;
        if s == 0 {
            return BigInt::one();
        }
        if 2 * s <= r {
            self.gram_det()
        } else {
            // complement = {x : x . col_j = 0 for all j} = left kernel of self
            self.left_kernel().gram_det()
        }
    }
}

impl fmt::Debug for IntMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMat {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Result of `IntMat::row_echelon`.
pub struct RowEchelon {
    pub h: IntMat,
    pub e: Option<IntMat>,
    pub einv: Option<IntMat>,
    pub rank: usize,
    pub pivots: Vec<(usize, usize)>,
}

/// Result of `IntMat::smith`: `U * A * V = diag`.
pub struct SmithForm {
    pub diag: Vec<BigInt>,
    pub u: Option<IntMat>,
    pub uinv: Option<IntMat>,
    pub v: Option<IntMat>,
    pub vinv: Option<IntMat>,
    pub rank: usize,
}

impl SmithForm {
    /// Nonzero invariant factors.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        self.diag.iter().filter(|d| !d.is_zero()).cloned().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(rows: &[&[i64]]) -> IntMat {
        IntMat::from_rows_i64(rows)
    }

    #[test]
    fn echelon_transform_invariants() {
        let a = m(&[&[2, 4, 4], &[-6, 6, 12], &[10, 4, 16]]);
        let ech = a.row_echelon(true);
        let e = ech.e.unwrap();
        let einv = ech.einv.unwrap();
        assert_eq!(e.matmul(&a), ech.h);
        assert_eq!(e.matmul(&einv), IntMat::identity(3));
        assert_eq!(einv.matmul(&e), IntMat::identity(3));
    }

    #[test]
    fn smith_hand_oracle() {
        // Worked by hand: [[2,1],[0,2]] has invariant factors (1,4).
        let a = m(&[&[2, 1], &[0, 2]]);
        let s = a.smith(true);
        assert_eq!(s.diag, vec![BigInt::from(1), BigInt::from(4)]);
        // U A V = D
        let u = s.u.unwrap();
        let v = s.v.unwrap();
        let d = u.matmul(&a).matmul(&v);
        assert_eq!(*d.get(0, 0), BigInt::from(1));
        assert_eq!(*d.get(1, 1), BigInt::from(4));
        assert_eq!(*d.get(0, 1), BigInt::zero());
        assert_eq!(*d.get(1, 0), BigInt::zero());
        // Transform inverses round-trip.
        assert_eq!(u.matmul(&s.uinv.unwrap()), IntMat::identity(2));
        assert_eq!(s.vinv.unwrap().matmul(&v), IntMat::identity(2));
    }

    #[test]
    fn smith_divisibility_chain() {
        let a = m(&[&[2, 0, 0], &[0, 3, 0], &[0, 0, 4]]);
        let s = a.smith(false);
        assert_eq!(
            s.diag,
            vec![BigInt::from(1), BigInt::from(2), BigInt::from(12)]
        );
    }

    #[test]
    fn kernel_and_saturation_circulant() {
        // Quotient of t-1 over Z/3: rows act by x -> x(P - I).
        let a = m(&[&[-1, 1, 0], &[0, -1, 1], &[1, 0, -1]]);
        let k = a.left_kernel();
        assert_eq!(k.cols(), 1);
        // all-ones direction
        assert_eq!(k.get(0, 0), k.get(1, 0));
        assert_eq!(k.get(1, 0), k.get(2, 0));
        assert_eq!(k.get(0, 0).abs(), BigInt::one());
        assert_eq!(k.gram_det(), BigInt::from(3));

        let sat = a.saturate_rowspace();
        assert_eq!(sat.cols(), 2);
        // saturation of the image of (t-1) is {x : sum x = 0}, Gram det 3
        assert_eq!(sat.gram_det(), BigInt::from(3));
        for j in 0..2 {
            let col_sum: BigInt = (0..3).map(|i| sat.get(i, j).clone()).sum();
            assert!(col_sum.is_zero());
        }
    }

    #[test]
    fn saturation_kills_finite_index() {
        let id = IntMat::identity(3);
        assert_eq!(id.left_kernel().cols(), 0);
        assert_eq!(id.saturate_rowspace().gram_det(), BigInt::one());
        assert_eq!(id.saturate_rowspace().cols(), 3);

        let twice = m(&[&[2, 0, 0], &[0, 2, 0], &[0, 0, 2]]);
        let sat = twice.saturate_rowspace();
        assert_eq!(sat.cols(), 3);
        assert_eq!(sat.gram_det(), BigInt::one());
    }

    #[test]
    fn gram_det_examples() {
        let b = m(&[&[1], &[1], &[1]]);
        assert_eq!(b.gram_det(), BigInt::from(3));
        // Basis {(1,-1,0),(0,1,-1)}: Gram [[2,-1],[-1,2]], det 3.
        let b2 = m(&[&[1, 0], &[-1, 1], &[0, -1]]);
        assert_eq!(b2.gram_det(), BigInt::from(3));
        assert_eq!(IntMat::zero(4, 0).gram_det(), BigInt::one());
    }

    #[test]
    fn primitive_volume_matches_gram_on_small_cases() {
        let cases = [
            m(&[&[1, 0], &[-1, 1], &[0, -1]]),
            m(&[&[1], &[1], &[1]]),
            m(&[&[1, 0], &[0, 1], &[0, 0], &[0, 0]]),
            m(&[&[2, 1], &[1, 1], &[0, 3], &[1, 0]]).saturate_rowspace(),
        ];
        for b in cases {
            assert_eq!(b.primitive_volume_sq(), b.gram_det(), "case {b:?}");
        }
    }

    #[test]
    fn column_hermite_basis_canonicalizes() {
        let a = m(&[&[2, 1, 1], &[0, 2, 1]]);
        let b = a.column_hermite_basis();
        // Columns (2,0),(1,2),(1,1) span all of Z^2.
        assert_eq!(b.cols(), 2);
        let det = b.det().abs();
        assert_eq!(det, BigInt::one());
    }

    #[test]
    fn det_bareiss_oracle() {
        let a = m(&[&[3, 1, 4], &[1, 5, 9], &[2, 6, 5]]);
        // Cofactor oracle: 3*(25-54) - 1*(5-18) + 4*(6-10) = -90
        assert_eq!(a.det(), BigInt::from(-90));
        assert_eq!(IntMat::identity(5).det(), BigInt::one());
    }

    proptest! {
        #[test]
        fn echelon_rank_and_kernel(entries in proptest::collection::vec(-4i64..=4, 12)) {
            let a = IntMat::from_fn(3, 4, |i, j| BigInt::from(entries[i * 4 + j]));
            let ech = a.row_echelon(true);
            let e = ech.e.unwrap();
            prop_assert_eq!(e.matmul(&a), ech.h.clone());
            let k = a.left_kernel();
            prop_assert_eq!(k.cols() + ech.rank, 3);
            // Kernel columns annihilate a from the left.
            let prod = k.transpose().matmul(&a);
            prop_assert!(prod.is_zero());
        }

        #[test]
        fn smith_diag_divides(entries in proptest::collection::vec(-5i64..=5, 9)) {
            let a = IntMat::from_fn(3, 3, |i, j| BigInt::from(entries[i * 3 + j]));
            let s = a.smith(true);
            for w in s.diag.windows(2) {
                if !w[1].is_zero() {
                    prop_assert!(!w[0].is_zero());
                    prop_assert!(w[1].mod_floor(&w[0]).is_zero());
                }
            }
            let u = s.u.unwrap();
            let v = s.v.unwrap();
            let d = u.matmul(&a).matmul(&v);
            for i in 0..3 {
                for j in 0..3 {
                    if i == j {
                        prop_assert_eq!(d.get(i, j), &s.diag[i]);
                    } else {
                        prop_assert!(d.get(i, j).is_zero());
                    }
                }
            }
        }

        #[test]
        fn hadamard_bound_on_volumes(entries in proptest::collection::vec(-4i64..=4, 12)) {
            let b = IntMat::from_fn(4, 3, |i, j| BigInt::from(entries[i * 3 + j]));
            if b.rank() == 3 {
                let g = b.gram_det();
                let mut bound = BigInt::one();
                for j in 0..3 {
                    let norm_sq: BigInt = (0..4).map(|i| b.get(i, j) * b.get(i, j)).sum();
                    bound *= norm_sq;
                }
                prop_assert!(g <= bound);
                prop_assert!(g > BigInt::zero());
            }
        }
    }
}
