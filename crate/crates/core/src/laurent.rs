//! Exact arithmetic over the group ring Z[Z^n] = Z[t_1^{±1}, ..., t_n^{±1}].
//!
//! A `LaurentPoly` is a finite map from exponent vectors to nonzero
//! big-integer coefficients; a `LaurentMatrix` is a dense matrix of such
//! polynomials with a common ambient dimension. Term maps iterate in
//! lexicographic exponent order, so serialization and hashing are
//! deterministic.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::Complex;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Multivariate Laurent polynomial with big-integer coefficients.
///
/// Invariants: no stored coefficient is zero and every exponent vector has
/// length `n`. The zero polynomial has an empty term map.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    n: usize,
    terms: BTreeMap<Vec<i64>, BigInt>,
}

impl LaurentPoly {
    /// The zero polynomial in `n` variables.
    pub fn zero(n: usize) -> Self {
        LaurentPoly {
            n,
            terms: BTreeMap::new(),
        }
    }

    /// The constant polynomial `1`.
    pub fn one(n: usize) -> Self {
        Self::constant(n, BigInt::one())
    }

    /// A constant polynomial.
    pub fn constant(n: usize, c: impl Into<BigInt>) -> Self {
        let mut p = Self::zero(n);
        p.add_term(vec![0; n], c.into());
        p
    }

    /// The single variable `t_i` (zero-based index).
    pub fn variable(n: usize, i: usize) -> Self {
        assert!(i < n, "variable index out of range");
        let mut exp = vec![0i64; n];
        exp[i] = 1;
        Self::monomial(n, exp, BigInt::one())
    }

    /// The monomial `c * t^exp`.
    pub fn monomial(n: usize, exp: Vec<i64>, c: impl Into<BigInt>) -> Self {
        assert_eq!(exp.len(), n, "exponent vector length must equal n");
        let mut p = Self::zero(n);
        p.add_term(exp, c.into());
        p
    }

    /// Builds a polynomial from `(exponent, coefficient)` pairs, merging
    /// duplicates and dropping zeros.
    pub fn from_terms<I>(n: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<i64>, BigInt)>,
    {
        let mut p = Self::zero(n);
        for (e, c) in terms {
            assert_eq!(e.len(), n, "exponent vector length must equal n");
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, exp: Vec<i64>, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exp) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .get(vec![0; self.n].as_slice())
                .is_some_and(|c| c.is_one())
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in lexicographic exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (&[i64], &BigInt)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    pub fn coeff(&self, exp: &[i64]) -> BigInt {
        self.terms.get(exp).cloned().unwrap_or_else(BigInt::zero)
    }

    /// `f* = sum a_j g_j^{-1}`: negates every exponent vector.
    pub fn adjoint(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let neg: Vec<i64> = e
                    .iter()
                    .map(|x| x.checked_neg().expect("exponent overflow"))
                    .collect();
                (neg, c.clone())
            })
            .collect();
        LaurentPoly {
            n: self.n,
            terms,
        }
    }

    /// Sum of the absolute values of all coefficients.
    pub fn l1_norm(&self) -> BigInt {
        self.terms.values().map(|c| c.abs()).sum()
    }

    /// Evaluates at a point of `(C*)^n`. Errors if a coordinate is zero.
    pub fn evaluate(&self, z: &[Complex<f64>]) -> Result<Complex<f64>> {
        if z.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: z.len(),
            });
        }
        if let Some(i) = z.iter().position(|c| c.norm_sqr() == 0.0) {
            return Err(Error::ZeroCoordinate { index: i });
        }
        let mut acc = Complex::new(0.0, 0.0);
        for (e, c) in &self.terms {
            let mut m = Complex::new(big_to_f64(c), 0.0);
            for (zi, &ei) in z.iter().zip(e.iter()) {
                m *= zi.powi(ei as i32);
            }
            acc += m;
        }
        Ok(acc)
    }

    /// Evaluates at the torus point `z_i = exp(2 pi i q_i)`.
    ///
    /// Each term contributes `c * exp(2 pi i <q, e>)`; the phase is reduced
    /// exactly as a rational before any float is formed, so evaluation at
    /// torsion points is reproducible and as accurate as f64 allows.
    pub fn eval_at_phases(&self, q: &[BigRational]) -> Complex<f64> {
        assert_eq!(q.len(), self.n, "phase vector length must equal n");
        let mut acc = Complex::new(0.0, 0.0);
        for (e, c) in &self.terms {
            let mut phase = BigRational::zero();
            for (qi, &ei) in q.iter().zip(e.iter()) {
                phase += qi * BigRational::from(BigInt::from(ei));
            }
            phase -= phase.floor();
            let theta = 2.0 * std::f64::consts::PI * rational_to_f64(&phase);
            acc += Complex::from_polar(big_to_f64(c), theta);
        }
        acc
    }

    /// Componentwise minimum exponent over the support (`None` if zero).
    fn min_exps(&self) -> Option<Vec<i64>> {
        let mut it = self.terms.keys();
        let mut m = it.next()?.clone();
        for e in it {
            for (mi, &ei) in m.iter_mut().zip(e.iter()) {
                *mi = (*mi).min(ei);
            }
        }
        Some(m)
    }

    fn max_exps(&self) -> Option<Vec<i64>> {
        let mut it = self.terms.keys();
        let mut m = it.next()?.clone();
        for e in it {
            for (mi, &ei) in m.iter_mut().zip(e.iter()) {
                *mi = (*mi).max(ei);
            }
        }
        Some(m)
    }

    /// Leading term in lexicographic order (largest exponent vector).
    fn leading(&self) -> Option<(&Vec<i64>, &BigInt)> {
        self.terms.iter().next_back()
    }

    /// Multiplies by the monomial `c * t^exp`.
    pub fn mul_monomial(&self, exp: &[i64], c: &BigInt) -> Self {
        assert_eq!(exp.len(), self.n);
        if c.is_zero() {
            return Self::zero(self.n);
        }
        let terms = self
            .terms
            .iter()
            .map(|(e, k)| {
                let shifted: Vec<i64> = e
                    .iter()
                    .zip(exp.iter())
                    .map(|(a, b)| a.checked_add(*b).expect("exponent overflow"))
                    .collect();
                (shifted, k * c)
            })
            .collect();
        LaurentPoly {
            n: self.n,
            terms,
        }
    }

    /// Exact division: returns `Some(q)` with `self = q * rhs`, or `None`
    /// when `rhs` does not divide `self` in Z[Z^n].
    ///
    /// Division runs in lexicographic order. Quotient exponents of an exact
    /// division lie in the componentwise box `[min(f)-min(g), max(f)-max(g)]`
    /// (Newton polytope additivity), so stepping outside the box proves the
    /// division inexact and bounds the loop.
    pub fn exact_div(&self, rhs: &Self) -> Option<Self> {
        assert_eq!(self.n, rhs.n, "ambient dimension mismatch");
        if rhs.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero(self.n));
        }
        let lo: Vec<i64> = self
            .min_exps()?
            .iter()
            .zip(rhs.min_exps()?.iter())
            .map(|(a, b)| a - b)
            .collect();
        let hi: Vec<i64> = self
            .max_exps()?
            .iter()
            .zip(rhs.max_exps()?.iter())
            .map(|(a, b)| a - b)
            .collect();
        if lo.iter().zip(hi.iter()).any(|(a, b)| a > b) {
            return None;
        }

        let (ge, gc) = rhs.leading().expect("rhs nonzero");
        let mut rem = self.clone();
        let mut quot = Self::zero(self.n);
        while let Some((fe, fc)) = rem.leading() {
            let qe: Vec<i64> = fe.iter().zip(ge.iter()).map(|(a, b)| a - b).collect();
            if qe
                .iter()
                .zip(lo.iter().zip(hi.iter()))
                .any(|(e, (l, h))| e < l || e > h)
            {
                return None;
            }
            let (qc, r) = num_integer::div_rem(fc.clone(), gc.clone());
            if !r.is_zero() {
                return None;
            }
            let t = Self::monomial(self.n, qe, qc);
            rem = &rem - &(&t * rhs);
            quot = &quot + &t;
        }
        Some(quot)
    }
}

fn big_to_f64(c: &BigInt) -> f64 {
    c.to_f64().unwrap_or(f64::INFINITY)
}

fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        big_to_f64(r.numer()) / big_to_f64(r.denom())
    })
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        assert_eq!(self.n, rhs.n, "ambient dimension mismatch");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        assert_eq!(self.n, rhs.n, "ambient dimension mismatch");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        assert_eq!(self.n, rhs.n, "ambient dimension mismatch");
        let mut out = LaurentPoly::zero(self.n);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let e: Vec<i64> = e1
                    .iter()
                    .zip(e2.iter())
                    .map(|(a, b)| a.checked_add(*b).expect("exponent overflow"))
                    .collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| (e.clone(), -c.clone()))
            .collect();
        LaurentPoly {
            n: self.n,
            terms,
        }
    }
}

impl fmt::Display for LaurentPoly {
    /// `2*t1^2*t2^-1 - 3` style, lexicographic term order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let monomial: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &ei)| ei != 0)
                .map(|(i, &ei)| {
                    if ei == 1 {
                        format!("t{}", i + 1)
                    } else {
                        format!("t{}^{}", i + 1, ei)
                    }
                })
                .collect();
            if monomial.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", monomial.join("*"))?;
            } else {
                write!(f, "{mag}*{}", monomial.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Dense matrix over Z[Z^n]. Rows act on row vectors by right
/// multiplication, matching the chain-map convention of `FreeComplex`.
#[derive(Clone, PartialEq, Eq)]
pub struct LaurentMatrix {
    rows: usize,
    cols: usize,
    n: usize,
    entries: Vec<LaurentPoly>,
}

impl LaurentMatrix {
    pub fn zero(n: usize, rows: usize, cols: usize) -> Self {
        LaurentMatrix {
            rows,
            cols,
            n,
            entries: vec![LaurentPoly::zero(n); rows * cols],
        }
    }

    pub fn identity(n: usize, size: usize) -> Self {
        let mut m = Self::zero(n, size, size);
        for i in 0..size {
            m.set(i, i, LaurentPoly::one(n));
        }
        m
    }

    pub fn from_rows(n: usize, rows: Vec<Vec<LaurentPoly>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            for p in row {
                assert_eq!(p.dim(), n, "entry has wrong ambient dimension");
                entries.push(p);
            }
        }
        LaurentMatrix {
            rows: r,
            cols: c,
            n,
            entries,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &LaurentPoly {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: LaurentPoly) {
        assert_eq!(p.dim(), self.n);
        self.entries[i * self.cols + j] = p;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(LaurentPoly::is_zero)
    }

    pub fn is_empty(&self) -> bool {
        self.rows == 0 || self.cols == 0
    }

    /// `(O*)_{ij} = (O_{ji})*`: transposed shape, entrywise adjoint.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zero(self.n, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).adjoint());
            }
        }
        out
    }

    /// Sum of the l1 norms of all entries.
    pub fn l1_norm(&self) -> BigInt {
        self.entries.iter().map(LaurentPoly::l1_norm).sum()
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.n, rhs.n, "ambient dimension mismatch");
        assert_eq!(
            self.cols, rhs.rows,
            "matrix shapes do not compose: {}x{} * {}x{}",
            self.rows, self.cols, rhs.rows, rhs.cols
        );
        let mut out = Self::zero(self.n, self.rows, rhs.cols);
        for i in 0..self.rows {
            for j in 0..rhs.cols {
                let mut acc = LaurentPoly::zero(self.n);
                for k in 0..self.cols {
                    acc = &acc + &(self.get(i, k) * rhs.get(k, j));
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    /// Entrywise evaluation at the torus point `exp(2 pi i q)`.
    pub fn eval_at_phases(&self, q: &[BigRational]) -> nalgebra::DMatrix<Complex<f64>> {
        nalgebra::DMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).eval_at_phases(q))
    }

    /// Exact determinant over Z[Z^n] by fraction-free (Bareiss) elimination.
    ///
    /// Every division in the Bareiss recurrence is exact in an integral
    /// domain; monomials are units of the Laurent ring, so row contents are
    /// factored out along the way and returned as a recorded unit. The exact
    /// determinant is `result.value()`; callers that only need a zero test
    /// can look at `result.normalized`.
    pub fn determinant(&self) -> Result<LaurentDet> {
        if self.rows != self.cols {
            return Err(Error::NonSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.n;
        let size = self.rows;
        if size == 0 {
            return Ok(LaurentDet::from_exact(LaurentPoly::one(n)));
        }
        let mut a: Vec<Vec<LaurentPoly>> = (0..size)
            .map(|i| (0..size).map(|j| self.get(i, j).clone()).collect())
            .collect();
        let mut sign = 1i8;
        let mut unit_exp = vec![0i64; n];
        // Factor the monomial content out of each row so intermediate
        // entries stay ordinary polynomials with small supports.
        for row in a.iter_mut() {
            let mut content: Option<Vec<i64>> = None;
            for p in row.iter() {
                if let Some(m) = p.min_exps() {
                    content = Some(match content {
                        None => m,
                        Some(c) => c.iter().zip(m.iter()).map(|(a, b)| *a.min(b)).collect(),
                    });
                }
            }
            if let Some(c) = content {
                if c.iter().any(|&e| e != 0) {
                    let neg: Vec<i64> = c.iter().map(|e| -e).collect();
                    for p in row.iter_mut() {
                        *p = p.mul_monomial(&neg, &BigInt::one());
                    }
                    for (u, e) in unit_exp.iter_mut().zip(c.iter()) {
                        *u += e;
                    }
                }
            }
        }

        let mut prev = LaurentPoly::one(n);
        for k in 0..size {
            // Full pivot: any nonzero entry, preferring few terms.
            let pivot = (k..size)
                .flat_map(|i| (k..size).map(move |j| (i, j)))
                .filter(|&(i, j)| !a[i][j].is_zero())
                .min_by_key(|&(i, j)| a[i][j].num_terms());
            let (pi, pj) = match pivot {
                Some(p) => p,
                None => return Ok(LaurentDet::from_exact(LaurentPoly::zero(n))),
            };
            if pi != k {
                a.swap(pi, k);
                sign = -sign;
            }
            if pj != k {
                for row in a.iter_mut() {
                    row.swap(pj, k);
                }
                sign = -sign;
            }
            for i in k + 1..size {
                for j in k + 1..size {
                    let num = &(&a[k][k] * &a[i][j]) - &(&a[i][k] * &a[k][j]);
                    a[i][j] = num
                        .exact_div(&prev)
                        .expect("Bareiss division must be exact over an integral domain");
                }
                a[i][k] = LaurentPoly::zero(n);
            }
            prev = a[k][k].clone();
        }
        let mut det = a[size - 1][size - 1].clone();
        if sign < 0 {
            det = -&det;
        }
        det = det.mul_monomial(&unit_exp, &BigInt::one());
        Ok(LaurentDet::from_exact(det))
    }
}

impl fmt::Debug for LaurentMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "LaurentMatrix {}x{} over Z[Z^{}]", self.rows, self.cols, self.n)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Determinant of a Laurent matrix, split as `sign * t^unit_exp * normalized`.
///
/// `normalized` has componentwise minimal exponent 0 and positive
/// lexicographically-leading coefficient; the monomial unit is recorded
/// rather than discarded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentDet {
    pub normalized: LaurentPoly,
    pub unit_exp: Vec<i64>,
    pub sign: i8,
}

impl LaurentDet {
    fn from_exact(det: LaurentPoly) -> Self {
        let n = det.dim();
        if det.is_zero() {
            return LaurentDet {
                normalized: det,
                unit_exp: vec![0; n],
                sign: 1,
            };
        }
        let unit_exp = det.min_exps().expect("nonzero");
        let neg: Vec<i64> = unit_exp.iter().map(|e| -e).collect();
        let mut normalized = det.mul_monomial(&neg, &BigInt::one());
        let mut sign = 1i8;
        if normalized
            .leading()
            .is_some_and(|(_, c)| c.is_negative())
        {
            normalized = -&normalized;
            sign = -1;
        }
        LaurentDet {
            normalized,
            unit_exp,
            sign,
        }
    }

    /// The exact determinant `sign * t^unit_exp * normalized`.
    pub fn value(&self) -> LaurentPoly {
        let c = if self.sign < 0 {
            -BigInt::one()
        } else {
            BigInt::one()
        };
        self.normalized.mul_monomial(&self.unit_exp, &c)
    }

    pub fn is_zero(&self) -> bool {
        self.normalized.is_zero()
    }
}

/// Laplacian `d_k d_k^* + d_succ^* d_succ` at a chain level, in the
/// right-multiplication convention (`d_k` is `b_k x b_{k-1}`, `d_succ` is
/// `b_{k+1} x b_k`). Either argument may be an empty matrix at chain ends.
pub fn laplacian(d_k: &LaurentMatrix, d_succ: &LaurentMatrix) -> Result<LaurentMatrix> {
    if d_k.dim() != d_succ.dim() {
        return Err(Error::DimensionMismatch {
            expected: d_k.dim(),
            found: d_succ.dim(),
        });
    }
    if d_k.rows() != d_succ.cols() {
        return Err(Error::ShapeMismatch(format!(
            "laplacian needs d_k rows ({}) equal to d_succ cols ({})",
            d_k.rows(),
            d_succ.cols()
        )));
    }
    let down = d_k.matmul(&d_k.adjoint());
    let up = d_succ.adjoint().matmul(d_succ);
    let mut out = LaurentMatrix::zero(d_k.dim(), d_k.rows(), d_k.rows());
    for i in 0..out.rows() {
        for j in 0..out.cols() {
            out.set(i, j, down.get(i, j) + up.get(i, j));
        }
    }
    Ok(out)
}
