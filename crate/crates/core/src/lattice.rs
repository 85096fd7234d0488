//! Finite-index sublattices of Z^n, their quotient groups, Pontryagin
//! duals as torsion points of the unit torus, and the girth (shortest
//! word length of a nonzero lattice vector).
//!
//! The word metric is fixed to the l1 norm, i.e. the generating set
//! `{t_i^{+-1}}`. Group elements are canonicalized in Smith coordinates;
//! all maps between Z^n and the quotient go through the stored unimodular
//! basis change.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::intmat::IntMat;

/// A sublattice of Z^n given by an integer generator matrix whose columns
/// generate it. Not necessarily of full rank.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Sublattice {
    n: usize,
    gens: IntMat,
}

impl Sublattice {
    pub fn new(gens: IntMat) -> Self {
        Sublattice {
            n: gens.rows(),
            gens,
        }
    }

    /// `N * Z^n`.
    pub fn scaled_standard(n: usize, scale: i64) -> Self {
        Self::new(IntMat::from_fn(n, n, |i, j| {
            if i == j {
                BigInt::from(scale)
            } else {
                BigInt::zero()
            }
        }))
    }

    pub fn diagonal(diag: &[i64]) -> Self {
        let n = diag.len();
        Self::new(IntMat::from_fn(n, n, |i, j| {
            if i == j {
                BigInt::from(diag[i])
            } else {
                BigInt::zero()
            }
        }))
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn gens(&self) -> &IntMat {
        &self.gens
    }

    pub fn rank(&self) -> usize {
        self.gens.transpose().rank()
    }

    pub fn is_full_rank(&self) -> bool {
        self.rank() == self.n
    }

    fn require_full_rank(&self) -> Result<()> {
        let rank = self.rank();
        if rank != self.n {
            return Err(Error::NotFullRank { rank, n: self.n });
        }
        Ok(())
    }

    /// Canonical (column Hermite) basis, zero columns dropped.
    pub fn basis(&self) -> IntMat {
        self.gens.column_hermite_basis()
    }

    /// Index `|Z^n : Gamma|` for a full-rank lattice.
    pub fn index(&self) -> Result<BigInt> {
        self.require_full_rank()?;
        Ok(self.basis().det().abs())
    }

    /// Structure of the quotient `A = Z^n / Gamma` from the Smith normal
    /// form of a basis. Requires full rank.
    pub fn smith_quotient(&self) -> Result<FiniteAbelianGroup> {
        self.require_full_rank()?;
        let basis = self.basis();
        let smith = basis.smith(true);
        let factors = smith.diag.clone();
        let order: BigInt = factors.iter().product();
        Ok(FiniteAbelianGroup {
            n: self.n,
            invariant_factors: factors,
            order: order.abs(),
            u: smith.u.expect("tracked"),
            uinv: smith.uinv.expect("tracked"),
            v: smith.v.expect("tracked"),
        })
    }

    /// The Pontryagin dual of `Z^n / Gamma` as an explicit list of torsion
    /// points `z` with `z^k = 1` for every `k` in Gamma, enumerated
    /// lexicographically in Smith coordinates.
    pub fn dual_group(&self) -> Result<Vec<TorsionPoint>> {
        let group = self.smith_quotient()?;
        let points = group.dual_points();
        // Exact check of the defining property on every generator.
        for z in &points {
            for j in 0..self.gens.cols() {
                let gen: Vec<BigInt> = (0..self.n).map(|i| self.gens.get(i, j).clone()).collect();
                debug_assert!(
                    z.phase_dot(&gen).is_zero(),
                    "dual point fails z^k = 1 on a generator"
                );
            }
        }
        Ok(points)
    }

    /// Lattice sum `Gamma + Lambda` by column concatenation and Hermite
    /// reduction.
    pub fn sum(&self, other: &Sublattice) -> Sublattice {
        assert_eq!(self.n, other.n, "ambient dimension mismatch");
        Sublattice::new(self.gens.hcat(&other.gens).column_hermite_basis())
    }

    /// Minimal l1 norm of a nonzero lattice vector, by exhaustive search
    /// over the ball whose radius is the smallest l1 norm among the
    /// Hermite basis vectors.
    pub fn girth(&self) -> Result<u64> {
        self.require_full_rank()?;
        let basis = self.basis();
        let group = self.smith_quotient()?;
        let mut radius = u64::MAX;
        for j in 0..basis.cols() {
            let norm: BigInt = (0..basis.rows()).map(|i| basis.get(i, j).abs()).sum();
            radius = radius.min(norm.to_u64().expect("basis norm fits u64"));
        }
        let mut best = radius;
        let mut v = vec![0i64; self.n];
        search_l1_ball(&mut v, 0, radius as i64, &mut |v| {
            if v.iter().all(|&x| x == 0) {
                return;
            }
            let norm: u64 = v.iter().map(|&x| x.unsigned_abs()).sum();
            if norm >= best {
                return;
            }
            let coords: Vec<BigInt> = v.iter().map(|&x| BigInt::from(x)).collect();
            if group.class_of(&coords).iter().all(Zero::is_zero) {
                best = norm;
            }
        });
        Ok(best)
    }
}

fn search_l1_ball(v: &mut [i64], i: usize, budget: i64, visit: &mut impl FnMut(&[i64])) {
    if i == v.len() {
        visit(v);
        return;
    }
    for x in -budget..=budget {
        v[i] = x;
        search_l1_ball(v, i + 1, budget - x.abs(), visit);
    }
    v[i] = 0;
}

/// `|B| = |(Gamma + Lambda) / Gamma| = |Z^n : Gamma| / |Z^n : Gamma + Lambda|`.
pub fn quotient_order_b(gamma: &Sublattice, lambda: &Sublattice) -> Result<BigInt> {
    let idx_gamma = gamma.index()?;
    let idx_sum = gamma.sum(lambda).index()?;
    Ok(idx_gamma / idx_sum)
}

/// A finite abelian group `A = Z^n / Gamma` in invariant-factor form,
/// together with the unimodular basis change from the Smith decomposition
/// `U * basis(Gamma) * V = diag(d_1, ..., d_n)`.
///
/// Elements are canonical tuples `(y_1 mod d_1, ..., y_n mod d_n)` in Smith
/// coordinates; the class of `v in Z^n` is `U v mod d`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FiniteAbelianGroup {
    n: usize,
    invariant_factors: Vec<BigInt>,
    order: BigInt,
    u: IntMat,
    uinv: IntMat,
    v: IntMat,
}

impl FiniteAbelianGroup {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn invariant_factors(&self) -> &[BigInt] {
        &self.invariant_factors
    }

    pub fn order(&self) -> &BigInt {
        &self.order
    }

    pub fn order_usize(&self) -> usize {
        self.order
            .to_usize()
            .expect("group too large to enumerate")
    }

    pub fn basis_change(&self) -> (&IntMat, &IntMat) {
        (&self.u, &self.v)
    }

    /// Canonical coordinates of the class of `v in Z^n`.
    pub fn class_of(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.n);
        (0..self.n)
            .map(|i| {
                let y: BigInt = (0..self.n).map(|j| self.u.get(i, j) * &v[j]).sum();
                y.mod_floor(&self.invariant_factors[i])
            })
            .collect()
    }

    pub fn add(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        (0..self.n)
            .map(|i| (&a[i] + &b[i]).mod_floor(&self.invariant_factors[i]))
            .collect()
    }

    pub fn neg(&self, a: &[BigInt]) -> Vec<BigInt> {
        (0..self.n)
            .map(|i| (-&a[i]).mod_floor(&self.invariant_factors[i]))
            .collect()
    }

    pub fn identity(&self) -> Vec<BigInt> {
        vec![BigInt::zero(); self.n]
    }

    /// All elements in lexicographic Smith-coordinate order.
    pub fn elements(&self) -> Vec<Vec<BigInt>> {
        let order = self.order_usize();
        let mut out = Vec::with_capacity(order);
        let mut cur = self.identity();
        loop {
            out.push(cur.clone());
            // Increment as a mixed-radix counter, last coordinate fastest.
            let mut i = self.n;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                cur[i] += 1;
                if cur[i] < self.invariant_factors[i] {
                    break;
                }
                cur[i] = BigInt::zero();
            }
        }
    }

    /// Position of a canonical element in the `elements()` enumeration.
    pub fn index_of(&self, coords: &[BigInt]) -> usize {
        let mut idx = BigInt::zero();
        for i in 0..self.n {
            idx = idx * &self.invariant_factors[i] + &coords[i];
        }
        idx.to_usize().expect("index fits usize")
    }

    /// Dual characters as torsion points, lexicographic in Smith
    /// coordinates: the character with coordinates `c` is
    /// `q = U^T (c_1/d_1, ..., c_n/d_n) mod 1`.
    pub fn dual_points(&self) -> Vec<TorsionPoint> {
        self.elements()
            .iter()
            .map(|c| self.dual_point(c))
            .collect()
    }

    pub fn dual_point(&self, c: &[BigInt]) -> TorsionPoint {
        let q: Vec<BigRational> = (0..self.n)
            .map(|j| {
                let mut acc = BigRational::zero();
                for i in 0..self.n {
                    if self.invariant_factors[i].is_one() {
                        continue;
                    }
                    acc += BigRational::new(self.u.get(i, j) * &c[i], self.invariant_factors[i].clone());
                }
                acc
            })
            .collect();
        TorsionPoint::new(q)
    }

    /// Smith character coordinates of a torsion point, if it is a
    /// character of this group: solves `q = U^T (c/d) mod 1` exactly.
    pub fn char_coords(&self, z: &TorsionPoint) -> Result<Vec<BigInt>> {
        if z.dim() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: z.dim(),
            });
        }
        let mut coords = Vec::with_capacity(self.n);
        for i in 0..self.n {
            // p = U^{-T} q, p_i = sum_j uinv[j][i] q_j
            let mut p = BigRational::zero();
            for j in 0..self.n {
                p += BigRational::from(self.uinv.get(j, i).clone()) * &z.q[j];
            }
            let c = p * BigRational::from(self.invariant_factors[i].clone());
            if !c.is_integer() {
                return Err(Error::NotDualPoint);
            }
            coords.push(c.to_integer().mod_floor(&self.invariant_factors[i]));
        }
        Ok(coords)
    }

    /// Exact character pairing in Smith coordinates:
    /// `chi_c(a) = exp(2 pi i sum_i c_i y_i / d_i)`, returned as the
    /// rational phase in `[0, 1)`.
    pub fn char_phase(&self, char_coords: &[BigInt], elem: &[BigInt]) -> BigRational {
        let mut acc = BigRational::zero();
        for i in 0..self.n {
            if self.invariant_factors[i].is_one() {
                continue;
            }
            acc += BigRational::new(
                &char_coords[i] * &elem[i],
                self.invariant_factors[i].clone(),
            );
        }
        &acc - acc.floor()
    }
}

/// A torsion point of the unit torus: `z_i = exp(2 pi i q_i)` with
/// rational `q_i in [0, 1)`. Its order is the lcm of the denominators.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct TorsionPoint {
    q: Vec<BigRational>,
}

impl TorsionPoint {
    pub fn new(q: Vec<BigRational>) -> Self {
        let q = q.into_iter().map(|x| &x - x.floor()).collect();
        TorsionPoint { q }
    }

    pub fn trivial(n: usize) -> Self {
        TorsionPoint {
            q: vec![BigRational::zero(); n],
        }
    }

    pub fn dim(&self) -> usize {
        self.q.len()
    }

    pub fn phases(&self) -> &[BigRational] {
        &self.q
    }

    pub fn is_trivial(&self) -> bool {
        self.q.iter().all(Zero::is_zero)
    }

    /// Torsion order: lcm of the reduced denominators. Order 1 iff trivial.
    pub fn order(&self) -> BigInt {
        let mut order = BigInt::one();
        for qi in &self.q {
            order = order.lcm(qi.denom());
        }
        order
    }

    /// `<q, v> mod 1`: the exact rational exponent of the root of unity
    /// `chi_z(t^v)`.
    pub fn phase_dot(&self, v: &[BigInt]) -> BigRational {
        assert_eq!(v.len(), self.q.len());
        let mut acc = BigRational::zero();
        for (qi, vi) in self.q.iter().zip(v.iter()) {
            acc += qi * BigRational::from(vi.clone());
        }
        &acc - acc.floor()
    }

    /// Coordinatewise power `z^j` on phases.
    pub fn pow(&self, j: &BigInt) -> TorsionPoint {
        TorsionPoint::new(
            self.q
                .iter()
                .map(|qi| qi * BigRational::from(j.clone()))
                .collect(),
        )
    }

    /// Componentwise quotient `self * other^{-1}` on phases.
    pub fn div(&self, other: &TorsionPoint) -> TorsionPoint {
        assert_eq!(self.dim(), other.dim());
        TorsionPoint::new(
            self.q
                .iter()
                .zip(other.q.iter())
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    /// Galois orbit `{z^j : gcd(j, order) = 1}`; has phi(order) elements
    /// and is deterministic (sorted by phase vector).
    pub fn galois_closure(&self) -> Vec<TorsionPoint> {
        let order = self.order();
        let m = order.to_u64().expect("torsion order fits u64");
        let mut set = std::collections::BTreeSet::new();
        for j in 1..=m {
            if j.gcd(&m) == 1 {
                set.insert(self.pow(&BigInt::from(j)));
            }
        }
        set.into_iter().collect()
    }

    /// Whether `z^k = 1` for every generator `k` (column) of the lattice,
    /// i.e. whether `z` lies in the algebraic subgroup the lattice cuts out.
    pub fn annihilates(&self, lattice: &Sublattice) -> bool {
        let gens = lattice.gens();
        for j in 0..gens.cols() {
            let gen: Vec<BigInt> = (0..gens.rows()).map(|i| gens.get(i, j).clone()).collect();
            if !self.phase_dot(&gen).is_zero() {
                return false;
            }
        }
        true
    }

    /// Complex coordinates `exp(2 pi i q_i)`.
    pub fn to_complex(&self) -> Vec<nalgebra::Complex<f64>> {
        self.q
            .iter()
            .map(|qi| {
                nalgebra::Complex::from_polar(
                    1.0,
                    2.0 * std::f64::consts::PI * qi.to_f64().unwrap_or(0.0),
                )
            })
            .collect()
    }
}
