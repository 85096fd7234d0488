//! Group-ring elements over a finite abelian group: rational coefficients
//! for the exact projectors, cyclotomic coefficients for character
//! idempotents. Multiplication is group convolution in Smith coordinates.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::cyclotomic::Cyclotomic;
use crate::error::Result;
use crate::intmat::IntMat;
use crate::lattice::{FiniteAbelianGroup, TorsionPoint};

/// Element of Q[A] with no stored zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupRingElement {
    group: FiniteAbelianGroup,
    coeffs: BTreeMap<Vec<BigInt>, BigRational>,
}

impl GroupRingElement {
    pub fn zero(group: FiniteAbelianGroup) -> Self {
        GroupRingElement {
            group,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn identity(group: FiniteAbelianGroup) -> Self {
        let e = group.identity();
        let mut out = Self::zero(group);
        out.add_term(e, BigRational::one());
        out
    }

    pub fn from_coeffs<I>(group: FiniteAbelianGroup, coeffs: I) -> Self
    where
        I: IntoIterator<Item = (Vec<BigInt>, BigRational)>,
    {
        let mut out = Self::zero(group);
        for (a, c) in coeffs {
            out.add_term(a, c);
        }
        out
    }

    fn add_term(&mut self, a: Vec<BigInt>, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.coeffs.entry(a) {
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

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn coeff(&self, a: &[BigInt]) -> BigRational {
        self.coeffs.get(a).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn support_len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<BigInt>, &BigRational)> {
        self.coeffs.iter()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.group, rhs.group, "group mismatch");
        let mut out = self.clone();
        for (a, c) in &rhs.coeffs {
            out.add_term(a.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!(self.group, rhs.group, "group mismatch");
        let mut out = self.clone();
        for (a, c) in &rhs.coeffs {
            out.add_term(a.clone(), -c.clone());
        }
        out
    }

    /// Group-ring convolution.
    pub fn convolve(&self, rhs: &Self) -> Self {
        assert_eq!(self.group, rhs.group, "group mismatch");
        let mut out = Self::zero(self.group.clone());
        for (a, ca) in &self.coeffs {
            for (b, cb) in &rhs.coeffs {
                out.add_term(self.group.add(a, b), ca * cb);
            }
        }
        out
    }

    pub fn is_idempotent(&self) -> bool {
        self.convolve(self) == *self
    }

    /// Matrix of convolution by `self` on the regular representation,
    /// cleared of denominators: returns `(M, den)` with the true matrix
    /// `M / den`. Row/column order follows `FiniteAbelianGroup::elements`.
    pub fn action_matrix_scaled(&self) -> (IntMat, BigInt) {
        let elements = self.group.elements();
        let size = elements.len();
        let mut den = BigInt::one();
        for c in self.coeffs.values() {
            den = num_integer::lcm(den, c.denom().clone());
        }
        let mut m = IntMat::zero(size, size);
        for (i, a) in elements.iter().enumerate() {
            for (b, c) in &self.coeffs {
                let target = self.group.add(a, b);
                let j = self.group.index_of(&target);
                let scaled = (c * BigRational::from(den.clone())).to_integer();
                m.add_assign_at(i, j, &scaled);
            }
        }
        (m, den)
    }
}

/// Element of the group ring with cyclotomic-number coefficients; houses
/// character idempotents exactly.
#[derive(Clone, Debug)]
pub struct CycloGroupElement {
    group: FiniteAbelianGroup,
    coeffs: BTreeMap<Vec<BigInt>, Cyclotomic>,
}

impl CycloGroupElement {
    pub fn zero(group: FiniteAbelianGroup) -> Self {
        CycloGroupElement {
            group,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn identity(group: FiniteAbelianGroup) -> Self {
        let e = group.identity();
        let mut out = Self::zero(group);
        out.add_term(e, Cyclotomic::one());
        out
    }

    pub fn from_rational_element(elem: &GroupRingElement) -> Self {
        let mut out = Self::zero(elem.group().clone());
        for (a, c) in elem.terms() {
            out.add_term(a.clone(), Cyclotomic::from_rational(c));
        }
        out
    }

    fn add_term(&mut self, a: Vec<BigInt>, c: Cyclotomic) {
        if c.is_zero() {
            return;
        }
        match self.coeffs.entry(a) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().add(&c);
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn coeff(&self, a: &[BigInt]) -> Cyclotomic {
        self.coeffs.get(a).cloned().unwrap_or_else(Cyclotomic::zero)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.group, rhs.group, "group mismatch");
        let mut out = self.clone();
        for (a, c) in &rhs.coeffs {
            out.add_term(a.clone(), c.clone());
        }
        out
    }

    pub fn convolve(&self, rhs: &Self) -> Self {
        assert_eq!(self.group, rhs.group, "group mismatch");
        let mut out = Self::zero(self.group.clone());
        for (a, ca) in &self.coeffs {
            for (b, cb) in &rhs.coeffs {
                out.add_term(self.group.add(a, b), ca.mul(cb));
            }
        }
        out
    }

    /// Exact equality via cyclotomic zero tests on every coefficient.
    pub fn equals(&self, rhs: &Self) -> bool {
        assert_eq!(self.group, rhs.group, "group mismatch");
        let keys: std::collections::BTreeSet<_> =
            self.coeffs.keys().chain(rhs.coeffs.keys()).collect();
        keys.into_iter()
            .all(|a| self.coeff(a).equals(&rhs.coeff(a)))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.values().all(Cyclotomic::is_zero)
    }
}

/// The character idempotent `e_z = (1/|A|) sum_a chi_z(a^{-1}) a`, with
/// exact cyclotomic coefficients of magnitude `1/|A|`.
///
/// Errors when `z` is not a character of `a`.
pub fn idempotent(z: &TorsionPoint, a: &FiniteAbelianGroup) -> Result<CycloGroupElement> {
    let char_coords = a.char_coords(z)?;
    let inv_order = BigRational::new(BigInt::one(), a.order().clone());
    let mut out = CycloGroupElement::zero(a.clone());
    for elem in a.elements() {
        let phase = a.char_phase(&char_coords, &a.neg(&elem));
        out.add_term(elem, Cyclotomic::term(&phase, &inv_order));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Sublattice;

    fn frac(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn idempotent_z2_examples() {
        let gamma = Sublattice::scaled_standard(1, 2);
        let group = gamma.smith_quotient().unwrap();
        let pts = gamma.dual_group().unwrap();
        let trivial = pts.iter().find(|z| z.is_trivial()).unwrap();
        let nontrivial = pts.iter().find(|z| !z.is_trivial()).unwrap();

        let e_triv = idempotent(trivial, &group).unwrap();
        let e_sign = idempotent(nontrivial, &group).unwrap();

        let e = group.identity();
        let a = vec![BigInt::one()];
        assert!(e_triv
            .coeff(&e)
            .equals(&Cyclotomic::from_rational(&frac(1, 2))));
        assert!(e_triv
            .coeff(&a)
            .equals(&Cyclotomic::from_rational(&frac(1, 2))));
        assert!(e_sign
            .coeff(&a)
            .equals(&Cyclotomic::from_rational(&frac(-1, 2))));
    }

    #[test]
    fn idempotent_z3_matches_direct_substitution() {
        let gamma = Sublattice::scaled_standard(1, 3);
        let group = gamma.smith_quotient().unwrap();
        let z = crate::lattice::TorsionPoint::new(vec![frac(1, 3)]);
        let e_z = idempotent(&z, &group).unwrap();
        // coefficient at a^k is conj(omega^k)/3
        for k in 0..3i64 {
            let expect = Cyclotomic::term(&frac((3 - k) % 3, 3), &frac(1, 3));
            assert!(e_z.coeff(&[BigInt::from(k)]).equals(&expect));
        }
    }

    #[test]
    fn idempotents_are_orthogonal_and_complete() {
        for gamma in [
            Sublattice::scaled_standard(1, 4),
            Sublattice::scaled_standard(2, 2),
            Sublattice::new(IntMat::from_rows_i64(&[&[2, 1], &[0, 2]])),
        ] {
            let group = gamma.smith_quotient().unwrap();
            let pts = gamma.dual_group().unwrap();
            let idems: Vec<CycloGroupElement> = pts
                .iter()
                .map(|z| idempotent(z, &group).unwrap())
                .collect();
            let mut total = CycloGroupElement::zero(group.clone());
            for (i, ei) in idems.iter().enumerate() {
                assert!(ei.convolve(ei).equals(ei), "e_z not idempotent");
                for (j, ej) in idems.iter().enumerate() {
                    if i != j {
                        assert!(ei.convolve(ej).is_zero(), "e_z e_z' != 0");
                    }
                }
                total = total.add(ei);
            }
            assert!(total.equals(&CycloGroupElement::identity(group)));
        }
    }

    #[test]
    fn rational_convolution_and_action_matrix() {
        let gamma = Sublattice::scaled_standard(1, 4);
        let group = gamma.smith_quotient().unwrap();
        // Averaging projector over the subgroup {0, 2} of Z/4.
        let avg = GroupRingElement::from_coeffs(
            group.clone(),
            vec![
                (vec![BigInt::from(0)], frac(1, 2)),
                (vec![BigInt::from(2)], frac(1, 2)),
            ],
        );
        assert!(avg.is_idempotent());
        let (m, den) = avg.action_matrix_scaled();
        assert_eq!(den, BigInt::from(2));
        // Scaled action matrix is a sum of two permutation matrices.
        let colsum: BigInt = (0..4).map(|i| m.get(i, 0).clone()).sum();
        assert_eq!(colsum, BigInt::from(2));
    }
}
