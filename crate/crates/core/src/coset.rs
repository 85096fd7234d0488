//! Torsion cosets `u * G(Lambda)`, their Q-closures, the character
//! subspace they cut out of a dual group, the exact rational projector
//! onto it, and restricted kernel volumes.
//!
//! `G(Lambda)` is the algebraic subgroup annihilated by the lattice:
//! `{z : z^k = 1 for all k in Lambda}`. All membership tests are exact
//! rational phase computations, and projector coefficients are Ramanujan
//! sums divided by `|B|`, hence exact rationals.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::complex::build_quotient_matrix;
use crate::cyclotomic::ramanujan_sum;
use crate::error::{Error, Result};
use crate::groupring::GroupRingElement;
use crate::intmat::IntMat;
use crate::lattice::{quotient_order_b, Sublattice, TorsionPoint};
use crate::laurent::LaurentMatrix;

/// A torsion coset `u * G(Lambda)` with `Lambda` primitive and nonzero.
#[derive(Clone, Debug)]
pub struct TorsionCoset {
    u: TorsionPoint,
    lambda: Sublattice,
}

impl TorsionCoset {
    pub fn new(u: TorsionPoint, lambda: Sublattice) -> Result<Self> {
        if u.dim() != lambda.dim() {
            return Err(Error::DimensionMismatch {
                expected: lambda.dim(),
                found: u.dim(),
            });
        }
        let basis = lambda.basis();
        if basis.cols() == 0 {
            return Err(Error::TrivialLattice);
        }
        let smith = basis.smith(false);
        if let Some(bad) = smith.diag.iter().find(|d| !d.is_one() && !d.is_zero()) {
            return Err(Error::NotPrimitive {
                factor: bad.to_string(),
            });
        }
        Ok(TorsionCoset { u, lambda })
    }

    pub fn point(&self) -> &TorsionPoint {
        &self.u
    }

    pub fn lattice(&self) -> &Sublattice {
        &self.lambda
    }

    /// Canonical form of the coset: transport the direction lattice to
    /// standard coordinates with a unimodular automorphism, zero the
    /// transported point along the torus directions, transport back.
    ///
    /// The returned coset equals the input as a set; this is verified
    /// exactly (`u^{-1} u' in G(Lambda)`).
    pub fn normalize(&self) -> Result<NormalizedCoset> {
        let n = self.lambda.dim();
        let basis = self.lambda.basis();
        let s = basis.cols();
        let l = n - s;
        let smith = basis.smith(true);
        // Primitivity was checked at construction; the Smith diagonal of a
        // primitive basis is all ones.
        debug_assert!(smith.diag.iter().all(One::is_one));
        let u_mat = smith.u.expect("tracked");
        let uinv = smith.uinv.expect("tracked");

        // P moves the lattice image span(e_1..e_s) to span(e_{l+1}..e_n).
        let p_mat = IntMat::from_fn(n, n, |i, j| {
            let hit = if i >= l { j == i - l } else { j == s + i };
            if hit {
                BigInt::one()
            } else {
                BigInt::zero()
            }
        });
        // Phases transport by m = (P U)^{-T}; the transported subgroup is
        // the standard torus free in the first l coordinates.
        let m_mat = p_mat.matmul(&uinv.transpose());
        let m_inv = u_mat.transpose().matmul(&p_mat.transpose());

        let mut transported = rat_matvec(&m_mat, self.u.phases());
        for entry in transported.iter_mut().take(l) {
            *entry = BigRational::zero();
        }
        let canonical = TorsionPoint::new(rat_matvec(&m_inv, &transported));

        let diff = self.u.div(&canonical);
        assert!(
            diff.annihilates(&self.lambda),
            "normalization left the coset: u^-1 u' is not in G(Lambda)"
        );

        let conjugates = canonical.galois_closure();
        Ok(NormalizedCoset {
            coset: TorsionCoset {
                u: canonical,
                lambda: Sublattice::new(basis),
            },
            conjugates,
        })
    }
}

fn rat_matvec(m: &IntMat, q: &[BigRational]) -> Vec<BigRational> {
    (0..m.rows())
        .map(|i| {
            let mut acc = BigRational::zero();
            for (j, qj) in q.iter().enumerate() {
                acc += BigRational::from(m.get(i, j).clone()) * qj;
            }
            acc
        })
        .collect()
}

/// A torsion coset in canonical form, with the Galois conjugates of its
/// base point (which enumerate the components of the Q-closure).
#[derive(Clone, Debug)]
pub struct NormalizedCoset {
    coset: TorsionCoset,
    conjugates: Vec<TorsionPoint>,
}

impl NormalizedCoset {
    pub fn point(&self) -> &TorsionPoint {
        &self.coset.u
    }

    pub fn lattice(&self) -> &Sublattice {
        &self.coset.lambda
    }

    pub fn conjugates(&self) -> &[TorsionPoint] {
        &self.conjugates
    }

    /// The number of Galois conjugates of the canonical point.
    pub fn conjugate_count(&self) -> usize {
        self.conjugates.len()
    }

    /// Whether `z` lies in the Q-closure of the coset.
    pub fn closure_contains(&self, z: &TorsionPoint) -> bool {
        self.conjugates
            .iter()
            .any(|u| z.div(u).annihilates(&self.coset.lambda))
    }

    /// Whether `z` lies in the coset itself.
    pub fn contains(&self, z: &TorsionPoint) -> bool {
        z.div(&self.coset.u).annihilates(&self.coset.lambda)
    }
}

/// The character subspace `alpha(Gamma, X)` of a dual group cut out by the
/// Q-closure of a torsion coset.
#[derive(Clone, Debug)]
pub struct AlphaSubspace {
    /// Dual points in the Q-closure, in dual enumeration order; the
    /// dimension contribution per complex copy is `members.len()`.
    pub members: Vec<TorsionPoint>,
    /// Exact rational projector onto the subspace; `None` when empty.
    pub projector: Option<GroupRingElement>,
    /// Number of Galois conjugates of the normalized base point.
    pub conjugate_count: usize,
    /// `|B| = |(Gamma + Lambda) / Gamma|`.
    pub b_order: BigInt,
}

/// Dual points lying in the Q-closure of the coset (exact test
/// `<q_z - q_u_j, k> in Z` on the generators of Lambda). May be empty.
pub fn alpha_members(gamma: &Sublattice, coset: &NormalizedCoset) -> Result<Vec<TorsionPoint>> {
    Ok(gamma
        .dual_group()?
        .into_iter()
        .filter(|z| coset.closure_contains(z))
        .collect())
}

/// The exact rational projector `N_X` onto `alpha(Gamma, X)`:
/// coefficient `(1/|B|) * c_m(.)` at each element of `B`, zero elsewhere,
/// where the Galois-orbit sum collapses to a Ramanujan sum.
///
/// Errors when the dual group does not meet the coset.
pub fn projector(gamma: &Sublattice, coset: &NormalizedCoset) -> Result<GroupRingElement> {
    let group = gamma.smith_quotient()?;
    let meets = gamma
        .dual_group()?
        .iter()
        .any(|z| coset.contains(z));
    if !meets {
        return Err(Error::EmptyIntersection);
    }

    // Enumerate B = (Gamma + Lambda)/Gamma keeping a lift in Lambda for
    // every element; the projector formula evaluates characters on lifts
    // inside Lambda, where the choice of conjugate component drops out.
    let basis = coset.lattice().basis();
    let gens: Vec<Vec<BigInt>> = (0..basis.cols())
        .map(|j| (0..basis.rows()).map(|i| basis.get(i, j).clone()).collect())
        .collect();
    let mut lifts: BTreeMap<Vec<BigInt>, Vec<BigInt>> = BTreeMap::new();
    lifts.insert(group.identity(), vec![BigInt::zero(); gamma.dim()]);
    let mut queue = vec![group.identity()];
    while let Some(b) = queue.pop() {
        let lift = lifts.get(&b).cloned().expect("queued with lift");
        for g in &gens {
            let class = group.class_of(g);
            let next = group.add(&b, &class);
            if !lifts.contains_key(&next) {
                let next_lift: Vec<BigInt> =
                    lift.iter().zip(g.iter()).map(|(a, b)| a + b).collect();
                lifts.insert(next.clone(), next_lift);
                queue.push(next);
            }
        }
    }
    let b_order = BigInt::from(lifts.len());
    debug_assert_eq!(b_order, quotient_order_b(gamma, coset.lattice())?);

    let order = coset
        .point()
        .order()
        .to_u64()
        .expect("torsion order fits u64");
    let coeffs = lifts.into_iter().map(|(b, lift)| {
        // Galois-orbit sum of u(b^{-1}) = c_m(a) with a = -m <q_u, lift>.
        let neg_lift: Vec<BigInt> = lift.iter().map(|x| -x).collect();
        let phase = coset.point().phase_dot(&neg_lift);
        let a = (phase * BigRational::from(BigInt::from(order)))
            .to_integer()
            .to_i64()
            .expect("phase numerator fits i64");
        let value = ramanujan_sum(order, a);
        (
            b,
            BigRational::new(BigInt::from(value), b_order.clone()),
        )
    });
    Ok(GroupRingElement::from_coeffs(group, coeffs))
}

/// Members and projector together.
pub fn alpha_subspace(gamma: &Sublattice, coset: &NormalizedCoset) -> Result<AlphaSubspace> {
    let members = alpha_members(gamma, coset)?;
    let projector = if members.is_empty() {
        None
    } else {
        Some(projector(gamma, coset)?)
    };
    Ok(AlphaSubspace {
        members,
        projector,
        conjugate_count: coset.conjugate_count(),
        b_order: quotient_order_b(gamma, coset.lattice())?,
    })
}

/// Exact count check `|members| = r |A| / |B|`.
#[derive(Clone, Debug)]
pub struct AlphaDimension {
    pub members: usize,
    pub expected: BigInt,
    pub conjugate_count: usize,
    pub a_order: BigInt,
    pub b_order: BigInt,
}

/// Verifies the dimension identity of the character subspace; requires a
/// nonempty intersection. A violation signals a membership or
/// normalization bug.
pub fn alpha_dimension_check(
    gamma: &Sublattice,
    coset: &NormalizedCoset,
) -> Result<AlphaDimension> {
    let alpha = alpha_subspace(gamma, coset)?;
    if alpha.members.is_empty() {
        return Err(Error::EmptyIntersection);
    }
    let a_order = gamma.index()?;
    let expected = BigInt::from(alpha.conjugate_count) * (&a_order / &alpha.b_order);
    if BigInt::from(alpha.members.len()) != expected {
        return Err(Error::AlphaDimension {
            members: alpha.members.len(),
            expected: expected.to_string(),
        });
    }
    Ok(AlphaDimension {
        members: alpha.members.len(),
        expected,
        conjugate_count: alpha.conjugate_count,
        a_order,
        b_order: alpha.b_order,
    })
}

/// Squared volume of the Z-support of `alpha(Gamma, X)` with the bound
/// `vol^2 <= (r |B|)^(2 r |A| / |B|)`.
#[derive(Clone, Debug)]
pub struct AlphaVolume {
    pub volume_sq: BigRational,
    pub bound_sq: BigRational,
    pub bound_holds: bool,
    pub dimension: usize,
}

pub fn alpha_volume_sq(gamma: &Sublattice, coset: &NormalizedCoset) -> Result<AlphaVolume> {
    let alpha = alpha_subspace(gamma, coset)?;
    let dim = alpha.members.len();
    if dim == 0 {
        return Ok(AlphaVolume {
            volume_sq: BigRational::one(),
            bound_sq: BigRational::one(),
            bound_holds: true,
            dimension: 0,
        });
    }
    let nx = alpha.projector.as_ref().expect("nonempty");
    let (scaled, _den) = nx.action_matrix_scaled();
    // alpha is the column space of the projector matrix; scaling by |B|
    // does not change the span, so saturate the integer columns.
    let basis = scaled.transpose().saturate_rowspace();
    debug_assert_eq!(basis.cols(), dim);
    let volume_sq = BigRational::from(basis.primitive_volume_sq());
    let r_b = BigInt::from(alpha.conjugate_count) * &alpha.b_order;
    let bound_sq = BigRational::from(r_b.pow(2 * dim as u32));
    let bound_holds = volume_sq <= bound_sq;
    Ok(AlphaVolume {
        volume_sq,
        bound_sq,
        bound_holds,
        dimension: dim,
    })
}

/// Integral basis of `ker(D_Gamma) ∩ alpha^k`, as the left kernel of the
/// stacked exact system `{x D_Gamma = 0, x (|B| I - |B| N_X) = 0}`.
pub fn restricted_kernel_basis(
    d: &LaurentMatrix,
    gamma: &Sublattice,
    coset: &NormalizedCoset,
) -> Result<IntMat> {
    let group = gamma.smith_quotient()?;
    let order = group.order_usize();
    let rows = d.rows() * order;
    let alpha = alpha_subspace(gamma, coset)?;
    if alpha.members.is_empty() {
        return Ok(IntMat::zero(rows, 0));
    }
    let dq = build_quotient_matrix(d, &group);
    let (scaled, den) = alpha.projector.as_ref().expect("nonempty").action_matrix_scaled();
    let penalty = IntMat::from_fn(order, order, |i, j| {
        let diag = if i == j { den.clone() } else { BigInt::zero() };
        diag - scaled.get(i, j)
    });
    // Block-diagonal copy of the membership constraint for each of the
    // d.rows() tensor factors.
    let blk = IntMat::from_fn(rows, rows, |i, j| {
        if i / order == j / order {
            penalty.get(i % order, j % order).clone()
        } else {
            BigInt::zero()
        }
    });
    Ok(dq.hcat(&blk).left_kernel())
}

/// Squared volume of the restricted kernel; 1 when the intersection with
/// the coset is empty or the kernel is trivial.
pub fn restricted_kernel_volume_sq(
    d: &LaurentMatrix,
    gamma: &Sublattice,
    coset: &NormalizedCoset,
) -> Result<BigRational> {
    let basis = restricted_kernel_basis(d, gamma, coset)?;
    Ok(BigRational::from(basis.primitive_volume_sq()))
}

/// Result of comparing `ker(D_Gamma)` with the sum of coset-restricted
/// kernels.
#[derive(Clone, Debug)]
pub struct KernelDecomposition {
    pub dim_full: usize,
    pub dim_covered: usize,
    pub volume_sq_full: BigRational,
    pub volume_sq_product: BigRational,
    pub volume_bound_holds: bool,
}

/// Verifies that the supplied cosets cover the kernel:
/// `dim ker(D_Gamma) = dim sum_j ker(D_Gamma, X_j)` and
/// `vol^2(ker D_Gamma) <= prod_j vol^2(ker D_{Gamma, X_j})`.
///
/// A dimension mismatch is a modeling error (the coset list does not
/// cover the torsion points of the singular set), not a code error.
pub fn kernel_decomposition_check(
    d: &LaurentMatrix,
    gamma: &Sublattice,
    cosets: &[NormalizedCoset],
) -> Result<KernelDecomposition> {
    let group = gamma.smith_quotient()?;
    let dq = build_quotient_matrix(d, &group);
    let full = dq.left_kernel();
    let dim_full = full.cols();
    let volume_sq_full = BigRational::from(full.primitive_volume_sq());

    let mut stacked: Option<IntMat> = None;
    let mut volume_sq_product = BigRational::one();
    for coset in cosets {
        let basis = restricted_kernel_basis(d, gamma, coset)?;
        volume_sq_product *= BigRational::from(basis.primitive_volume_sq());
        stacked = Some(match stacked {
            None => basis,
            Some(prev) => prev.hcat(&basis),
        });
    }
    let dim_covered = match &stacked {
        None => 0,
        Some(m) => m.transpose().rank(),
    };
    if dim_covered != dim_full {
        return Err(Error::CoverageMismatch {
            full: dim_full,
            covered: dim_covered,
        });
    }
    Ok(KernelDecomposition {
        dim_full,
        dim_covered,
        volume_bound_holds: volume_sq_full <= volume_sq_product,
        volume_sq_full,
        volume_sq_product,
    })
}

/// One row of the `|B|` growth probe.
#[derive(Clone, Debug)]
pub struct BGrowthRow {
    pub girth: u64,
    pub b_order: BigInt,
    /// l1 norm of the fixed generator of Lambda.
    pub generator_l1: BigInt,
    /// Squared Euclidean norm of the same generator, recorded alongside.
    pub generator_l2_sq: BigInt,
    /// `|B| >= girth / |x|_1`.
    pub bound_holds: bool,
}

/// Emits `(girth, |B|)` along a family of full-rank lattices and checks
/// the growth bound `|B| >= <Gamma> / |x|_1` for a fixed shortest
/// generator `x` of Lambda.
pub fn b_growth_probe(lambda: &Sublattice, family: &[Sublattice]) -> Result<Vec<BGrowthRow>> {
    let basis = lambda.basis();
    if basis.cols() == 0 {
        return Err(Error::TrivialLattice);
    }
    let norms: Vec<(BigInt, BigInt)> = (0..basis.cols())
        .map(|j| {
            let l1: BigInt = (0..basis.rows()).map(|i| basis.get(i, j).abs()).sum();
            let l2: BigInt = (0..basis.rows())
                .map(|i| basis.get(i, j) * basis.get(i, j))
                .sum();
            (l1, l2)
        })
        .collect();
    let (generator_l1, generator_l2_sq) = norms
        .into_iter()
        .min_by(|a, b| a.0.cmp(&b.0))
        .expect("nonempty basis");

    family
        .iter()
        .map(|gamma| {
            let girth = gamma.girth()?;
            let b_order = quotient_order_b(gamma, lambda)?;
            let bound_holds = &b_order * &generator_l1 >= BigInt::from(girth);
            Ok(BGrowthRow {
                girth,
                b_order,
                generator_l1: generator_l1.clone(),
                generator_l2_sq: generator_l2_sq.clone(),
                bound_holds,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::Cyclotomic;
    use crate::groupring::{idempotent, CycloGroupElement};
    use crate::laurent::LaurentPoly;

    fn frac(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn point(fracs: &[(i64, i64)]) -> TorsionPoint {
        TorsionPoint::new(fracs.iter().map(|&(n, d)| frac(n, d)).collect())
    }

    fn lat(rows: &[&[i64]]) -> Sublattice {
        Sublattice::new(IntMat::from_rows_i64(rows))
    }

    fn t(n: usize, i: usize) -> LaurentPoly {
        LaurentPoly::variable(n, i)
    }

    fn c(n: usize, v: i64) -> LaurentPoly {
        LaurentPoly::constant(n, v)
    }

    #[test]
    fn coset_construction_guards() {
        assert!(matches!(
            TorsionCoset::new(point(&[(0, 1), (0, 1)]), lat(&[&[0], &[0]])),
            Err(Error::TrivialLattice)
        ));
        assert!(matches!(
            TorsionCoset::new(point(&[(0, 1), (0, 1)]), lat(&[&[2], &[0]])),
            Err(Error::NotPrimitive { .. })
        ));
        assert!(TorsionCoset::new(point(&[(0, 1), (0, 1)]), lat(&[&[1], &[0]])).is_ok());
    }

    #[test]
    fn normalize_kills_torus_directions() {
        // G(Lambda) for Lambda = Z(1,0) fixes z1 = 1 and is free in z2;
        // the canonical point keeps only the constrained coordinate.
        let x = TorsionCoset::new(point(&[(1, 2), (1, 3)]), lat(&[&[1], &[0]])).unwrap();
        let norm = x.normalize().unwrap();
        assert_eq!(norm.point(), &point(&[(1, 2), (0, 1)]));
        assert_eq!(norm.conjugate_count(), 1);
        // Same coset as a set.
        assert!(norm.contains(x.point()));

        // Trivial point stays trivial.
        let x = TorsionCoset::new(point(&[(0, 1), (0, 1)]), lat(&[&[0], &[1]])).unwrap();
        let norm = x.normalize().unwrap();
        assert!(norm.point().is_trivial());
        assert_eq!(norm.conjugate_count(), 1);

        // Lambda = Z(0,1) constrains z2; a point with trivial second
        // coordinate normalizes to the identity coset.
        let x = TorsionCoset::new(point(&[(1, 4), (0, 1)]), lat(&[&[0], &[1]])).unwrap();
        let norm = x.normalize().unwrap();
        assert!(norm.point().is_trivial());
        assert!(norm.contains(x.point()));

        // A twist in the constrained coordinate survives; the free
        // coordinate is zeroed.
        let x = TorsionCoset::new(point(&[(1, 3), (1, 4)]), lat(&[&[1], &[0]])).unwrap();
        let norm = x.normalize().unwrap();
        assert!(norm.contains(x.point()));
        assert_eq!(norm.point(), &point(&[(1, 3), (0, 1)]));
        assert_eq!(norm.conjugate_count(), 2); // phi(3)
    }

    #[test]
    fn normalize_full_rank_lattice_keeps_point() {
        // Full-rank primitive lattice is Z^n; the coset is a single point.
        let x = TorsionCoset::new(point(&[(1, 3)]), lat(&[&[1]])).unwrap();
        let norm = x.normalize().unwrap();
        assert_eq!(norm.point(), &point(&[(1, 3)]));
        assert_eq!(norm.conjugate_count(), 2);
    }

    #[test]
    fn alpha_members_examples() {
        // Gamma = 2Z^2, X = {1} G(Z(1,0)): members have z1 = 1.
        let gamma = Sublattice::scaled_standard(2, 2);
        let x = TorsionCoset::new(TorsionPoint::trivial(2), lat(&[&[1], &[0]])).unwrap();
        let norm = x.normalize().unwrap();
        let members = alpha_members(&gamma, &norm).unwrap();
        let expect = vec![point(&[(0, 1), (0, 1)]), point(&[(0, 1), (1, 2)])];
        let got: std::collections::BTreeSet<_> = members.into_iter().collect();
        assert_eq!(got, expect.into_iter().collect());

        // Intersection can be empty: an order-3 twist in the constrained
        // coordinate never meets a 2-group's dual.
        let x = TorsionCoset::new(point(&[(1, 3), (0, 1)]), lat(&[&[1], &[0]])).unwrap();
        let norm = x.normalize().unwrap();
        assert!(alpha_members(&gamma, &norm).unwrap().is_empty());

        // Members are closed under Galois conjugation inside the dual.
        let gamma = Sublattice::scaled_standard(2, 4);
        let x = TorsionCoset::new(point(&[(0, 1), (1, 4)]), lat(&[&[1], &[0]])).unwrap();
        let norm = x.normalize().unwrap();
        let members: std::collections::BTreeSet<_> =
            alpha_members(&gamma, &norm).unwrap().into_iter().collect();
        assert!(!members.is_empty());
        for z in &members {
            for conj in z.galois_closure() {
                assert!(members.contains(&conj));
            }
        }
    }

    #[test]
    fn projector_examples() {
        // u = 1: averaging projector over B.
        let gamma = Sublattice::scaled_standard(2, 2);
        let x = TorsionCoset::new(TorsionPoint::trivial(2), lat(&[&[1], &[0]])).unwrap();
        let norm = x.normalize().unwrap();
        let nx = projector(&gamma, &norm).unwrap();
        assert_eq!(nx.support_len(), 2);
        for (_, coeff) in nx.terms() {
            assert_eq!(coeff, &frac(1, 2));
        }
        assert!(nx.is_idempotent());

        // B trivial: N_X is the identity of the group ring.
        let gamma = lat(&[&[1, 0], &[0, 2]]);
        let x = TorsionCoset::new(TorsionPoint::trivial(2), lat(&[&[1], &[0]])).unwrap();
        let norm = x.normalize().unwrap();
        let nx = projector(&gamma, &norm).unwrap();
        let group = gamma.smith_quotient().unwrap();
        assert_eq!(nx, GroupRingElement::identity(group));

        // Order-3 point, B = Z/3: coefficients 2/3 at e and -1/3 elsewhere.
        let gamma = Sublattice::scaled_standard(1, 3);
        let x = TorsionCoset::new(point(&[(1, 3)]), lat(&[&[1]])).unwrap();
        let norm = x.normalize().unwrap();
        let nx = projector(&gamma, &norm).unwrap();
        let group = gamma.smith_quotient().unwrap();
        for elem in group.elements() {
            let expect = if elem.iter().all(Zero::is_zero) {
                frac(2, 3)
            } else {
                frac(-1, 3)
            };
            assert_eq!(nx.coeff(&elem), expect, "at {elem:?}");
        }
        assert!(nx.is_idempotent());

        // Empty intersection errors.
        let gamma = Sublattice::scaled_standard(1, 2);
        let x = TorsionCoset::new(point(&[(1, 3)]), lat(&[&[1]])).unwrap();
        let norm = x.normalize().unwrap();
        assert!(matches!(
            projector(&gamma, &norm),
            Err(Error::EmptyIntersection)
        ));
    }

    #[test]
    fn projector_equals_sum_of_member_idempotents() {
        // Exact cyclotomic bookkeeping on small groups.
        let cases = vec![
            (
                Sublattice::scaled_standard(2, 2),
                TorsionCoset::new(TorsionPoint::trivial(2), lat(&[&[1], &[0]])).unwrap(),
            ),
            (
                Sublattice::scaled_standard(1, 3),
                TorsionCoset::new(point(&[(1, 3)]), lat(&[&[1]])).unwrap(),
            ),
            (
                Sublattice::scaled_standard(2, 4),
                TorsionCoset::new(point(&[(0, 1), (1, 4)]), lat(&[&[1], &[0]])).unwrap(),
            ),
        ];
        for (gamma, x) in cases {
            let norm = x.normalize().unwrap();
            let group = gamma.smith_quotient().unwrap();
            let members = alpha_members(&gamma, &norm).unwrap();
            let nx = projector(&gamma, &norm).unwrap();
            let mut sum = CycloGroupElement::zero(group.clone());
            for z in &members {
                sum = sum.add(&idempotent(z, &group).unwrap());
            }
            assert!(sum.equals(&CycloGroupElement::from_rational_element(&nx)));
        }
    }

    #[test]
    fn projector_scales_member_characters_spectrally() {
        let gamma = Sublattice::scaled_standard(2, 2);
        let x = TorsionCoset::new(TorsionPoint::trivial(2), lat(&[&[1], &[0]])).unwrap();
        let norm = x.normalize().unwrap();
        let nx = projector(&gamma, &norm).unwrap();
        let group = gamma.smith_quotient().unwrap();
        let (scaled, den) = nx.action_matrix_scaled();
        let den_f = den.to_f64().unwrap();
        let members: std::collections::BTreeSet<_> =
            alpha_members(&gamma, &norm).unwrap().into_iter().collect();
        for z in gamma.dual_group().unwrap() {
            let coords = group.char_coords(&z).unwrap();
            let v: Vec<nalgebra::Complex<f64>> = group
                .elements()
                .iter()
                .map(|a| {
                    let phase = group.char_phase(&coords, &group.neg(a));
                    nalgebra::Complex::from_polar(
                        1.0,
                        2.0 * std::f64::consts::PI * phase.to_f64().unwrap(),
                    )
                })
                .collect();
            let expected_scale = if members.contains(&z) { 1.0 } else { 0.0 };
            for j in 0..v.len() {
                let mut acc = nalgebra::Complex::new(0.0, 0.0);
                for (i, vi) in v.iter().enumerate() {
                    acc += vi * scaled.get(i, j).to_f64().unwrap() / den_f;
                }
                assert!(
                    (acc - v[j] * expected_scale).norm() < 1e-10,
                    "z = {z:?}, member = {expected_scale}"
                );
            }
        }
    }

    #[test]
    fn alpha_dimension_examples() {
        let gamma = Sublattice::scaled_standard(2, 2);
        let x = TorsionCoset::new(TorsionPoint::trivial(2), lat(&[&[1], &[0]])).unwrap();
        let chk = alpha_dimension_check(&gamma, &x.normalize().unwrap()).unwrap();
        assert_eq!(chk.members, 2);
        assert_eq!(chk.expected, BigInt::from(2));

        // Gamma = N Z^n, X = {1} G(Z e_1): N^(n-1) members.
        let gamma = Sublattice::scaled_standard(2, 4);
        let x = TorsionCoset::new(TorsionPoint::trivial(2), lat(&[&[1], &[0]])).unwrap();
        let chk = alpha_dimension_check(&gamma, &x.normalize().unwrap()).unwrap();
        assert_eq!(chk.members, 4);
        assert_eq!(chk.b_order, BigInt::from(4));

        // Trivial quotient group: a single member.
        let gamma = Sublattice::new(IntMat::identity(2));
        let x = TorsionCoset::new(TorsionPoint::trivial(2), lat(&[&[1], &[0]])).unwrap();
        let chk = alpha_dimension_check(&gamma, &x.normalize().unwrap()).unwrap();
        assert_eq!(chk.members, 1);
        assert_eq!(chk.expected, BigInt::one());
    }

    #[test]
    fn alpha_volume_examples() {
        // B trivial: projector is the identity, volume 1.
        let gamma = lat(&[&[1, 0], &[0, 2]]);
        let x = TorsionCoset::new(TorsionPoint::trivial(2), lat(&[&[1], &[0]])).unwrap();
        let vol = alpha_volume_sq(&gamma, &x.normalize().unwrap()).unwrap();
        assert_eq!(vol.volume_sq, BigRational::one());
        assert!(vol.bound_holds);

        // Explicit 4x4 projector: the averaged lattice has Gram det 4.
        let gamma = Sublattice::scaled_standard(2, 2);
        let x = TorsionCoset::new(TorsionPoint::trivial(2), lat(&[&[1], &[0]])).unwrap();
        let vol = alpha_volume_sq(&gamma, &x.normalize().unwrap()).unwrap();
        assert_eq!(vol.volume_sq, BigRational::from(BigInt::from(4)));
        assert_eq!(vol.dimension, 2);
        assert_eq!(vol.bound_sq, BigRational::from(BigInt::from(16)));
        assert!(vol.bound_holds);

        // Empty alpha: zero-space convention.
        let x = TorsionCoset::new(point(&[(1, 3), (0, 1)]), lat(&[&[1], &[0]])).unwrap();
        let vol = alpha_volume_sq(&gamma, &x.normalize().unwrap()).unwrap();
        assert_eq!(vol.volume_sq, BigRational::one());
        assert_eq!(vol.dimension, 0);
    }

    #[test]
    fn restricted_kernel_examples() {
        // D = [t1 - 1], X = {1} G(Z(0,1)): kernel on the z2 = 1 characters.
        // Explicit small-N oracle: the intersection is the constants, so
        // the squared volume is N^2 (the all-ones vector has norm^2 = N^2).
        for n in [2i64, 3, 4] {
            let gamma = Sublattice::scaled_standard(2, n);
            let d = LaurentMatrix::from_rows(2, vec![vec![&t(2, 0) - &c(2, 1)]]);
            let x = TorsionCoset::new(TorsionPoint::trivial(2), lat(&[&[0], &[1]])).unwrap();
            let norm = x.normalize().unwrap();
            let basis = restricted_kernel_basis(&d, &gamma, &norm).unwrap();
            assert_eq!(basis.cols(), 1, "N={n}");
            let vol = restricted_kernel_volume_sq(&d, &gamma, &norm).unwrap();
            assert_eq!(vol, BigRational::from(BigInt::from(n * n)), "N={n}");
        }

        // Nonsingular D on every member: trivial kernel.
        let gamma = Sublattice::scaled_standard(2, 3);
        let d = LaurentMatrix::from_rows(2, vec![vec![&t(2, 0) - &c(2, 2)]]);
        let x = TorsionCoset::new(TorsionPoint::trivial(2), lat(&[&[0], &[1]])).unwrap();
        let norm = x.normalize().unwrap();
        assert_eq!(
            restricted_kernel_volume_sq(&d, &gamma, &norm).unwrap(),
            BigRational::one()
        );

        // Empty alpha: convention 1.
        let gamma = Sublattice::scaled_standard(2, 2);
        let x = TorsionCoset::new(point(&[(1, 3), (0, 1)]), lat(&[&[1], &[0]])).unwrap();
        let norm = x.normalize().unwrap();
        let d = LaurentMatrix::from_rows(2, vec![vec![&t(2, 0) - &c(2, 1)]]);
        assert_eq!(
            restricted_kernel_volume_sq(&d, &gamma, &norm).unwrap(),
            BigRational::one()
        );
    }

    #[test]
    fn kernel_decomposition_examples() {
        // Single point coset covers the kernel of t - 1 over Z.
        let gamma = Sublattice::scaled_standard(1, 4);
        let d = LaurentMatrix::from_rows(1, vec![vec![&t(1, 0) - &c(1, 1)]]);
        let x = TorsionCoset::new(TorsionPoint::trivial(1), lat(&[&[1]])).unwrap();
        let norm = x.normalize().unwrap();
        let rep = kernel_decomposition_check(&d, &gamma, &[norm]).unwrap();
        assert_eq!(rep.dim_full, 1);
        assert!(rep.volume_bound_holds);

        // Product of two cyclotomic-linear factors: both axis cosets are
        // needed; they overlap at the trivial character.
        for n in [2i64, 3] {
            let gamma = Sublattice::scaled_standard(2, n);
            let f = &(&t(2, 0) - &c(2, 1)) * &(&t(2, 1) - &c(2, 1));
            let d = LaurentMatrix::from_rows(2, vec![vec![f]]);
            let x1 = TorsionCoset::new(TorsionPoint::trivial(2), lat(&[&[1], &[0]]))
                .unwrap()
                .normalize()
                .unwrap();
            let x2 = TorsionCoset::new(TorsionPoint::trivial(2), lat(&[&[0], &[1]]))
                .unwrap()
                .normalize()
                .unwrap();
            let rep = kernel_decomposition_check(&d, &gamma, &[x1.clone(), x2]).unwrap();
            assert_eq!(rep.dim_full, (2 * n - 1) as usize);
            assert!(rep.volume_bound_holds);

            // Deliberate omission: one axis does not cover.
            let err = kernel_decomposition_check(&d, &gamma, &[x1]).unwrap_err();
            assert!(matches!(err, Error::CoverageMismatch { .. }));
        }

        // Nonsingular D, empty coset list: 0 == 0.
        let d = LaurentMatrix::from_rows(1, vec![vec![&t(1, 0) - &c(1, 2)]]);
        let gamma = Sublattice::scaled_standard(1, 5);
        let rep = kernel_decomposition_check(&d, &gamma, &[]).unwrap();
        assert_eq!(rep.dim_full, 0);
        assert_eq!(rep.dim_covered, 0);
    }

    #[test]
    fn b_growth_examples() {
        // Lambda = Z(1,0), Gamma = NZ^2: |B| = N >= N/1.
        let lambda = lat(&[&[1], &[0]]);
        let family: Vec<Sublattice> = [2, 3, 5, 8]
            .iter()
            .map(|&n| Sublattice::scaled_standard(2, n))
            .collect();
        let rows = b_growth_probe(&lambda, &family).unwrap();
        for (row, n) in rows.iter().zip([2u64, 3, 5, 8]) {
            assert_eq!(row.girth, n);
            assert_eq!(row.b_order, BigInt::from(n));
            assert!(row.bound_holds);
        }

        // Lambda = Z(1,1): |B| = N (order of (1,1) in (Z/N)^2) >= N/2.
        let lambda = lat(&[&[1], &[1]]);
        let rows = b_growth_probe(&lambda, &family).unwrap();
        for (row, n) in rows.iter().zip([2u64, 3, 5, 8]) {
            assert_eq!(row.b_order, BigInt::from(n));
            assert_eq!(row.generator_l1, BigInt::from(2));
            assert_eq!(row.generator_l2_sq, BigInt::from(2));
            assert!(row.bound_holds);
        }
    }

    #[test]
    fn projector_idempotent_across_pairs() {
        let pairs: Vec<(Sublattice, TorsionCoset)> = vec![
            (
                Sublattice::scaled_standard(2, 3),
                TorsionCoset::new(point(&[(1, 3), (0, 1)]), lat(&[&[1], &[0]])).unwrap(),
            ),
            (
                Sublattice::scaled_standard(2, 4),
                TorsionCoset::new(point(&[(1, 2), (1, 4)]), lat(&[&[1], &[1]])).unwrap(),
            ),
            (
                lat(&[&[2, 1], &[0, 2]]),
                TorsionCoset::new(TorsionPoint::trivial(2), lat(&[&[1], &[1]])).unwrap(),
            ),
            (
                Sublattice::scaled_standard(1, 6),
                TorsionCoset::new(point(&[(1, 2)]), lat(&[&[1]])).unwrap(),
            ),
        ];
        for (gamma, x) in pairs {
            let norm = x.normalize().unwrap();
            match projector(&gamma, &norm) {
                Ok(nx) => {
                    assert!(nx.is_idempotent());
                    let _ = alpha_dimension_check(&gamma, &norm).unwrap();
                    let vol = alpha_volume_sq(&gamma, &norm).unwrap();
                    assert!(vol.bound_holds);
                }
                Err(Error::EmptyIntersection) => {}
                Err(e) => panic!("unexpected error {e:?}"),
            }
        }
    }

    #[test]
    fn cyclotomic_is_zero_matches_float() {
        // Guard for the reduction used by the projector equality test.
        let val = Cyclotomic::root_of_unity(&frac(1, 5))
            .add(&Cyclotomic::root_of_unity(&frac(4, 5)))
            .add(&Cyclotomic::from_rational(&frac(1, 2)));
        assert!(!val.is_zero());
        assert!((val.to_complex().re - (2.0 * (2.0 * std::f64::consts::PI / 5.0).cos() + 0.5))
            .abs()
            < 1e-12);
    }
}
