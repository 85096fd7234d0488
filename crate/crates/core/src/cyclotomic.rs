//! Exact root-of-unity arithmetic: Euler phi, Moebius, Ramanujan sums,
//! cyclotomic polynomials, and formal sums of roots of unity with rational
//! coefficients.
//!
//! A root of unity is a rational phase `q in [0,1)` standing for
//! `exp(2 pi i q)`; no floats enter exact paths. Zero-testing a sum of
//! roots reduces the associated polynomial modulo the cyclotomic polynomial
//! of the common order.

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::Complex;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// Euler totient by trial-division factorization.
pub fn euler_phi(mut k: u64) -> u64 {
    assert!(k >= 1);
    let mut phi = 1u64;
    let mut p = 2u64;
    while p * p <= k {
        if k.is_multiple_of(p) {
            let mut pe = 1;
            while k.is_multiple_of(p) {
                k /= p;
                pe *= p;
            }
            phi *= pe - pe / p;
        }
        p += 1;
    }
    if k > 1 {
        phi *= k - 1;
    }
    phi
}

/// Moebius function by trial division.
pub fn moebius(mut k: u64) -> i64 {
    assert!(k >= 1);
    let mut mu = 1i64;
    let mut p = 2u64;
    while p * p <= k {
        if k.is_multiple_of(p) {
            k /= p;
            if k.is_multiple_of(p) {
                return 0;
            }
            mu = -mu;
        }
        p += 1;
    }
    if k > 1 {
        mu = -mu;
    }
    mu
}

/// Ramanujan sum `c_k(a)`: the sum of `exp(2 pi i j a / k)` over `j`
/// coprime to `k`, evaluated exactly as `mu(k/g) * phi(k) / phi(k/g)`
/// with `g = gcd(a, k)`. Always an integer.
pub fn ramanujan_sum(k: u64, a: i64) -> i64 {
    assert!(k >= 1);
    let a_mod = a.rem_euclid(k as i64) as u64;
    let g = if a_mod == 0 { k } else { a_mod.gcd(&k) };
    let kg = k / g;
    moebius(kg) * (euler_phi(k) / euler_phi(kg)) as i64
}

/// Coefficients of the n-th cyclotomic polynomial, constant term first.
///
/// Recursive exact division: `Phi_n = (x^n - 1) / prod_{d|n, d<n} Phi_d`.
pub fn cyclotomic_polynomial(n: u64) -> Vec<BigInt> {
    assert!(n >= 1);
    if n == 1 {
        return vec![-BigInt::one(), BigInt::one()];
    }
    let mut num = vec![BigInt::zero(); n as usize + 1];
    num[0] = -BigInt::one();
    num[n as usize] = BigInt::one();
    for d in 1..n {
        if n.is_multiple_of(d) {
            num = poly_div_exact(&num, &cyclotomic_polynomial(d));
        }
    }
    num
}

/// Exact division of integer polynomials with monic divisor.
fn poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    assert!(den.last().is_some_and(One::is_one), "divisor must be monic");
    let mut rem: Vec<BigInt> = num.to_vec();
    let dn = den.len() - 1;
    let qn = rem.len().saturating_sub(dn);
    let mut quot = vec![BigInt::zero(); qn];
    for i in (0..qn).rev() {
        let c = rem[i + dn].clone();
        if c.is_zero() {
            continue;
        }
        quot[i] = c.clone();
        for (j, d) in den.iter().enumerate() {
            rem[i + j] -= &c * d;
        }
    }
    assert!(rem.iter().all(Zero::is_zero), "division must be exact");
    quot
}

/// A formal rational combination of roots of unity, stored as a map from
/// phase `q in [0,1)` to coefficient. Addition and multiplication are
/// termwise; equality and zero tests reduce modulo the cyclotomic
/// polynomial of the common root order.
#[derive(Clone, PartialEq, Eq)]
pub struct Cyclotomic {
    terms: BTreeMap<BigRational, BigRational>,
}

fn reduce_phase(q: &BigRational) -> BigRational {
    q - q.floor()
}

impl Cyclotomic {
    pub fn zero() -> Self {
        Cyclotomic {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::root_of_unity(&BigRational::zero())
    }

    /// `exp(2 pi i q)`.
    pub fn root_of_unity(q: &BigRational) -> Self {
        Self::term(q, &BigRational::one())
    }

    /// `c * exp(2 pi i q)`.
    pub fn term(q: &BigRational, c: &BigRational) -> Self {
        let mut t = BTreeMap::new();
        if !c.is_zero() {
            t.insert(reduce_phase(q), c.clone());
        }
        Cyclotomic { terms: t }
    }

    pub fn from_rational(c: &BigRational) -> Self {
        Self::term(&BigRational::zero(), c)
    }

    fn add_term(&mut self, q: BigRational, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(q) {
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

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (q, c) in &rhs.terms {
            out.add_term(q.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (q, c) in &rhs.terms {
            out.add_term(q.clone(), -c.clone());
        }
        out
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out = Self::zero();
        for (q1, c1) in &self.terms {
            for (q2, c2) in &rhs.terms {
                out.add_term(reduce_phase(&(q1 + q2)), c1 * c2);
            }
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let terms = self
            .terms
            .iter()
            .map(|(q, k)| (q.clone(), k * c))
            .collect();
        Cyclotomic { terms }
    }

    /// Complex conjugation: negates every phase.
    pub fn conj(&self) -> Self {
        let mut out = Self::zero();
        for (q, c) in &self.terms {
            out.add_term(reduce_phase(&(-q)), c.clone());
        }
        out
    }

    /// Exact zero test: the value `sum c_q exp(2 pi i q)` vanishes iff the
    /// polynomial `sum c_q x^(q N)` is divisible by `Phi_N`, `N` the lcm of
    /// the phase denominators.
    pub fn is_zero(&self) -> bool {
        if self.terms.is_empty() {
            return true;
        }
        if self.terms.len() == 1 {
            return false; // single nonzero coefficient times a unit
        }
        let mut order = BigInt::one();
        for q in self.terms.keys() {
            order = order.lcm(q.denom());
        }
        let n = order.to_u64().expect("root order exceeds u64");
        let mut coeffs = vec![BigRational::zero(); n as usize];
        for (q, c) in &self.terms {
            let idx = (q * BigRational::from(order.clone()))
                .to_integer()
                .to_u64()
                .expect("phase index fits") as usize;
            coeffs[idx] += c;
        }
        let phi: Vec<BigRational> = cyclotomic_polynomial(n)
            .into_iter()
            .map(BigRational::from)
            .collect();
        // Remainder of coeffs modulo the monic phi.
        let dn = phi.len() - 1;
        let mut rem = coeffs;
        for i in (dn..rem.len()).rev() {
            let c = rem[i].clone();
            if c.is_zero() {
                continue;
            }
            for (j, p) in phi.iter().enumerate() {
                let delta = &c * p;
                rem[i - dn + j] -= delta;
            }
        }
        rem.iter().all(Zero::is_zero)
    }

    pub fn equals(&self, rhs: &Self) -> bool {
        self.sub(rhs).is_zero()
    }

    /// Float approximation, for diagnostics and float cross-checks only.
    pub fn to_complex(&self) -> Complex<f64> {
        let mut acc = Complex::new(0.0, 0.0);
        for (q, c) in &self.terms {
            let theta = 2.0 * std::f64::consts::PI * q.to_f64().unwrap_or(0.0);
            acc += Complex::from_polar(c.to_f64().unwrap_or(0.0), theta);
        }
        acc
    }

    /// If the value is visibly rational (all phases 0), returns it.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.terms.is_empty() {
            return Some(BigRational::zero());
        }
        if self.terms.len() == 1 {
            let (q, c) = self.terms.iter().next().unwrap();
            if q.is_zero() {
                return Some(c.clone());
            }
        }
        None
    }
}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(q, c)| {
                if q.is_zero() {
                    format!("{c}")
                } else {
                    format!("{c}*e({q})")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn frac(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn phi_and_moebius_small_values() {
        assert_eq!(
            (1..=12).map(euler_phi).collect::<Vec<_>>(),
            vec![1, 1, 2, 2, 4, 2, 6, 4, 6, 4, 10, 4]
        );
        assert_eq!(
            (1..=12).map(moebius).collect::<Vec<_>>(),
            vec![1, -1, -1, 0, -1, 1, -1, 0, 0, 1, -1, 0]
        );
    }

    /// Direct-summation oracle for the Ramanujan sum.
    fn ramanujan_direct(k: u64, a: i64) -> f64 {
        (1..=k)
            .filter(|j| j.gcd(&k) == 1)
            .map(|j| {
                let theta = 2.0 * std::f64::consts::PI * (j as f64) * (a as f64) / (k as f64);
                theta.cos()
            })
            .sum()
    }

    #[test]
    fn ramanujan_matches_direct_summation() {
        assert_eq!(ramanujan_sum(1, 0), 1);
        assert_eq!(ramanujan_sum(1, 7), 1);
        assert_eq!(ramanujan_sum(3, 0), 2);
        assert_eq!(ramanujan_sum(3, 1), -1);
        assert_eq!(ramanujan_sum(4, 2), -2);
        for k in 1..=20u64 {
            for a in -5i64..=20 {
                let exact = ramanujan_sum(k, a) as f64;
                let direct = ramanujan_direct(k, a);
                assert!(
                    (exact - direct).abs() < 1e-9,
                    "c_{k}({a}): {exact} vs {direct}"
                );
            }
        }
    }

    #[test]
    fn cyclotomic_polynomials_small() {
        let as_i64 = |v: Vec<BigInt>| -> Vec<i64> {
            v.into_iter().map(|c| i64::try_from(c).unwrap()).collect()
        };
        assert_eq!(as_i64(cyclotomic_polynomial(1)), vec![-1, 1]);
        assert_eq!(as_i64(cyclotomic_polynomial(2)), vec![1, 1]);
        assert_eq!(as_i64(cyclotomic_polynomial(3)), vec![1, 1, 1]);
        assert_eq!(as_i64(cyclotomic_polynomial(4)), vec![1, 0, 1]);
        assert_eq!(as_i64(cyclotomic_polynomial(6)), vec![1, -1, 1]);
        assert_eq!(as_i64(cyclotomic_polynomial(12)), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn full_cyclic_sums_vanish() {
        for m in 2..=12i64 {
            let mut s = Cyclotomic::zero();
            for j in 0..m {
                s = s.add(&Cyclotomic::root_of_unity(&frac(j, m)));
            }
            assert!(s.is_zero(), "sum of all {m}-th roots should vanish");
        }
        // ... and a proper subset does not.
        let partial = Cyclotomic::root_of_unity(&frac(1, 5))
            .add(&Cyclotomic::root_of_unity(&frac(2, 5)));
        assert!(!partial.is_zero());
    }

    #[test]
    fn cyclotomic_products_reduce_phases() {
        let a = Cyclotomic::root_of_unity(&frac(2, 3));
        let b = Cyclotomic::root_of_unity(&frac(2, 3));
        let c = a.mul(&b);
        assert!(c.equals(&Cyclotomic::root_of_unity(&frac(1, 3))));
        assert!(a.mul(&a.conj()).equals(&Cyclotomic::one()));
    }
}
