//! Free Z[Z^n]-chain complexes, their finite quotient complexes as integer
//! matrices, homology (ranks, torsion orders) via Smith normal form, and
//! the exact squared volumes behind regulators.
//!
//! A boundary `d_k` is a `b_k x b_{k-1}` Laurent matrix acting on row
//! vectors by right multiplication; the chain condition is
//! `d_{k+1} * d_k = 0` as a matrix product. Cycles are therefore left
//! kernels, and the image of `d_{k+1}` is its row span.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::intmat::IntMat;
use crate::lattice::{FiniteAbelianGroup, Sublattice};
use crate::laurent::{laplacian, LaurentMatrix};

/// A finitely generated based free Z[Z^n]-complex
/// `0 -> E_m -> ... -> E_1 -> E_0 -> 0` with `rank E_k = ranks[k]`.
#[derive(Clone, Debug)]
pub struct FreeComplex {
    n: usize,
    ranks: Vec<usize>,
    boundaries: Vec<LaurentMatrix>,
}

impl FreeComplex {
    /// Builds the complex, checking shapes only; `validate` checks the
    /// chain condition.
    pub fn new(n: usize, ranks: Vec<usize>, boundaries: Vec<LaurentMatrix>) -> Result<Self> {
        assert!(!ranks.is_empty(), "a complex needs at least one level");
        if boundaries.len() + 1 != ranks.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} levels need {} boundaries, found {}",
                ranks.len(),
                ranks.len() - 1,
                boundaries.len()
            )));
        }
        for (i, b) in boundaries.iter().enumerate() {
            let k = i + 1;
            if b.dim() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: b.dim(),
                });
            }
            if b.rows() != ranks[k] || b.cols() != ranks[k - 1] {
                let transposed_fits = b.rows() == ranks[k - 1] && b.cols() == ranks[k];
                let hint = if transposed_fits {
                    " (the matrix fits transposed: boundaries act by right multiplication, \
                     d_k must be b_k x b_{k-1})"
                } else {
                    ""
                };
                return Err(Error::BoundaryShape {
                    level: k,
                    rows: ranks[k],
                    cols: ranks[k - 1],
                    found_rows: b.rows(),
                    found_cols: b.cols(),
                    hint: hint.to_string(),
                });
            }
        }
        Ok(FreeComplex {
            n,
            ranks,
            boundaries,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    /// Index of the top level `m`.
    pub fn top_level(&self) -> usize {
        self.ranks.len() - 1
    }

    /// `d_k` for `1 <= k <= m`.
    pub fn boundary(&self, k: usize) -> Option<&LaurentMatrix> {
        if k == 0 || k > self.top_level() {
            None
        } else {
            Some(&self.boundaries[k - 1])
        }
    }

    /// `d_k`, with empty matrices of the right shape at the chain ends:
    /// `d_0 : E_0 -> 0` is `b_0 x 0` and `d_{m+1} : 0 -> E_m` is `0 x b_m`.
    pub fn boundary_or_empty(&self, k: usize) -> LaurentMatrix {
        if let Some(b) = self.boundary(k) {
            return b.clone();
        }
        if k == 0 {
            LaurentMatrix::zero(self.n, self.ranks[0], 0)
        } else if k == self.top_level() + 1 {
            LaurentMatrix::zero(self.n, 0, self.ranks[self.top_level()])
        } else {
            LaurentMatrix::zero(self.n, 0, 0)
        }
    }

    /// Verifies `d_{k+1} * d_k = 0` exactly for every consecutive pair,
    /// reporting the first offending entry.
    pub fn validate(&self) -> Result<()> {
        for k in 1..self.top_level() {
            let prod = self.boundaries[k].matmul(&self.boundaries[k - 1]);
            for i in 0..prod.rows() {
                for j in 0..prod.cols() {
                    if !prod.get(i, j).is_zero() {
                        return Err(Error::ChainCondition {
                            level: k + 1,
                            row: i,
                            col: j,
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// The Laplacian `d_k d_k^* + d_{k+1}^* d_{k+1}` at level `k`.
    pub fn laplacian_at(&self, k: usize) -> Result<LaurentMatrix> {
        assert!(k <= self.top_level(), "level out of range");
        laplacian(&self.boundary_or_empty(k), &self.boundary_or_empty(k + 1))
    }
}

/// Ranks and torsion of one homology level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologySummary {
    pub free_rank: usize,
    pub torsion_order: BigInt,
    /// Invariant factors greater than 1.
    pub invariant_factors: Vec<BigInt>,
}

/// An exact squared lattice volume.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VolumeSq(pub BigRational);

impl VolumeSq {
    pub fn one() -> Self {
        VolumeSq(BigRational::one())
    }

    pub fn value(&self) -> &BigRational {
        &self.0
    }
}

/// Columns form a basis of the cycle lattice `{x : x * m = 0}` of a
/// boundary acting by right multiplication.
pub fn cycle_lattice(m: &IntMat) -> IntMat {
    m.left_kernel()
}

/// Columns form a basis of the saturated boundary lattice: the primitive
/// lattice spanned rationally by the rows of `m`.
pub fn boundary_saturation(m: &IntMat) -> IntMat {
    m.saturate_rowspace()
}

/// Squared volume of the lattice spanned by the columns: the Gram
/// determinant. Errors if the columns are dependent; the empty basis has
/// squared volume 1.
pub fn volume_sq(basis: &IntMat) -> Result<VolumeSq> {
    let det = basis.gram_det();
    if det.is_zero() {
        return Err(Error::DependentColumns);
    }
    Ok(VolumeSq(BigRational::from(det)))
}

/// The quotient complex `C_Gamma`: integer boundary matrices on the basis
/// indexed by (generator, group element) pairs, group elements in
/// canonical Smith-coordinate order.
#[derive(Clone, Debug)]
pub struct QuotientComplex {
    group: FiniteAbelianGroup,
    ranks: Vec<usize>,
    boundaries: Vec<IntMat>,
}

/// Reduces one Laurent matrix modulo the lattice: the term `(v, c)` of
/// entry `(i, j)` contributes `c` to the integer entry
/// `((i, a), (j, a + class(v)))` for every group element `a`.
pub fn build_quotient_matrix(m: &LaurentMatrix, group: &FiniteAbelianGroup) -> IntMat {
    let order = group.order_usize();
    let elements = group.elements();
    let mut out = IntMat::zero(m.rows() * order, m.cols() * order);
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            for (v, c) in m.get(i, j).terms() {
                let shift: Vec<BigInt> = v.iter().map(|&e| BigInt::from(e)).collect();
                let class = group.class_of(&shift);
                for (ai, a) in elements.iter().enumerate() {
                    let b = group.add(a, &class);
                    let bi = group.index_of(&b);
                    out.add_assign_at(i * order + ai, j * order + bi, c);
                }
            }
        }
    }
    out
}

impl QuotientComplex {
    /// Builds `C_Gamma` for a full-rank sublattice. The input complex is
    /// assumed validated.
    pub fn build(complex: &FreeComplex, gamma: &Sublattice) -> Result<Self> {
        if gamma.dim() != complex.dim() {
            return Err(Error::DimensionMismatch {
                expected: complex.dim(),
                found: gamma.dim(),
            });
        }
        let group = gamma.smith_quotient()?;
        let order = group.order_usize();
        let ranks: Vec<usize> = complex.ranks().iter().map(|b| b * order).collect();
        let boundaries: Vec<IntMat> = (1..=complex.top_level())
            .map(|k| build_quotient_matrix(complex.boundary(k).unwrap(), &group))
            .collect();
        Ok(QuotientComplex {
            group,
            ranks,
            boundaries,
        })
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    /// `|Z^n : Gamma|`.
    pub fn index(&self) -> &BigInt {
        self.group.order()
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn top_level(&self) -> usize {
        self.ranks.len() - 1
    }

    pub fn boundary(&self, k: usize) -> Option<&IntMat> {
        if k == 0 || k > self.top_level() {
            None
        } else {
            Some(&self.boundaries[k - 1])
        }
    }

    /// Homology at level `k`: kernel of `d_k` modulo the row span of
    /// `d_{k+1}`, all exact via echelon transforms and Smith normal form.
    pub fn homology(&self, k: usize) -> HomologySummary {
        assert!(k <= self.top_level(), "level out of range");
        let rk = self.ranks[k];

        // Express the image rows in integer coordinates on the cycle
        // lattice Z_k; homology is the cokernel of that coordinate matrix.
        let (nullity, image_in_kernel_coords): (usize, Option<IntMat>) = match self.boundary(k) {
            None => (rk, self.boundary(k + 1).cloned()),
            Some(dk) => {
                let ech = dk.row_echelon(true);
                let nullity = rk - ech.rank;
                let img = self.boundary(k + 1).map(|dnext| {
                    let einv = ech.einv.as_ref().expect("tracked");
                    let coords = dnext.matmul(einv);
                    // Rows of d_{k+1} are cycles, so the coordinates on the
                    // non-kernel block must vanish exactly.
                    debug_assert!((0..coords.rows())
                        .all(|i| (0..ech.rank).all(|j| coords.get(i, j).is_zero())));
                    let kernel_cols: Vec<usize> = (ech.rank..rk).collect();
                    coords.select_cols(&kernel_cols)
                });
                (nullity, img)
            }
        };

        match image_in_kernel_coords {
            None => HomologySummary {
                free_rank: nullity,
                torsion_order: BigInt::one(),
                invariant_factors: Vec::new(),
            },
            Some(c) => {
                let smith = c.smith(false);
                let torsion: Vec<BigInt> = smith
                    .invariant_factors()
                    .into_iter()
                    .filter(|d| !d.is_one())
                    .collect();
                HomologySummary {
                    free_rank: nullity - smith.rank,
                    torsion_order: torsion.iter().product(),
                    invariant_factors: torsion,
                }
            }
        }
    }

    /// Exact homology torsion `tau^H = (prod_k |Tor H_k|^{(-1)^k})^{-1}`.
    pub fn homology_torsion(&self) -> BigRational {
        let mut out = BigRational::one();
        for k in 0..=self.top_level() {
            let t = BigRational::from(self.homology(k).torsion_order);
            // inverse alternating product
            if k % 2 == 0 {
                out /= t;
            } else {
                out *= t;
            }
        }
        out
    }

    /// Squared regulator `R_k^2 = vol^2(Z_k) / vol^2(Bbar_k)`.
    ///
    /// Cycle and saturated-boundary lattices are primitive, so their
    /// squared volumes may be computed through orthogonal complements.
    pub fn regulator_sq(&self, k: usize) -> BigRational {
        assert!(k <= self.top_level(), "level out of range");
        let vol_cycles = match self.boundary(k) {
            None => BigInt::one(),
            Some(dk) => dk.left_kernel().primitive_volume_sq(),
        };
        let vol_boundaries = match self.boundary(k + 1) {
            None => BigInt::one(),
            Some(dnext) => dnext.saturate_rowspace().primitive_volume_sq(),
        };
        BigRational::new(vol_cycles, vol_boundaries)
    }

    /// Integer Laplacian `D_k = d_k d_k^T + d_{k+1}^T d_{k+1}` on the
    /// quotient basis (the adjoint of a quotient matrix is its transpose).
    pub fn laplacian_int(&self, k: usize) -> IntMat {
        assert!(k <= self.top_level(), "level out of range");
        let rk = self.ranks[k];
        let mut d = IntMat::zero(rk, rk);
        if let Some(dk) = self.boundary(k) {
            d = dk.matmul(&dk.transpose());
        }
        if let Some(dnext) = self.boundary(k + 1) {
            let up = dnext.transpose().matmul(dnext);
            d = IntMat::from_fn(rk, rk, |i, j| d.get(i, j) + up.get(i, j));
        }
        d
    }

    /// Squared volume of the integral kernel of the Laplacian at level `k`.
    pub fn laplacian_kernel_volume_sq(&self, k: usize) -> BigRational {
        let d = self.laplacian_int(k);
        BigRational::from(d.left_kernel().primitive_volume_sq())
    }
}
