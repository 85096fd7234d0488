//! Exact and spectral torsion invariants of finite abelian covers.
//!
//! Given a finitely generated based free Z[Z^n]-chain complex and a
//! finite-index sublattice of Z^n, this crate computes the homology of the
//! quotient complex (ranks, torsion orders), the homology torsion, the
//! combinatorial Ray-Singer torsion via singular values of character
//! blocks, squared lattice volumes and regulators, and the torsion-coset
//! projector machinery used to certify sub-exponential regulator growth
//! across girth-growing families of sublattices.
//!
//! Everything that can be exact is exact: integer Smith/Hermite reductions,
//! rational character phases, Ramanujan-sum projectors. Floating point is
//! confined to singular value computations, and a rank cross-check against
//! the exact side turns silent float failures into loud errors.

// Most hot loops index several parallel arrays at once; iterator rewrites
// of those are noisier than the ranges.
#![allow(clippy::needless_range_loop)]

pub mod complex;
pub mod coset;
pub mod cyclotomic;
pub mod error;
pub mod groupring;
pub mod intmat;
pub mod io;
pub mod lattice;
pub mod laurent;
pub mod spectral;
pub mod sweep;

pub use error::{Error, Result};
