//! Error type shared across the crate.

use thiserror::Error;

/// Errors produced by validation, parsing and the numeric pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("ambient dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },

    #[error("matrix shapes do not compose: {0}")]
    ShapeMismatch(String),

    #[error("evaluation point has a zero coordinate at index {index}")]
    ZeroCoordinate { index: usize },

    #[error("sublattice is not of full rank (rank {rank} in dimension {n})")]
    NotFullRank { rank: usize, n: usize },

    #[error("lattice is not primitive: invariant factor {factor} > 1")]
    NotPrimitive { factor: String },

    #[error("lattice has rank 0; a torsion coset needs a nontrivial direction lattice")]
    TrivialLattice,

    #[error("torsion point is not a character of the quotient group")]
    NotDualPoint,

    #[error("the dual group does not meet the torsion coset; the projector is undefined")]
    EmptyIntersection,

    #[error("volume of a dependent family is undefined (Gram determinant is zero)")]
    DependentColumns,

    #[error("boundary {level} has shape {found_rows}x{found_cols}, expected {rows}x{cols}{hint}")]
    BoundaryShape {
        level: usize,
        rows: usize,
        cols: usize,
        found_rows: usize,
        found_cols: usize,
        hint: String,
    },

    #[error("chain condition fails: (boundary {level})*(boundary {}) has a nonzero entry at ({row},{col})", level - 1)]
    ChainCondition { level: usize, row: usize, col: usize },

    #[error(
        "rank cross-check failed at level {level}: block ranks sum to {spectral} but the exact rank is {exact}; try a smaller --eps"
    )]
    RankCrosscheck {
        level: usize,
        exact: usize,
        spectral: usize,
    },

    #[error("SVD did not converge")]
    SvdFailed,

    #[error("operator norm bound violated: block norm {norm} exceeds {bound}")]
    NormBound { norm: f64, bound: f64 },

    #[error(
        "supplied cosets do not cover the torsion points of the singular set: kernel dimension {full} != covered dimension {covered}"
    )]
    CoverageMismatch { full: usize, covered: usize },

    #[error("dimension count violates the character count identity: |members| {members} != r|A|/|B| = {expected}")]
    AlphaDimension { members: usize, expected: String },

    #[error("family sampling exhausted after {attempts} attempts (girth/cap constraints too tight)")]
    SamplingExhausted { attempts: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("convergence regression: {0}")]
    ConvergenceRegression(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
