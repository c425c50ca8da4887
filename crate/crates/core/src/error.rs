//! Error types shared across the crate.

use thiserror::Error;

/// Errors raised while constructing or comparing glued volumes.
#[derive(Debug, Error)]
pub enum TilingError {
    #[error("degenerate tile: signed area {0:.3e} is numerically zero")]
    DegenerateTile(f64),
    #[error("side labels must use A, B, C exactly once")]
    BadLabels,
    #[error("matrix is not orthogonal within tolerance (deviation {0:.3e})")]
    NotOrthogonal(f64),
    #[error("word {0:?} is not a one-letter extension of an earlier word")]
    Word(String),
    #[error("copies {0} and {1} partially overlap (neither disjoint nor coincident)")]
    Overlap(usize, usize),
    #[error("tiles are not congruent as labeled triangles")]
    TileMismatch,
    #[error("point lies outside copy {copy} (worst barycentric coordinate {coord:.3e})")]
    OutOfCopy { copy: usize, coord: f64 },
    #[error("copy index {0} out of range ({1} copies)")]
    CopyIndex(usize, usize),
}

/// Errors from the combinatorial layer (graphs, permutation groups, matrices).
#[derive(Debug, Error)]
pub enum AlgebraError {
    #[error("input size {0} exceeds the guard limit {1}")]
    SizeGuard(usize, usize),
    #[error("generator {0} is not an involution")]
    NotInvolution(char),
    #[error("permutation degrees disagree: {0} vs {1}")]
    DegreeMismatch(usize, usize),
}

/// Errors from dense symmetric eigencomputations and transplantation algebra.
#[derive(Debug, Error)]
pub enum SpectralError {
    #[error("matrix is not symmetric (max asymmetry {0:.3e})")]
    NotSymmetric(f64),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("matrix size {0} exceeds the dense limit {1}")]
    SizeGuard(usize, usize),
    #[error("Gram matrix is rank deficient (reciprocal condition {0:.3e})")]
    RankDeficient(f64),
    #[error("shape mismatch: expected {expected}, got {got}")]
    ShapeMismatch { expected: String, got: String },
    #[error("Jacobi sweep limit reached ({0} sweeps, off-norm {1:.3e})")]
    NoConvergence(usize, f64),
}

/// Errors from enumeration and classification.
#[derive(Debug, Error)]
pub enum SearchError {
    #[error("n = {0} exceeds the enumeration guard {1}")]
    SizeGuard(usize, usize),
    #[error(transparent)]
    Tiling(#[from] TilingError),
}

/// Errors from meshing, assembly, and the discrete eigensolver.
#[derive(Debug, Error)]
pub enum FemError {
    #[error("refinement level {0} exceeds the guard {1}")]
    SizeGuard(usize, usize),
    #[error("eigensolver failed to converge after {iterations} iterations (residual {residual:.3e})")]
    ConvergenceFailure { iterations: usize, residual: f64 },
    #[error("vector form is discontinuous across an internal side (mismatch {0:.3e})")]
    ContinuityViolation(f64),
    #[error("shape mismatch: expected {expected}, got {got}")]
    ShapeMismatch { expected: String, got: String },
    #[error("requested {0} eigenpairs but only {1} free nodes")]
    TooManyEigenpairs(usize, usize),
    #[error(transparent)]
    Tiling(#[from] TilingError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}

/// Errors from reading or writing the file formats.
#[derive(Debug, Error)]
pub enum IoError {
    #[error("unsupported format_version {0} (expected {1})")]
    FormatVersion(u32, u32),
    #[error("invalid field: {0}")]
    Invalid(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Tiling(#[from] TilingError),
}
