use alloc::string::String;

/// Errors produced by the curvature calculus.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("rank must be at least 1")]
    ZeroRank,
    #[error("base dimension must be at least 1")]
    ZeroBaseDim,
    #[error("multi-index lengths differ: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("multi-index entry {entry} is outside 1..={rank}")]
    IndexOutOfRange { entry: usize, rank: usize },
    #[error("multi-index entries are not weakly increasing")]
    NotWeaklyIncreasing,
    #[error("base dimensions differ: {left} vs {right}")]
    BaseDimMismatch { left: usize, right: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("symmetric power degree must be at least 1")]
    ZeroDegree,
    #[error("matrix is not Hermitian (defect {defect:e})")]
    NotHermitian { defect: f64 },
    #[error("matrix is not positive definite (smallest eigenvalue {min_eigenvalue:e})")]
    NotPositiveDefinite { min_eigenvalue: f64 },
    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps")]
    EigenNonConvergence { sweeps: usize },
    #[error("lower-right block D is singular (smallest singular value {sigma_min:e})")]
    SingularBlock { sigma_min: f64 },
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("homogeneous point has zero norm")]
    ZeroPoint,
    #[error("tensor contains non-finite entries")]
    NonFinite,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("unsupported model: {0}")]
    UnsupportedModel(String),
}

pub type Result<T> = core::result::Result<T, Error>;
