use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors shared across the crate.  Exact operations fail loudly rather than
/// approximating; the bridge module reports its numeric preconditions here too.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("generators do not span a full-rank lattice (rank {rank} < {dim})")]
    RankDeficient { rank: usize, dim: usize },

    #[error("matrix is singular")]
    Singular,

    #[error("coset enumeration of size {index} exceeds cap {cap}")]
    IndexOverflow { index: u64, cap: u64 },

    #[error("{0} is not a sublattice of {1}")]
    NotSublattice(String, String),

    #[error("cannot combine elements whose prefactors differ by an irrational ratio (sqrt({0}) vs sqrt({1}))")]
    MixedNormFactor(String, String),

    #[error("division by zero scalar")]
    DivisionByZero,

    #[error("matrix is not symplectic")]
    NotSymplectic,

    #[error("matrix is not symmetric")]
    NotSymmetric,

    #[error("matrix has non-integer entries")]
    NotIntegral,

    #[error("membership test is not decidable for this subgroup family")]
    UndecidableMembership,

    #[error("matrix is not in the theta group (even-diagonal condition fails)")]
    NotInGamma12,

    #[error("standard indicator is not an eigenvector of this operator (internal invariant violated)")]
    DeltaNotEigen,

    #[error("truncation radius {radius} too small: tail bound {tail:e} exceeds tolerance {tol:e}")]
    RadiusTooSmall { radius: f64, tail: f64, tol: f64 },

    #[error("quadratic part is not positive definite")]
    NotPositiveDefinite,

    #[error("point does not lie in the Siegel half-space")]
    NotInSiegelDomain,

    #[error("automorphy factor is singular at this point")]
    SingularAutomorphyFactor,

    #[error("schema error at {path}: {msg}")]
    Schema { path: String, msg: String },

    #[error("{0}")]
    Usage(String),
}

impl Error {
    pub fn schema(path: impl Into<String>, msg: impl Into<String>) -> Self {
        Error::Schema { path: path.into(), msg: msg.into() }
    }
}
