use thiserror::Error;

/// Errors reported by the solver library.
#[derive(Debug, Error)]
pub enum Error {
    /// Two operands whose dimensions must agree do not.
    #[error("{context}: dimension mismatch ({left} vs {right})")]
    DimensionMismatch {
        context: &'static str,
        left: usize,
        right: usize,
    },

    /// A vector or matrix entry is NaN or infinite.
    #[error("{context}: entry {index} is not finite")]
    NonFinite { context: &'static str, index: usize },

    /// Vectors and matrices must have dimension at least one.
    #[error("{context}: dimension must be at least 1")]
    EmptyDimension { context: &'static str },

    /// An input matrix fails the symmetry check.
    #[error("matrix entry ({i},{j}) breaks symmetry: {upper} vs {lower}")]
    NotSymmetric {
        i: usize,
        j: usize,
        upper: f64,
        lower: f64,
    },

    /// Cholesky factorization hit a non-positive pivot.
    #[error("matrix is not positive-definite (pivot {pivot:.6e} at row {row})")]
    NotPositiveDefinite { row: usize, pivot: f64 },

    /// A claimed exact solution does not solve the system.
    #[error("claimed exact solution has relative residual {residual:.3e} (tolerance 1e-10)")]
    ExactSolutionMismatch { residual: f64 },

    /// The box scale must be strictly positive.
    #[error("box scale L must be positive, got {0}")]
    NonPositiveScale(f64),

    /// Exhaustive enumeration refuses oversized problems.
    #[error("exhaustive solve is limited to {limit} binary variables, problem has {actual}")]
    TooManyVariables { actual: usize, limit: usize },

    /// A configuration value is out of its documented range.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// A system description (e.g. a JSON file) is malformed or inconsistent.
    #[error("invalid system description: {0}")]
    InvalidSystem(String),
}

pub type Result<T> = std::result::Result<T, Error>;
