//! Error taxonomy shared by every module of the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Matrix or vector dimensions do not match what the operation expects.
    #[error("dimension mismatch in {context}: expected {expected}, got {got}")]
    DimensionMismatch {
        context: String,
        expected: String,
        got: String,
    },

    /// The candidate matrix fails the symplectic relations beyond tolerance.
    #[error("matrix is not symplectic: max relation violation {deviation:.3e} exceeds tol {tol:.3e}")]
    NotSymplectic { deviation: f64, tol: f64 },

    /// A basis matrix that must have orthonormal columns does not.
    #[error("basis columns are not orthonormal: max Gram deviation {deviation:.3e}")]
    NonOrthonormal { deviation: f64 },

    /// A volume factor or block that must be nonsingular collapsed to zero.
    #[error("singular {factor}: value {value:.3e} is numerically zero")]
    Singular { factor: String, value: f64 },

    /// The operator has no oscillatory directions (zero upper-right block),
    /// so no directional uncertainty statement applies.
    #[error("operator has no active directions (upper-right block vanishes)")]
    NoUncertainty,

    /// Input function is numerically zero where a normalized one is required.
    #[error("degenerate input: {context}")]
    DegenerateInput { context: String },

    /// Phase alignment of two functions that are numerically orthogonal.
    #[error("phase alignment undefined: inner product is numerically zero")]
    AlignmentUndefined,

    /// The requested fast path cannot represent this operator.
    #[error("unsupported mode: {reason}")]
    UnsupportedMode { reason: String },

    /// An evaluator produced a non-finite value during sampling.
    #[error("non-finite sample {value} at point {point:?}")]
    Sampling { point: Vec<f64>, value: String },

    /// Invalid grid geometry (too few points, bad step, budget exceeded).
    #[error("invalid grid: {reason}")]
    InvalidGrid { reason: String },

    /// A direction or axis index outside the valid range.
    #[error("index out of range: {what}")]
    IndexOutOfRange { what: String },

    /// A numerical solve was too ill-conditioned to trust.
    #[error("ill-conditioned {context}: reciprocal condition {rcond:.3e}")]
    IllConditioned { context: String, rcond: f64 },

    /// A scalar parameter lies outside its mathematical domain.
    #[error("parameter out of domain: {reason}")]
    Domain { reason: String },

    /// Structurally invalid data fed to a probe or decoder.
    #[error("invalid data: {reason}")]
    Data { reason: String },

    /// Malformed binary grid container.
    #[error("malformed grid container: {reason}")]
    Format { reason: String },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn dim(context: impl Into<String>, expected: impl Into<String>, got: impl Into<String>) -> Self {
        Error::DimensionMismatch {
            context: context.into(),
            expected: expected.into(),
            got: got.into(),
        }
    }
}
