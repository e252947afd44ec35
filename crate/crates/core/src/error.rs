/// Failures reported by the library. Variants map onto CLI exit codes.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("invalid input: {0}")]
    Validation(String),
    /// An enumeration or size budget was exceeded.
    #[error("budget exceeded: {0}")]
    Resource(String),
    #[error("not invertible: {0}")]
    NotInvertible(String),
    #[error("structural violation: {0}")]
    StructuralViolation(String),
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("degenerate lift: det(T T') = 0")]
    DegenerateLift,
    #[error("not invariant: {0}")]
    NotInvariant(String),
    #[error("unsupported factorization: {0}")]
    UnsupportedFactorization(String),
    /// A step outside the constructive coverage of the pipeline.
    #[error("unsupported in {step}: {reason}")]
    Unsupported { step: String, reason: String },
    #[error("gluing mismatch: {0}")]
    GluingMismatch(String),
    #[error("weight mismatch: {0}")]
    WeightMismatch(String),
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
