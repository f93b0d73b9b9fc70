use thiserror::Error;

/// Errors raised across the toolkit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} is not an odd prime")]
    NotPrime(u64),
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("too many variables: {0} (at most {max})", max = crate::poly::MAX_VARS)]
    TooManyVariables(usize),
    #[error("exponent {0} out of range (must be < 128)")]
    ExponentOverflow(u32),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("generator is not homogeneous: {0}")]
    NotHomogeneous(String),
    #[error("scheme is not finite: projective dimension {dimension}")]
    NotFinite { dimension: i64 },
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("resolution is not minimal; minimize first")]
    NonMinimal,
    #[error("empty Betti table")]
    EmptyTable,
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("projection center meets the variety (intersection has projective dimension {dimension})")]
    CenterMeetsVariety { dimension: i64 },
    #[error("unsupported recipe: {0}")]
    UnsupportedRecipe(String),
    #[error("non-reduced recipe: {0}")]
    NonReducedRecipe(String),
    #[error("incomplete report: missing {0}")]
    IncompleteReport(String),
    #[error("could not find a general choice after {0} attempts")]
    GenericityExhausted(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
