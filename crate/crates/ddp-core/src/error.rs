use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("zero denominator")]
    ZeroDenominator,

    /// Expression syntax error, with a byte offset into the source text.
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },

    /// CSV ingestion error, with a 1-based line number.
    #[error("csv error at line {line}: {message}")]
    Csv { line: usize, message: String },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("fraction {0} is not in lowest terms")]
    NotReduced(String),

    #[error("even root of a negative value")]
    EvenRootOfNegative,

    #[error("precision {0} is below the minimum of {min}", min = crate::decimal::MIN_PRECISION)]
    PrecisionTooLow(u32),

    #[error("unsupported descriptor: {0}")]
    UnsupportedDescriptor(String),

    #[error("point {0} is not in the sample table")]
    PointNotInTable(String),

    #[error("span point does not match the additive basis")]
    BasisMismatch,

    #[error("delta {delta} missing from profile \"{profile}\"")]
    MissingDelta { delta: String, profile: String },

    #[error("tolerance unreachable; smallest certified bound is {smallest}")]
    ToleranceUnreachable { smallest: String },

    #[error("empty table")]
    EmptyTable,

    #[error("insufficient points for a fit: need {need}, have {have}")]
    InsufficientPoints { need: usize, have: usize },

    #[error("cross-check mismatch: {0}")]
    CrossCheck(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("invalid profile: {0}")]
    InvalidProfile(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
