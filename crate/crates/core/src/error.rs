use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("hex string for {bits} bits must have {expected} digits, found {found}")]
    HexLength {
        expected: usize,
        found: usize,
        bits: usize,
    },
    #[error("invalid hex digit {found:?} at position {position}")]
    InvalidHexDigit { position: usize, found: char },
    #[error("invalid binary digit {found:?} at position {position}")]
    InvalidBinaryDigit { position: usize, found: char },
    #[error("padding bits above a {bits}-bit value must be zero")]
    NonZeroPadding { bits: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("{what} has length {found}, expected {expected}")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("{name} = {value} is outside {range}")]
    InvalidRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("field order {0} exceeds the supported maximum")]
    FieldTooLarge(u64),

    #[error("floating-point convolution residual {residual} exceeds tolerance")]
    PrecisionLoss { residual: f64 },

    #[error(
        "{m} sets requested but a design over GF({t}) supports at most t^t distinct polynomials"
    )]
    TooManySets { m: usize, t: u64 },
    #[error("no output length m >= 1 satisfies the extractor constraints")]
    NoFeasibleOutput,

    #[error("implementation label {0:?} is already registered")]
    DuplicateLabel(String),
    #[error("no implementation registered under {0:?}")]
    UnknownLabel(String),
    #[error("adapter configuration: {0}")]
    AdapterConfig(String),
    #[error("probe of {label:?} failed: {reason}")]
    ProbeFailed { label: String, reason: String },
    #[error("exhaustive validation needs {bits} input+seed bits, cap is {cap}")]
    ExhaustiveTooLarge { bits: usize, cap: usize },
    #[error("sample size must be at least 1")]
    InvalidSampleSize,
    #[error("report contains no failed cases")]
    NoFailures,

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: {message}")]
    LengthInconsistency { line: usize, message: String },
    #[error("COUNT {count} has no OUTPUT")]
    MissingOutputs { count: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
