use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("price series needs at least 2 rows, got {0}")]
    TooFewPrices(usize),
    #[error("non-positive price at row {row}")]
    NonPositivePrice { row: usize },
    #[error("timestamps not strictly increasing at row {row}")]
    NonMonotoneTimestamp { row: usize },
    #[error("missing column `{column}` required for price mode {mode}")]
    MissingColumn { column: &'static str, mode: String },
    #[error("cannot parse `{value}` as a number at row {row}")]
    Parse { row: usize, value: String },
    #[error("timestamps and prices differ in length ({timestamps} vs {prices})")]
    LengthMismatch { timestamps: usize, prices: usize },
    #[error("horizon exceeds series length (m = {m}, {len} prices)")]
    HorizonTooLong { m: usize, len: usize },
    #[error("series too short for (L = {word_length}, m = {stride})")]
    SeriesTooShort { word_length: usize, stride: usize },
    #[error("no observations")]
    NoObservations,
    #[error("insufficient range: {0}")]
    InsufficientRange(String),
    #[error("degrees of freedom exhausted (n - mL = {0})")]
    DegreesOfFreedom(i64),
    #[error("{name} = {value} is outside its domain ({expected})")]
    Domain {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },
    #[error("covariance not factorizable")]
    NotFactorizable,
    #[error("price would become non-positive at step {step}")]
    NonPositiveStep { step: usize },
    #[error("price overflows at step {step}")]
    PriceOverflow { step: usize },
    #[error("degenerate moment at scale {0}")]
    DegenerateMoment(usize),
    #[error("indicator family is inconsistent: {0}")]
    InconsistentFamily(String),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(name: &'static str, value: f64, expected: &'static str) -> Error {
    Error::Domain {
        name,
        value,
        expected,
    }
}
