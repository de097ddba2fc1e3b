use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Some color id in `0..k` has no point, so no color-spanning object exists.
    #[error("color {0} has no point; no color-spanning object exists")]
    MissingColor(u32),

    #[error("empty input")]
    EmptyInput,

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("non-integer color at line {0}")]
    NonIntegerColor(usize),

    #[error("non-finite coordinate at line {0}")]
    NaNCoordinate(usize),

    #[error("epsilon must satisfy 0 < epsilon <= 1 (got {0})")]
    BadEpsilon(f64),

    #[error("orientation family memory cap exceeded: n * ceil(pi/epsilon) = {0} > {1}")]
    CapExceeded(u64, u64),

    #[error("operation requires a {expected}-dimensional dataset, got {actual}-dimensional")]
    DimensionMismatch { expected: u8, actual: u8 },

    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
