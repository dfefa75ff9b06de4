use thiserror::Error;

/// Errors raised by the estimation pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("sample set is empty")]
    EmptySamples,

    #[error("abscissas ({abscissas}) and values ({values}) differ in length")]
    LengthMismatch { abscissas: usize, values: usize },

    #[error("non-finite {field} at index {index}")]
    NonFinite { field: &'static str, index: usize },

    #[error(
        "trend of degree {degree} needs at least {} distinct abscissas, found {distinct}",
        degree + 1
    )]
    RankDeficient { degree: usize, distinct: usize },

    #[error("singular Gram system for {basis}")]
    Singular { basis: String },

    #[error("abscissas have zero spread (sigma_n = 0)")]
    DegenerateAbscissas,

    #[error("coefficient vector has length {got}, basis expects {expected}")]
    BasisMismatch { expected: usize, got: usize },

    #[error("evaluation point {x} coincides with a sample abscissa")]
    OnSampleAbscissa { x: f64 },

    #[error("invalid {what}: {reason}")]
    InvalidInput { what: &'static str, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
