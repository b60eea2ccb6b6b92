use thiserror::Error;

use crate::ring::Generator;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("generator {0} is not part of the Poisson structure")]
    UnknownGenerator(Generator),
    #[error("conflicting bracket entries for ({0}, {1})")]
    InconsistentBracket(Generator, Generator),
    #[error("negative exponent on {0}")]
    InvalidExponent(Generator),
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },
    #[error("not invertible: {0}")]
    NotInvertible(String),
    #[error("site index {index} outside 0..={max}")]
    SiteOutOfRange { index: usize, max: usize },
    #[error("missing expansion coefficient at power {0}")]
    MissingCoefficient(i32),
    #[error("expansion coefficient at power {0} vanishes")]
    VanishingCoefficient(i32),
    #[error("unassigned generator {0}")]
    Unassigned(Generator),
    #[error("singular denominator: |{value:e}| below {threshold:e}")]
    Singularity { value: f64, threshold: f64 },
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
