use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("modulus must be positive")]
    ZeroModulus,
    #[error("modulus {q} exceeds the table cap {cap}")]
    ModulusTooLarge { q: u64, cap: u64 },
    #[error("{a} is not coprime to {q}")]
    NotCoprime { a: u64, q: u64 },
    #[error("label {label} does not belong to modulus {q}")]
    BadLabel { label: u64, q: u64 },
    #[error("interval ({lo}, {hi}] outside the sieve range [0, {cap}]")]
    RangeTooLarge { lo: i128, hi: i128, cap: u64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("value {value} outside the range of the profile")]
    OutOfRange { value: f64 },
    #[error("character mod {q} with label {label} is not primitive (conductor {conductor})")]
    Imprimitive { q: u64, label: u64, conductor: u64 },
    #[error("height {t} exceeds the completeness bound {t_max}")]
    BeyondHeight { t: f64, t_max: f64 },
    #[error("zero search failed: {0}")]
    ZeroSearch(String),
    #[error("{path}:{line}: {msg}")]
    Parse { path: PathBuf, line: usize, msg: String },
    #[error("{0}")]
    Format(String),
    #[error("event count {events} above the memory budget {budget}")]
    TooManyEvents { events: usize, budget: usize },
    #[error("missing zero data for {0}")]
    MissingZeros(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
