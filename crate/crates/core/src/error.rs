use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("index {requested} beyond expansion length {len}")]
    BeyondLength { requested: usize, len: usize },

    #[error("N = {n} is outside [0, q_K) for q_K = {bound}")]
    OutOfRange { n: u64, bound: String },

    #[error("invalid Ostrowski digits: {0}")]
    InvalidDigits(String),

    #[error("zero factor at n = {n}")]
    ZeroFactor { n: u64 },

    #[error("pole at n = {n}: argument within guard distance of an integer")]
    Pole { n: u64 },

    #[error("value does not fit in 64 bits: {0}")]
    Overflow(String),

    #[error("enumeration of {requested} items exceeds the cap of {cap}")]
    EnumerationCap { requested: String, cap: u64 },

    #[error("empty sample: {0}")]
    EmptySample(String),

    #[error("quadrature did not converge: {0}")]
    Quadrature(String),
}
