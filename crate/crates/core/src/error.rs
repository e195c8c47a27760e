use thiserror::Error;

/// Errors shared by every layer of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("p must be prime, got {0}")]
    NotPrime(u64),
    #[error("singular matrix: {0}")]
    Singular(String),
    #[error("negative valuation: {0}")]
    NegativeValuation(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("class is not in the apartment")]
    NotInApartment,
    #[error("enumeration exceeded cap of {0} classes")]
    CapExceeded(usize),
    #[error("lattice is not an order: {0}")]
    NotAnOrder(String),
    #[error("order is not closed")]
    NotClosed,
    #[error("exponent matrix has a negative cycle")]
    NegativeCycle,
    #[error("frame search exhausted without finding a graduated term")]
    FrameSearchExhausted,
    #[error("internal consistency check failed: {0}")]
    Inconsistency(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{0}")]
    Domain(String),
}

pub type Result<T> = std::result::Result<T, Error>;
