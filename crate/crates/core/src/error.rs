use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("field context mismatch: p={left} vs p={right}")]
    ContextMismatch { left: u64, right: u64 },
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("p must be a prime greater than 3, got {0}")]
    BadFieldPrime(u64),
    #[error("q = p = {0} is ramified")]
    Ramified(u64),
    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: u64, max: u64 },
    #[error("element is not coprime to the ideal")]
    NotCoprime,
    #[error("item {0} is not coprime to the ideal")]
    NotCoprimeAt(usize),
    #[error("no degree-1 ideal above q={q} (residue degree {f})")]
    NoDegreeOneIdeal { q: u64, f: u32 },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("nothing to scan: (x^p {sign} y^p)/(x {sign} y) = 1")]
    NothingToScan { sign: char },
    #[error("p={0} is regular, no irregular pair")]
    NotIrregular(u64),
    #[error("precision cap of {0} bits reached without a certified result")]
    PrecisionExhausted(u32),
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
