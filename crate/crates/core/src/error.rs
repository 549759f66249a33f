use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("field degree n must be positive")]
    ZeroDegree,
    #[error("valuation of zero undefined")]
    ZeroValuation,
    #[error("not a zeta factor: constant term must be 1")]
    NotZetaFactor,
    #[error("entry {0} is not p-integral")]
    NotPIntegral(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("infinite length: module has free rank {0}")]
    InfiniteLength(usize),
    #[error("map does not respect relations: {0}")]
    NotWellDefined(String),
    #[error("invalid complex: {0}")]
    InvalidComplex(String),
    #[error("slope parameters ({s}, {r}) must be coprime with r > 0")]
    NotCoprime { s: i64, r: i64 },
    #[error("slope parameter s = {s} outside 0..={r}")]
    SlopeOutOfRange { s: i64, r: i64 },
    #[error("{0} requires q = p")]
    RequiresPrimeField(&'static str),
    #[error("not a Dieudonne gauge: {0}")]
    InvalidGauge(String),
    #[error("not realizable: {0}")]
    NotRealizable(String),
    #[error("singular intersection matrix")]
    SingularGram,
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
