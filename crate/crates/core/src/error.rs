use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("unsupported extension degree {0} (only 1 and 2 are implemented)")]
    UnsupportedDegree(u8),
    #[error("unsupported ramification index {0} (only 1 and 2 are implemented)")]
    UnsupportedRamification(u8),
    #[error("division by zero")]
    DivisionByZero,
    #[error("mismatched fields: {0}")]
    MismatchedField(String),
    #[error("insufficient precision: {0}")]
    InsufficientPrecision(String),
    #[error("not a unit: {0}")]
    NotAUnit(String),
    #[error("insufficient digits: {0}")]
    InsufficientDigits(String),
    #[error("empty precision window [{ord}, {prec})")]
    EmptyWindow { ord: i64, prec: i64 },
    #[error("exponent {exponent} lies outside the known window [{ord}, {prec})")]
    WindowMiss { exponent: i64, ord: i64, prec: i64 },
    #[error("pole bound violated: order {ord} below {bound}")]
    PoleBound { ord: i64, bound: i64 },
    #[error("induction of omega2^{0} is reducible")]
    ReducibleInduction(i64),
    #[error("inconsistent Borel profile: {0}")]
    InconsistentProfile(String),
    #[error("depth exhausted: need {needed}, have {available}")]
    DepthExhausted { needed: usize, available: usize },
    #[error("measure level exhausted")]
    LevelExhausted,
    #[error("level mismatch: {0}")]
    LevelMismatch(String),
    #[error("parameters outside the reduction table: {0}")]
    OutOfTableRange(String),
    #[error("valuation does not determine the branch: {0}")]
    UndeterminedValuation(String),
    #[error("not in the image of the correspondence: {0}")]
    NotInImage(String),
    #[error("out of range: {0}")]
    OutOfRange(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
