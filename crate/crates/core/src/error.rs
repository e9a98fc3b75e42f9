use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid group descriptor `{0}`")]
    InvalidDescriptor(String),
    #[error("invalid group order {0}")]
    InvalidOrder(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("field size {q} exceeds the bound {bound}")]
    FieldTooLarge { q: u64, bound: u64 },
    #[error("element {index} does not belong to a group of order {order}")]
    ForeignElement { index: usize, order: usize },
    #[error("zero has no discrete logarithm")]
    ZeroLog,
    #[error("{value} is not a primitive element of GF({q})")]
    NotPrimitive { value: u64, q: u64 },
    #[error("{e} does not divide q - 1 = {q_minus_one}")]
    NotDivisor { e: u64, q_minus_one: u64 },
    #[error("no closed form for cyclotomic numbers of order {0}")]
    UnsupportedOrder(u64),
    #[error("no quadratic partition of the required form for q = {0}")]
    NoPartition(u64),
    #[error("class index {index} out of range for order {e}")]
    BadClassIndex { index: usize, e: usize },
    #[error("set is not an almost difference set")]
    NotAds,
    #[error("subset is not a subgroup")]
    NotSubgroup,
    #[error("gcd({a}, {v}) != 1")]
    NotCoprime { a: u64, v: u64 },
    #[error("w = {w} does not divide v = {v}")]
    NotDivisorOfV { w: u64, v: u64 },
    #[error("{0}")]
    InvalidArgument(String),
    #[error("precondition failed for {family}: {reason}")]
    Precondition { family: String, reason: String },
    #[error("verification failed for {family}: claimed {claimed}, found {found}")]
    Verification {
        family: String,
        claimed: String,
        found: String,
    },
    #[error("search budget exceeded: {needed} candidates > budget {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("period mismatch: {0} vs {1}")]
    PeriodMismatch(usize, usize),
    #[error("seed sequence does not have ideal autocorrelation")]
    NotIdeal,
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn precondition(family: &str, reason: impl Into<String>) -> Self {
        Error::Precondition {
            family: family.to_string(),
            reason: reason.into(),
        }
    }
}
