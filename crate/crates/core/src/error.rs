use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("modulus {0} is not prime")]
    NotPrime(u64),

    #[error("modulus {0} exceeds the supported range (p < 2^31)")]
    ModulusTooLarge(u64),

    #[error("scalar `{0}` is not valid over {1}: {2}")]
    BadScalar(String, String, String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("field mismatch: {0}")]
    FieldMismatch(String),

    #[error("empty point set not allowed for {0}")]
    EmptySet(&'static str),

    #[error("invalid point: {0}")]
    InvalidPoint(String),

    #[error("invalid multiprojective space: {0}")]
    InvalidSpace(String),

    #[error("factor index {index} out of range for {factors} factors")]
    FactorIndex { index: usize, factors: usize },

    #[error("invalid projection target: {0}")]
    InvalidProjection(String),

    #[error("field too small for `{family}`: {reason}")]
    FieldTooSmall { family: &'static str, reason: String },

    #[error("construction `{family}` rejected: {reason}")]
    ConstructionRejected { family: &'static str, reason: String },

    #[error("set size {size} exceeds the cap {cap} for {what}")]
    SizeCapExceeded {
        what: &'static str,
        size: usize,
        cap: usize,
    },

    #[error("combinatorial budget exceeded: {required} instances required, budget {budget}")]
    BudgetExceeded { required: u128, budget: u64 },

    #[error("unsupported domain: {0}")]
    UnsupportedDomain(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("schema error: {0}")]
    Schema(String),
}

pub type Result<T> = std::result::Result<T, Error>;
