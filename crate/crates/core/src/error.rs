use thiserror::Error;

use crate::scalars::ScalarDomain;

pub type Result<T> = std::result::Result<T, MunnError>;

/// How a failure should be surfaced to callers that speak exit codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorClass {
    /// Malformed input or a schema violation.
    Input,
    /// A mathematical hypothesis of the requested construction is not met.
    Precondition,
    /// A bounded search gave up; retrying with a larger budget may succeed.
    Soft,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MunnError {
    #[error("domain mismatch: {left} vs {right}")]
    DomainMismatch {
        left: ScalarDomain,
        right: ScalarDomain,
    },
    #[error("shape mismatch: expected {expected:?}, found {found:?}")]
    ShapeMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("zero has no inverse")]
    ZeroInverse,
    #[error("matrix is singular")]
    Singular,
    #[error("malformed literal {literal:?}: {reason}")]
    Parse { literal: String, reason: String },
    #[error("invalid domain: {0}")]
    InvalidDomain(String),
    #[error("index ({i}, {s}) out of range for {m}x{n} elements")]
    IndexOutOfRange { i: usize, s: usize, m: usize, n: usize },
    #[error("invalid context: {0}")]
    InvalidContext(String),
    #[error("context mismatch: {0}")]
    ContextMismatch(String),
    #[error("rank of the sandwich matrix is {rank}, but {requirement}")]
    RankRequirement { rank: usize, requirement: String },
    #[error("characteristic {characteristic} is not supported: {reason}")]
    UnsupportedCharacteristic { characteristic: u64, reason: String },
    #[error("commutative scalar domain: {0}")]
    CommutativeDomain(String),
    #[error("noncommutative scalar domain: {0}")]
    NoncommutativeDomain(String),
    #[error("hypothesis not met: {0}")]
    HypothesisUnmet(String),
    #[error("no factorization found within a budget of {attempts} attempts")]
    BudgetExhausted { attempts: u64 },
    #[error("malformed witness: {0}")]
    MalformedWitness(String),
    #[error("term {term}, factor {factor}: claimed idempotent fails e*e = e")]
    IdempotencyFailure { term: usize, factor: usize },
    #[error("enumeration too large: {0}")]
    EnumerationTooLarge(String),
    #[error("functional does not vanish on zero-product pair {pair}")]
    NotVanishing { pair: usize },
    #[error("functional does not factor through the product")]
    NoFactorization,
    #[error("json: {0}")]
    Json(String),
}

impl MunnError {
    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            MunnError::DomainMismatch { .. } => "DOMAIN_MISMATCH",
            MunnError::ShapeMismatch { .. } => "SHAPE_MISMATCH",
            MunnError::ZeroInverse => "ZERO_INVERSE",
            MunnError::Singular => "SINGULAR",
            MunnError::Parse { .. } => "MALFORMED_LITERAL",
            MunnError::InvalidDomain(_) => "INVALID_DOMAIN",
            MunnError::IndexOutOfRange { .. } => "INDEX_OUT_OF_RANGE",
            MunnError::InvalidContext(_) => "INVALID_CONTEXT",
            MunnError::ContextMismatch(_) => "CONTEXT_MISMATCH",
            MunnError::RankRequirement { .. } => "RANK_UNSUPPORTED",
            MunnError::UnsupportedCharacteristic { characteristic: 2, .. } => "CHAR_2_UNSUPPORTED",
            MunnError::UnsupportedCharacteristic { characteristic: 3, .. } => "CHAR_3_UNSUPPORTED",
            MunnError::UnsupportedCharacteristic { .. } => "CHAR_UNSUPPORTED",
            MunnError::CommutativeDomain(_) => "COMMUTATIVE_DOMAIN",
            MunnError::NoncommutativeDomain(_) => "NONCOMMUTATIVE_DOMAIN",
            MunnError::HypothesisUnmet(_) => "HYPOTHESIS_UNMET",
            MunnError::BudgetExhausted { .. } => "BUDGET_EXHAUSTED",
            MunnError::MalformedWitness(_) => "MALFORMED_WITNESS",
            MunnError::IdempotencyFailure { .. } => "IDEMPOTENCY_FAILURE",
            MunnError::EnumerationTooLarge(_) => "ENUMERATION_TOO_LARGE",
            MunnError::NotVanishing { .. } => "NOT_VANISHING",
            MunnError::NoFactorization => "NO_FACTORIZATION",
            MunnError::Json(_) => "MALFORMED_JSON",
        }
    }

    pub fn class(&self) -> ErrorClass {
        match self {
            MunnError::RankRequirement { .. }
            | MunnError::UnsupportedCharacteristic { .. }
            | MunnError::CommutativeDomain(_)
            | MunnError::NoncommutativeDomain(_)
            | MunnError::HypothesisUnmet(_)
            | MunnError::Singular
            | MunnError::ZeroInverse
            | MunnError::EnumerationTooLarge(_)
            | MunnError::NotVanishing { .. }
            | MunnError::NoFactorization => ErrorClass::Precondition,
            MunnError::BudgetExhausted { .. } => ErrorClass::Soft,
            _ => ErrorClass::Input,
        }
    }
}
