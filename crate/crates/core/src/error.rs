use thiserror::Error;

/// Errors raised by constructors, deciders and harnesses.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("ring axiom `{axiom}` fails at {witness:?}")]
    AxiomViolation { axiom: String, witness: Vec<usize> },

    #[error("{what}: size {size} exceeds cap {cap}")]
    SizeCapExceeded { what: String, size: usize, cap: usize },

    #[error("{what}: {needed} candidates exceed budget {budget}")]
    BudgetExceeded { what: String, needed: u128, budget: u128 },

    #[error("operation requires a nonempty subset")]
    EmptySubset,

    #[error("exponent must be positive")]
    NonpositiveExponent,

    #[error("duplicate exponent {0} in series literal")]
    DuplicateExponent(String),

    #[error("element {index} does not belong to a ring of order {order}")]
    ForeignElement { index: usize, order: usize },

    #[error("operands belong to different skew contexts")]
    MixedContexts,

    #[error("monoid element {0} does not belong to this monoid")]
    MixedMonoids(String),

    #[error("illegal monoid/order pairing: {0}")]
    IllegalPairing(String),

    #[error("not an endomorphism: {0}")]
    NotEndomorphism(String),

    #[error("invalid skew context: {0}")]
    InvalidContext(String),

    #[error("invariant violated: {0}")]
    InvariantViolation(String),

    #[error("spec error: {0}")]
    Spec(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Snake-case variant name, used in error records.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::AxiomViolation { .. } => "axiom_violation",
            Error::SizeCapExceeded { .. } => "size_cap_exceeded",
            Error::BudgetExceeded { .. } => "budget_exceeded",
            Error::EmptySubset => "empty_subset",
            Error::NonpositiveExponent => "nonpositive_exponent",
            Error::DuplicateExponent(_) => "duplicate_exponent",
            Error::ForeignElement { .. } => "foreign_element",
            Error::MixedContexts => "mixed_contexts",
            Error::MixedMonoids(_) => "mixed_monoids",
            Error::IllegalPairing(_) => "illegal_pairing",
            Error::NotEndomorphism(_) => "not_endomorphism",
            Error::InvalidContext(_) => "invalid_context",
            Error::InvariantViolation(_) => "invariant_violation",
            Error::Spec(_) => "spec",
        }
    }

    /// 3 for exhausted caps or budgets, 5 for a violated invariant, 2 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::SizeCapExceeded { .. } | Error::BudgetExceeded { .. } => 3,
            Error::InvariantViolation(_) => 5,
            _ => 2,
        }
    }
}
