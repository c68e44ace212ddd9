use thiserror::Error;

/// Errors raised by the library.
///
/// `UniquenessViolation` and `LemmaViolation` are never expected in a correct
/// run: they report that a restoration or extraction step found a situation
/// the underlying uniqueness arguments rule out.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("field of order {p} is too small: need more than {needed} distinct points")]
    FieldTooSmall { p: u64, needed: u64 },

    #[error("tape contract violated: {0}")]
    ContractViolation(String),

    #[error("block {block}: expected exactly one restoring candidate, found {candidates}")]
    UniquenessViolation { block: usize, candidates: u64 },

    #[error("precondition violated: {0}")]
    PreconditionViolation(String),

    #[error("lemma violated: {0}")]
    LemmaViolation(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}
