use thiserror::Error;

/// Errors raised by every solver and by the instance/solution readers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CspError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(
        "instance too large: {candidates} candidates exceed the enumeration budget of {budget}"
    )]
    InstanceTooLarge { candidates: u128, budget: u64 },

    #[error("ratio is unbounded for sampling size r = {r} (needs r >= 3)")]
    UnboundedRatio { r: usize },

    #[error("given base solution has cost {given}, but the base optimum is {optimum}")]
    NotOptimal { given: u64, optimum: u64 },
}

pub type Result<T, E = CspError> = std::result::Result<T, E>;

pub(crate) fn invalid<T>(message: impl Into<String>) -> Result<T> {
    Err(CspError::InvalidArgument(message.into()))
}
