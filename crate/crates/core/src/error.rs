use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid field parameters: {0}")]
    InvalidField(String),

    #[error("operands belong to different fields: GF({left}) vs GF({right})")]
    MixedFields { left: u64, right: u64 },

    #[error("division by zero")]
    DivisionByZero,

    #[error("zero has no inverse")]
    ZeroInverse,

    #[error("polynomial is not monic")]
    NotMonic,

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error: {0}")]
    Parse(String),

    /// An enumeration or table would exceed its configured size bound.
    #[error("{what}: size {size} exceeds limit {limit}")]
    Guard {
        what: &'static str,
        size: u128,
        limit: u128,
    },
}

impl Error {
    pub(crate) fn guard(what: &'static str, size: u128, limit: u128) -> Self {
        Error::Guard { what, size, limit }
    }

    pub fn is_guard(&self) -> bool {
        matches!(self, Error::Guard { .. })
    }
}
