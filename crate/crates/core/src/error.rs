use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A lookup beyond the range covered by a table.
    #[error("{what} requires a table limit of at least {needed}, but the table only reaches {available}")]
    OutOfRange {
        what: String,
        needed: u64,
        available: u64,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Allocation of a table of the requested size failed or was refused.
    #[error("cannot allocate tables for limit {limit} ({bytes} bytes)")]
    Resource { limit: u64, bytes: u128 },

    /// A brute-force routine would exceed its work guard.
    #[error("brute-force cost {cost} exceeds the guard of {guard} work units")]
    GuardExceeded { cost: u128, guard: u128 },

    #[error("table cache: {0}")]
    Cache(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn out_of_range(what: impl Into<String>, needed: u64, available: u64) -> Self {
        Error::OutOfRange {
            what: what.into(),
            needed,
            available,
        }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    /// Short machine-readable tag, used by the CLI error objects.
    pub fn kind_tag(&self) -> &'static str {
        match self {
            Error::OutOfRange { .. } => "out_of_range",
            Error::InvalidArgument(_) => "invalid_argument",
            Error::Resource { .. } => "resource",
            Error::GuardExceeded { .. } => "guard_exceeded",
            Error::Cache(_) => "cache",
            Error::Io(_) => "io",
        }
    }
}
