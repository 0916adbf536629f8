use alloc::string::String;
use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Two objects that must live on the same cube do not.
    DimensionMismatch { expected: usize, found: usize },
    /// A size or range guard was exceeded (the computation would be too
    /// large, or the parameter is outside the supported range).
    Guard {
        what: &'static str,
        value: u64,
        limit: u64,
    },
    /// The input is mathematically outside the domain of the operation.
    Domain(String),
    /// A numerical procedure did not certify its result.
    Numeric(String),
    /// A linear program has no finite optimum.
    Unbounded,
}

impl Error {
    pub(crate) fn guard(what: &'static str, value: impl TryInto<u64>, limit: impl TryInto<u64>) -> Self {
        Error::Guard {
            what,
            value: value.try_into().unwrap_or(u64::MAX),
            limit: limit.try_into().unwrap_or(u64::MAX),
        }
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected N = {expected}, found N = {found}")
            }
            Error::Guard { what, value, limit } => {
                write!(f, "{what} = {value} exceeds the supported limit {limit}")
            }
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::Numeric(msg) => write!(f, "numerical error: {msg}"),
            Error::Unbounded => f.write_str("linear program is unbounded"),
        }
    }
}

impl core::error::Error for Error {}
