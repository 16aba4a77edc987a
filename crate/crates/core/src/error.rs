use alloc::string::String;
use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq)]
#[non_exhaustive]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    Domain(String),
    /// A curve description is unusable (zero-length piece, bad radius, ...).
    InvalidCurve(String),
    /// Operation needs at least one codepoint.
    EmptyCodebook,
    /// Two codepoints closer than the coincidence tolerance.
    CoincidentPoints { first: usize, second: usize },
    /// Affine map with `|det A|` at or below the singularity threshold.
    SingularTransform { det: f64 },
    /// An asymptotic estimate was requested from too few usable entries.
    TooFewEntries { usable: usize, needed: usize },
    /// An oracle's internal self-check disagreed with itself.
    OracleInconsistent(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::InvalidCurve(msg) => write!(f, "invalid curve: {msg}"),
            Error::EmptyCodebook => f.write_str("codebook must contain at least one point"),
            Error::CoincidentPoints { first, second } => {
                write!(f, "codepoints {first} and {second} coincide")
            }
            Error::SingularTransform { det } => {
                write!(f, "affine map is singular (det = {det:e})")
            }
            Error::TooFewEntries { usable, needed } => {
                write!(f, "need at least {needed} usable entries, got {usable}")
            }
            Error::OracleInconsistent(msg) => write!(f, "oracle self-check failed: {msg}"),
        }
    }
}

impl core::error::Error for Error {}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
