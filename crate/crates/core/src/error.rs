use thiserror::Error;

/// Errors raised by the maps, charts and verification engine.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error in {op}: {detail}")]
    Domain { op: &'static str, detail: String },

    /// A direction or chart coordinate is undefined at this point.
    #[error("degenerate input to {op}: {detail}")]
    Degenerate { op: &'static str, detail: String },

    /// The point lies on one of the two collapsed slits.
    #[error("point {0} lies on a slit of the collapsed square")]
    OnSlit(String),

    /// An orbit left the domain of the map.
    #[error("orbit escaped the domain at step {step}: {reason}")]
    Escape { step: i64, reason: String },

    /// Malformed user input (points, ranges, map ids).
    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn domain(op: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            op,
            detail: detail.into(),
        }
    }

    pub(crate) fn degenerate(op: &'static str, detail: impl Into<String>) -> Self {
        Error::Degenerate {
            op,
            detail: detail.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
