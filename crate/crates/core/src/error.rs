use core::fmt;

/// Errors reported by the library.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Operand shapes do not agree.
    Dimension {
        op: &'static str,
        expected: usize,
        found: usize,
    },
    /// A mathematical precondition does not hold (zero vector, singular scalar, ...).
    Domain(&'static str),
    /// An operation was requested in a state that does not allow it.
    State(&'static str),
    /// An inner iteration failed to converge.
    Numerical(&'static str),
    /// Invalid problem or solver parameter.
    Parameter(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;

impl Error {
    pub(crate) fn dim(op: &'static str, expected: usize, found: usize) -> Self {
        Error::Dimension {
            op,
            expected,
            found,
        }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Dimension {
                op,
                expected,
                found,
            } => write!(
                f,
                "dimension mismatch in {op}: expected {expected}, found {found}"
            ),
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::State(msg) => write!(f, "invalid state: {msg}"),
            Error::Numerical(msg) => write!(f, "numerical failure: {msg}"),
            Error::Parameter(msg) => write!(f, "invalid parameter: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
