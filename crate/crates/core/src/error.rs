use thiserror::Error;

/// Errors raised across the library.
///
/// The variants line up with the command-line exit codes, see [`Error::exit_code`].
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed user input: unparsable numbers, bad JSON, invalid ranges.
    #[error("input error: {0}")]
    Input(String),

    /// A value outside the domain an operation is defined on.
    #[error("domain error: {0}")]
    Domain(String),

    /// A structural invariant was violated (overlapping sets, empty set, ...).
    #[error("invariant violation: {0}")]
    Invariant(String),

    /// A grid or enumeration exceeds the configured cell or assignment cap.
    #[error("capacity error: {0}")]
    Capacity(String),

    /// An exhaustive scan would exceed its evaluation budget.
    #[error("budget exceeded: {0}")]
    Budget(String),

    /// A random sampler failed to produce enough qualifying configurations.
    #[error("sampler exhausted: {0}")]
    Exhausted(String),

    /// Two results that must agree do not (e.g. an empirical record below a proven bound).
    #[error("inconsistency: {0}")]
    Inconsistent(String),

    /// The optimizer hit its iteration cap before reaching the requested width.
    #[error("optimization did not converge: {0}")]
    Unconverged(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Input(_) | Error::Json(_) | Error::Io(_) => 2,
            Error::Domain(_) | Error::Invariant(_) | Error::Inconsistent(_) => 3,
            Error::Capacity(_) | Error::Budget(_) | Error::Exhausted(_) => 4,
            Error::Unconverged(_) => 5,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

macro_rules! domain {
    ($($arg:tt)*) => { $crate::error::Error::Domain(format!($($arg)*)) };
}
pub(crate) use domain;
