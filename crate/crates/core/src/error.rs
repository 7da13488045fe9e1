use thiserror::Error;

/// Errors produced by the library. The CLI maps them onto exit codes via
/// [`Error::exit_code`].
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("composition mode `{mode}` is not available over {ambient}")]
    UnsupportedMode { mode: String, ambient: String },

    #[error("division by a non-invertible element {0}")]
    DivisionByZero(String),

    #[error("integer budget exceeded: {0}")]
    OverflowBudgetExceeded(String),

    #[error("ambient mismatch: {left} vs {right}")]
    AmbientMismatch { left: String, right: String },

    #[error("malformed input at line {line}, column {column}: {message}")]
    MalformedInput {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("element {element} is not canonical for {ambient}")]
    NonCanonicalElement { element: String, ambient: String },

    #[error("duplicate element {0}")]
    DuplicateElement(String),

    #[error("{what}: size {size} exceeds cap {cap}")]
    CapExceeded { what: String, size: u64, cap: u64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("verification failed: {0}")]
    VerificationFailed(String),

    #[error("precondition `{hypothesis}` failed: {witness}")]
    PreconditionFailed { hypothesis: String, witness: String },

    #[error("bad shift: {0}")]
    BadShift(String),

    #[error("bad subgroup order: {0}")]
    BadOrder(String),

    #[error("popular set has fewer than two elements")]
    EmptyCore,

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// 1 = verification failure, 2 = bad input, 3 = budget exceeded.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::VerificationFailed(_) | Error::PreconditionFailed { .. } => 1,
            Error::CapExceeded { .. } | Error::OverflowBudgetExceeded(_) => 3,
            _ => 2,
        }
    }

    pub(crate) fn overflow(what: impl Into<String>) -> Self {
        Error::OverflowBudgetExceeded(what.into())
    }

    pub(crate) fn invalid(what: impl Into<String>) -> Self {
        Error::InvalidParameter(what.into())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
