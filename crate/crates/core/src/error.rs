use thiserror::Error;

/// Errors raised by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("cap exceeded: {what} needs {needed}, cap is {cap}")]
    CapExceeded {
        what: &'static str,
        needed: String,
        cap: String,
    },

    #[error("parse error at token `{token}`: {message}")]
    Parse { token: String, message: String },

    #[error("outside stable range: {0}")]
    OutOfRange(String),

    #[error("constraint violated: {0}")]
    Constraint(String),

    #[error("oracle mismatch: {0}")]
    OracleMismatch(String),

    #[error("io: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub(crate) fn parse(token: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            token: token.into(),
            message: message.into(),
        }
    }

    pub(crate) fn cap(what: &'static str, needed: impl ToString, cap: impl ToString) -> Self {
        Error::CapExceeded {
            what,
            needed: needed.to_string(),
            cap: cap.to_string(),
        }
    }

    /// Short machine-readable kind used by the CLI error line.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidParameter(_) => "invalid-parameter",
            Error::CapExceeded { .. } => "cap-exceeded",
            Error::Parse { .. } => "parse",
            Error::OutOfRange(_) => "out-of-range",
            Error::Constraint(_) => "constraint",
            Error::OracleMismatch(_) => "oracle-mismatch",
            Error::Io(_) => "io",
        }
    }

    /// Process exit status for this error: 2 invalid config, 3 cap exceeded, 4 oracle mismatch.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::CapExceeded { .. } => 3,
            Error::OracleMismatch(_) => 4,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
