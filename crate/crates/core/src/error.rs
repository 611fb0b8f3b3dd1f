use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed input: wrong arity, wrong ring, inhomogeneous where a form is required.
    #[error("structural error: {0}")]
    Structural(String),

    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    /// The input does not satisfy a hypothesis the computation relies on.
    /// `degree` names the first graded piece that witnessed the failure.
    #[error("hypothesis violation: {message}{}", .degree.map(|d| format!(" (window degree {d})")).unwrap_or_default())]
    Hypothesis {
        message: String,
        degree: Option<i64>,
    },

    /// Two independent computations disagree.
    #[error("internal consistency failure: {0}")]
    Inconsistent(String),

    #[error("parameter mismatch: {0}")]
    Mismatch(String),

    #[error("{0}")]
    Refused(String),
}

impl Error {
    pub fn structural(msg: impl Into<String>) -> Self {
        Error::Structural(msg.into())
    }

    pub fn hypothesis(msg: impl Into<String>, degree: Option<i64>) -> Self {
        Error::Hypothesis {
            message: msg.into(),
            degree,
        }
    }
}
