use thiserror::Error;

/// Errors surfaced by every module of the toolkit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("{stage}: search budget of {limit} nodes exhausted")]
    BudgetExhausted { stage: String, limit: u64 },

    #[error("{stage}: {message}")]
    Stage { stage: String, message: String },

    #[error("invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: msg.into(),
        }
    }

    /// Wraps an error with the name of the pipeline stage that produced it.
    pub(crate) fn in_stage(self, stage: &str) -> Self {
        match self {
            Error::BudgetExhausted { limit, stage: inner } => Error::BudgetExhausted {
                stage: format!("{stage}/{inner}"),
                limit,
            },
            other => Error::Stage {
                stage: stage.to_string(),
                message: other.to_string(),
            },
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
