use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("numeric overflow: non-finite state at step {step}")]
    NumericOverflow { step: usize },

    #[error("{path}:{line}: {msg}")]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    #[error("stage `{stage}` failed on signal `{signal}`: {source}")]
    Stage {
        stage: &'static str,
        signal: String,
        #[source]
        source: Box<Error>,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub fn stage(stage: &'static str, signal: impl Into<String>, source: Error) -> Self {
        Error::Stage {
            stage,
            signal: signal.into(),
            source: Box::new(source),
        }
    }

    /// Process exit code: 2 for data errors, 3 for numeric errors.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NumericOverflow { .. } => 3,
            Error::Stage { source, .. } => source.exit_code(),
            _ => 2,
        }
    }
}
