use thiserror::Error;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("invalid --{field}: {message}")]
    Usage { field: &'static str, message: String },

    #[error(transparent)]
    Core(#[from] rap_core::Error),

    #[error("failed to write {path}: {source}")]
    Output {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl BenchError {
    pub(crate) fn usage(field: &'static str, message: impl Into<String>) -> Self {
        BenchError::Usage {
            field,
            message: message.into(),
        }
    }

    /// 2 for usage errors, 1 for runtime failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            BenchError::Usage { .. } => 2,
            BenchError::Core(rap_core::Error::InvalidParameter { .. }) => 2,
            BenchError::Core(rap_core::Error::UnsupportedRegime(_)) => 2,
            _ => 1,
        }
    }
}

pub type Result<T, E = BenchError> = std::result::Result<T, E>;
