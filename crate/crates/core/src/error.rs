use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the estimators, workloads and analysis routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("failed to read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("metric is undefined: {0}")]
    UndefinedMetric(&'static str),

    #[error("unsupported skew regime alpha = {0}: selection rules exist only for 0 < alpha <= 1")]
    UnsupportedRegime(f64),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
