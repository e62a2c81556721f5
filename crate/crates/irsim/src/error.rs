use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid value for `{field}`: {reason}")]
    Config { field: String, reason: String },

    #[error("{0} does not apply to this scenario")]
    NotApplicable(&'static str),

    #[error("regime mismatch: operation needs {expected}, scenario is {found}")]
    Regime {
        expected: &'static str,
        found: &'static str,
    },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("scenario has no single-IRS deployment for {0}")]
    MissingSingleIrs(&'static str),

    #[error("failed to read `{path}`: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn config(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            reason: reason.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
