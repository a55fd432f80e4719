use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = CliError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] supernyquist_core::Error),
    #[error("i/o failure on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid config: {0}")]
    InvalidConfig(String),
}

impl CliError {
    /// Stable identifier for the machine-readable error line.
    pub fn kind(&self) -> &'static str {
        use supernyquist_core::Error as E;
        match self {
            CliError::Io { .. } => "IoFailure",
            CliError::InvalidConfig(_) => "InvalidConfig",
            CliError::Core(e) => match e {
                E::NotCoprime(..) => "NotCoprime",
                E::TooFewLevels(_) => "TooFewLevels",
                E::InvalidPeriods(_) => "InvalidPeriods",
                E::InvalidParameter(_) => "InvalidParameter",
                E::UnsupportedScheme { .. } => "UnsupportedScheme",
                E::AsymmetricLagTable { .. } => "AsymmetricLagTable",
                E::NoMinimumFound => "NoMinimumFound",
                E::FrequencyOutOfRange(_) => "FrequencyOutOfRange",
                E::LengthMismatch { .. } => "LengthMismatch",
                E::NonPositiveInput(_) => "NonPositiveInput",
            },
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}
