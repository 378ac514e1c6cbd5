use std::fmt;
use std::path::PathBuf;

/// A spec problem, located by the JSON path of the offending node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecError {
    pub path: String,
    pub message: String,
}

impl SpecError {
    pub fn at(path: &str, message: impl Into<String>) -> Self {
        Self { path: path.to_string(), message: message.into() }
    }
}

impl fmt::Display for SpecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

impl std::error::Error for SpecError {}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid spec: {0}")]
    Spec(#[from] SpecError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] curvpos_core::Error),
}

/// Process exit codes.
pub mod exit {
    /// Every requested certification is positive (or every suite check passed).
    pub const POSITIVE: i32 = 0;
    /// Some certification is not positive, or a suite check failed.
    pub const NOT_POSITIVE: i32 = 1;
    /// The only shortfall is a Griffiths search that did not converge.
    pub const INCONCLUSIVE: i32 = 2;
    /// Usage, parse, validation or runtime error.
    pub const USAGE: i32 = 3;
}
