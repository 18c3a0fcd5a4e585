use std::path::PathBuf;

use crate::params::Violation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid model parameters: {}", join_violations(.0))]
    InvalidParams(Vec<Violation>),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("unsupported parameter regime: {0}")]
    Unsupported(String),

    #[error("cannot sample from an empty clique registry")]
    EmptyRegistry,

    #[error("cannot draw a {k}-subset from {n} vertices")]
    SubsetTooLarge { k: usize, n: usize },

    #[error("illegal graph state: {0}")]
    IllegalState(String),

    #[error("invariant violated after step {step}: {detail}")]
    Invariant { step: u64, detail: String },

    #[error("insufficient support: {found} positive points in [{k_min}, {k_max}], need at least {needed}")]
    InsufficientSupport {
        k_min: u64,
        k_max: u64,
        found: usize,
        needed: usize,
    },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("malformed input {path}: {detail}")]
    Parse { path: PathBuf, detail: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Stable machine-readable tag, used by the CLI error JSON.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidParams(_) => "invalid_params",
            Error::Domain(_) => "domain",
            Error::Unsupported(_) => "unsupported",
            Error::EmptyRegistry => "empty_registry",
            Error::SubsetTooLarge { .. } => "subset_too_large",
            Error::IllegalState(_) => "illegal_state",
            Error::Invariant { .. } => "invariant",
            Error::InsufficientSupport { .. } => "insufficient_support",
            Error::Config(_) => "config",
            Error::Parse { .. } => "parse",
            Error::Io { .. } => "io",
            Error::Json(_) => "json",
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

fn join_violations(v: &[Violation]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}
