use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the walk library and the command-line front end.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid graph G({n},{m}): {reason}")]
    InvalidGraph { n: usize, m: usize, reason: String },

    #[error("index {index} out of range for n = {n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("integration unstable at t = {t}: {quantity} = {value:e}; reduce dt (currently {dt})")]
    Unstable {
        t: f64,
        quantity: &'static str,
        value: f64,
        dt: f64,
    },

    #[error("gamma * n = {0} exceeds 1, first-order perturbation theory does not apply")]
    OutsidePerturbativeRegime(f64),

    #[error("mode ({k},{l}) has k + l = 0 (mod n) and carries no first-order correction")]
    ExcludedMode { k: usize, l: usize },

    #[error("{what} for n = {n} needs n^4 dense storage (limit n <= {limit}); use the matrix-free master_rhs path")]
    TooLarge {
        what: &'static str,
        n: usize,
        limit: usize,
    },

    #[error("distribution is not normalized (sum = {0})")]
    NotNormalized(f64),

    #[error("probability series is empty")]
    EmptySeries,

    #[error("{}:{line}: {msg}", path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
