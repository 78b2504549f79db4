// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("site index {index} out of range for a system of {n_total} spins")]
    SiteIndex { index: usize, n_total: usize },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("invalid model: {0}")]
    Validation(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(
        "{what} did not converge after {iterations} iterations (best residual {best_residual:.3e})"
    )]
    Convergence {
        what: &'static str,
        iterations: usize,
        best_residual: f64,
    },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("scenario `{scenario}`: {source}")]
    Scenario {
        scenario: String,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn in_scenario(self, scenario: impl Into<String>) -> Self {
        match self {
            e @ Error::Scenario { .. } => e,
            e => Error::Scenario {
                scenario: scenario.into(),
                source: Box::new(e),
            },
        }
    }

    /// Process exit code: 2 config, 3 convergence/numerical, 4 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::SiteIndex { .. }
            | Error::DimensionMismatch { .. }
            | Error::Validation(_)
            | Error::Config(_) => 2,
            Error::Convergence { .. } | Error::Numerical(_) => 3,
            Error::Io { .. } => 4,
            Error::Scenario { source, .. } => source.exit_code(),
        }
    }
}
