use std::path::PathBuf;

use thiserror::Error;

/// Errors raised across the simulator.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument fell outside the domain of a function.
    #[error("domain error: {0}")]
    Domain(String),

    /// Invalid scenario, array or optimizer configuration.
    #[error("configuration error: {0}")]
    Config(String),

    /// An operation was requested in the wrong rotation mode.
    #[error("mode error: {0}")]
    Mode(String),

    #[error("degenerate channel: {0}")]
    DegenerateChannel(String),

    #[error("degenerate echo: {0}")]
    DegenerateEcho(String),

    /// Zero-forcing on a (numerically) rank-deficient channel matrix.
    #[error("singular configuration: condition number {condition:.3e} exceeds {limit:.1e}")]
    SingularConfiguration { condition: f64, limit: f64 },

    /// Exhaustive search would exceed the combination cap.
    #[error(
        "exhaustive search needs {combinations} combinations, cap is {cap}; \
         use coarse-to-fine alternating optimization instead"
    )]
    Capacity { combinations: f64, cap: u64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code used by the CLI.
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::Config(_) | Error::Json(_) | Error::Capacity { .. } => 2,
            Error::DegenerateChannel(_)
            | Error::DegenerateEcho(_)
            | Error::SingularConfiguration { .. } => 3,
            Error::Domain(_) | Error::Mode(_) | Error::Precondition(_) | Error::Io { .. } => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
