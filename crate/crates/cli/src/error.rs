//! Process-level error classification and exit codes.
//!
//! * exit 0: success,
//! * exit 1: physics/convergence failure (structured JSON on stderr) or
//!   an I/O failure,
//! * exit 2: usage or configuration error.

use biexciton_core::CoreError;
use serde_json::json;
use std::fmt;

/// Anything that aborts a command.
#[derive(Debug)]
pub enum AppError {
    /// Bad configuration or usage; exit 2.
    Config(String),
    /// Physics or convergence failure from the library; exit 1.
    Physics(CoreError),
    /// Filesystem failure; exit 1.
    Io(String),
}

impl AppError {
    /// Shorthand for [`AppError::Config`].
    pub fn config(msg: impl Into<String>) -> Self {
        AppError::Config(msg.into())
    }

    /// Process exit code for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            AppError::Config(_) => 2,
            AppError::Physics(_) | AppError::Io(_) => 1,
        }
    }

    /// Print the error to stderr; physics failures are emitted as one
    /// line of structured JSON so callers can parse them.
    pub fn report(&self) {
        match self {
            AppError::Config(msg) => eprintln!("config error: {msg}"),
            AppError::Io(msg) => eprintln!("io error: {msg}"),
            AppError::Physics(err) => {
                let kind = match err {
                    CoreError::InvalidParameter { .. } => "invalid_parameter",
                    CoreError::NoRadiativeChannel => "no_radiative_channel",
                    CoreError::NoFluxInWindow => "no_flux_in_window",
                    CoreError::QuadratureNotConverged { .. } => "quadrature_not_converged",
                    CoreError::BiexcitonCharacterDiluted { .. } => "biexciton_character_diluted",
                    CoreError::EigenNotConverged { .. } => "eigen_not_converged",
                    CoreError::AllCellsFailed => "all_cells_failed",
                };
                let payload = json!({
                    "schema_version": 1,
                    "error": { "kind": kind, "message": err.to_string() },
                });
                eprintln!("{payload}");
            }
        }
    }
}

impl fmt::Display for AppError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AppError::Config(msg) => write!(f, "config error: {msg}"),
            AppError::Physics(err) => write!(f, "physics error: {err}"),
            AppError::Io(msg) => write!(f, "io error: {msg}"),
        }
    }
}

impl std::error::Error for AppError {}

impl From<CoreError> for AppError {
    fn from(err: CoreError) -> Self {
        AppError::Physics(err)
    }
}

impl From<std::io::Error> for AppError {
    fn from(err: std::io::Error) -> Self {
        AppError::Io(err.to_string())
    }
}
