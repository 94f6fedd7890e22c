use serde::Serialize;

use crate::spec::Diagnostic;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid run specification ({} problems)", .0.len())]
    Config(Vec<Diagnostic>),
    #[error(transparent)]
    Solver(#[from] cpd_core::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// Machine-readable form written on failure.
#[derive(Debug, Serialize)]
pub struct ErrorReport {
    pub kind: &'static str,
    pub message: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub diagnostics: Vec<Diagnostic>,
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Solver(_) => 3,
            CliError::Io(_) | CliError::Json(_) => 4,
        }
    }

    pub fn report(&self) -> ErrorReport {
        let kind = match self {
            CliError::Config(_) => "config",
            CliError::Solver(_) => "solver",
            CliError::Io(_) => "io",
            CliError::Json(_) => "json",
        };
        let diagnostics = match self {
            CliError::Config(d) => d.clone(),
            _ => Vec::new(),
        };
        ErrorReport { kind, message: self.to_string(), diagnostics }
    }
}

impl From<cpd_core::GeometryError> for CliError {
    fn from(e: cpd_core::GeometryError) -> Self {
        CliError::Solver(e.into())
    }
}
