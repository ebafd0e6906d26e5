use std::path::PathBuf;

use oneill_core::GeomError;
use thiserror::Error;

/// Failures of the lab. Configuration problems map to exit code 2, run
/// failures to 1.
#[derive(Debug, Error)]
pub enum LabError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },

    #[error("unknown {kind} `{name}`")]
    UnknownName { kind: &'static str, name: String },

    #[error("schema violation in `{field}`: {message}")]
    SchemaViolation { field: String, message: String },

    #[error("cannot read or write `{path}`: {message}")]
    Io { path: PathBuf, message: String },

    #[error("every sampled point of `{scenario}` failed; first error: {first}")]
    AllPointsFailed { scenario: String, first: String },

    #[error(transparent)]
    Geom(#[from] GeomError),
}

impl LabError {
    pub fn schema(field: impl Into<String>, message: impl Into<String>) -> Self {
        Self::SchemaViolation { field: field.into(), message: message.into() }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Parse { .. } | Self::UnknownName { .. } | Self::SchemaViolation { .. } | Self::Io { .. } => 2,
            Self::AllPointsFailed { .. } | Self::Geom(_) => 1,
        }
    }
}

pub type LabResult<T> = Result<T, LabError>;
