use std::path::PathBuf;

use serde_json::{json, Value};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },

    #[error("{}: {source}", path.display())]
    Json { path: PathBuf, source: serde_json::Error },

    #[error("{0}")]
    Schema(String),

    #[error(transparent)]
    Engine(#[from] charclass::Error),
}

impl CliError {
    /// 1 for mathematical failures, 2 for I/O, 3 for malformed or invalid input.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io { .. } => 2,
            CliError::Json { .. } | CliError::Schema(_) => 3,
            CliError::Engine(e) if e.is_validation() => 3,
            CliError::Engine(_) => 1,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Io { .. } => "io",
            CliError::Json { .. } => "schema",
            CliError::Schema(_) => "schema",
            CliError::Engine(charclass::Error::Parse { .. } | charclass::Error::UnknownVariable { .. }) => "parse",
            CliError::Engine(charclass::Error::Consistency(_)) => "consistency",
            CliError::Engine(e) if e.is_validation() => "validation",
            CliError::Engine(_) => "math",
        }
    }

    pub fn to_json(&self) -> Value {
        let mut body = json!({ "kind": self.kind(), "message": self.to_string() });
        match self {
            CliError::Io { path, .. } | CliError::Json { path, .. } => {
                body["path"] = json!(path.display().to_string());
            }
            CliError::Engine(
                charclass::Error::Parse { offset, .. } | charclass::Error::UnknownVariable { offset, .. },
            ) => {
                body["offset"] = json!(offset);
            }
            _ => {}
        }
        json!({ "error": body })
    }
}
