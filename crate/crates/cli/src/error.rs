use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Serialize)]
#[error("invalid configuration field `{field}`: {reason}")]
pub struct ConfigError {
    pub field: String,
    pub reason: String,
}

impl ConfigError {
    pub fn new(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Self {
            field: field.into(),
            reason: reason.into(),
        }
    }

    /// Core validation errors keep their field name, qualified by `prefix`.
    pub fn from_core(prefix: &str, e: hyperfund::Error) -> Self {
        match e {
            hyperfund::Error::ConfigError { field, reason } if field.contains('.') => Self::new(field, reason),
            hyperfund::Error::ConfigError { field, reason } => Self::new(format!("{prefix}.{field}"), reason),
            other => Self::new(prefix, other.to_string()),
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),

    #[error(transparent)]
    Run(#[from] hyperfund::Error),

    #[error("i/o failure on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Run(hyperfund::Error::ConfigError { .. }) => 2,
            _ => 1,
        }
    }

    /// Machine-readable report of a failed run.
    pub fn report(&self) -> serde_json::Value {
        let kind = match self {
            CliError::Config(_) => "config_error",
            CliError::Run(hyperfund::Error::ConfigError { .. }) => "config_error",
            CliError::Run(_) => "computation_error",
            CliError::Io { .. } => "io_error",
        };
        let mut v = serde_json::json!({ "error": kind, "message": self.to_string() });
        if let CliError::Config(c) = self {
            v["field"] = serde_json::Value::String(c.field.clone());
        }
        if let CliError::Run(hyperfund::Error::ConfigError { field, .. }) = self {
            v["field"] = serde_json::Value::String(field.clone());
        }
        v
    }
}
