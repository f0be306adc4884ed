use std::path::PathBuf;

use serde::Serialize;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{}:{line}:{column}: {message}", path.display())]
    Parse { path: PathBuf, line: usize, column: usize, message: String },
    #[error("{}: {source}", path.display())]
    InvalidInput {
        path: PathBuf,
        #[source]
        source: coarse_lip_core::Error,
    },
    #[error(transparent)]
    Domain(#[from] coarse_lip_core::Error),
    #[error("no point named {0:?}")]
    UnknownPoint(String),
    #[error("{0}")]
    Usage(String),
}

/// Machine-readable form of an error.
#[derive(Debug, Serialize)]
pub struct ErrorReport {
    pub kind: &'static str,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub line: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub column: Option<usize>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub violations: Vec<String>,
}

fn violations(e: &coarse_lip_core::Error) -> Vec<String> {
    match e {
        coarse_lip_core::Error::InvalidMetric(v) => v.iter().map(|v| v.to_string()).collect(),
        _ => Vec::new(),
    }
}

impl CliError {
    /// 2 for usage errors, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }

    pub fn report(&self) -> ErrorReport {
        let mut r = ErrorReport {
            kind: "domain",
            message: self.to_string(),
            path: None,
            line: None,
            column: None,
            violations: Vec::new(),
        };
        match self {
            CliError::Io { path, .. } => {
                r.kind = "io";
                r.path = Some(path.clone());
            }
            CliError::Parse { path, line, column, .. } => {
                r.kind = "parse";
                r.path = Some(path.clone());
                r.line = Some(*line);
                r.column = Some(*column);
            }
            CliError::InvalidInput { path, source } => {
                r.kind = "invalid-input";
                r.path = Some(path.clone());
                r.violations = violations(source);
            }
            CliError::Domain(e) => r.violations = violations(e),
            CliError::UnknownPoint(_) => r.kind = "unknown-point",
            CliError::Usage(_) => r.kind = "usage",
        }
        r
    }
}
