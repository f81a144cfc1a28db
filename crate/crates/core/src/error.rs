use std::io;

use thiserror::Error;

use crate::trace::{Diagnostic, DiagnosticCode, Locus, MethodIdentity};

/// Failure to read a trace stream.
#[derive(Debug, Error)]
pub enum TraceError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: {message}")]
    Reference { line: usize, message: String },
    #[error("line {line}: {message}")]
    Version { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] io::Error),
}

impl TraceError {
    pub(crate) fn from_diagnostic(diag: &Diagnostic) -> Self {
        let line = match diag.locus {
            Locus::Line(n) => n,
            _ => 0,
        };
        let message = diag.message.clone();
        match diag.code {
            DiagnosticCode::UnsupportedVersion => TraceError::Version { line, message },
            DiagnosticCode::UnresolvedReference => TraceError::Reference { line, message },
            _ => TraceError::Parse { line, message },
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MergeError {
    #[error("cannot merge trace version {left} with version {right}")]
    VersionMismatch { left: u32, right: u32 },
    #[error("method {identity} is declared with conflicting kinds")]
    Conflict { identity: MethodIdentity },
}

/// Invalid analysis configuration.
#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("invalid glob `{pattern}`: {source}")]
    InvalidGlob {
        pattern: String,
        #[source]
        source: globset::Error,
    },
    #[error("minimum path count must be at least 2, got {0}")]
    MinPaths(usize),
    #[error("eager threshold must be at least 1, got {0}")]
    EagerThreshold(usize),
}
