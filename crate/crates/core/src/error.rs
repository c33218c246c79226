//! Crate-wide error and result types.

use crate::graph::Violation;
use thiserror::Error;

/// Errors produced by graph loading, analysis, and simulation.
#[derive(Debug, Error)]
pub enum Error {
    /// The graph (or another structured input) failed validation.
    #[error("invalid graph: {}", format_violations(.0))]
    Validation(Vec<Violation>),

    /// A file or stream could not be parsed. `line` is 1-based where known.
    #[error("parse error{}: {message}", match line { Some(l) => format!(" at line {l}"), None => String::new() })]
    Parse {
        message: String,
        line: Option<usize>,
    },

    /// Underlying I/O failure.
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    /// A caller-supplied argument was unusable for the requested operation.
    #[error("{0}")]
    InvalidInput(String),

    /// An enumeration or search exceeded its configured budget.
    #[error("budget exceeded: {0}")]
    Budget(String),

    /// An internal consistency check failed; this indicates a bug.
    #[error("internal error: {0}")]
    Internal(String),
}

fn format_violations(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

pub type Result<T> = std::result::Result<T, Error>;
