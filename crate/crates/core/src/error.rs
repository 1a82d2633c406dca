//! Error type shared by all library modules.

use crate::map::validate::Finding;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Malformed textual input (XML, JSON, pose strings). `line` is 1-based; 0 when
    /// no line information is available.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// Malformed binary input at a byte offset.
    #[error("binary format error at offset {offset}: {message}")]
    Binary { offset: usize, message: String },

    /// A map element violates a structural invariant (dangling reference,
    /// degenerate geometry).
    #[error("structural error on element {element}: {message}")]
    Structural { element: u64, message: String },

    /// An operation that requires a structurally valid map was given one with
    /// error-severity validation findings.
    #[error("map failed validation with {} error finding(s): {}", .findings.len(), summarize(.findings))]
    Invalid { findings: Vec<Finding> },

    /// A trace record references an element missing from the map.
    #[error("trace references unknown element {id}")]
    Traceability { id: u64 },

    /// Path enumeration exceeded a configured guard.
    #[error("path enumeration exceeded the configured maximum {what} of {limit}")]
    PathLimit { what: &'static str, limit: usize },

    /// Input that is syntactically fine but geometrically unusable.
    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// The operation is not defined for the given configuration.
    #[error("unsupported operation: {0}")]
    Unsupported(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn summarize(findings: &[Finding]) -> String {
    findings
        .iter()
        .take(3)
        .map(|f| f.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

pub type Result<T> = std::result::Result<T, Error>;
