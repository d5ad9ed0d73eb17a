//! Error type shared by every module of the crate.

use thiserror::Error;

/// All failure modes of the engine.
///
/// Each variant has a stable short name (see [`SsakgError::name`]) that the
/// CLI prints alongside the message, so scripts can match on it.
#[derive(Debug, Error)]
pub enum SsakgError {
    /// A graph needs at least two nodes to hold an edge.
    #[error("graph needs at least 2 nodes, got {n}")]
    InvalidNodeCount { n: usize },

    /// A sequence (or context) repeated a symbol. Repeats must be encoded as
    /// virtual objects before storage.
    #[error("symbol {symbol} occurs more than once")]
    DuplicateElement { symbol: u32 },

    /// A symbol does not fit the graph's node range.
    #[error("symbol {symbol} out of range for a graph with {n} nodes")]
    SymbolOutOfRange { symbol: u32, n: usize },

    /// A sequence was shorter than the operation allows.
    #[error("sequence of length {len} is too short (minimum {min})")]
    SequenceTooShort { len: usize, min: usize },

    /// Two context symbols never co-occur in any stored sequence, so no
    /// recall can contain both.
    #[error("context symbols {a} and {b} are not connected by any stored sequence")]
    InconsistentContext { a: u32, b: u32 },

    /// The ordering search completed without producing a single ordering
    /// that validates as a transitive tournament.
    #[error("no candidate ordering validates as a stored sequence ({branch_count} branches explored)")]
    NoValidOrdering { branch_count: u64 },

    /// The ordering search exceeded its branch budget.
    #[error("ordering search exceeded the branch budget of {budget}")]
    AmbiguityOverflow { budget: u64 },

    /// A parameter was outside its documented range.
    #[error("{0}")]
    InvalidParams(String),

    /// An elimination path index (or permutation entry) was out of bounds.
    #[error("path index {index} out of bounds (1..={limit})")]
    MalformedPath { index: usize, limit: usize },

    /// The corpus did not yield enough sentences after filtering.
    #[error("corpus yields {survivors} usable sentences, {requested} requested")]
    CorpusTooSmall { survivors: usize, requested: usize },

    /// A snapshot, report, or sequence file did not match its schema.
    #[error("bad file format: {0}")]
    FormatError(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl SsakgError {
    /// Stable machine-readable name of the variant.
    pub fn name(&self) -> &'static str {
        match self {
            SsakgError::InvalidNodeCount { .. } => "InvalidNodeCount",
            SsakgError::DuplicateElement { .. } => "DuplicateElement",
            SsakgError::SymbolOutOfRange { .. } => "SymbolOutOfRange",
            SsakgError::SequenceTooShort { .. } => "SequenceTooShort",
            SsakgError::InconsistentContext { .. } => "InconsistentContext",
            SsakgError::NoValidOrdering { .. } => "NoValidOrdering",
            SsakgError::AmbiguityOverflow { .. } => "AmbiguityOverflow",
            SsakgError::InvalidParams(_) => "InvalidParams",
            SsakgError::MalformedPath { .. } => "MalformedPath",
            SsakgError::CorpusTooSmall { .. } => "CorpusTooSmall",
            SsakgError::FormatError(_) => "FormatError",
            SsakgError::Io(_) => "IoError",
            SsakgError::Json(_) => "FormatError",
        }
    }
}

pub type Result<T> = std::result::Result<T, SsakgError>;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_are_stable() {
        assert_eq!(SsakgError::InvalidNodeCount { n: 1 }.name(), "InvalidNodeCount");
        assert_eq!(
            SsakgError::InvalidParams("x".into()).name(),
            "InvalidParams"
        );
    }
}
