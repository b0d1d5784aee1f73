use thiserror::Error;

/// Every failure the library can report. Each variant maps to a stable,
/// machine-readable code via [`ArenaError::code`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArenaError {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid path: {0}")]
    InvalidPath(String),

    #[error("invalid player {player}: {reason}")]
    InvalidPlayer { player: usize, reason: String },

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("invalid routing: {0}")]
    InvalidRouting(String),

    #[error("no path from node {from} to node {to}")]
    NoPath { from: usize, to: usize },

    #[error("path enumeration exceeded cap of {cap} paths")]
    ResultTooLarge { cap: u64 },

    #[error("search exceeded budget of {budget} nodes")]
    SearchBudgetExceeded { budget: u64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("no support set exists: {0}")]
    NoSupportSet(String),

    #[error("could not satisfy generator constraints after {draws} draws")]
    RejectionFailure { draws: u32 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("format version {found} is not supported (expected {expected})")]
    FormatVersion { found: i64, expected: i64 },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("unknown key at line {line}, column {column}: {message}")]
    UnknownKey {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("i/o error: {0}")]
    Io(String),
}

impl ArenaError {
    pub fn code(&self) -> &'static str {
        match self {
            ArenaError::InvalidGraph(_) => "graph.invalid",
            ArenaError::InvalidPath(_) => "path.invalid",
            ArenaError::InvalidPlayer { .. } => "player.invalid",
            ArenaError::InvalidInstance(_) => "instance.invalid",
            ArenaError::InvalidRouting(_) => "routing.invalid",
            ArenaError::NoPath { .. } => "path.none",
            ArenaError::ResultTooLarge { .. } => "paths.too_large",
            ArenaError::SearchBudgetExceeded { .. } => "search.budget_exceeded",
            ArenaError::Precondition(_) => "precondition.violated",
            ArenaError::NoSupportSet(_) => "support.inconsistent",
            ArenaError::RejectionFailure { .. } => "generator.rejection_failure",
            ArenaError::InvalidParameter(_) => "parameter.invalid",
            ArenaError::FormatVersion { .. } => "format.version",
            ArenaError::Parse { .. } => "format.parse",
            ArenaError::UnknownKey { .. } => "format.unknown_key",
            ArenaError::Io(_) => "io",
        }
    }
}

pub type Result<T, E = ArenaError> = std::result::Result<T, E>;
