use thiserror::Error;

/// Errors raised by ingestion, fitting, and the synthetic-network generators.
#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed count {token:?}")]
    Parse { token: String },

    #[error("negative count {token:?}")]
    NegativeCount { token: String },

    #[error("duplicate account name {0:?}")]
    DuplicateName(String),

    #[error("missing column {0:?}")]
    MissingColumn(String),

    #[error("row {row}, column {column}: cannot use cell {text:?}: {reason}")]
    InvalidCell {
        row: usize,
        column: String,
        text: String,
        reason: String,
    },

    #[error("empty input: {0}")]
    EmptyInput(String),

    #[error("insufficient data for {context}: need at least {needed} points, got {got}")]
    InsufficientData {
        context: String,
        needed: usize,
        got: usize,
    },

    #[error("value at rank {rank} ({label}) must be positive, got {value}")]
    NonPositive {
        rank: usize,
        label: String,
        value: f64,
    },

    #[error("account {account:?}: {metric} must be positive for fitting, got {value}")]
    NonPositiveMetric {
        account: String,
        metric: String,
        value: f64,
    },

    #[error("rank {rank} outside 1..={max}")]
    RankOutOfRange { rank: usize, max: usize },

    #[error("x must be positive, got {0}")]
    NonPositiveX(f64),

    #[error("account {account:?} has zero followers")]
    ZeroFollowers { account: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("graph is disconnected: {reached} of {total} nodes reachable from node 0")]
    Disconnected { reached: usize, total: usize },

    #[error("degenerate regression: {0}")]
    Degenerate(String),

    #[error("unknown category {0:?}")]
    UnknownCategory(String),

    #[error("cannot open {path}: {source}")]
    Open {
        path: String,
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
