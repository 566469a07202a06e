use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("grid size {0} is out of range")]
    Size(usize),
    #[error("expected {n} columns, got {got}")]
    ColumnCount { n: usize, got: usize },
    #[error("row {row} used {count} times (expected 2)")]
    RowCount { row: usize, count: usize },
    #[error("column {col} is degenerate (both ends on row {row})")]
    DegenerateColumn { col: usize, row: usize },
    #[error("column {col} uses row {row}, outside 1..={n}")]
    RowOutOfRange { col: usize, row: usize, n: usize },
    #[error("row {row} has both ends in the same column")]
    SelfRow { row: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unknown render format {0:?}")]
    UnknownFormat(String),
    #[error("move not applicable: {0}")]
    InapplicableMove(String),
    #[error("diagram is not a knot ({0} components)")]
    NotAKnot(usize),
    #[error("search limit exceeded after {states} states")]
    LimitExceeded { states: usize },
    #[error("input diagram is not trivial")]
    NotTrivialInput,
    #[error("resource limit: {0}")]
    ResourceLimit(String),
    #[error("degenerate jump geometry: {0}")]
    DegenerateGeometry(String),
    #[error("sweep obstruction: {0}")]
    SweepObstruction(String),
    #[error("illegal move at step {step}: {reason}")]
    IllegalMoveAtSite { step: usize, reason: String },
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
