use thiserror::Error;

use crate::partition::{Family, Violation};

/// Errors raised while parsing part notation.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("unknown color `{token}` at byte {offset}")]
    UnknownColor { offset: usize, token: String },
    #[error("part size must be positive, found 0 at byte {offset}")]
    ZeroSize { offset: usize },
    #[error("part size must be positive, found negative value at byte {offset}")]
    NegativeSize { offset: usize },
    #[error("malformed integer `{text}` at byte {offset}")]
    MalformedInt { offset: usize, text: String },
    #[error("expected `_` between size and color at byte {offset}")]
    MissingSeparator { offset: usize },
    #[error("empty part at byte {offset}")]
    EmptyPart { offset: usize },
    #[error("secondary part {size}_{color} at byte {offset} must have size at least 2")]
    SmallSecondary {
        offset: usize,
        size: u64,
        color: String,
    },
    #[error("expected `|` separating quaternary parts from the residual")]
    MissingBar,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("quaternary color has no rank in the ten-color order")]
    QuaternaryRank,
    #[error("part size must be positive")]
    ZeroSize,
    #[error("secondary part of size {0} is not allowed (size must be at least 2)")]
    SmallSecondary(u64),
    #[error("part size overflow")]
    Overflow,
    #[error("{0} is not a secondary part of size at least 2")]
    NotHalvable(String),
    #[error("not a troublesome pair: ({0}, {1})")]
    NotTroublesome(String, String),
    #[error("quaternary part {0} is smaller than 4")]
    SmallQuaternary(u64),
    #[error("{0} is not a quaternary part")]
    NotQuaternary(String),
    #[error("({0}, {1}) is not a pattern pair")]
    NotPattern(String, String),
    #[error("input is not in family {family}: {violation}")]
    NotInFamily { family: Family, violation: Violation },
    #[error("invalid quaternary decomposition: {0}")]
    InvalidDecomposition(String),
    #[error("{0} has no dilation")]
    NoDilation(String),
    #[error("truncation degree mismatch: {0} vs {1}")]
    QmaxMismatch(u32, u32),
    #[error("machine invariant broken: {0}")]
    Invariant(String),
    #[error("{machine} passage {passage}: clause {clause} violated: {detail}")]
    Clause {
        machine: &'static str,
        passage: usize,
        clause: u8,
        detail: String,
    },
    #[error("trace replay mismatch at event {0}")]
    Replay(usize),
    #[error("no registered entry named `{0}`")]
    UnknownName(String),
    #[error("json: {0}")]
    Json(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
