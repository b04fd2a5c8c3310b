use std::io;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("input collection is empty")]
    EmptyInput,
    #[error("reserved byte {byte:#04x} found in read {read}")]
    ReservedByte { read: usize, byte: u8 },
    #[error("read {0} is empty")]
    EmptyRead(usize),
    #[error("string segment ending at {0} has no terminal sentinel")]
    MissingSentinel(usize),
    #[error("duplicate phrase in dictionary")]
    DuplicatePhrase,
    #[error("{what} index {index} out of range (limit {limit})")]
    OutOfRange {
        what: &'static str,
        index: usize,
        limit: usize,
    },
    #[error("node has no parent")]
    NoParent,
    #[error("node has no preceding sibling")]
    NoSibling,
    #[error("invalid node identifier {0}")]
    InvalidNode(usize),
    #[error("frequency table has no nonzero entry")]
    EmptyFrequency,
    #[error("dual nonterminal {0} never occurs in an LMS context")]
    UnresolvedDualContext(u32),
    #[error("level bwt has length {got}, expected {expected}")]
    InconsistentLength { got: usize, expected: usize },
    #[error("expansion exceeded {0} steps; grammar is cyclic")]
    CycleDetected(usize),
    #[error("input of {got} symbols exceeds the oracle cap of {cap}")]
    OracleTooLarge { got: usize, cap: usize },
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("malformed archive: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}
