use thiserror::Error;

use crate::model::PartitionReport;
use crate::syntax::ParseError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown location `{0}`")]
    UnknownLocation(String),
    #[error("unknown letter `{0}`")]
    UnknownSymbol(String),
    #[error("name `{0}` is declared twice")]
    DuplicateName(String),
    #[error("automaton violates the partition condition:\n{0}")]
    Partition(PartitionReport),
    #[error("alphabets differ")]
    AlphabetMismatch,
    #[error("no rule of location `{location}` on letter `{symbol}` applies")]
    NoRule { location: String, symbol: String },
    #[error("timestamps must be nonnegative and nondecreasing (position {0})")]
    NonMonotoneWord(usize),
    #[error("delay step on the empty region word")]
    EmptyRegionWord,
    #[error("search budget exhausted after {nodes} nodes")]
    BudgetExceeded { nodes: usize },
    #[error("witness concretization failed: {0}")]
    Witness(String),
    #[error("invalid channel system: {0}")]
    ChannelSystem(String),
    #[error("invalid lossy run: {0}")]
    InvalidRun(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}
