//! Text formats for automata, timed words and channel systems.

mod ata;
mod lcs;
mod lexer;
mod word;

use serde::Serialize;

pub use ata::{parse_ata, print_ata};
pub use lcs::{parse_lcs, print_lcs, ChannelProblem};
pub use word::parse_word;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error, Serialize)]
#[error("{line}:{col}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}
