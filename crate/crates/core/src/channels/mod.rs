//! Lossy channel systems and their encoding into universal timed automata.

mod encoding;
mod reduction;
mod system;

pub use encoding::{
    encode_computation, validate_encoding, ComputationEncoding, Condition, EncodingReport, EncodingViolation,
    TimingPolicy,
};
pub use reduction::build_reduction_ata;
pub use system::{lossy_path, lossy_reachable, lossy_step, subseq, ChannelConfig, ChannelRule, ChannelSystem, Op};
