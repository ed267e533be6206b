//! One-clock alternating timed automata: construction, boolean closure,
//! membership, and emptiness/universality/containment through the region-word
//! abstraction, plus the lossy channel system reduction.

pub mod abstraction;
pub mod channels;
pub mod decision;
pub mod error;
pub mod model;
pub mod samples;
pub mod semantics;
pub mod syntax;

/// Exact clock values and timestamps.
pub type Rational = num_rational::BigRational;

pub use abstraction::{Letter, Region, RegionWord};
pub use channels::{build_reduction_ata, ChannelConfig, ChannelRule, ChannelSystem};
pub use decision::{
    check_contains, check_empty, check_empty_with, check_universal, concretize_witness,
    ContainmentVerdict, EmptinessVerdict, Pruning, SearchOptions, SearchStats, UniversalityVerdict,
};
pub use error::{Error, Result};
pub use model::{
    check_partition, combine, complement, from_nta, to_dnf, Ata, AtaBuilder, Atom, Dnf, Guard,
    GuardExpr, LocId, Mode, Nta, NtaEdge, PartitionReport, PosBool, SymbolId,
};
pub use semantics::{accepts, ConfigSet, Configuration, TimedWord};
pub use syntax::{parse_ata, parse_lcs, parse_word, print_ata, ParseError};
