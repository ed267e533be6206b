//! Automaton data model and boolean closure.

mod ata;
mod closure;
mod dead;
mod formula;
mod guard;

pub use ata::{
    check_partition, check_partition_in, Ata, AtaBuilder, PartitionReport, PartitionScope, Rule,
    Violation, ViolationKind,
};
pub(crate) use ata::require_partition;
pub use closure::{
    combine, combine_with, complement, complete_with_sink, from_nta, CombineNames, Mode, Nta,
    NtaEdge,
};
pub use dead::dead_locations;
pub use formula::{to_dnf, Atom, Conjunct, Dnf, LocId, PosBool, SymbolId};
pub use guard::{eval_guard, normalize_guard, Guard, GuardExpr, Interval, Upper};
pub(crate) use guard::split_value;
