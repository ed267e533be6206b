//! Workloads shared by the benchmarks.

use ata_core::channels::{ChannelRule, ChannelSystem, Op};
use ata_core::{complement, combine, samples, Ata, Mode, Rational, TimedWord};

/// `n` letters `a`, spaced 0.3 apart.
pub fn spaced_word(n: usize) -> TimedWord {
    let entries = (0..n).map(|i| ("a".to_string(), Rational::new((3 * i as i64).into(), 10.into()))).collect();
    TimedWord::new(entries).expect("increasing")
}

/// The unit-distance sample intersected with its complement, whose language is empty.
pub fn empty_product() -> Ata {
    let a = samples::no_unit_distance();
    combine(&a, &complement(&a).expect("partitioned"), Mode::And).expect("same alphabet")
}

/// A two-state system that writes `a`, writes `b`s and reads `a`.
pub fn write_read_system() -> ChannelSystem {
    let rule = |f: &str, op: Op, t: &str| ChannelRule { from: f.into(), op, to: t.into() };
    ChannelSystem::new(
        vec!["q0".into(), "q1".into(), "q2".into()],
        "q0".into(),
        vec!["a".into(), "b".into()],
        vec![
            rule("q0", Op::Write("a".into()), "q1"),
            rule("q1", Op::Write("b".into()), "q1"),
            rule("q1", Op::Read("a".into()), "q2"),
        ],
    )
    .expect("valid system")
}
