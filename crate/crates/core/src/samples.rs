//! Small automata used in tests, benches and documentation.

use crate::model::{Ata, AtaBuilder, GuardExpr, PosBool};

/// Words over `{a}` with no two letters exactly one time unit apart.
///
/// `q0` is initial, `q0` and `q1` are accepting, `q2` is a rejecting sink.
pub fn no_unit_distance() -> Ata {
    no_unit_distance_with_accepting(&["q0", "q1"])
}

/// [`no_unit_distance`] with a different accepting set.
pub fn no_unit_distance_with_accepting(accepting: &[&str]) -> Ata {
    let mut b = AtaBuilder::new();
    let a = b.symbol("a");
    let q0 = b.location("q0");
    let q1 = b.location("q1");
    let q2 = b.location("q2");
    b.rule(q0, a, GuardExpr::True, PosBool::and(PosBool::atom(q0, false), PosBool::atom(q1, true)));
    b.rule(q1, a, GuardExpr::Eq(1), PosBool::atom(q2, false));
    b.rule(q1, a, GuardExpr::Ne(1), PosBool::atom(q1, false));
    b.rule(q2, a, GuardExpr::True, PosBool::atom(q2, false));
    b.set_initial(q0);
    for name in accepting {
        let q = b.location(name);
        b.set_accepting(q, true);
    }
    b.build().expect("well-formed")
}

/// One accepting location looping on every letter.
pub fn accept_all(alphabet: &[&str]) -> Ata {
    let mut b = AtaBuilder::new();
    let q = b.location("q");
    for s in alphabet {
        let a = b.symbol(s);
        b.rule(q, a, GuardExpr::True, PosBool::atom(q, false));
    }
    b.set_initial(q).set_accepting(q, true);
    b.build().expect("well-formed")
}

/// Three locations over `{a}` with `cmax = 2`: `q1` and `q2` loop, and `q3`
/// either moves to `q1` with a reset or splits into `q2` and `q3` above 2.
pub fn three_locations() -> Ata {
    let mut b = AtaBuilder::new();
    let a = b.symbol("a");
    let q1 = b.location("q1");
    let q2 = b.location("q2");
    let q3 = b.location("q3");
    b.rule(q1, a, GuardExpr::True, PosBool::atom(q1, false));
    b.rule(q2, a, GuardExpr::True, PosBool::atom(q2, false));
    b.rule(q3, a, GuardExpr::Le(2), PosBool::atom(q3, false));
    b.rule(
        q3,
        a,
        GuardExpr::Gt(2),
        PosBool::or(
            PosBool::atom(q1, true),
            PosBool::and(PosBool::atom(q2, false), PosBool::atom(q3, false)),
        ),
    );
    b.set_initial(q1);
    b.build().expect("well-formed")
}
