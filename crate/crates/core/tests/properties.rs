//! Property tests for the structural invariants of every module.

mod common;

use std::collections::BTreeSet;

use ata_core::abstraction::{abstract_h, delay_closure, preceq, RegionWord};
use ata_core::channels::{
    encode_computation, lossy_step, subseq, validate_encoding, ChannelConfig, ChannelRule, ChannelSystem, Op,
    TimingPolicy,
};
use ata_core::model::{normalize_guard, Interval, Upper};
use ata_core::{
    accepts, build_reduction_ata, check_partition, check_universal, combine, complement, from_nta, parse_ata,
    print_ata, to_dnf, Ata, ConfigSet, Configuration, GuardExpr, LocId, Mode, Nta, NtaEdge, PosBool, Rational,
    SymbolId, TimedWord, UniversalityVerdict,
};
use common::*;
use num_traits::Zero;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

fn guard_expr() -> impl Strategy<Value = GuardExpr> {
    let leaf = prop_oneof![
        Just(GuardExpr::True),
        Just(GuardExpr::False),
        (0u32..4).prop_map(GuardExpr::Lt),
        (0u32..4).prop_map(GuardExpr::Le),
        (0u32..4).prop_map(GuardExpr::Eq),
        (0u32..4).prop_map(GuardExpr::Ge),
        (0u32..4).prop_map(GuardExpr::Gt),
        (0u32..4).prop_map(GuardExpr::Ne),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(GuardExpr::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| GuardExpr::and(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| GuardExpr::or(a, b)),
        ]
    })
}

/// Direct reading of the guard syntax at `v`.
fn holds(e: &GuardExpr, v: &Rational) -> bool {
    let c = |c: &u32| Rational::from_integer((*c).into());
    match e {
        GuardExpr::True => true,
        GuardExpr::False => false,
        GuardExpr::Lt(k) => *v < c(k),
        GuardExpr::Le(k) => *v <= c(k),
        GuardExpr::Eq(k) => *v == c(k),
        GuardExpr::Ge(k) => *v >= c(k),
        GuardExpr::Gt(k) => *v > c(k),
        GuardExpr::Ne(k) => *v != c(k),
        GuardExpr::Not(a) => !holds(a, v),
        GuardExpr::And(a, b) => holds(a, v) && holds(b, v),
        GuardExpr::Or(a, b) => holds(a, v) || holds(b, v),
    }
}

/// Every rational with denominator at most 4 in `[0, limit]`.
fn grid(limit: i64) -> Vec<Rational> {
    let mut out: BTreeSet<Rational> = BTreeSet::new();
    for d in 1..=4 {
        for n in 0..=limit * d {
            out.insert(r(n, d));
        }
    }
    out.into_iter().collect()
}

fn mergeable(a: &Interval, b: &Interval) -> bool {
    match a.upper {
        Upper::Infinity => true,
        Upper::Finite { value, closed } => value > b.lower || (value == b.lower && (closed || b.lower_closed)),
    }
}

fn random_nta(rng: &mut impl Rng) -> Nta {
    let n = rng.gen_range(1..=2u32);
    let letters = ["a", "b"];
    let k = rng.gen_range(1..=2);
    let guards = [GuardExpr::Lt(1), GuardExpr::Ge(1), GuardExpr::Eq(1), GuardExpr::True, GuardExpr::Gt(2)];
    let edges = (0..rng.gen_range(0..=5))
        .map(|_| NtaEdge {
            from: LocId(rng.gen_range(0..n)),
            symbol: SymbolId(rng.gen_range(0..k)),
            guard: guards.choose(rng).unwrap().clone(),
            to: LocId(rng.gen_range(0..n)),
            reset: rng.gen_bool(0.4),
        })
        .collect();
    Nta {
        locations: (0..n).map(|i| format!("n{i}")).collect(),
        alphabet: letters[..k as usize].iter().map(|s| s.to_string()).collect(),
        initial: LocId(0),
        accepting: (0..n).filter(|_| rng.gen_bool(0.5)).map(LocId).collect(),
        edges,
    }
}

/// Runs of a nondeterministic timed automaton, tracked explicitly.
fn nta_oracle(n: &Nta, w: &TimedWord) -> bool {
    let mut current = vec![(n.initial, Rational::zero())];
    for (symbol, delay) in w.symbols_with_delays() {
        let s = SymbolId(n.alphabet.iter().position(|x| x == symbol).unwrap() as u32);
        let mut next = Vec::new();
        for (q, v) in &current {
            let v = v + &delay;
            for e in n.edges.iter().filter(|e| e.from == *q && e.symbol == s && holds(&e.guard, &v)) {
                next.push((e.to, if e.reset { Rational::zero() } else { v.clone() }));
            }
        }
        next.sort();
        next.dedup();
        current = next;
    }
    current.iter().any(|(q, _)| n.accepting.contains(q))
}

/// A second set with the same abstraction: fractional parts move along an
/// order preserving map fixing zero, and tail values shift by whole units.
fn same_abstraction(rng: &mut impl Rng, p: &ConfigSet, cmax: u32) -> ConfigSet {
    let c = r(rng.gen_range(1..=5), rng.gen_range(1..=5));
    let bound = Rational::from_integer(cmax.into());
    p.iter()
        .map(|cfg| {
            let whole = cfg.value.floor();
            let f = &cfg.value - &whole;
            let g = if f.is_zero() { f } else { &f / (&f + &c * (Rational::from_integer(1.into()) - &f)) };
            let mut v = whole + g;
            if cfg.value > bound {
                v += Rational::from_integer(rng.gen_range(0..3).into());
            }
            Configuration::new(cfg.loc, v)
        })
        .collect()
}

/// Abstractions of `p` after every delay, sampled at each time a value
/// meets an integer, between them, and past the last.
fn delayed_abstractions(p: &ConfigSet, cmax: u32) -> BTreeSet<RegionWord> {
    let mut times: BTreeSet<Rational> = [Rational::zero()].into();
    for c in p {
        for k in 0..=(cmax as i64 + 1) {
            let t = Rational::from_integer(k.into()) - &c.value;
            if t > Rational::zero() {
                times.insert(t);
            }
            let t = Rational::from_integer(k.into()) + Rational::from_integer(1.into()) - (&c.value - c.value.floor());
            times.insert(t);
        }
    }
    let times: Vec<Rational> = times.into_iter().collect();
    let mut samples = times.clone();
    for pair in times.windows(2) {
        samples.push((&pair[0] + &pair[1]) / Rational::from_integer(2.into()));
    }
    samples.push(times.last().unwrap() + r(1, 7));
    samples
        .iter()
        .map(|t| abstract_h(&p.iter().map(|c| Configuration::new(c.loc, &c.value + t)).collect(), cmax))
        .collect()
}

fn toy_system() -> ChannelSystem {
    let rule = |f: &str, op: Op, t: &str| ChannelRule { from: f.into(), op, to: t.into() };
    ChannelSystem::new(
        st(&["q0", "q1"]),
        "q0".into(),
        st(&["a", "b"]),
        vec![
            rule("q0", Op::Write("a".into()), "q1"),
            rule("q1", Op::Write("b".into()), "q1"),
            rule("q1", Op::Read("a".into()), "q1"),
            rule("q1", Op::Eps, "q1"),
        ],
    )
    .unwrap()
}

/// Every lossy run of `s` with at most `len` steps and channels of length at
/// most 2.
fn all_runs(s: &ChannelSystem, len: usize) -> Vec<Vec<(ChannelRule, ChannelConfig)>> {
    let start = ChannelConfig { state: s.initial().into(), channel: vec![] };
    let mut out = vec![vec![]];
    let mut frontier: Vec<(ChannelConfig, Vec<(ChannelRule, ChannelConfig)>)> = vec![(start, vec![])];
    for _ in 0..len {
        let mut next = Vec::new();
        for (c, run) in &frontier {
            for rule in s.rules() {
                for d in lossy_step(c, rule) {
                    if d.channel.len() <= 2 {
                        let mut run = run.clone();
                        run.push((rule.clone(), d.clone()));
                        out.push(run.clone());
                        next.push((d, run));
                    }
                }
            }
        }
        frontier = next;
    }
    out
}

fn perturb(rng: &mut impl Rng, w: &TimedWord, letters: &[String]) -> TimedWord {
    let mut e: Vec<(String, Rational)> = w.entries().to_vec();
    match rng.gen_range(0..5) {
        0 if !e.is_empty() => {
            e.remove(rng.gen_range(0..e.len()));
        }
        1 if e.len() > 1 => {
            let i = rng.gen_range(0..e.len() - 1);
            let (a, b) = (e[i].0.clone(), e[i + 1].0.clone());
            e[i].0 = b;
            e[i + 1].0 = a;
        }
        2 if !e.is_empty() => {
            let i = rng.gen_range(0..e.len());
            e[i].0 = letters.choose(rng).unwrap().clone();
        }
        3 if !e.is_empty() => {
            let i = rng.gen_range(0..e.len());
            let lo = if i == 0 { Rational::zero() } else { e[i - 1].1.clone() };
            let hi = e.get(i + 1).map_or(&e[i].1 + r(1, 1), |x| x.1.clone());
            e[i].1 = &lo + (&hi - &lo) * r(rng.gen_range(0..=4), 4);
        }
        _ => {
            let i = rng.gen_range(0..=e.len());
            let lo = if i == 0 { Rational::zero() } else { e[i - 1].1.clone() };
            let hi = e.get(i).map_or(&lo + r(1, 1), |x| x.1.clone());
            e.insert(i, (letters.choose(rng).unwrap().clone(), (&lo + &hi) / Rational::from_integer(2.into())));
        }
    }
    TimedWord::new(e).unwrap()
}

fn encoding_letters(s: &ChannelSystem) -> Vec<String> {
    let mut out: Vec<String> = s.states().to_vec();
    out.extend(s.alphabet().iter().cloned());
    out.extend(s.rules().iter().map(ChannelRule::name));
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn normalized_guards_agree_with_the_syntax(e in guard_expr()) {
        let g = normalize_guard(&e);
        for v in grid(5) {
            prop_assert_eq!(g.contains(&v), holds(&e, &v), "at {}", v);
        }
    }

    #[test]
    fn guards_are_canonical(e in guard_expr(), f in guard_expr()) {
        let (g, h) = (normalize_guard(&e), normalize_guard(&f));
        for x in [&g, &h, &g.union(&h), &g.intersect(&h), &g.complement()] {
            for pair in x.intervals().windows(2) {
                prop_assert!(!mergeable(&pair[0], &pair[1]), "{:?}", x);
            }
        }
        prop_assert_eq!(normalize_guard(&GuardExpr::not(GuardExpr::not(e.clone()))), g.clone());
        for v in grid(5) {
            prop_assert_eq!(g.union(&h).contains(&v), g.contains(&v) || h.contains(&v));
            prop_assert_eq!(g.intersect(&h).contains(&v), g.contains(&v) && h.contains(&v));
            prop_assert_eq!(g.complement().contains(&v), !g.contains(&v));
        }
    }

    #[test]
    fn dnf_denotes_the_formula(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let locs: Vec<LocId> = (0..3).map(LocId).collect();
        let b: PosBool = random_formula(&mut rng, &locs, 4);
        let d = to_dnf(&b);
        for c in d.conjuncts() {
            prop_assert!(c.windows(2).all(|p| p[0] < p[1]));
            prop_assert!(d.conjuncts().iter().filter(|o| o.iter().all(|x| c.contains(x))).count() == 1);
        }
        let atoms: Vec<_> = { let mut a = b.atoms(); a.sort(); a.dedup(); a };
        for mask in 0u32..(1 << atoms.len()) {
            let truth = |x: &ata_core::Atom| mask & (1 << atoms.iter().position(|y| y == x).unwrap()) != 0;
            let via = d.conjuncts().iter().any(|c| c.iter().all(|x| truth(x)));
            prop_assert_eq!(b.eval(&truth), via);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn complement_is_an_involution(seed in any::<u64>()) {
        let a = random_ata(&mut rng(seed), 3, 2, &["a", "b"]);
        let twice = complement(&complement(&a).unwrap()).unwrap();
        prop_assert_eq!(twice, a);
    }

    #[test]
    fn combined_automata_are_partitioned(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let a = random_ata(&mut rng, 3, 2, &["a", "b"]);
        let b = random_ata(&mut rng, 3, 2, &["a", "b"]);
        for mode in [Mode::And, Mode::Or] {
            let c = combine(&a, &b, mode).unwrap();
            prop_assert!(check_partition(&c).is_ok());
            let w = random_word(&mut rng, &st(&["a", "b"]), 3, 3, 4);
            let (x, y, z) = (accepts(&a, &w).unwrap(), accepts(&b, &w).unwrap(), accepts(&c, &w).unwrap());
            prop_assert_eq!(z, if mode == Mode::And { x && y } else { x || y });
        }
    }

    #[test]
    fn from_nta_is_existential_and_equivalent(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let n = random_nta(&mut rng);
        let a = from_nta(&n).unwrap();
        prop_assert!(a.is_purely_existential());
        prop_assert!(check_partition(&a).is_ok());
        for _ in 0..10 {
            let w = random_word(&mut rng, &n.alphabet, 4, 2, 4);
            let expected = nta_oracle(&n, &w);
            prop_assert_eq!(accepts(&a, &w).unwrap(), expected, "{}", w);
            prop_assert_eq!(n.accepts(&w).unwrap(), expected);
            prop_assert_eq!(game_accepts(&a, &w), expected);
        }
    }

    #[test]
    fn printing_round_trips(seed in any::<u64>()) {
        let a = random_ata(&mut rng(seed), 3, 2, &["a", "b"]);
        let text = print_ata(&a);
        let back = parse_ata(&text).unwrap();
        prop_assert_eq!(print_ata(&back), text);
        let mut rng = rng(seed ^ 1);
        for _ in 0..5 {
            let w = random_word(&mut rng, &st(&["a", "b"]), 3, 3, 4);
            prop_assert_eq!(accepts(&back, &w).unwrap(), accepts(&a, &w).unwrap());
        }
    }

    #[test]
    fn preceq_is_a_preorder(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let a = random_ata(&mut rng, 3, 2, &["a"]);
        let big = random_configs(&mut rng, &a, 5, a.cmax() as i64 + 2);
        let mid: ConfigSet = big.iter().filter(|_| rng.gen_bool(0.7)).cloned().collect();
        let small: ConfigSet = mid.iter().filter(|_| rng.gen_bool(0.7)).cloned().collect();
        let other = random_configs(&mut rng, &a, 5, a.cmax() as i64 + 2);
        let ws = [&small, &mid, &big, &other].map(|p| abstract_h(p, a.cmax()));
        for x in &ws {
            prop_assert!(preceq(x, x));
            for y in &ws {
                for z in &ws {
                    if preceq(x, y) && preceq(y, z) {
                        prop_assert!(preceq(x, z), "{} / {} / {}", x, y, z);
                    }
                }
            }
        }
        prop_assert!(preceq(&ws[0], &ws[1]) && preceq(&ws[1], &ws[2]));
    }

    #[test]
    fn delay_closure_depends_only_on_the_abstraction(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let a = random_ata(&mut rng, 3, 2, &["a"]);
        let cmax = a.cmax();
        let p1 = random_configs(&mut rng, &a, 4, cmax as i64 + 2);
        let p2 = same_abstraction(&mut rng, &p1, cmax);
        let w = abstract_h(&p1, cmax);
        prop_assert_eq!(abstract_h(&p2, cmax), w.clone());
        let (d1, d2) = (delayed_abstractions(&p1, cmax), delayed_abstractions(&p2, cmax));
        prop_assert_eq!(&d1, &d2);
        let closure = delay_closure(&w);
        prop_assert!(d1.is_subset(&closure), "{:?} not within {:?}", d1, closure);
    }

    #[test]
    fn lossy_steps_are_downward_closed(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let s = random_system(&mut rng);
        let len = rng.gen_range(0..=3);
        let channel: Vec<String> = (0..len).map(|_| s.alphabet().choose(&mut rng).unwrap().clone()).collect();
        for rule in s.rules() {
            let c = ChannelConfig { state: rule.from.clone(), channel: channel.clone() };
            let out = lossy_step(&c, rule);
            for d in &out {
                let n = d.channel.len();
                for mask in 0u32..(1 << n) {
                    let sub: Vec<String> = (0..n).filter(|i| mask & (1 << i) != 0).map(|i| d.channel[i].clone()).collect();
                    prop_assert!(subseq(&sub, &d.channel));
                    let smaller = ChannelConfig { state: d.state.clone(), channel: sub };
                    prop_assert!(out.contains(&smaller), "{} missing", smaller);
                }
            }
        }
    }

    #[test]
    fn reductions_are_universal_and_partitioned(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let s = random_system(&mut rng);
        let q_f = s.states()[rng.gen_range(1..s.states().len())].clone();
        let w_f: Vec<String> = (0..rng.gen_range(0..=2)).map(|_| s.alphabet().choose(&mut rng).unwrap().clone()).collect();
        let a = build_reduction_ata(&s, &q_f, &w_f).unwrap();
        prop_assert!(a.is_purely_universal());
        prop_assert!(check_partition(&a).is_ok());
    }

    #[test]
    fn perturbed_encodings_agree(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let s = toy_system();
        let runs = all_runs(&s, 3);
        let run = runs.choose(&mut rng).unwrap();
        let last = run.last().map_or(ChannelConfig { state: "q0".into(), channel: vec![] }, |x| x.1.clone());
        prop_assume!(last.state != "q0");
        let a = build_reduction_ata(&s, &last.state, &last.channel).unwrap();
        let enc = encode_computation(&s, run, TimingPolicy::default()).unwrap();
        let w = perturb(&mut rng, &enc.word, &encoding_letters(&s));
        let valid = validate_encoding(&w, &s, &last.state, &last.channel).is_ok();
        prop_assert_eq!(valid, accepts(&a, &w).unwrap(), "{}", w);
    }

    #[test]
    fn universal_automata_accept_sampled_words(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let a = random_ata(&mut rng, 2, 1, &["a", "b"]);
        if check_universal(&a).unwrap() == UniversalityVerdict::Universal {
            for _ in 0..200 {
                let w = random_word(&mut rng, &st(&["a", "b"]), 5, 4, 4);
                prop_assert!(accepts(&a, &w).unwrap(), "{}", w);
            }
        }
    }
}

#[test]
fn every_small_run_encodes_and_is_accepted() {
    let s = toy_system();
    let runs = all_runs(&s, 3);
    assert!(runs.len() > 20);
    let mut automata: std::collections::BTreeMap<(String, Vec<String>), Ata> = Default::default();
    for run in runs.iter().filter(|r| !r.is_empty()) {
        let last = run.last().unwrap().1.clone();
        let enc = encode_computation(&s, run, TimingPolicy::default()).unwrap();
        let report = validate_encoding(&enc.word, &s, &last.state, &last.channel);
        assert!(report.is_ok(), "{}: {}", enc.word, report);
        let a = automata
            .entry((last.state.clone(), last.channel.clone()))
            .or_insert_with(|| build_reduction_ata(&s, &last.state, &last.channel).unwrap());
        assert!(accepts(a, &enc.word).unwrap(), "{}", enc.word);
    }
}
