//! Generators and independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet};

use ata_core::abstraction::{abstract_h, successors, Region, RegionWord};
use ata_core::channels::{ChannelRule, ChannelSystem, Op};
use ata_core::model::Atom;
use ata_core::{Ata, AtaBuilder, ConfigSet, Configuration, GuardExpr, LocId, PosBool, Rational, SymbolId, TimedWord};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn r(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// Guard for a contiguous run of half-unit cells `lo..=hi`, where cell `2i`
/// is the point `i`, cell `2i+1` the open interval after it and the last
/// cell is the tail.
fn run_guard(lo: u32, hi: u32, last: u32) -> GuardExpr {
    let lower = (lo > 0).then(|| if lo % 2 == 0 { GuardExpr::Ge(lo / 2) } else { GuardExpr::Gt(lo / 2) });
    let upper = (hi < last).then(|| if hi % 2 == 0 { GuardExpr::Le(hi / 2) } else { GuardExpr::Lt(hi / 2 + 1) });
    match (lower, upper) {
        (None, None) => GuardExpr::True,
        (Some(g), None) | (None, Some(g)) => g,
        (Some(l), Some(u)) => GuardExpr::and(l, u),
    }
}

/// A random partition of the clock values into at most three guards, some
/// of them unions of several runs.
pub fn random_partition(rng: &mut impl Rng, cmax: u32) -> Vec<GuardExpr> {
    let last = 2 * cmax + 1;
    let k = rng.gen_range(1..=3usize);
    let labels: Vec<usize> = (0..=last).map(|_| rng.gen_range(0..k)).collect();
    let mut out = Vec::new();
    for label in 0..k {
        let mut runs = Vec::new();
        let mut h = 0;
        while h <= last {
            if labels[h as usize] != label {
                h += 1;
                continue;
            }
            let lo = h;
            while h < last && labels[h as usize + 1] == label {
                h += 1;
            }
            runs.push(run_guard(lo, h, last));
            h += 1;
        }
        if let Some(g) = runs.into_iter().reduce(GuardExpr::or) {
            // occasionally phrase the same set through a double negation
            out.push(if rng.gen_bool(0.15) { GuardExpr::not(GuardExpr::not(g)) } else { g });
        }
    }
    out
}

pub fn random_formula(rng: &mut impl Rng, locs: &[LocId], depth: u32) -> PosBool {
    if depth == 0 || rng.gen_bool(0.45) {
        return PosBool::atom(*locs.choose(rng).unwrap(), rng.gen_bool(0.35));
    }
    let l = random_formula(rng, locs, depth - 1);
    let r = random_formula(rng, locs, depth - 1);
    if rng.gen_bool(0.5) {
        PosBool::and(l, r)
    } else {
        PosBool::or(l, r)
    }
}

/// A partition-valid automaton with `1..=max_locs` locations, constants up
/// to `max_cmax` and the given alphabet.
pub fn random_ata(rng: &mut impl Rng, max_locs: usize, max_cmax: u32, alphabet: &[&str]) -> Ata {
    let n = rng.gen_range(1..=max_locs);
    let cmax = rng.gen_range(0..=max_cmax);
    let mut b = AtaBuilder::new();
    let syms: Vec<SymbolId> = alphabet.iter().map(|s| b.symbol(s)).collect();
    let locs: Vec<LocId> = (0..n).map(|i| b.location(&format!("q{i}"))).collect();
    for &q in &locs {
        for &s in &syms {
            for g in random_partition(rng, cmax) {
                let f = random_formula(rng, &locs, 2);
                b.rule(q, s, g, f);
            }
        }
        b.set_accepting(q, rng.gen_bool(0.5));
    }
    b.set_initial(locs[0]);
    b.build().unwrap()
}

/// Timestamps on a grid of step `1/den`, delays up to `horizon`.
pub fn random_word(rng: &mut impl Rng, alphabet: &[String], max_len: usize, den: i64, horizon: i64) -> TimedWord {
    let len = rng.gen_range(0..=max_len);
    let mut t = r(0, 1);
    let mut entries = Vec::new();
    for _ in 0..len {
        t += r(rng.gen_range(0..=horizon * den), den);
        entries.push((alphabet.choose(rng).unwrap().clone(), t.clone()));
    }
    TimedWord::new(entries).unwrap()
}

pub fn random_configs(rng: &mut impl Rng, a: &Ata, max: usize, horizon: i64) -> ConfigSet {
    let n = rng.gen_range(1..=max);
    (0..n)
        .map(|_| {
            let den = rng.gen_range(1..=3);
            let q = LocId(rng.gen_range(0..a.num_locations()) as u32);
            Configuration::new(q, r(rng.gen_range(0..=horizon * den), den))
        })
        .collect()
}

/// Acceptance game evaluated on the formula trees themselves: Eve resolves
/// `or`, Adam resolves `and`, each copy runs on alone, and a copy wins at the
/// end of the word iff its location is accepting. Rules are selected by
/// evaluating the guard expressions as written.
pub fn game_accepts(a: &Ata, w: &TimedWord) -> bool {
    let steps: Vec<(SymbolId, Rational)> =
        w.symbols_with_delays().map(|(s, d)| (a.symbol(s).expect("letter of the automaton"), d)).collect();
    wins(a, &steps, 0, a.initial(), r(0, 1))
}

fn wins(a: &Ata, steps: &[(SymbolId, Rational)], i: usize, q: LocId, v: Rational) -> bool {
    let Some((s, d)) = steps.get(i) else {
        return a.is_accepting(q);
    };
    let v = v + d;
    let rules: Vec<_> = a.rules(q, *s).iter().filter(|rule| rule.expr().eval(&v)).collect();
    assert_eq!(rules.len(), 1, "partition condition");
    rules[0]
        .formula()
        .eval(&|atom: &Atom| wins(a, steps, i + 1, atom.loc, if atom.reset { r(0, 1) } else { v.clone() }))
}

/// Every strictly increasing letter map `f` with `w1[i] ⊆ w2[f(i)]`, searched
/// exhaustively.
pub fn brute_preceq(w1: &RegionWord, w2: &RegionWord) -> bool {
    fn go(l1: &[ata_core::Letter], l2: &[ata_core::Letter], from: usize) -> bool {
        let Some((first, rest)) = l1.split_first() else {
            return true;
        };
        (from..l2.len()).any(|j| first.pairs().iter().all(|p| l2[j].pairs().contains(p)) && go(rest, l2, j + 1))
    }
    go(w1.letters(), w2.letters(), 0)
}

pub enum Bfs {
    NonEmpty(usize),
    Empty,
    Unknown,
}

/// Breadth-first search of the abstract system without any domination
/// pruning; only exact repeats are skipped.
pub fn unpruned_bfs(a: &Ata, depth: usize, max_nodes: usize) -> Bfs {
    let w0 = abstract_h(&ConfigSet::initial(a), a.cmax());
    let bad = |w: &RegionWord| w.locations().all(|q| a.is_accepting(q));
    let mut seen: HashSet<RegionWord> = HashSet::new();
    seen.insert(w0.clone());
    let mut frontier = vec![w0];
    for d in 0..=depth {
        if frontier.iter().any(bad) {
            return Bfs::NonEmpty(d);
        }
        if d == depth {
            break;
        }
        let mut next = Vec::new();
        for w in &frontier {
            for (_, v) in successors(w, a).unwrap() {
                if seen.insert(v.clone()) {
                    next.push(v);
                }
            }
            if seen.len() > max_nodes {
                return Bfs::Unknown;
            }
        }
        if next.is_empty() {
            return Bfs::Empty;
        }
        frontier = next;
    }
    Bfs::Unknown
}

/// All words over the given letters with exactly `len` letters.
pub fn words_of_length(letters: &[Vec<(LocId, Region)>], cmax: u32, len: usize) -> Vec<RegionWord> {
    let mut out = vec![Vec::<Vec<(LocId, Region)>>::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|w| {
                letters.iter().map(move |l| {
                    let mut w = w.clone();
                    w.push(l.clone());
                    w
                })
            })
            .collect();
    }
    out.into_iter().map(|w| RegionWord::from_pairs(cmax, w)).collect()
}

pub fn st(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

/// A channel system with 2 or 3 states and 1 or 2 letters.
pub fn random_system(rng: &mut impl Rng) -> ChannelSystem {
    let n = rng.gen_range(2..=3);
    let states: Vec<String> = (0..n).map(|i| format!("q{i}")).collect();
    let letters = if rng.gen_bool(0.5) { st(&["a"]) } else { st(&["a", "b"]) };
    let k = rng.gen_range(2..=4);
    let mut rules = BTreeSet::new();
    for _ in 0..k {
        let from = states.choose(rng).unwrap().clone();
        let to = states[rng.gen_range(1..n)].clone();
        let op = match rng.gen_range(0..3) {
            0 => Op::Eps,
            1 => Op::Write(letters.choose(rng).unwrap().clone()),
            _ => Op::Read(letters.choose(rng).unwrap().clone()),
        };
        rules.insert(ChannelRule { from, op, to });
    }
    ChannelSystem::new(states, "q0".into(), letters, rules.into_iter().collect()).unwrap()
}
