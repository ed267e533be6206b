//! Boolean closure: complement by dualization, product with a fresh initial
//! location, normalization of nondeterministic automata, and sink completion.

use serde::{Deserialize, Serialize};

use super::ata::{partition_defects, require_partition, Ata, AtaBuilder, Rule};
use super::formula::{LocId, PosBool, SymbolId};
use super::guard::{normalize_guard, Guard, GuardExpr};
use crate::error::{Error, Result};

/// Complement: swap `and`/`or` in every formula and invert the accepting set.
pub fn complement(a: &Ata) -> Result<Ata> {
    require_partition(a)?;
    let mut b = a.clone().into_builder();
    for row in b.rows_mut().iter_mut().flatten() {
        for rule in row.iter_mut() {
            *rule = Rule::new(rule.expr().clone(), rule.formula().dual());
        }
    }
    for q in a.location_ids() {
        b.set_accepting(q, !a.is_accepting(q));
    }
    b.build()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mode {
    And,
    Or,
}

/// Location naming used by [`combine_with`].
#[derive(Clone, Debug)]
pub struct CombineNames<'a> {
    pub left_prefix: &'a str,
    pub right_prefix: &'a str,
    pub initial: &'a str,
}

impl Default for CombineNames<'_> {
    fn default() -> Self {
        CombineNames { left_prefix: "l.", right_prefix: "r.", initial: "init" }
    }
}

/// Intersection (`Mode::And`) or union (`Mode::Or`) of two automata over the
/// same alphabet.
pub fn combine(a: &Ata, b: &Ata, mode: Mode) -> Result<Ata> {
    combine_with(a, b, mode, &CombineNames::default())
}

pub fn combine_with(a: &Ata, b: &Ata, mode: Mode, names: &CombineNames<'_>) -> Result<Ata> {
    let mut sorted_a = a.alphabet().to_vec();
    let mut sorted_b = b.alphabet().to_vec();
    sorted_a.sort();
    sorted_b.sort();
    if sorted_a != sorted_b {
        return Err(Error::AlphabetMismatch);
    }
    require_partition(a)?;
    require_partition(b)?;

    let mut out = AtaBuilder::new();
    for s in a.alphabet() {
        out.symbol(s);
    }
    let init = out.location(names.initial);
    let mut insert = |ata: &Ata, prefix: &str| -> Result<Vec<LocId>> {
        let ids: Vec<LocId> = ata
            .locations()
            .iter()
            .map(|n| {
                let name = format!("{prefix}{n}");
                if out.has_location(&name) {
                    Err(Error::DuplicateName(name))
                } else {
                    Ok(out.location(&name))
                }
            })
            .collect::<Result<_>>()?;
        Ok(ids)
    };
    let left_ids = insert(a, names.left_prefix)?;
    let right_ids = insert(b, names.right_prefix)?;

    copy_rows(&mut out, a, &left_ids, a)?;
    copy_rows(&mut out, b, &right_ids, a)?;

    for sym in a.symbol_ids() {
        let sym_b = b.symbol(a.symbol_name(sym)).expect("alphabets checked");
        for ra in a.rules(a.initial(), sym) {
            for rb in b.rules(b.initial(), sym_b) {
                let cell = ra.guard().intersect(rb.guard());
                if cell.is_empty() {
                    continue;
                }
                let fa = ra.formula().map_locations(&|q| left_ids[q.index()]);
                let fb = rb.formula().map_locations(&|q| right_ids[q.index()]);
                let f = match mode {
                    Mode::And => PosBool::and(fa, fb),
                    Mode::Or => PosBool::or(fa, fb),
                };
                out.push_rule(init, sym, Rule::from_guard(&cell, f));
            }
        }
    }

    for q in a.location_ids() {
        out.set_accepting(left_ids[q.index()], a.is_accepting(q));
    }
    for q in b.location_ids() {
        out.set_accepting(right_ids[q.index()], b.is_accepting(q));
    }
    let (fa, fb) = (a.is_accepting(a.initial()), b.is_accepting(b.initial()));
    out.set_accepting(
        init,
        match mode {
            Mode::And => fa && fb,
            Mode::Or => fa || fb,
        },
    );
    out.set_initial(init);
    out.build()
}

fn copy_rows(out: &mut AtaBuilder, src: &Ata, ids: &[LocId], target_alphabet: &Ata) -> Result<()> {
    for q in src.location_ids() {
        for sym in src.symbol_ids() {
            let target_sym = target_alphabet
                .symbol(src.symbol_name(sym))
                .ok_or_else(|| Error::UnknownSymbol(src.symbol_name(sym).to_string()))?;
            for rule in src.rules(q, sym) {
                let f = rule.formula().map_locations(&|l| ids[l.index()]);
                out.push_rule(ids[q.index()], target_sym, Rule::new(rule.expr().clone(), f));
            }
        }
    }
    Ok(())
}

fn fresh_name(taken: impl Fn(&str) -> bool, base: &str) -> String {
    let mut name = base.to_string();
    while taken(&name) {
        name.push('\'');
    }
    name
}

/// Fill every gap of every row with a rule to a non-accepting sink that loops
/// on all letters. Overlaps are left alone. Returns the input unchanged when
/// there is no gap.
pub fn complete_with_sink(a: &Ata) -> Result<Ata> {
    let gaps: Vec<(LocId, SymbolId, Guard)> = a
        .location_ids()
        .flat_map(|q| a.symbol_ids().map(move |s| (q, s)))
        .filter_map(|(q, s)| {
            let (gap, _) = partition_defects(a.rules(q, s).iter().map(Rule::guard));
            (!gap.is_empty()).then_some((q, s, gap))
        })
        .collect();
    if gaps.is_empty() {
        return Ok(a.clone());
    }
    let sink_name = fresh_name(|n| a.location(n).is_some(), "sink");
    let mut b = a.clone().into_builder();
    let sink = b.location(&sink_name);
    for (q, s, gap) in gaps {
        b.push_rule(q, s, Rule::from_guard(&gap, PosBool::atom(sink, false)));
    }
    for s in a.symbol_ids() {
        b.rule(sink, s, GuardExpr::True, PosBool::atom(sink, false));
    }
    b.build()
}

/// A plain nondeterministic one-clock timed automaton: a set of edges
/// `(q, a, guard, q', reset)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Nta {
    pub locations: Vec<String>,
    pub alphabet: Vec<String>,
    pub initial: LocId,
    pub accepting: Vec<LocId>,
    pub edges: Vec<NtaEdge>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NtaEdge {
    pub from: LocId,
    pub symbol: SymbolId,
    pub guard: GuardExpr,
    pub to: LocId,
    pub reset: bool,
}

impl Nta {
    fn check(&self) -> Result<()> {
        let n = self.locations.len() as u32;
        let bad_loc = |q: LocId| (q.0 >= n).then(|| Error::UnknownLocation(q.to_string()));
        if let Some(e) = bad_loc(self.initial) {
            return Err(e);
        }
        for &q in &self.accepting {
            if let Some(e) = bad_loc(q) {
                return Err(e);
            }
        }
        for e in &self.edges {
            if let Some(err) = bad_loc(e.from).or_else(|| bad_loc(e.to)) {
                return Err(err);
            }
            if e.symbol.index() >= self.alphabet.len() {
                return Err(Error::UnknownSymbol(format!("{:?}", e.symbol)));
            }
        }
        Ok(())
    }

    /// Reference semantics: does some run over `word` end in an accepting
    /// location. Used as an independent check of [`from_nta`].
    pub fn accepts(&self, word: &crate::semantics::TimedWord) -> Result<bool> {
        use crate::Rational;
        use num_traits::Zero;
        use std::collections::BTreeSet;
        self.check()?;
        let mut current: BTreeSet<(LocId, Rational)> = BTreeSet::new();
        current.insert((self.initial, Rational::zero()));
        for (symbol, delay) in word.symbols_with_delays() {
            let sym = self
                .alphabet
                .iter()
                .position(|s| s == symbol)
                .map(|i| SymbolId(i as u32))
                .ok_or_else(|| Error::UnknownSymbol(symbol.to_string()))?;
            let mut next = BTreeSet::new();
            for (q, v) in &current {
                let v = v + &delay;
                for e in self.edges.iter().filter(|e| e.from == *q && e.symbol == sym) {
                    if e.guard.eval(&v) {
                        let v2 = if e.reset { Rational::zero() } else { v.clone() };
                        next.insert((e.to, v2));
                    }
                }
            }
            current = next;
        }
        Ok(current.iter().any(|(q, _)| self.accepting.contains(q)))
    }
}

/// Equivalent purely existential automaton satisfying the partition condition.
///
/// For each row the clock line is cut into the nonempty cells of the boolean
/// combinations of the row's guards; a cell maps to the disjunction of the
/// targets of the guards containing it, or to the extra sink location when no
/// guard contains it.
pub fn from_nta(n: &Nta) -> Result<Ata> {
    n.check()?;
    let mut b = AtaBuilder::new();
    for s in &n.alphabet {
        b.symbol(s);
    }
    for q in &n.locations {
        b.location(q);
    }
    let sink_name = fresh_name(|x| n.locations.iter().any(|l| l == x), "sink");
    let sink = b.location(&sink_name);
    let guards: Vec<Guard> = n.edges.iter().map(|e| normalize_guard(&e.guard)).collect();
    let bound = guards.iter().map(Guard::max_constant).max().unwrap_or(0);

    for (qi, _) in n.locations.iter().enumerate() {
        let q = LocId(qi as u32);
        for si in 0..n.alphabet.len() {
            let sym = SymbolId(si as u32);
            let row: Vec<usize> = (0..n.edges.len())
                .filter(|&i| n.edges[i].from == q && n.edges[i].symbol == sym)
                .collect();
            // cells keyed by the set X of row edges whose guard contains them
            let mut cells: Vec<(Vec<usize>, Guard)> = Vec::new();
            for half in 0..=(2 * bound as u64 + 1) {
                let members: Vec<usize> =
                    row.iter().copied().filter(|&i| guards[i].contains_half(half)).collect();
                let cell = half_cell(half, bound);
                match cells.iter_mut().find(|(x, _)| *x == members) {
                    Some((_, g)) => *g = g.union(&cell),
                    None => cells.push((members, cell)),
                }
            }
            for (members, cell) in cells {
                let mut atoms: Vec<(LocId, bool)> = Vec::new();
                for i in members {
                    let t = (n.edges[i].to, n.edges[i].reset);
                    if !atoms.contains(&t) {
                        atoms.push(t);
                    }
                }
                let formula = PosBool::any_of(atoms.into_iter().map(|(l, r)| PosBool::atom(l, r)))
                    .unwrap_or_else(|| PosBool::atom(sink, false));
                b.push_rule(q, sym, Rule::from_guard(&cell, formula));
            }
        }
    }
    for si in 0..n.alphabet.len() {
        b.rule(sink, SymbolId(si as u32), GuardExpr::True, PosBool::atom(sink, false));
    }
    for &q in &n.accepting {
        b.set_accepting(q, true);
    }
    b.set_initial(n.initial);
    b.build()
}

/// The elementary cell with index `half` (`{k}` for `2k`, `(k,k+1)` for
/// `2k+1`, and `(bound, inf)` for the last index).
fn half_cell(half: u64, bound: u32) -> Guard {
    let k = (half / 2) as u32;
    if half == 2 * bound as u64 + 1 {
        Guard::at_most(bound).complement()
    } else if half % 2 == 0 {
        Guard::point(k)
    } else {
        Guard::at_most(k).complement().intersect(&Guard::less_than(k + 1))
    }
}
