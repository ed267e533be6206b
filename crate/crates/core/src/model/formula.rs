//! Positive boolean transition formulas and their disjunctive normal form.

use std::fmt;

use serde::{Deserialize, Serialize};

/// Interned location id.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LocId(pub u32);

impl LocId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for LocId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// Interned input letter id.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SymbolId(pub u32);

impl SymbolId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A leaf `(q, r)`: move to `q`, resetting the clock iff `reset`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Atom {
    pub loc: LocId,
    pub reset: bool,
}

impl Atom {
    pub fn keep(loc: LocId) -> Self {
        Atom { loc, reset: false }
    }

    pub fn reset(loc: LocId) -> Self {
        Atom { loc, reset: true }
    }
}

/// Positive boolean formula over atoms. There are no constants, so every
/// formula has at least one leaf.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PosBool {
    Atom(Atom),
    And(Box<PosBool>, Box<PosBool>),
    Or(Box<PosBool>, Box<PosBool>),
}

impl PosBool {
    pub fn atom(loc: LocId, reset: bool) -> Self {
        PosBool::Atom(Atom { loc, reset })
    }

    pub fn and(a: PosBool, b: PosBool) -> Self {
        PosBool::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: PosBool, b: PosBool) -> Self {
        PosBool::Or(Box::new(a), Box::new(b))
    }

    /// Left-nested conjunction of a nonempty list.
    pub fn all_of(items: impl IntoIterator<Item = PosBool>) -> Option<Self> {
        items.into_iter().reduce(PosBool::and)
    }

    /// Left-nested disjunction of a nonempty list.
    pub fn any_of(items: impl IntoIterator<Item = PosBool>) -> Option<Self> {
        items.into_iter().reduce(PosBool::or)
    }

    /// Swap conjunction and disjunction everywhere.
    pub fn dual(&self) -> PosBool {
        match self {
            PosBool::Atom(a) => PosBool::Atom(*a),
            PosBool::And(a, b) => PosBool::or(a.dual(), b.dual()),
            PosBool::Or(a, b) => PosBool::and(a.dual(), b.dual()),
        }
    }

    pub fn has_and(&self) -> bool {
        match self {
            PosBool::Atom(_) => false,
            PosBool::And(..) => true,
            PosBool::Or(a, b) => a.has_and() || b.has_and(),
        }
    }

    pub fn has_or(&self) -> bool {
        match self {
            PosBool::Atom(_) => false,
            PosBool::Or(..) => true,
            PosBool::And(a, b) => a.has_or() || b.has_or(),
        }
    }

    pub fn atoms(&self) -> Vec<Atom> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut Vec<Atom>) {
        match self {
            PosBool::Atom(a) => out.push(*a),
            PosBool::And(a, b) | PosBool::Or(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }

    /// Evaluate under a truth assignment of atoms.
    pub fn eval(&self, truth: &impl Fn(&Atom) -> bool) -> bool {
        match self {
            PosBool::Atom(a) => truth(a),
            PosBool::And(a, b) => a.eval(truth) && b.eval(truth),
            PosBool::Or(a, b) => a.eval(truth) || b.eval(truth),
        }
    }

    pub fn map_locations(&self, f: &impl Fn(LocId) -> LocId) -> PosBool {
        match self {
            PosBool::Atom(a) => PosBool::atom(f(a.loc), a.reset),
            PosBool::And(a, b) => PosBool::and(a.map_locations(f), b.map_locations(f)),
            PosBool::Or(a, b) => PosBool::or(a.map_locations(f), b.map_locations(f)),
        }
    }
}

/// One disjunct of a DNF: a set of atoms, kept sorted.
pub type Conjunct = Vec<Atom>;

/// Disjunctive normal form: a nonempty list of nonempty conjuncts, with no
/// duplicate conjuncts and no conjunct containing another.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Dnf {
    conjuncts: Vec<Conjunct>,
}

impl Dnf {
    pub fn conjuncts(&self) -> &[Conjunct] {
        &self.conjuncts
    }

    pub fn len(&self) -> usize {
        self.conjuncts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.conjuncts.is_empty()
    }
}

fn is_subset(small: &[Atom], big: &[Atom]) -> bool {
    let mut it = big.iter();
    small.iter().all(|x| it.by_ref().any(|y| y == x))
}

fn expand(b: &PosBool) -> Vec<Conjunct> {
    match b {
        PosBool::Atom(a) => vec![vec![*a]],
        PosBool::Or(l, r) => {
            let mut out = expand(l);
            out.extend(expand(r));
            out
        }
        PosBool::And(l, r) => {
            let left = expand(l);
            let right = expand(r);
            let mut out = Vec::with_capacity(left.len() * right.len());
            for x in &left {
                for y in &right {
                    let mut c = x.clone();
                    c.extend_from_slice(y);
                    c.sort();
                    c.dedup();
                    out.push(c);
                }
            }
            out
        }
    }
}

/// Put a positive formula in DNF, removing duplicates and absorbed conjuncts.
/// The surviving conjuncts keep the order in which the expansion produced them.
pub fn to_dnf(b: &PosBool) -> Dnf {
    let raw = expand(b);
    let mut kept: Vec<Conjunct> = Vec::with_capacity(raw.len());
    for (i, c) in raw.iter().enumerate() {
        let absorbed = raw.iter().enumerate().any(|(j, d)| {
            if i == j {
                return false;
            }
            // a strictly smaller conjunct absorbs; among equal ones keep the first
            (d.len() < c.len() && is_subset(d, c)) || (d == c && j < i)
        });
        if !absorbed {
            kept.push(c.clone());
        }
    }
    Dnf { conjuncts: kept }
}
