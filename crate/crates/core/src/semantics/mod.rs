//! Concrete semantics: configuration sets, their successors under a timed
//! letter, and word membership.

mod word;

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{Ata, Atom, LocId, SymbolId};
use crate::Rational;

pub(crate) use word::fmt_rational;
pub use word::TimedWord;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Configuration {
    pub loc: LocId,
    pub value: Rational,
}

impl Configuration {
    pub fn new(loc: LocId, value: Rational) -> Self {
        Configuration { loc, value }
    }
}

/// A finite set of configurations, ordered by location then clock value.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConfigSet(BTreeSet<Configuration>);

impl ConfigSet {
    pub fn new() -> Self {
        ConfigSet::default()
    }

    /// `{(q0, 0)}`
    pub fn initial(a: &Ata) -> Self {
        [Configuration::new(a.initial(), Rational::zero())].into_iter().collect()
    }

    pub fn insert(&mut self, c: Configuration) -> bool {
        self.0.insert(c)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Configuration> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Every clock advanced by `t`.
    pub fn delayed(&self, t: &Rational) -> ConfigSet {
        self.iter().map(|c| Configuration::new(c.loc, &c.value + t)).collect()
    }

    pub fn display<'a>(&'a self, a: &'a Ata) -> impl fmt::Display + 'a {
        ConfigSetDisplay { set: self, ata: a }
    }
}

impl FromIterator<Configuration> for ConfigSet {
    fn from_iter<I: IntoIterator<Item = Configuration>>(iter: I) -> Self {
        ConfigSet(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a ConfigSet {
    type Item = &'a Configuration;
    type IntoIter = std::collections::btree_set::Iter<'a, Configuration>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

struct ConfigSetDisplay<'a> {
    set: &'a ConfigSet,
    ata: &'a Ata,
}

impl fmt::Display for ConfigSetDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, c) in self.set.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "({}, {})", self.ata.location_name(c.loc), fmt_rational(&c.value))?;
        }
        write!(f, "}}")
    }
}

#[derive(Serialize)]
struct SerConfig {
    location: u32,
    value: String,
}

impl Serialize for ConfigSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.iter().map(|c| SerConfig { location: c.loc.0, value: fmt_rational(&c.value) }))
    }
}

/// The options of each configuration of `p` after the delay: the DNF
/// conjuncts of the rule that applies to it.
fn options<'a>(
    p: &ConfigSet,
    symbol: SymbolId,
    delay: &Rational,
    a: &'a Ata,
) -> Result<Vec<(Rational, &'a [Vec<Atom>])>> {
    p.iter()
        .map(|c| {
            let v = &c.value + delay;
            let rule = a.rule_at(c.loc, symbol, &v)?;
            Ok((v, rule.dnf().conjuncts()))
        })
        .collect()
}

/// Successor sets in choice order (first configuration's conjunct varies
/// slowest), without duplicates.
fn successor_list(p: &ConfigSet, symbol: SymbolId, delay: &Rational, a: &Ata) -> Result<Vec<ConfigSet>> {
    let opts = options(p, symbol, delay, a)?;
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    let mut choice = vec![0usize; opts.len()];
    loop {
        let mut next = ConfigSet::new();
        for ((v, conjuncts), &k) in opts.iter().zip(&choice) {
            for atom in &conjuncts[k] {
                let value = if atom.reset { Rational::zero() } else { v.clone() };
                next.insert(Configuration::new(atom.loc, value));
            }
        }
        if seen.insert(next.clone()) {
            out.push(next);
        }
        // odometer over the choices, last position fastest
        let mut i = opts.len();
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            choice[i] += 1;
            if choice[i] < opts[i].1.len() {
                break;
            }
            choice[i] = 0;
        }
    }
}

/// All configuration sets reachable from `p` by waiting `delay` and reading
/// `symbol`, one conjunct chosen per configuration.
pub fn configuration_successors(
    p: &ConfigSet,
    symbol: SymbolId,
    delay: &Rational,
    a: &Ata,
) -> Result<BTreeSet<ConfigSet>> {
    Ok(successor_list(p, symbol, delay, a)?.into_iter().collect())
}

/// All locations of `p` are accepting (true for the empty set).
pub fn is_bad(p: &ConfigSet, a: &Ata) -> bool {
    p.iter().all(|c| a.is_accepting(c.loc))
}

pub(crate) fn resolve_symbols(a: &Ata, w: &TimedWord) -> Result<Vec<(SymbolId, Rational)>> {
    w.symbols_with_delays()
        .map(|(s, d)| {
            a.symbol(s).map(|id| (id, d)).ok_or_else(|| Error::UnknownSymbol(s.to_string()))
        })
        .collect()
}

/// Word membership: some sequence of choices leads from `{(q0, 0)}` to a
/// configuration set whose locations are all accepting.
pub fn accepts(a: &Ata, w: &TimedWord) -> Result<bool> {
    let steps = resolve_symbols(a, w)?;
    let mut failed: HashSet<(usize, ConfigSet)> = HashSet::new();
    search(a, &steps, 0, ConfigSet::initial(a), &mut failed)
}

fn search(
    a: &Ata,
    steps: &[(SymbolId, Rational)],
    pos: usize,
    p: ConfigSet,
    failed: &mut HashSet<(usize, ConfigSet)>,
) -> Result<bool> {
    if pos == steps.len() {
        return Ok(is_bad(&p, a));
    }
    if failed.contains(&(pos, p.clone())) {
        return Ok(false);
    }
    let (symbol, delay) = &steps[pos];
    for next in successor_list(&p, *symbol, delay, a)? {
        if search(a, steps, pos + 1, next, failed)? {
            return Ok(true);
        }
    }
    failed.insert((pos, p));
    Ok(false)
}

/// A choice sequence witnessing acceptance: the configuration sets visited,
/// starting with `{(q0, 0)}`. `None` when the word is rejected.
pub fn accepting_run(a: &Ata, w: &TimedWord) -> Result<Option<Vec<ConfigSet>>> {
    let steps = resolve_symbols(a, w)?;
    let mut failed = HashSet::new();
    let mut run = vec![ConfigSet::initial(a)];
    if run_search(a, &steps, &mut run, &mut failed)? {
        Ok(Some(run))
    } else {
        Ok(None)
    }
}

fn run_search(
    a: &Ata,
    steps: &[(SymbolId, Rational)],
    run: &mut Vec<ConfigSet>,
    failed: &mut HashSet<(usize, ConfigSet)>,
) -> Result<bool> {
    let pos = run.len() - 1;
    let p = run[pos].clone();
    if pos == steps.len() {
        return Ok(is_bad(&p, a));
    }
    if failed.contains(&(pos, p.clone())) {
        return Ok(false);
    }
    let (symbol, delay) = &steps[pos];
    for next in successor_list(&p, *symbol, delay, a)? {
        run.push(next);
        if run_search(a, steps, run, failed)? {
            return Ok(true);
        }
        run.pop();
    }
    failed.insert((pos, p));
    Ok(false)
}
