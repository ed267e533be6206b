use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use super::formula::{to_dnf, Dnf, LocId, PosBool, SymbolId};
use super::guard::{normalize_guard, Guard, GuardExpr};
use crate::error::{Error, Result};
use crate::Rational;

/// One entry `delta(q, a, guard) = formula`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    expr: GuardExpr,
    guard: Guard,
    formula: PosBool,
    dnf: Dnf,
}

impl Rule {
    pub fn new(expr: GuardExpr, formula: PosBool) -> Self {
        let guard = normalize_guard(&expr);
        let dnf = to_dnf(&formula);
        Rule { expr, guard, formula, dnf }
    }

    pub fn from_guard(guard: &Guard, formula: PosBool) -> Self {
        Rule::new(guard.to_expr(), formula)
    }

    pub fn expr(&self) -> &GuardExpr {
        &self.expr
    }

    pub fn guard(&self) -> &Guard {
        &self.guard
    }

    pub fn formula(&self) -> &PosBool {
        &self.formula
    }

    pub fn dnf(&self) -> &Dnf {
        &self.dnf
    }
}

/// One-clock alternating timed automaton.
///
/// Rules are stored per `(location, letter)` row. Rows are expected to satisfy
/// the partition condition (see [`check_partition`]); operations that rely on
/// it say so.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ata {
    locations: Vec<String>,
    alphabet: Vec<String>,
    initial: LocId,
    accepting: Vec<bool>,
    rows: Vec<Vec<Vec<Rule>>>,
    cmax: u32,
}

impl Ata {
    pub fn locations(&self) -> &[String] {
        &self.locations
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn initial(&self) -> LocId {
        self.initial
    }

    pub fn is_accepting(&self, q: LocId) -> bool {
        self.accepting[q.index()]
    }

    pub fn accepting(&self) -> impl Iterator<Item = LocId> + '_ {
        self.accepting
            .iter()
            .enumerate()
            .filter(|(_, &f)| f)
            .map(|(i, _)| LocId(i as u32))
    }

    pub fn num_locations(&self) -> usize {
        self.locations.len()
    }

    pub fn location_ids(&self) -> impl Iterator<Item = LocId> {
        (0..self.locations.len() as u32).map(LocId)
    }

    pub fn symbol_ids(&self) -> impl Iterator<Item = SymbolId> {
        (0..self.alphabet.len() as u32).map(SymbolId)
    }

    pub fn location_name(&self, q: LocId) -> &str {
        &self.locations[q.index()]
    }

    pub fn symbol_name(&self, a: SymbolId) -> &str {
        &self.alphabet[a.index()]
    }

    pub fn location(&self, name: &str) -> Option<LocId> {
        self.locations.iter().position(|n| n == name).map(|i| LocId(i as u32))
    }

    pub fn symbol(&self, name: &str) -> Option<SymbolId> {
        self.alphabet.iter().position(|n| n == name).map(|i| SymbolId(i as u32))
    }

    pub fn rules(&self, q: LocId, a: SymbolId) -> &[Rule] {
        &self.rows[q.index()][a.index()]
    }

    /// Largest constant in any guard, 0 if there is none.
    pub fn cmax(&self) -> u32 {
        self.cmax
    }

    pub fn rule_count(&self) -> usize {
        self.rows.iter().flatten().map(Vec::len).sum()
    }

    /// The rule of row `(q, a)` whose guard contains `v`.
    pub fn rule_at(&self, q: LocId, a: SymbolId, v: &Rational) -> Result<&Rule> {
        self.rules(q, a)
            .iter()
            .find(|r| r.guard.contains(v))
            .ok_or_else(|| self.no_rule(q, a))
    }

    /// The rule of row `(q, a)` whose guard contains the clock values
    /// described in half-units (see [`crate::abstraction::Region::half_units`]).
    pub(crate) fn rule_at_half(&self, q: LocId, a: SymbolId, half: u64) -> Result<&Rule> {
        self.rules(q, a)
            .iter()
            .find(|r| r.guard.contains_half(half))
            .ok_or_else(|| self.no_rule(q, a))
    }

    fn no_rule(&self, q: LocId, a: SymbolId) -> Error {
        Error::NoRule {
            location: self.location_name(q).to_string(),
            symbol: self.symbol_name(a).to_string(),
        }
    }

    /// Every formula is a conjunction of atoms.
    pub fn is_purely_universal(&self) -> bool {
        self.rows.iter().flatten().flatten().all(|r| !r.formula.has_or())
    }

    /// Every formula is a disjunction of atoms.
    pub fn is_purely_existential(&self) -> bool {
        self.rows.iter().flatten().flatten().all(|r| !r.formula.has_and())
    }

    pub(crate) fn into_builder(self) -> AtaBuilder {
        let mut b = AtaBuilder::new();
        b.locations = self.locations;
        b.alphabet = self.alphabet;
        b.initial = Some(self.initial);
        b.accepting = self.accepting;
        b.rows = self.rows;
        b.reindex();
        b
    }

    /// Render with location names substituted for ids.
    pub fn formula_display<'a>(&'a self, b: &'a PosBool) -> impl fmt::Display + 'a {
        FormulaDisplay { ata: self, formula: b }
    }
}

struct FormulaDisplay<'a> {
    ata: &'a Ata,
    formula: &'a PosBool,
}

impl FormulaDisplay<'_> {
    fn write(&self, f: &mut fmt::Formatter<'_>, b: &PosBool, parent_and: bool) -> fmt::Result {
        match b {
            PosBool::Atom(a) => {
                if a.reset {
                    write!(f, "({},reset)", self.ata.location_name(a.loc))
                } else {
                    write!(f, "({})", self.ata.location_name(a.loc))
                }
            }
            PosBool::And(l, r) => {
                self.write(f, l, true)?;
                write!(f, " & ")?;
                self.write_right(f, r, true)
            }
            PosBool::Or(l, r) => {
                if parent_and {
                    write!(f, "(")?;
                }
                self.write(f, l, false)?;
                write!(f, " | ")?;
                self.write_right(f, r, false)?;
                if parent_and {
                    write!(f, ")")?;
                }
                Ok(())
            }
        }
    }

    // Right operands of the same connective are parenthesized so that
    // re-parsing (left-associative) rebuilds the same tree.
    fn write_right(&self, f: &mut fmt::Formatter<'_>, b: &PosBool, in_and: bool) -> fmt::Result {
        let same = matches!((b, in_and), (PosBool::And(..), true) | (PosBool::Or(..), false));
        if same {
            write!(f, "(")?;
            self.write(f, b, false)?;
            write!(f, ")")
        } else {
            self.write(f, b, in_and)
        }
    }
}

impl fmt::Display for FormulaDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, self.formula, false)
    }
}

/// Incremental construction of an [`Ata`]; names are interned in insertion order.
#[derive(Clone, Debug, Default)]
pub struct AtaBuilder {
    locations: Vec<String>,
    alphabet: Vec<String>,
    initial: Option<LocId>,
    accepting: Vec<bool>,
    rows: Vec<Vec<Vec<Rule>>>,
    index: HashMap<String, LocId>,
}

impl AtaBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn symbol(&mut self, name: &str) -> SymbolId {
        if let Some(i) = self.alphabet.iter().position(|n| n == name) {
            return SymbolId(i as u32);
        }
        self.alphabet.push(name.to_string());
        for row in &mut self.rows {
            row.push(Vec::new());
        }
        SymbolId(self.alphabet.len() as u32 - 1)
    }

    pub fn location(&mut self, name: &str) -> LocId {
        if let Some(&id) = self.index.get(name) {
            return id;
        }
        let id = LocId(self.locations.len() as u32);
        self.locations.push(name.to_string());
        self.accepting.push(false);
        self.rows.push(vec![Vec::new(); self.alphabet.len()]);
        self.index.insert(name.to_string(), id);
        id
    }

    fn reindex(&mut self) {
        self.index = self
            .locations
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), LocId(i as u32)))
            .collect();
    }

    pub fn has_location(&self, name: &str) -> bool {
        self.locations.iter().any(|n| n == name)
    }

    pub fn set_initial(&mut self, q: LocId) -> &mut Self {
        self.initial = Some(q);
        self
    }

    pub fn set_accepting(&mut self, q: LocId, accepting: bool) -> &mut Self {
        self.accepting[q.index()] = accepting;
        self
    }

    pub fn rule(&mut self, q: LocId, a: SymbolId, guard: GuardExpr, formula: PosBool) -> &mut Self {
        self.rows[q.index()][a.index()].push(Rule::new(guard, formula));
        self
    }

    pub fn push_rule(&mut self, q: LocId, a: SymbolId, rule: Rule) -> &mut Self {
        self.rows[q.index()][a.index()].push(rule);
        self
    }

    pub(crate) fn rows_mut(&mut self) -> &mut Vec<Vec<Vec<Rule>>> {
        &mut self.rows
    }

    pub fn build(self) -> Result<Ata> {
        let initial = self
            .initial
            .ok_or_else(|| Error::UnknownLocation("<initial location not set>".into()))?;
        let n = self.locations.len() as u32;
        for (i, name) in self.locations.iter().enumerate() {
            if self.locations[..i].contains(name) {
                return Err(Error::DuplicateName(name.clone()));
            }
        }
        for (i, name) in self.alphabet.iter().enumerate() {
            if self.alphabet[..i].contains(name) {
                return Err(Error::DuplicateName(name.clone()));
            }
        }
        let mut cmax = 0;
        for rule in self.rows.iter().flatten().flatten() {
            if let Some(bad) = rule.formula.atoms().iter().find(|a| a.loc.0 >= n) {
                return Err(Error::UnknownLocation(bad.loc.to_string()));
            }
            cmax = cmax.max(rule.expr.max_constant()).max(rule.guard.max_constant());
        }
        Ok(Ata {
            locations: self.locations,
            alphabet: self.alphabet,
            initial,
            accepting: self.accepting,
            rows: self.rows,
            cmax,
        })
    }
}

/// Which rows [`check_partition`] inspects.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum PartitionScope {
    /// Every location, reachable or not.
    #[default]
    Strict,
    /// Only locations syntactically reachable from the initial one.
    Reachable,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum ViolationKind {
    /// Clock values covered by no rule.
    Gap(Guard),
    /// Clock values covered by more than one rule.
    Overlap(Guard),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub location: String,
    pub symbol: String,
    pub kind: ViolationKind,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ViolationKind::Gap(g) => {
                write!(f, "({}, {}): no rule covers {}", self.location, self.symbol, g)
            }
            ViolationKind::Overlap(g) => {
                write!(f, "({}, {}): rules overlap on {}", self.location, self.symbol, g)
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PartitionReport {
    pub violations: Vec<Violation>,
}

impl PartitionReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for PartitionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return write!(f, "ok");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{}", v)?;
        }
        Ok(())
    }
}

/// Gap and overlap of a list of guards with respect to a partition of `R+`.
pub(crate) fn partition_defects<'a>(guards: impl IntoIterator<Item = &'a Guard>) -> (Guard, Guard) {
    let mut covered = Guard::empty();
    let mut overlap = Guard::empty();
    for g in guards {
        overlap = overlap.union(&covered.intersect(g));
        covered = covered.union(g);
    }
    (covered.complement(), overlap)
}

pub(crate) fn reachable_locations(a: &Ata) -> Vec<bool> {
    let mut seen = vec![false; a.num_locations()];
    let mut stack = vec![a.initial()];
    seen[a.initial().index()] = true;
    while let Some(q) = stack.pop() {
        for sym in a.symbol_ids() {
            for rule in a.rules(q, sym) {
                for atom in rule.formula().atoms() {
                    if !seen[atom.loc.index()] {
                        seen[atom.loc.index()] = true;
                        stack.push(atom.loc);
                    }
                }
            }
        }
    }
    seen
}

/// Check that for every row the rule guards partition the nonnegative reals.
pub fn check_partition(a: &Ata) -> PartitionReport {
    check_partition_in(a, PartitionScope::Strict)
}

pub fn check_partition_in(a: &Ata, scope: PartitionScope) -> PartitionReport {
    let reachable = match scope {
        PartitionScope::Strict => vec![true; a.num_locations()],
        PartitionScope::Reachable => reachable_locations(a),
    };
    let mut violations = Vec::new();
    for q in a.location_ids().filter(|q| reachable[q.index()]) {
        for sym in a.symbol_ids() {
            let (gap, overlap) = partition_defects(a.rules(q, sym).iter().map(Rule::guard));
            let mut push = |kind| {
                violations.push(Violation {
                    location: a.location_name(q).to_string(),
                    symbol: a.symbol_name(sym).to_string(),
                    kind,
                })
            };
            if !gap.is_empty() {
                push(ViolationKind::Gap(gap));
            }
            if !overlap.is_empty() {
                push(ViolationKind::Overlap(overlap));
            }
        }
    }
    PartitionReport { violations }
}

pub(crate) fn require_partition(a: &Ata) -> Result<()> {
    let report = check_partition(a);
    if report.is_ok() {
        Ok(())
    } else {
        Err(Error::Partition(report))
    }
}
