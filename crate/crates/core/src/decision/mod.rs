//! Emptiness by breadth-first search of the region-word transition system,
//! pruned with the domination order; universality and containment reduce to
//! emptiness through complement and product.

mod witness;

use std::time::{Duration, Instant};

use serde::Serialize;

use crate::abstraction::{abstract_h, is_bad_word, preceq, successors, RegionWord};
use crate::error::{Error, Result};
use crate::model::{combine, complement, dead_locations, require_partition, Ata, Mode, SymbolId};
use crate::semantics::{ConfigSet, TimedWord};

pub use witness::concretize_witness;

/// Which earlier nodes may prune a new one.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Pruning {
    /// A node is dropped when one of its ancestors is below it. Terminates,
    /// but the tree is often far too wide in practice.
    Ancestors,
    /// A node is dropped when any node kept so far is below it.
    #[default]
    Global,
}

#[derive(Clone, Debug)]
pub struct SearchOptions {
    pub pruning: Pruning,
    /// Drop words mentioning a location from which acceptance is impossible
    /// (see [`crate::model::dead_locations`]).
    pub prune_dead: bool,
    pub max_nodes: Option<usize>,
    pub deadline: Option<Instant>,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { pruning: Pruning::Global, prune_dead: true, max_nodes: None, deadline: None }
    }
}

impl SearchOptions {
    pub fn with_budget(mut self, budget: Duration) -> Self {
        self.deadline = Some(Instant::now() + budget);
        self
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    pub nodes_expanded: usize,
    pub nodes_pruned: usize,
    pub elapsed_ms: u128,
}

/// A path in the abstract system: the initial word and the labeled steps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegionPath {
    pub start: RegionWord,
    pub steps: Vec<(SymbolId, RegionWord)>,
}

impl RegionPath {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn last(&self) -> &RegionWord {
        self.steps.last().map_or(&self.start, |(_, w)| w)
    }

    /// One entry per word: the letter read to reach it (none for the start)
    /// and the word rendered with `a`'s names.
    pub fn render(&self, a: &Ata) -> Vec<PathEntry> {
        std::iter::once(PathEntry { letter: None, word: self.start.display(a).to_string() })
            .chain(self.steps.iter().map(|(s, w)| PathEntry {
                letter: Some(a.symbol_name(*s).to_string()),
                word: w.display(a).to_string(),
            }))
            .collect()
    }

    fn sort_key(&self) -> String {
        let mut key = self.start.to_string();
        for (s, w) in &self.steps {
            key.push_str(&format!(" -{}-> {}", s.0, w));
        }
        key
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PathEntry {
    pub letter: Option<String>,
    pub word: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EmptinessVerdict {
    Empty,
    NonEmpty { path: RegionPath, witness: TimedWord },
}

impl EmptinessVerdict {
    pub fn is_empty(&self) -> bool {
        matches!(self, EmptinessVerdict::Empty)
    }

    pub fn witness(&self) -> Option<&TimedWord> {
        match self {
            EmptinessVerdict::Empty => None,
            EmptinessVerdict::NonEmpty { witness, .. } => Some(witness),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum UniversalityVerdict {
    Universal,
    CounterExample(TimedWord),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ContainmentVerdict {
    Contained,
    CounterExample(TimedWord),
}

/// Outcome of a search together with its counters and the automaton that was
/// actually searched (the input itself, its complement, or a product).
#[derive(Clone, Debug)]
pub struct Search {
    pub verdict: EmptinessVerdict,
    pub stats: SearchStats,
    pub searched: Ata,
}

impl Search {
    /// Machine-readable summary; `verdict` names the outcome of the question
    /// that was asked.
    pub fn report(&self, verdict: &str) -> Report {
        let (witness, region_path) = match &self.verdict {
            EmptinessVerdict::Empty => (None, Vec::new()),
            EmptinessVerdict::NonEmpty { path, witness } => {
                (Some(witness.clone()), path.render(&self.searched))
            }
        };
        Report {
            verdict: verdict.to_string(),
            witness,
            region_path,
            nodes_expanded: self.stats.nodes_expanded,
            nodes_pruned: self.stats.nodes_pruned,
            elapsed_ms: self.stats.elapsed_ms,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub verdict: String,
    pub witness: Option<TimedWord>,
    pub region_path: Vec<PathEntry>,
    pub nodes_expanded: usize,
    pub nodes_pruned: usize,
    pub elapsed_ms: u128,
}

/// The abstraction of `{(q0, 0)}`.
pub fn initial_word(a: &Ata) -> RegionWord {
    abstract_h(&ConfigSet::initial(a), a.cmax())
}

pub fn check_empty(a: &Ata) -> Result<EmptinessVerdict> {
    Ok(check_empty_with(a, &SearchOptions::default())?.verdict)
}

struct Node {
    word: RegionWord,
    parent: Option<usize>,
    label: Option<SymbolId>,
}

fn path_to(nodes: &[Node], mut i: usize) -> RegionPath {
    let mut steps = Vec::new();
    while let Some(p) = nodes[i].parent {
        steps.push((nodes[i].label.expect("non-root"), nodes[i].word.clone()));
        i = p;
    }
    steps.reverse();
    RegionPath { start: nodes[i].word.clone(), steps }
}

pub fn check_empty_with(a: &Ata, opts: &SearchOptions) -> Result<Search> {
    require_partition(a)?;
    let started = Instant::now();
    let mut stats = SearchStats::default();
    let dead = if opts.prune_dead { dead_locations(a) } else { vec![false; a.num_locations()] };
    let finish = |verdict, mut stats: SearchStats| {
        stats.elapsed_ms = started.elapsed().as_millis();
        Ok(Search { verdict, stats, searched: a.clone() })
    };

    let root = initial_word(a);
    let mut nodes = vec![Node { word: root, parent: None, label: None }];
    if is_bad_word(&nodes[0].word, a) {
        let path = path_to(&nodes, 0);
        let witness = concretize_witness(&path, a)?;
        return finish(EmptinessVerdict::NonEmpty { path, witness }, stats);
    }
    let mut frontier = vec![0usize];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        let mut bad: Vec<RegionPath> = Vec::new();
        for &i in &frontier {
            if opts.max_nodes.is_some_and(|m| stats.nodes_expanded >= m)
                || opts.deadline.is_some_and(|d| Instant::now() >= d)
            {
                return Err(Error::BudgetExceeded { nodes: stats.nodes_expanded });
            }
            stats.nodes_expanded += 1;
            for (symbol, w) in successors(&nodes[i].word, a)? {
                if w.locations().any(|q| dead[q.index()]) {
                    stats.nodes_pruned += 1;
                    continue;
                }
                let dominated = match opts.pruning {
                    Pruning::Ancestors => {
                        let mut cur = Some(i);
                        let mut hit = false;
                        while let Some(k) = cur {
                            if preceq(&nodes[k].word, &w) {
                                hit = true;
                                break;
                            }
                            cur = nodes[k].parent;
                        }
                        hit
                    }
                    Pruning::Global => nodes.iter().any(|n| preceq(&n.word, &w)),
                };
                if dominated {
                    stats.nodes_pruned += 1;
                    continue;
                }
                let is_bad = is_bad_word(&w, a);
                nodes.push(Node { word: w, parent: Some(i), label: Some(symbol) });
                if is_bad {
                    bad.push(path_to(&nodes, nodes.len() - 1));
                } else {
                    next.push(nodes.len() - 1);
                }
            }
        }
        if let Some(path) = bad.into_iter().min_by_key(RegionPath::sort_key) {
            let witness = concretize_witness(&path, a)?;
            return finish(EmptinessVerdict::NonEmpty { path, witness }, stats);
        }
        frontier = next;
    }
    finish(EmptinessVerdict::Empty, stats)
}

/// Search for a word rejected by `a`.
pub fn check_universal(a: &Ata) -> Result<UniversalityVerdict> {
    let s = check_universal_with(a, &SearchOptions::default())?;
    Ok(match s.verdict {
        EmptinessVerdict::Empty => UniversalityVerdict::Universal,
        EmptinessVerdict::NonEmpty { witness, .. } => UniversalityVerdict::CounterExample(witness),
    })
}

pub fn check_universal_with(a: &Ata, opts: &SearchOptions) -> Result<Search> {
    check_empty_with(&complement(a)?, opts)
}

/// Search for a word accepted by `a` and rejected by `b`.
pub fn check_contains(a: &Ata, b: &Ata) -> Result<ContainmentVerdict> {
    let s = check_contains_with(a, b, &SearchOptions::default())?;
    Ok(match s.verdict {
        EmptinessVerdict::Empty => ContainmentVerdict::Contained,
        EmptinessVerdict::NonEmpty { witness, .. } => ContainmentVerdict::CounterExample(witness),
    })
}

pub fn check_contains_with(a: &Ata, b: &Ata, opts: &SearchOptions) -> Result<Search> {
    let product = combine(a, &complement(b)?, Mode::And)?;
    check_empty_with(&product, opts)
}
