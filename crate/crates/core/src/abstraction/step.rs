//! Successors in the abstract transition system.
//!
//! A letter made only of tail pairs may stand for configurations whose
//! fractional part is zero or not, and the two cases behave differently
//! under delay and reset. Internally every word therefore carries a flag
//! saying whether its first letter is at fractional part zero.
//!
//! A tail pair of the word being stepped from may stand for several
//! configurations with the same fractional part, but a pair that only
//! reached the tail during the delay stands for exactly one. The annotation
//! follows each letter through the delay to tell the two apart.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use super::region::Region;
use super::word::{Letter, RegionWord};
use crate::error::{Error, Result};
use crate::model::{Ata, Atom, LocId, SymbolId};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) struct Annotated {
    pub word: RegionWord,
    /// The first letter sits at fractional part zero.
    pub integral: bool,
    /// Per letter, the locations whose tail pair was already in the tail
    /// before the delay.
    pub multi: Vec<Vec<LocId>>,
}

impl Annotated {
    pub fn start(word: RegionWord, integral: bool) -> Self {
        let multi = word
            .letters()
            .iter()
            .map(|l| l.pairs().iter().filter(|(_, r)| r.is_tail()).map(|(q, _)| *q).collect())
            .collect();
        Annotated { word, integral, multi }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum DelayEvent {
    /// The integral first letter leaves the integer.
    Open,
    /// The last letter reaches the next integer and becomes the first.
    Rotate,
}

/// Flags compatible with the word alone.
pub(crate) fn start_annotations(w: &RegionWord) -> Vec<bool> {
    match w.letters().first() {
        None => vec![false],
        Some(l) if l.has_point() => vec![true],
        Some(l) if l.is_tail_only() => vec![true, false],
        Some(_) => vec![false],
    }
}

fn annotated_delay(aw: &Annotated) -> Option<(Annotated, DelayEvent)> {
    let w = &aw.word;
    if w.is_empty() {
        return None;
    }
    let cmax = w.cmax();
    let mut letters = w.letters().to_vec();
    if aw.integral {
        letters[0] = letters[0].map_regions(|r| r.opened(cmax));
        let next = Annotated { word: RegionWord::new(cmax, letters), integral: false, multi: aw.multi.clone() };
        Some((next, DelayEvent::Open))
    } else {
        let last = letters.pop().expect("nonempty").map_regions(Region::closed);
        letters.insert(0, last);
        let mut multi = aw.multi.clone();
        multi.rotate_right(1);
        let next = Annotated { word: RegionWord::new(cmax, letters), integral: true, multi };
        Some((next, DelayEvent::Rotate))
    }
}

/// Every annotated word reachable by letting time pass from one of `starts`,
/// each with the events leading to it from its start.
pub(crate) fn annotated_closure(starts: Vec<Annotated>) -> Vec<(Annotated, Vec<DelayEvent>)> {
    let mut seen: BTreeMap<Annotated, usize> = BTreeMap::new();
    let mut nodes: Vec<(Annotated, Option<(usize, DelayEvent)>)> = Vec::new();
    let mut queue = VecDeque::new();
    for s in starts {
        if !seen.contains_key(&s) {
            seen.insert(s.clone(), nodes.len());
            queue.push_back(nodes.len());
            nodes.push((s, None));
        }
    }
    while let Some(i) = queue.pop_front() {
        if let Some((next, ev)) = annotated_delay(&nodes[i].0) {
            if !seen.contains_key(&next) {
                seen.insert(next.clone(), nodes.len());
                queue.push_back(nodes.len());
                nodes.push((next, Some((i, ev))));
            }
        }
    }
    (0..nodes.len())
        .map(|i| {
            let mut events = Vec::new();
            let mut cur = i;
            while let Some((parent, ev)) = nodes[cur].1 {
                events.push(ev);
                cur = parent;
            }
            events.reverse();
            (nodes[i].0.clone(), events)
        })
        .collect()
}

/// One shift of the word: an integral first letter opens its points,
/// otherwise the last letter moves to the front with its open intervals
/// closed to the next integer. Tail-only first letters are treated as
/// non-integral.
pub fn delay_step(w: &RegionWord) -> Result<RegionWord> {
    if w.is_empty() {
        return Err(Error::EmptyRegionWord);
    }
    let integral = w.letters()[0].has_point();
    let (next, _) = annotated_delay(&Annotated::start(w.clone(), integral)).expect("nonempty");
    Ok(next.word)
}

/// All words obtained from `w` by letting time pass.
pub fn delay_closure(w: &RegionWord) -> BTreeSet<RegionWord> {
    let starts = start_annotations(w)
        .into_iter()
        .map(|integral| Annotated::start(w.clone(), integral))
        .collect();
    annotated_closure(starts).into_iter().map(|(aw, _)| aw.word).collect()
}

/// How one discrete successor was produced.
#[derive(Clone, Debug)]
pub(crate) struct Move {
    /// Per pair of the source word (letters in order, pairs in order): the
    /// conjunct indices taken. A tail pair that may stand for several
    /// configurations takes a nonempty subset, every other pair exactly one.
    pub choices: Vec<Vec<usize>>,
    /// Source letter index to result letter index.
    pub position: Vec<Option<usize>>,
    pub result: RegionWord,
}

fn nonempty_subsets(n: usize) -> Vec<Vec<usize>> {
    (1u64..(1 << n)).map(|m| (0..n).filter(|i| m & (1 << i) != 0).collect()).collect()
}

/// Discrete successors of an annotated word, one [`Move`] per distinct result.
pub(crate) fn discrete_moves(aw: &Annotated, symbol: SymbolId, a: &Ata) -> Result<Vec<Move>> {
    let w = &aw.word;
    let cmax = w.cmax();
    let mut slots: Vec<(usize, LocId, Region, &[Vec<Atom>], Vec<Vec<usize>>)> = Vec::new();
    for (j, letter) in w.letters().iter().enumerate() {
        for &(q, r) in letter.pairs() {
            let rule = a.rule_at_half(q, symbol, r.half_units(cmax))?;
            let conj = rule.dnf().conjuncts();
            let options = if r.is_tail() && aw.multi[j].contains(&q) {
                nonempty_subsets(conj.len())
            } else {
                (0..conj.len()).map(|k| vec![k]).collect()
            };
            slots.push((j, q, r, conj, options));
        }
    }
    let merge_front = aw.integral && !w.is_empty();
    let mut out: Vec<Move> = Vec::new();
    let mut seen: BTreeSet<RegionWord> = BTreeSet::new();
    let mut pick = vec![0usize; slots.len()];
    loop {
        let mut buckets: Vec<BTreeSet<(LocId, Region)>> = vec![BTreeSet::new(); w.len()];
        let mut resets: BTreeSet<(LocId, Region)> = BTreeSet::new();
        for (slot, &k) in slots.iter().zip(&pick) {
            let (j, _, r, conj, options) = slot;
            for &c in &options[k] {
                for atom in &conj[c] {
                    if atom.reset {
                        resets.insert((atom.loc, Region::Point(0)));
                    } else {
                        buckets[*j].insert((atom.loc, *r));
                    }
                }
            }
        }
        let mut letters: Vec<Letter> = Vec::new();
        let mut position = vec![None; w.len()];
        if merge_front {
            buckets[0].extend(resets);
        } else if let Some(l) = Letter::new(resets) {
            letters.push(l);
        }
        for (j, b) in buckets.into_iter().enumerate() {
            if let Some(l) = Letter::new(b) {
                position[j] = Some(letters.len());
                letters.push(l);
            }
        }
        let result = RegionWord::new(cmax, letters);
        if seen.insert(result.clone()) {
            let choices = slots.iter().zip(&pick).map(|(s, &k)| s.4[k].clone()).collect();
            out.push(Move { choices, position, result });
        }
        let mut i = slots.len();
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            pick[i] += 1;
            if pick[i] < slots[i].4.len() {
                break;
            }
            pick[i] = 0;
        }
    }
}

/// Successors of `w` under `symbol` without further delay. Whether the first
/// letter is integral is read off the word; a tail-only first letter admits
/// both readings.
pub fn discrete_successors(w: &RegionWord, symbol: SymbolId, a: &Ata) -> Result<BTreeSet<RegionWord>> {
    let mut out = BTreeSet::new();
    for integral in start_annotations(w) {
        let aw = Annotated::start(w.clone(), integral);
        out.extend(discrete_moves(&aw, symbol, a)?.into_iter().map(|m| m.result));
    }
    Ok(out)
}

/// All labeled successors: any delay followed by any letter.
pub fn successors(w: &RegionWord, a: &Ata) -> Result<BTreeSet<(SymbolId, RegionWord)>> {
    let starts = start_annotations(w)
        .into_iter()
        .map(|integral| Annotated::start(w.clone(), integral))
        .collect();
    let mut out = BTreeSet::new();
    for (aw, _) in annotated_closure(starts) {
        for symbol in a.symbol_ids() {
            for m in discrete_moves(&aw, symbol, a)? {
                out.insert((symbol, m.result));
            }
        }
    }
    Ok(out)
}
