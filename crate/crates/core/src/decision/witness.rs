//! Turning an abstract path into a concrete timed word.
//!
//! The concrete run follows the path loosely: every bounded configuration is
//! pinned to a letter of the current word, while configurations in the
//! unbounded region float and may stand for any tail pair with their
//! location. Letters without a pinned configuration cost no time when they
//! rotate. The run's locations therefore always occur in the current word,
//! so reaching a word with only accepting locations makes the run accept.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::RegionPath;
use crate::abstraction::{
    abstract_h, annotated_closure, discrete_moves, region_of, start_annotations, Annotated, DelayEvent,
    Region, RegionWord,
};
use crate::error::{Error, Result};
use crate::model::{split_value, Ata, LocId, SymbolId};
use crate::semantics::{accepts, ConfigSet, TimedWord};
use crate::Rational;

/// Concrete configurations, each with the index of its letter (`None` for
/// floating tail configurations).
type State = BTreeMap<(LocId, Rational), Option<usize>>;

fn frac(v: &Rational) -> Rational {
    split_value(v).1
}

fn fail(step: usize, msg: impl std::fmt::Display) -> Error {
    Error::Witness(format!("step {}: {}", step + 1, msg))
}

/// The flags of `w` compatible with the pinned configurations.
fn annotations(state: &State, w: &RegionWord) -> Vec<bool> {
    match state.iter().find(|(_, pos)| **pos == Some(0)) {
        Some(((_, v), _)) => vec![frac(v).is_zero()],
        None => start_annotations(w),
    }
}

fn check(state: &State, aw: &Annotated, step: usize) -> Result<()> {
    let w = &aw.word;
    let cmax = w.cmax();
    let mut fracs: Vec<Option<Rational>> = vec![None; w.len()];
    for ((q, v), pos) in state {
        let r = region_of(v, cmax);
        match pos {
            None => {
                if !r.is_tail() || !w.pairs().any(|p| *p == (*q, Region::Tail)) {
                    return Err(fail(step, "floating configuration has no tail pair"));
                }
            }
            Some(j) => {
                if !w.letters().get(*j).is_some_and(|l| l.contains(&(*q, r))) {
                    return Err(fail(step, format!("configuration not in letter {}", j)));
                }
                let f = frac(v);
                match &fracs[*j] {
                    Some(g) if *g != f => return Err(fail(step, "letter splits")),
                    _ => fracs[*j] = Some(f),
                }
            }
        }
    }
    let pinned: Vec<&Rational> = fracs.iter().flatten().collect();
    if pinned.windows(2).any(|p| p[0] >= p[1]) {
        return Err(fail(step, "letters out of order"));
    }
    if let Some(Some(f)) = fracs.first() {
        if f.is_zero() != aw.integral {
            return Err(fail(step, "first letter integrality"));
        }
    }
    Ok(())
}

fn advance(state: State, d: &Rational) -> State {
    state.into_iter().map(|((q, v), pos)| ((q, v + d), pos)).collect()
}

/// Replay delay events on the concrete state; returns the total delay.
fn replay(state: &mut State, len: usize, events: &[DelayEvent], cmax: u32) -> Rational {
    let mut total = Rational::zero();
    let mut pending = false;
    for ev in events {
        match ev {
            DelayEvent::Open => {
                if state.values().any(|p| *p == Some(0)) {
                    pending = true;
                }
            }
            DelayEvent::Rotate => {
                let last = len - 1;
                let f = state.iter().find(|(_, p)| **p == Some(last)).map(|((_, v), _)| frac(v));
                if let Some(f) = f {
                    let d = Rational::one() - f;
                    *state = advance(std::mem::take(state), &d);
                    total += d;
                    pending = false;
                }
                for pos in state.values_mut().flatten() {
                    *pos = if *pos == last { 0 } else { *pos + 1 };
                }
            }
        }
    }
    if pending {
        let max = state.iter().filter(|(_, p)| p.is_some()).map(|((_, v), _)| frac(v)).max();
        let max = max.unwrap_or_else(Rational::zero);
        let eps = (Rational::one() - max) / Rational::from_integer(2.into());
        *state = advance(std::mem::take(state), &eps);
        total += eps;
    }
    // pinned configurations that left the bounded regions start floating
    for ((_, v), pos) in state.iter_mut() {
        if region_of(v, cmax).is_tail() {
            *pos = None;
        }
    }
    total
}

fn apply_move(
    state: &State,
    aw: &Annotated,
    symbol: SymbolId,
    choices: &[Vec<usize>],
    position: &[Option<usize>],
    a: &Ata,
    step: usize,
) -> Result<State> {
    let w = &aw.word;
    let cmax = w.cmax();
    // flat slot index of every pair
    let mut slot: BTreeMap<(usize, LocId, Region), usize> = BTreeMap::new();
    for (j, letter) in w.letters().iter().enumerate() {
        for &(q, r) in letter.pairs() {
            let n = slot.len();
            slot.insert((j, q, r), n);
        }
    }
    let mut next = State::new();
    for ((q, v), pos) in state {
        let r = region_of(v, cmax);
        let (j, k) = match pos {
            Some(j) => (*j, slot[&(*j, *q, r)]),
            None => slot
                .iter()
                .find(|((_, q2, r2), _)| q2 == q && r2.is_tail())
                .map(|((j, _, _), k)| (*j, *k))
                .ok_or_else(|| fail(step, "no tail pair"))?,
        };
        let rule = a.rule_at(*q, symbol, v)?;
        let conjunct = &rule.dnf().conjuncts()[choices[k][0]];
        for atom in conjunct {
            if atom.reset {
                next.insert((atom.loc, Rational::zero()), Some(0));
            } else {
                let p = if r.is_tail() { None } else { position[j] };
                if !r.is_tail() && p.is_none() {
                    return Err(fail(step, "kept configuration lost its letter"));
                }
                next.insert((atom.loc, v.clone()), p);
            }
        }
    }
    Ok(next)
}

/// A timed word whose run follows `path`; the result is checked to be
/// accepted by `a` when the path ends in a bad word.
pub fn concretize_witness(path: &RegionPath, a: &Ata) -> Result<TimedWord> {
    let cmax = a.cmax();
    let p0 = ConfigSet::initial(a);
    if abstract_h(&p0, cmax) != path.start {
        return Err(Error::Witness("path does not start at the initial word".into()));
    }
    let mut state: State = p0.iter().map(|c| ((c.loc, c.value.clone()), Some(0))).collect();
    let mut current = path.start.clone();
    let mut now = Rational::zero();
    let mut letters = Vec::new();
    for (step, (symbol, target)) in path.steps.iter().enumerate() {
        let starts =
            annotations(&state, &current).into_iter().map(|integral| Annotated::start(current.clone(), integral));
        let found = annotated_closure(starts.collect()).into_iter().find_map(|(aw, events)| {
            let moves = discrete_moves(&aw, *symbol, a).ok()?;
            let m = moves.into_iter().find(|m| m.result == *target)?;
            Some((aw, events, m))
        });
        let (aw, events, m) = found.ok_or_else(|| fail(step, "no abstract transition"))?;
        let delay = replay(&mut state, current.len(), &events, cmax);
        check(&state, &aw, step)?;
        state = apply_move(&state, &aw, *symbol, &m.choices, &m.position, a, step)?;
        now += delay;
        letters.push((a.symbol_name(*symbol).to_string(), now.clone()));
        current = target.clone();
    }
    let word = TimedWord::new(letters)?;
    if crate::abstraction::is_bad_word(path.last(), a) && !accepts(a, &word)? {
        return Err(Error::Witness(format!("concrete word {} is not accepted", word)));
    }
    Ok(word)
}
