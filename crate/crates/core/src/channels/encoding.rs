//! Timed-word encodings of lossy computations.
//!
//! A computation `<q0,eps> -g1-> <q1,w1> ... -gn-> <qn,wn>` is written
//! backwards, one configuration per unit interval:
//! `qn gn wn  q(n-1) g(n-1) w(n-1) ... q1 g1 w1  q0`, with `qi` at time
//! `n-i`. A channel letter that survives a step appears exactly one time unit
//! later in the next interval.

use std::fmt;

use num_traits::One;
use serde::Serialize;

use super::system::{lossy_step, subseq, ChannelConfig, ChannelRule, ChannelSystem, Op};
use crate::error::{Error, Result};
use crate::semantics::TimedWord;
use crate::Rational;

/// How letters are placed inside each unit interval.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum TimingPolicy {
    /// Letters inherited from the previous configuration keep their offset;
    /// the rule letter and a freshly written letter share the gap before the
    /// first inherited offset evenly (`k/(L+2)` when nothing is inherited).
    #[default]
    EvenGap,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComputationEncoding {
    pub word: TimedWord,
    /// `q_n, ..., q_0`
    pub states: Vec<String>,
    /// `gamma_n, ..., gamma_1` as encoding letters.
    pub rules: Vec<String>,
}

/// For each letter of `to`, the index of the letter of `from` it comes from
/// (`None` for a freshly written first letter).
fn origins(from: &[String], rule: &ChannelRule, to: &[String]) -> Option<Vec<Option<usize>>> {
    fn embed(u: &[String], w: &[String]) -> Option<Vec<usize>> {
        let mut out = Vec::with_capacity(u.len());
        let mut j = 0;
        for x in u {
            while j < w.len() && w[j] != *x {
                j += 1;
            }
            if j == w.len() {
                return None;
            }
            out.push(j);
            j += 1;
        }
        Some(out)
    }
    let all = |v: Vec<usize>| v.into_iter().map(Some).collect();
    match &rule.op {
        Op::Eps => embed(to, from).map(all),
        Op::Write(a) => embed(to, from).map(all).or_else(|| {
            let (first, rest) = to.split_first()?;
            if first != a {
                return None;
            }
            let mut v = vec![None];
            v.extend(embed(rest, from)?.into_iter().map(Some));
            Some(v)
        }),
        Op::Read(a) => {
            let v = embed(to, from)?;
            let after = v.last().map_or(0, |&j| j + 1);
            from[after..].contains(a).then(|| all(v))
        }
    }
}

/// Encode a lossy computation from `<q0, eps>`, given as the rules used and
/// the configurations reached.
pub fn encode_computation(
    s: &ChannelSystem,
    run: &[(ChannelRule, ChannelConfig)],
    _policy: TimingPolicy,
) -> Result<ComputationEncoding> {
    let invalid = |m: String| Error::InvalidRun(m);
    let n = run.len();
    let mut prev = ChannelConfig { state: s.initial().to_string(), channel: Vec::new() };
    let mut prev_offsets: Vec<Rational> = Vec::new();
    // blocks in computation order: (state, rule, letters with offsets)
    let mut blocks: Vec<(String, String, Vec<(String, Rational)>)> = Vec::new();
    for (i, (rule, cfg)) in run.iter().enumerate() {
        if !s.rules().contains(rule) {
            return Err(invalid(format!("step {}: `{}` is not a rule", i + 1, rule)));
        }
        if !lossy_step(&prev, rule).contains(cfg) {
            return Err(invalid(format!("step {}: {} is not a lossy successor of {}", i + 1, cfg, prev)));
        }
        let orig = origins(&prev.channel, rule, &cfg.channel)
            .ok_or_else(|| invalid(format!("step {}: no embedding", i + 1)))?;
        let gap = orig.iter().flatten().next().map_or_else(Rational::one, |&j| prev_offsets[j].clone());
        let fresh = 1 + orig.iter().filter(|o| o.is_none()).count();
        let slot = |k: usize| &gap * Rational::new(k.into(), (fresh + 1).into());
        let mut offsets = Vec::with_capacity(orig.len());
        let mut k = 1;
        let gamma_offset = slot(k);
        for o in &orig {
            match o {
                Some(j) => offsets.push(prev_offsets[*j].clone()),
                None => {
                    k += 1;
                    offsets.push(slot(k));
                }
            }
        }
        blocks.push((
            cfg.state.clone(),
            rule.name(),
            std::iter::once((rule.name(), gamma_offset))
                .chain(cfg.channel.iter().cloned().zip(offsets.iter().cloned()))
                .collect(),
        ));
        prev = cfg.clone();
        prev_offsets = offsets;
    }
    let mut entries = Vec::new();
    let mut states = Vec::new();
    let mut rules = Vec::new();
    for (idx, (state, rule, letters)) in blocks.iter().enumerate().rev() {
        let base = Rational::from_integer((n - (idx + 1)).into());
        entries.push((state.clone(), base.clone()));
        states.push(state.clone());
        rules.push(rule.clone());
        for (l, off) in letters {
            entries.push((l.clone(), &base + off));
        }
    }
    entries.push((s.initial().to_string(), Rational::from_integer(n.into())));
    states.push(s.initial().to_string());
    Ok(ComputationEncoding { word: TimedWord::new(entries)?, states, rules })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Condition {
    P1,
    P2,
    P3a,
    P3b,
    P3c,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Condition::P1 => "P1 structure",
            Condition::P2 => "P2 distribution in time",
            Condition::P3a => "P3a epsilon move",
            Condition::P3b => "P3b write move",
            Condition::P3c => "P3c read move",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EncodingViolation {
    pub condition: Condition,
    /// The step `i` (1-based, `gamma_i`) for move conditions.
    pub step: Option<usize>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EncodingReport {
    pub violation: Option<EncodingViolation>,
}

impl EncodingReport {
    pub fn is_ok(&self) -> bool {
        self.violation.is_none()
    }
}

impl fmt::Display for EncodingReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.violation {
            None => write!(f, "ok"),
            Some(v) => {
                write!(f, "({}) violated", v.condition)?;
                if let Some(i) = v.step {
                    write!(f, " at step {}", i)?;
                }
                write!(f, ": {}", v.detail)
            }
        }
    }
}

type Timed = Vec<(String, Rational)>;

/// `u` shifted by one time unit is a timed subsequence of `w`.
fn shifted_subseq(u: &[(String, Rational)], w: &[(String, Rational)]) -> bool {
    let one = Rational::one();
    let u1: Timed = u.iter().map(|(a, t)| (a.clone(), t + &one)).collect();
    subseq(&u1, w)
}

struct Block {
    state: String,
    rule: Option<ChannelRule>,
    channel: Timed,
}

/// Check conditions P1, P2 and P3a-P3c directly on the word and report the
/// first one violated.
pub fn validate_encoding(w: &TimedWord, s: &ChannelSystem, q_f: &str, w_f: &[String]) -> EncodingReport {
    match validate(w, s, q_f, w_f) {
        Ok(()) => EncodingReport { violation: None },
        Err(v) => EncodingReport { violation: Some(v) },
    }
}

fn violation(condition: Condition, step: Option<usize>, detail: impl Into<String>) -> EncodingViolation {
    EncodingViolation { condition, step, detail: detail.into() }
}

fn validate(w: &TimedWord, s: &ChannelSystem, q_f: &str, w_f: &[String]) -> Result<(), EncodingViolation> {
    let p1 = |d: String| violation(Condition::P1, None, d);
    let is_state = |x: &str| s.states().iter().any(|q| q == x);
    let is_letter = |x: &str| s.alphabet().iter().any(|a| a == x);

    // P1: split into blocks q gamma v ... q0
    let entries = w.entries();
    let mut blocks: Vec<Block> = Vec::new();
    let mut i = 0;
    while i < entries.len() {
        let (q, _) = &entries[i];
        if !is_state(q) {
            return Err(p1(format!("letter {} (`{}`) should be a state", i + 1, q)));
        }
        i += 1;
        if i == entries.len() {
            blocks.push(Block { state: q.clone(), rule: None, channel: Vec::new() });
            break;
        }
        let (g, _) = &entries[i];
        let rule = s
            .rule_by_name(g)
            .ok_or_else(|| p1(format!("letter {} (`{}`) should be a rule", i + 1, g)))?;
        i += 1;
        let mut channel = Vec::new();
        while i < entries.len() && is_letter(&entries[i].0) {
            channel.push(entries[i].clone());
            i += 1;
        }
        blocks.push(Block { state: q.clone(), rule: Some(rule.clone()), channel });
    }
    let n = match blocks.len() {
        0 => return Err(p1("empty word".into())),
        k => k - 1,
    };
    let last = &blocks[n];
    if last.state != s.initial() {
        return Err(p1(format!("last state `{}` is not the initial state", last.state)));
    }
    if last.rule.is_some() {
        return Err(p1("letters follow the initial state".into()));
    }
    if blocks[0].state != q_f {
        return Err(p1(format!("first state `{}` is not `{}`", blocks[0].state, q_f)));
    }
    let first_channel: Vec<String> = blocks[0].channel.iter().map(|(a, _)| a.clone()).collect();
    if n > 0 && first_channel != w_f {
        return Err(p1("first channel block differs from the target channel".into()));
    }
    if n == 0 && !w_f.is_empty() {
        return Err(p1("target channel is not empty".into()));
    }
    for k in 0..n {
        let rule = blocks[k].rule.as_ref().expect("non-final block");
        if rule.to != blocks[k].state || rule.from != blocks[k + 1].state {
            return Err(p1(format!("rule `{}` does not connect `{}` to `{}`", rule.name(), blocks[k + 1].state, blocks[k].state)));
        }
    }

    // P2: states at integer times n, n-1, ..., strictly increasing times
    let mut pos = 0;
    for (k, b) in blocks.iter().enumerate() {
        let expect = Rational::from_integer(k.into());
        if entries[pos].1 != expect {
            return Err(violation(Condition::P2, None, format!("state `{}` is not at time {}", b.state, k)));
        }
        pos += 1 + usize::from(b.rule.is_some()) + b.channel.len();
    }
    if entries.windows(2).any(|p| p[0].1 >= p[1].1) {
        return Err(violation(Condition::P2, None, "times are not strictly increasing"));
    }

    // P3: step i is block n-i; its successor configuration in time is block n-i+1
    for step in 1..=n {
        let cur = &blocks[n - step];
        let prev = &blocks[n - step + 1];
        let rule = cur.rule.as_ref().expect("non-final block");
        let (vi, vp) = (&cur.channel, &prev.channel);
        let ok = match &rule.op {
            Op::Eps => shifted_subseq(vi, vp),
            Op::Write(a) => {
                let dropped = vi.first().is_some_and(|(x, _)| x == a) && shifted_subseq(&vi[1..], vp);
                dropped || shifted_subseq(vi, vp)
            }
            Op::Read(a) => (0..vp.len()).any(|k| vp[k].0 == *a && shifted_subseq(vi, &vp[..k])),
        };
        if !ok {
            let c = match rule.op {
                Op::Eps => Condition::P3a,
                Op::Write(_) => Condition::P3b,
                Op::Read(_) => Condition::P3c,
            };
            return Err(violation(c, Some(step), format!("rule `{}`", rule.name())));
        }
    }
    Ok(())
}
