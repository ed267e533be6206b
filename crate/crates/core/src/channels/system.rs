use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Op {
    Write(String),
    Read(String),
    Eps,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ChannelRule {
    pub from: String,
    pub op: Op,
    pub to: String,
}

impl ChannelRule {
    /// The rule as a letter of the encoding alphabet: `src.write.a.dst`,
    /// `src.read.a.dst` or `src.eps.dst`.
    pub fn name(&self) -> String {
        match &self.op {
            Op::Write(a) => format!("{}.write.{}.{}", self.from, a, self.to),
            Op::Read(a) => format!("{}.read.{}.{}", self.from, a, self.to),
            Op::Eps => format!("{}.eps.{}", self.from, self.to),
        }
    }
}

impl fmt::Display for ChannelRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.op {
            Op::Write(a) => write!(f, "{} -> {} : write {}", self.from, self.to, a),
            Op::Read(a) => write!(f, "{} -> {} : read {}", self.from, self.to, a),
            Op::Eps => write!(f, "{} -> {} : eps", self.from, self.to),
        }
    }
}

/// A lossy FIFO channel machine. Writes prepend, reads take from the end.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChannelSystem {
    states: Vec<String>,
    initial: String,
    alphabet: Vec<String>,
    rules: Vec<ChannelRule>,
}

impl ChannelSystem {
    pub fn new(
        states: Vec<String>,
        initial: String,
        alphabet: Vec<String>,
        rules: Vec<ChannelRule>,
    ) -> Result<Self> {
        let bad = |m: String| Err(Error::ChannelSystem(m));
        if !states.contains(&initial) {
            return bad(format!("initial state `{}` is not declared", initial));
        }
        let mut names: HashSet<String> = HashSet::new();
        for n in states.iter().chain(&alphabet) {
            if !names.insert(n.clone()) {
                return bad(format!("name `{}` is used twice", n));
            }
        }
        let mut rules_out: Vec<ChannelRule> = Vec::new();
        for r in rules {
            for s in [&r.from, &r.to] {
                if !states.contains(s) {
                    return bad(format!("rule `{}` uses undeclared state `{}`", r, s));
                }
            }
            if let Op::Write(a) | Op::Read(a) = &r.op {
                if !alphabet.contains(a) {
                    return bad(format!("rule `{}` uses undeclared letter `{}`", r, a));
                }
            }
            if r.to == initial {
                return bad(format!("rule `{}` returns to the initial state", r));
            }
            if rules_out.contains(&r) {
                continue;
            }
            if !names.insert(r.name()) {
                return bad(format!("rule name `{}` clashes with another name", r.name()));
            }
            rules_out.push(r);
        }
        Ok(ChannelSystem { states, initial, alphabet, rules: rules_out })
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn initial(&self) -> &str {
        &self.initial
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn rules(&self) -> &[ChannelRule] {
        &self.rules
    }

    pub fn rule_by_name(&self, name: &str) -> Option<&ChannelRule> {
        self.rules.iter().find(|r| r.name() == name)
    }
}

/// Control state and channel content; `channel[0]` is the most recently
/// written end, the last letter is read first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ChannelConfig {
    pub state: String,
    pub channel: Vec<String>,
}

impl ChannelConfig {
    pub fn new(state: &str, channel: &[&str]) -> Self {
        ChannelConfig { state: state.to_string(), channel: channel.iter().map(|s| s.to_string()).collect() }
    }
}

impl fmt::Display for ChannelConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}, {}>", self.state, if self.channel.is_empty() { "eps".into() } else { self.channel.join("") })
    }
}

/// `u` embeds into `w` as a not necessarily contiguous subsequence.
pub fn subseq<T: PartialEq>(u: &[T], w: &[T]) -> bool {
    let mut it = w.iter();
    u.iter().all(|x| it.by_ref().any(|y| y == x))
}

fn subsequences(w: &[String]) -> BTreeSet<Vec<String>> {
    let mut out = BTreeSet::new();
    out.insert(Vec::new());
    for x in w {
        let extended: Vec<Vec<String>> = out
            .iter()
            .map(|u| {
                let mut u = u.clone();
                u.push(x.clone());
                u
            })
            .collect();
        out.extend(extended);
    }
    out
}

/// Perfect step on a single channel content.
fn perfect(channel: &[String], op: &Op) -> Option<Vec<String>> {
    match op {
        Op::Eps => Some(channel.to_vec()),
        Op::Write(a) => {
            let mut out = vec![a.clone()];
            out.extend_from_slice(channel);
            Some(out)
        }
        Op::Read(a) => match channel.split_last() {
            Some((last, rest)) if last == a => Some(rest.to_vec()),
            _ => None,
        },
    }
}

/// Every configuration reachable by one lossy use of `rule`: lose letters,
/// perform the operation, lose letters again.
pub fn lossy_step(c: &ChannelConfig, rule: &ChannelRule) -> BTreeSet<ChannelConfig> {
    let mut out = BTreeSet::new();
    if c.state != rule.from {
        return out;
    }
    for u in subsequences(&c.channel) {
        if let Some(after) = perfect(&u, &rule.op) {
            for w in subsequences(&after) {
                out.insert(ChannelConfig { state: rule.to.clone(), channel: w });
            }
        }
    }
    out
}

/// Breadth-first search over lossy configurations with channels of length at
/// most `channel_cap`, from the initial state with an empty channel.
pub fn lossy_reachable(s: &ChannelSystem, target: &ChannelConfig, channel_cap: usize) -> bool {
    lossy_path(s, target, channel_cap).is_some()
}

/// A shortest lossy computation reaching `target` within the cap, as the list
/// of rules used and configurations reached.
pub fn lossy_path(
    s: &ChannelSystem,
    target: &ChannelConfig,
    channel_cap: usize,
) -> Option<Vec<(ChannelRule, ChannelConfig)>> {
    let start = ChannelConfig { state: s.initial.clone(), channel: Vec::new() };
    let mut parent: std::collections::HashMap<ChannelConfig, Option<(ChannelConfig, ChannelRule)>> =
        std::collections::HashMap::new();
    parent.insert(start.clone(), None);
    let mut queue = VecDeque::from([start]);
    while let Some(c) = queue.pop_front() {
        if c == *target {
            let mut run = Vec::new();
            let mut cur = c;
            while let Some(Some((prev, rule))) = parent.get(&cur).cloned() {
                run.push((rule, cur));
                cur = prev;
            }
            run.reverse();
            return Some(run);
        }
        for rule in s.rules.iter().filter(|r| r.from == c.state) {
            for next in lossy_step(&c, rule) {
                if next.channel.len() <= channel_cap && !parent.contains_key(&next) {
                    parent.insert(next.clone(), Some((c.clone(), rule.clone())));
                    queue.push_back(next);
                }
            }
        }
    }
    None
}
