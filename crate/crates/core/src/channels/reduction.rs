//! The purely universal automaton accepting exactly the lossy computation
//! encodings that end in a given configuration.

use std::collections::{HashMap, VecDeque};

use super::system::{ChannelSystem, Op};
use crate::error::{Error, Result};
use crate::model::{combine_with, complete_with_sink, Ata, AtaBuilder, CombineNames, GuardExpr, LocId, Mode, PosBool};

#[derive(Clone, Copy, PartialEq, Eq)]
enum Class {
    State,
    Letter,
    Rule,
}

/// Shared alphabet: control states, then channel letters, then rule names.
struct Letters {
    names: Vec<String>,
    class: Vec<Class>,
}

impl Letters {
    fn new(s: &ChannelSystem) -> Self {
        let mut names = Vec::new();
        let mut class = Vec::new();
        for q in s.states() {
            names.push(q.clone());
            class.push(Class::State);
        }
        for a in s.alphabet() {
            names.push(a.clone());
            class.push(Class::Letter);
        }
        for r in s.rules() {
            names.push(r.name());
            class.push(Class::Rule);
        }
        Letters { names, class }
    }

    fn builder(&self) -> AtaBuilder {
        let mut b = AtaBuilder::new();
        for n in &self.names {
            b.symbol(n);
        }
        b
    }

    fn of(&self, c: Class) -> impl Iterator<Item = usize> + '_ {
        (0..self.names.len()).filter(move |&i| self.class[i] == c)
    }

    fn index(&self, name: &str) -> usize {
        self.names.iter().position(|n| n == name).expect("letter of the system")
    }
}

fn go(q: LocId) -> PosBool {
    PosBool::atom(q, false)
}

fn reset(q: LocId) -> PosBool {
    PosBool::atom(q, true)
}

fn all(items: impl IntoIterator<Item = PosBool>) -> PosBool {
    PosBool::all_of(items).expect("nonempty conjunction")
}

fn sym(i: usize) -> crate::model::SymbolId {
    crate::model::SymbolId(i as u32)
}

fn open_unit() -> GuardExpr {
    GuardExpr::and(GuardExpr::Gt(0), GuardExpr::Lt(1))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Pattern {
    Start,
    FirstRule,
    /// Reading `w_f`: source state of the rule, letters matched so far.
    Target(usize, usize),
    AfterState(usize),
    Channel(usize),
    Done,
}

/// Untimed, deterministic check of the block structure.
fn structure(s: &ChannelSystem, l: &Letters, q_f: usize, w_f: &[usize]) -> Result<Ata> {
    let mut b = l.builder();
    let mut ids: HashMap<Pattern, LocId> = HashMap::new();
    let mut queue = VecDeque::new();
    let initial = s.states().iter().position(|q| q == s.initial()).expect("validated");
    let mut intern = |p: Pattern, b: &mut AtaBuilder, queue: &mut VecDeque<Pattern>| -> LocId {
        if let Some(&id) = ids.get(&p) {
            return id;
        }
        let name = match &p {
            Pattern::Start => "start".to_string(),
            Pattern::FirstRule => "first".to_string(),
            Pattern::Target(q, k) => format!("target.{}.{}", s.states()[*q], k),
            Pattern::AfterState(q) => format!("after.{}", s.states()[*q]),
            Pattern::Channel(q) => format!("channel.{}", s.states()[*q]),
            Pattern::Done => "done".to_string(),
        };
        let id = b.location(&name);
        ids.insert(p.clone(), id);
        queue.push_back(p);
        id
    };
    let start = intern(Pattern::Start, &mut b, &mut queue);
    b.set_initial(start);
    let state_index = |name: &str| s.states().iter().position(|q| q == name).expect("validated");
    while let Some(p) = queue.pop_front() {
        let here = intern(p.clone(), &mut b, &mut queue);
        let mut edges: Vec<(usize, Pattern)> = Vec::new();
        // a state letter closing a channel block of a step from `q`
        let close = |q: usize| if q == initial { Pattern::Done } else { Pattern::AfterState(q) };
        match p {
            Pattern::Start => edges.push((q_f, Pattern::FirstRule)),
            Pattern::FirstRule | Pattern::AfterState(_) => {
                let to = match p {
                    Pattern::AfterState(q) => q,
                    _ => q_f,
                };
                for r in s.rules().iter().filter(|r| state_index(&r.to) == to) {
                    let from = state_index(&r.from);
                    let next = match p {
                        Pattern::FirstRule => Pattern::Target(from, 0),
                        _ => Pattern::Channel(from),
                    };
                    edges.push((l.index(&r.name()), next));
                }
            }
            Pattern::Target(q, k) if k < w_f.len() => edges.push((w_f[k], Pattern::Target(q, k + 1))),
            Pattern::Target(q, _) => edges.push((q, close(q))),
            Pattern::Channel(q) => {
                edges.extend(l.of(Class::Letter).map(|a| (a, Pattern::Channel(q))));
                edges.push((q, close(q)));
            }
            Pattern::Done => {}
        }
        for (a, next) in edges {
            let to = intern(next, &mut b, &mut queue);
            b.rule(here, sym(a), GuardExpr::True, go(to));
        }
    }
    let done = ids.get(&Pattern::Done).copied();
    if let Some(d) = done {
        b.set_accepting(d, true);
    }
    complete_with_sink(&b.build()?)
}

/// State letters exactly at integer times, everything else strictly between.
fn unit(l: &Letters) -> Result<Ata> {
    let mut b = l.builder();
    let u0 = b.location("u0");
    let u = b.location("u");
    let inside = b.location("inside");
    for a in 0..l.names.len() {
        if l.class[a] == Class::State {
            b.rule(u0, sym(a), GuardExpr::Eq(0), reset(u));
            b.rule(u, sym(a), GuardExpr::Eq(1), reset(u));
            b.rule(inside, sym(a), GuardExpr::Eq(1), reset(u));
        } else {
            b.rule(u, sym(a), open_unit(), go(inside));
            b.rule(inside, sym(a), open_unit(), go(inside));
        }
    }
    b.set_initial(u0).set_accepting(u, true);
    complete_with_sink(&b.build()?)
}

/// First letter at time 0, no two letters at the same time.
fn strict(l: &Letters) -> Result<Ata> {
    let mut b = l.builder();
    let s0 = b.location("s0");
    let s = b.location("s");
    for a in 0..l.names.len() {
        b.rule(s0, sym(a), GuardExpr::Eq(0), go(s));
        b.rule(s, sym(a), GuardExpr::Gt(0), reset(s));
    }
    b.set_initial(s0).set_accepting(s0, true).set_accepting(s, true);
    complete_with_sink(&b.build()?)
}

/// One step check started at every state letter but the last.
fn check(s: &ChannelSystem, l: &Letters) -> Result<Ata> {
    let mut b = l.builder();
    let s0 = b.location("s0");
    let top = b.location("top");
    let step = b.location("step");
    let channel = b.location("channel");
    let letters: Vec<usize> = l.of(Class::Letter).collect();
    let plus1: Vec<LocId> = letters.iter().map(|&a| b.location(&format!("plus1.{}", l.names[a]))).collect();
    let per_letter = |b: &mut AtaBuilder, kind: &str| -> Vec<LocId> {
        letters.iter().map(|&a| b.location(&format!("{}.{}", kind, l.names[a]))).collect()
    };
    let write = per_letter(&mut b, "write");
    let read = per_letter(&mut b, "read");
    let tryread = per_letter(&mut b, "tryread");
    let checkread = per_letter(&mut b, "checkread");
    let tryread_empty = per_letter(&mut b, "tryread_empty");
    let findany = per_letter(&mut b, "findany");
    let slot = |a: usize| letters.iter().position(|&x| x == a).expect("channel letter");
    let initial = l.index(s.initial());

    for a in 0..l.names.len() {
        let t = sym(a);
        b.rule(top, t, GuardExpr::True, go(top));
        match l.class[a] {
            Class::State if a == initial => {
                b.rule(s0, t, GuardExpr::True, go(top));
            }
            Class::State => {
                b.rule(s0, t, GuardExpr::True, all([go(s0), reset(step)]));
            }
            _ => {
                b.rule(s0, t, GuardExpr::True, go(s0));
            }
        }
    }
    for r in s.rules() {
        let t = sym(l.index(&r.name()));
        let f = match &r.op {
            Op::Eps => go(channel),
            Op::Write(a) => go(write[slot(l.index(a))]),
            Op::Read(a) => {
                let k = slot(l.index(a));
                all([go(read[k]), go(tryread_empty[k])])
            }
        };
        b.rule(step, t, GuardExpr::True, f);
    }
    for q in l.of(Class::State) {
        let t = sym(q);
        b.rule(channel, t, GuardExpr::True, go(top));
        for k in 0..letters.len() {
            b.rule(write[k], t, GuardExpr::True, go(top));
            b.rule(read[k], t, GuardExpr::True, go(top));
            b.rule(tryread[k], t, GuardExpr::True, go(checkread[k]));
            b.rule(tryread_empty[k], t, GuardExpr::True, go(findany[k]));
            b.rule(checkread[k], t, GuardExpr::Le(1), go(checkread[k]));
        }
    }
    for r in l.of(Class::Rule) {
        let t = sym(r);
        for k in 0..letters.len() {
            b.rule(checkread[k], t, GuardExpr::True, go(checkread[k]));
            b.rule(findany[k], t, GuardExpr::True, go(findany[k]));
        }
    }
    for (j, &c) in letters.iter().enumerate() {
        let t = sym(c);
        b.rule(channel, t, GuardExpr::True, all([go(channel), reset(plus1[j])]));
        for k in 0..letters.len() {
            b.rule(plus1[k], t, GuardExpr::Lt(1), go(plus1[k]));
            if j == k {
                b.rule(plus1[k], t, GuardExpr::Eq(1), go(top));
                b.rule(write[k], t, GuardExpr::True, go(channel));
                b.rule(checkread[k], t, GuardExpr::Le(1), go(checkread[k]));
                b.rule(checkread[k], t, GuardExpr::Gt(1), go(top));
                b.rule(findany[k], t, GuardExpr::True, go(top));
            } else {
                b.rule(write[k], t, GuardExpr::True, all([reset(plus1[j]), go(channel)]));
                b.rule(checkread[k], t, GuardExpr::True, go(checkread[k]));
                b.rule(findany[k], t, GuardExpr::True, go(findany[k]));
            }
            b.rule(read[k], t, GuardExpr::True, all([go(read[k]), reset(plus1[j]), reset(tryread[k])]));
            b.rule(tryread[k], t, GuardExpr::True, go(top));
            b.rule(tryread_empty[k], t, GuardExpr::True, go(top));
        }
    }
    for q in l.of(Class::State).chain(l.of(Class::Rule)) {
        for k in 0..letters.len() {
            b.rule(plus1[k], sym(q), GuardExpr::Lt(1), go(plus1[k]));
        }
    }
    b.set_initial(s0).set_accepting(top, true);
    complete_with_sink(&b.build()?)
}

/// `A_struct and A_unit and A_strict and A_check` over states, channel
/// letters and rule names.
pub fn build_reduction_ata(s: &ChannelSystem, q_f: &str, w_f: &[String]) -> Result<Ata> {
    let bad = |m: String| Err(Error::ChannelSystem(m));
    if q_f == s.initial() {
        return bad(format!("target state `{}` is the initial state", q_f));
    }
    let Some(qf) = s.states().iter().position(|q| q == q_f) else {
        return bad(format!("target state `{}` is not declared", q_f));
    };
    let l = Letters::new(s);
    let mut target = Vec::with_capacity(w_f.len());
    for a in w_f {
        if !s.alphabet().contains(a) {
            return bad(format!("target letter `{}` is not declared", a));
        }
        target.push(l.index(a));
    }
    let names = |left: &'static str, right: &'static str, initial: &'static str| CombineNames {
        left_prefix: left,
        right_prefix: right,
        initial,
    };
    let a = combine_with(&structure(s, &l, qf, &target)?, &unit(&l)?, Mode::And, &names("struct.", "unit.", "init.su"))?;
    let a = combine_with(&a, &strict(&l)?, Mode::And, &names("", "strict.", "init.sus"))?;
    combine_with(&a, &check(s, &l)?, Mode::And, &names("", "check.", "init"))
}
