//! Line-based channel system format:
//!
//! ```text
//! lcs
//! state q0 q1 q2
//! init q0
//! channel a b
//! rule q0 -> q1 : write a
//! rule q1 -> q2 : read a
//! goal q2 : b a
//! ```
//!
//! `channel` is optional; letters used by rules and the goal are added in
//! order of appearance. The goal channel lists letters from the write end;
//! an empty goal channel is written `goal q2 :` or `goal q2 : eps`.

use std::fmt::Write as _;

use super::lexer::{describe, tokenize, Cursor, Tok, Token};
use super::ParseError;
use crate::channels::{ChannelConfig, ChannelRule, ChannelSystem, Op};
use crate::error::Result;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChannelProblem {
    pub system: ChannelSystem,
    pub goal: ChannelConfig,
}

fn line_tokens(line: &str, number: usize) -> std::result::Result<Vec<Token>, ParseError> {
    let mut toks = tokenize(line).map_err(|e| ParseError { line: number, ..e })?;
    for t in &mut toks {
        t.line = number;
    }
    Ok(toks)
}

fn end(cur: &Cursor) -> std::result::Result<(), ParseError> {
    if cur.at_eof() {
        Ok(())
    } else {
        Err(cur.peek().error(format!("unexpected {}", describe(&cur.peek().tok))))
    }
}

pub fn parse_lcs(src: &str) -> Result<ChannelProblem> {
    let mut states: Vec<String> = Vec::new();
    let mut letters: Vec<String> = Vec::new();
    let mut initial: Option<(String, Token)> = None;
    let mut rules = Vec::new();
    let mut goal: Option<(String, Vec<String>, Token)> = None;
    let mut seen_header = false;
    let mut last = Token { tok: Tok::Eof, line: 1, col: 1 };
    for (k, line) in src.lines().enumerate() {
        let mut cur = Cursor::new(line_tokens(line, k + 1)?);
        if cur.at_eof() {
            continue;
        }
        let (kw, at) = cur.ident("a declaration")?;
        last = at.clone();
        if !seen_header {
            if kw != "lcs" {
                return Err(at.error("expected the `lcs` header").into());
            }
            seen_header = true;
            end(&cur)?;
            continue;
        }
        let add = |list: &mut Vec<String>, n: String| {
            if !list.contains(&n) {
                list.push(n);
            }
        };
        match kw.as_str() {
            "state" | "states" => {
                while !cur.at_eof() {
                    let (n, _) = cur.ident("a state")?;
                    add(&mut states, n);
                }
            }
            "channel" => {
                while !cur.at_eof() {
                    let (n, _) = cur.ident("a channel letter")?;
                    add(&mut letters, n);
                }
            }
            "init" => {
                if initial.is_some() {
                    return Err(at.error("`init` given twice").into());
                }
                let (n, t) = cur.ident("a state")?;
                end(&cur)?;
                initial = Some((n, t));
            }
            "rule" => {
                let (from, _) = cur.ident("a state")?;
                cur.expect("->")?;
                let (to, _) = cur.ident("a state")?;
                cur.expect(":")?;
                let (op, op_at) = cur.ident("`write`, `read` or `eps`")?;
                let op = match op.as_str() {
                    "eps" => Op::Eps,
                    "write" | "read" => {
                        let (a, _) = cur.ident("a channel letter")?;
                        add(&mut letters, a.clone());
                        if op == "write" {
                            Op::Write(a)
                        } else {
                            Op::Read(a)
                        }
                    }
                    other => return Err(op_at.error(format!("unknown operation `{}`", other)).into()),
                };
                end(&cur)?;
                rules.push(ChannelRule { from, op, to });
            }
            "goal" => {
                if goal.is_some() {
                    return Err(at.error("`goal` given twice").into());
                }
                let (q, _) = cur.ident("a state")?;
                cur.expect(":")?;
                let mut w = Vec::new();
                while !cur.at_eof() {
                    let (a, _) = cur.ident("a channel letter")?;
                    w.push(a);
                }
                if w == ["eps"] {
                    w.clear();
                }
                for a in &w {
                    add(&mut letters, a.clone());
                }
                goal = Some((q, w, at));
            }
            other => return Err(at.error(format!("unknown declaration `{}`", other)).into()),
        }
    }
    if !seen_header {
        return Err(ParseError { line: 1, col: 1, msg: "expected the `lcs` header".into() }.into());
    }
    let Some((initial, init_at)) = initial else {
        return Err(last.error("missing `init` declaration").into());
    };
    let Some((q_f, w_f, goal_at)) = goal else {
        return Err(last.error("missing `goal` declaration").into());
    };
    if !states.contains(&q_f) {
        return Err(goal_at.error(format!("goal state `{}` is not declared", q_f)).into());
    }
    if q_f == initial {
        return Err(init_at.error("the goal state must differ from the initial state").into());
    }
    let system = ChannelSystem::new(states, initial, letters, rules)?;
    Ok(ChannelProblem { system, goal: ChannelConfig { state: q_f, channel: w_f } })
}

pub fn print_lcs(p: &ChannelProblem) -> String {
    let s = &p.system;
    let mut out = String::from("lcs\n");
    writeln!(out, "state {}", s.states().join(" ")).unwrap();
    writeln!(out, "init {}", s.initial()).unwrap();
    if !s.alphabet().is_empty() {
        writeln!(out, "channel {}", s.alphabet().join(" ")).unwrap();
    }
    for r in s.rules() {
        writeln!(out, "rule {}", r).unwrap();
    }
    let w = if p.goal.channel.is_empty() { "eps".to_string() } else { p.goal.channel.join(" ") };
    writeln!(out, "goal {} : {}", p.goal.state, w).unwrap();
    out
}
