//! `ata { clock x; alphabet a b; init q0; accepting q0; q0 a [tt] -> (q0) & (q1,reset); }`

use std::collections::HashMap;
use std::fmt::Write as _;

use super::lexer::{describe, tokenize, Cursor, Tok, Token};
use super::ParseError;
use crate::error::Result;
use crate::model::{check_partition, Ata, AtaBuilder, GuardExpr, LocId, PosBool, SymbolId};

const KEYWORDS: [&str; 5] = ["clock", "alphabet", "locations", "init", "accepting"];

struct Parser {
    cur: Cursor,
    clock: String,
    builder: AtaBuilder,
    declared_locations: bool,
    alphabet: Vec<String>,
    first_rule: HashMap<(LocId, SymbolId), Token>,
}

type PResult<T> = std::result::Result<T, ParseError>;

impl Parser {
    fn location(&mut self, name: &str, at: &Token) -> PResult<LocId> {
        if self.declared_locations && !self.builder.has_location(name) {
            return Err(at.error(format!("undeclared location `{}`", name)));
        }
        Ok(self.builder.location(name))
    }

    fn names_until_semicolon(&mut self, what: &str) -> PResult<Vec<(String, Token)>> {
        let mut out = Vec::new();
        while !self.cur.is(";") {
            out.push(self.cur.ident(what)?);
        }
        self.cur.expect(";")?;
        Ok(out)
    }

    fn guard(&mut self) -> PResult<GuardExpr> {
        let mut g = self.guard_and()?;
        while self.cur.eat("|") || self.cur.eat("||") {
            g = GuardExpr::or(g, self.guard_and()?);
        }
        Ok(g)
    }

    fn guard_and(&mut self) -> PResult<GuardExpr> {
        let mut g = self.guard_unary()?;
        while self.cur.eat("&") || self.cur.eat("&&") {
            g = GuardExpr::and(g, self.guard_unary()?);
        }
        Ok(g)
    }

    fn guard_unary(&mut self) -> PResult<GuardExpr> {
        if self.cur.eat("!") {
            return Ok(GuardExpr::not(self.guard_unary()?));
        }
        if self.cur.eat("(") {
            let g = self.guard()?;
            self.cur.expect(")")?;
            return Ok(g);
        }
        let (name, at) = self.cur.ident("a clock constraint")?;
        match name.as_str() {
            "tt" => return Ok(GuardExpr::True),
            "ff" => return Ok(GuardExpr::False),
            _ if name == self.clock => {}
            _ => return Err(at.error(format!("unknown clock `{}`", name))),
        }
        let op = self.cur.next();
        let Tok::Punct(op_str) = op.tok else {
            return Err(op.error(format!("expected a comparison, found {}", describe(&op.tok))));
        };
        let c = self.cur.next();
        let value = match &c.tok {
            Tok::Number(v, true) => v.to_integer().try_into().map_err(|_| c.error("constant out of range"))?,
            other => return Err(c.error(format!("expected an integer constant, found {}", describe(other)))),
        };
        Ok(match op_str {
            "<" => GuardExpr::Lt(value),
            "<=" => GuardExpr::Le(value),
            "=" | "==" => GuardExpr::Eq(value),
            ">=" => GuardExpr::Ge(value),
            ">" => GuardExpr::Gt(value),
            "!=" => GuardExpr::Ne(value),
            _ => return Err(op.error(format!("expected a comparison, found `{}`", op_str))),
        })
    }

    fn formula(&mut self) -> PResult<PosBool> {
        let mut f = self.formula_and()?;
        while self.cur.eat("|") || self.cur.eat("||") {
            f = PosBool::or(f, self.formula_and()?);
        }
        Ok(f)
    }

    fn formula_and(&mut self) -> PResult<PosBool> {
        let mut f = self.formula_atom()?;
        while self.cur.eat("&") || self.cur.eat("&&") {
            f = PosBool::and(f, self.formula_atom()?);
        }
        Ok(f)
    }

    fn formula_atom(&mut self) -> PResult<PosBool> {
        if self.cur.is("(") {
            let is_leaf = matches!(self.cur.peek_at(1).tok, Tok::Ident(_))
                && matches!(self.cur.peek_at(2).tok, Tok::Punct(")") | Tok::Punct(","));
            self.cur.next();
            if !is_leaf {
                let f = self.formula()?;
                self.cur.expect(")")?;
                return Ok(f);
            }
            let (name, at) = self.cur.ident("a location")?;
            let q = self.location(&name, &at)?;
            let mut reset = false;
            if self.cur.eat(",") {
                let (flag, at) = self.cur.ident("`reset`")?;
                if flag != "reset" {
                    return Err(at.error(format!("expected `reset`, found `{}`", flag)));
                }
                reset = true;
            }
            self.cur.expect(")")?;
            return Ok(PosBool::atom(q, reset));
        }
        let (name, at) = self.cur.ident("a location")?;
        let q = self.location(&name, &at)?;
        Ok(PosBool::atom(q, false))
    }

    fn rule(&mut self) -> PResult<()> {
        let (name, at) = self.cur.ident("a location")?;
        let q = self.location(&name, &at)?;
        let (letter, at_letter) = self.cur.ident("a letter")?;
        if !self.alphabet.contains(&letter) {
            return Err(at_letter.error(format!("letter `{}` is not in the alphabet", letter)));
        }
        let a = self.builder.symbol(&letter);
        let guard = if self.cur.eat("[") {
            let g = self.guard()?;
            self.cur.expect("]")?;
            g
        } else {
            GuardExpr::True
        };
        self.cur.expect("->")?;
        let f = self.formula()?;
        self.cur.expect(";")?;
        self.first_rule.entry((q, a)).or_insert(at);
        self.builder.rule(q, a, guard, f);
        Ok(())
    }

}

/// Parse an automaton and check the partition condition; a violation is
/// reported at the first rule of the offending row.
pub fn parse_ata(src: &str) -> Result<Ata> {
    let mut p = Parser {
        cur: Cursor::new(tokenize(src)?),
        clock: "x".into(),
        builder: AtaBuilder::new(),
        declared_locations: false,
        alphabet: Vec::new(),
        first_rule: HashMap::new(),
    };
    let (head, at) = p.cur.ident("`ata`")?;
    if head != "ata" {
        return Err(at.error(format!("expected `ata`, found `{}`", head)).into());
    }
    let header = at;
    p.cur.expect("{")?;
    let mut initial: Option<LocId> = None;
    let mut accepting = Vec::new();
    while !p.cur.is("}") {
        if p.cur.at_eof() {
            return Err(p.cur.peek().error("missing `}`").into());
        }
        let keyword = match &p.cur.peek().tok {
            Tok::Ident(n) if KEYWORDS.contains(&n.as_str()) && !matches!(p.cur.peek_at(2).tok, Tok::Punct("[") | Tok::Punct("->")) => {
                Some(n.clone())
            }
            _ => None,
        };
        let Some(keyword) = keyword else {
            p.rule()?;
            continue;
        };
        let kw = p.cur.next();
        let names = p.names_until_semicolon("a name")?;
        match keyword.as_str() {
            "clock" => {
                let [(name, _)] = names.as_slice() else {
                    return Err(kw.error("exactly one clock is supported").into());
                };
                p.clock = name.clone();
            }
            "alphabet" => {
                for (n, at) in names {
                    if p.alphabet.contains(&n) {
                        return Err(at.error(format!("letter `{}` declared twice", n)).into());
                    }
                    p.builder.symbol(&n);
                    p.alphabet.push(n);
                }
            }
            "locations" => {
                for (n, at) in names {
                    if p.builder.has_location(&n) {
                        return Err(at.error(format!("location `{}` declared twice", n)).into());
                    }
                    p.builder.location(&n);
                }
                p.declared_locations = true;
            }
            "init" => {
                let [(name, at)] = names.as_slice() else {
                    return Err(kw.error("`init` takes exactly one location").into());
                };
                if initial.is_some() {
                    return Err(kw.error("`init` given twice").into());
                }
                initial = Some(p.location(name, at)?);
            }
            _ => {
                for (n, at) in names {
                    accepting.push(p.location(&n, &at)?);
                }
            }
        }
    }
    let close = p.cur.expect("}")?;
    if !p.cur.at_eof() {
        return Err(p.cur.peek().error(format!("unexpected {} after the automaton", describe(&p.cur.peek().tok))).into());
    }
    let Some(initial) = initial else {
        return Err(close.error("missing `init` declaration").into());
    };
    p.builder.set_initial(initial);
    for q in accepting {
        p.builder.set_accepting(q, true);
    }
    let ata = p.builder.build()?;
    let report = check_partition(&ata);
    if let Some(v) = report.violations.first() {
        let q = ata.location(&v.location).expect("reported location");
        let a = ata.symbol(&v.symbol).expect("reported letter");
        let at = p.first_rule.get(&(q, a)).unwrap_or(&header);
        return Err(at.error(format!("partition condition violated: {}", report.to_string().replace('\n', "; "))).into());
    }
    Ok(ata)
}

fn guard_text(g: &GuardExpr, clock: &str, out: &mut String) {
    let binary = |g: &GuardExpr| matches!(g, GuardExpr::And(..) | GuardExpr::Or(..));
    let child = |g: &GuardExpr, wrap: bool, out: &mut String| {
        if wrap {
            out.push('(');
            guard_text(g, clock, out);
            out.push(')');
        } else {
            guard_text(g, clock, out);
        }
    };
    match g {
        GuardExpr::True => out.push_str("tt"),
        GuardExpr::False => out.push_str("ff"),
        GuardExpr::Lt(c) => write!(out, "{clock} < {c}").unwrap(),
        GuardExpr::Le(c) => write!(out, "{clock} <= {c}").unwrap(),
        GuardExpr::Eq(c) => write!(out, "{clock} = {c}").unwrap(),
        GuardExpr::Ge(c) => write!(out, "{clock} >= {c}").unwrap(),
        GuardExpr::Gt(c) => write!(out, "{clock} > {c}").unwrap(),
        GuardExpr::Ne(c) => write!(out, "{clock} != {c}").unwrap(),
        GuardExpr::Not(inner) => {
            out.push('!');
            let atomic = matches!(**inner, GuardExpr::True | GuardExpr::False | GuardExpr::Not(_));
            child(inner, !atomic, out);
        }
        GuardExpr::And(l, r) => {
            child(l, matches!(**l, GuardExpr::Or(..)), out);
            out.push_str(" & ");
            child(r, binary(r), out);
        }
        GuardExpr::Or(l, r) => {
            child(l, false, out);
            out.push_str(" | ");
            child(r, binary(r), out);
        }
    }
}

/// Render an automaton in the format read by [`parse_ata`].
pub fn print_ata(a: &Ata) -> String {
    let mut out = String::from("ata {\n  clock x;\n");
    let list = |names: Vec<&str>| names.iter().map(|n| format!(" {}", n)).collect::<String>();
    writeln!(out, "  alphabet{};", list(a.alphabet().iter().map(String::as_str).collect())).unwrap();
    writeln!(out, "  locations{};", list(a.locations().iter().map(String::as_str).collect())).unwrap();
    writeln!(out, "  init {};", a.location_name(a.initial())).unwrap();
    writeln!(out, "  accepting{};", list(a.accepting().map(|q| a.location_name(q)).collect())).unwrap();
    for q in a.location_ids() {
        for s in a.symbol_ids() {
            for rule in a.rules(q, s) {
                let mut g = String::new();
                guard_text(rule.expr(), "x", &mut g);
                writeln!(
                    out,
                    "  {} {} [{}] -> {};",
                    a.location_name(q),
                    a.symbol_name(s),
                    g,
                    a.formula_display(rule.formula())
                )
                .unwrap();
            }
        }
    }
    out.push_str("}\n");
    out
}
