use super::ParseError;
use crate::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    /// Nonnegative literal: integer, `n/d` or a decimal.
    Number(Rational, bool),
    Punct(&'static str),
    Eof,
}

#[derive(Clone, Debug)]
pub(crate) struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

impl Token {
    pub fn error(&self, msg: impl Into<String>) -> ParseError {
        ParseError { line: self.line, col: self.col, msg: msg.into() }
    }
}

const PUNCT: [&str; 19] =
    ["->", "<=", ">=", "!=", "==", "&&", "||", "{", "}", "(", ")", "[", "]", ";", ",", "&", "|", "!", "@"];
const SINGLE: [&str; 4] = ["<", ">", "=", ":"];

fn ident_start(c: char) -> bool {
    c.is_alphabetic() || c == '_'
}

fn ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '.' || c == '\''
}

/// Split `src` into tokens; `#` and `//` start comments running to the end
/// of the line. Line and column numbers are 1-based.
pub(crate) fn tokenize(src: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    let advance = |i: &mut usize, line: &mut usize, col: &mut usize, n: usize| {
        for _ in 0..n {
            if chars[*i] == '\n' {
                *line += 1;
                *col = 1;
            } else {
                *col += 1;
            }
            *i += 1;
        }
    };
    while i < chars.len() {
        let c = chars[i];
        let rest: String = chars[i..chars.len().min(i + 2)].iter().collect();
        if c.is_whitespace() {
            advance(&mut i, &mut line, &mut col, 1);
            continue;
        }
        if c == '#' || rest == "//" {
            while i < chars.len() && chars[i] != '\n' {
                advance(&mut i, &mut line, &mut col, 1);
            }
            continue;
        }
        let (tline, tcol) = (line, col);
        let push = |out: &mut Vec<Token>, tok| out.push(Token { tok, line: tline, col: tcol });
        if ident_start(c) {
            let start = i;
            while i < chars.len() && ident_char(chars[i]) {
                advance(&mut i, &mut line, &mut col, 1);
            }
            push(&mut out, Tok::Ident(chars[start..i].iter().collect()));
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                advance(&mut i, &mut line, &mut col, 1);
            }
            let whole: String = chars[start..i].iter().collect();
            let digits_after = |k: usize| k + 1 < chars.len() && chars[k + 1].is_ascii_digit();
            let (value, integral) = if i < chars.len() && chars[i] == '/' && digits_after(i) {
                advance(&mut i, &mut line, &mut col, 1);
                let s = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    advance(&mut i, &mut line, &mut col, 1);
                }
                let den: String = chars[s..i].iter().collect();
                let den: num_bigint::BigInt = den.parse().expect("digits");
                if den == 0.into() {
                    return Err(ParseError { line: tline, col: tcol, msg: "zero denominator".into() });
                }
                (Rational::new(whole.parse().expect("digits"), den), false)
            } else if i < chars.len() && chars[i] == '.' && digits_after(i) {
                advance(&mut i, &mut line, &mut col, 1);
                let s = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    advance(&mut i, &mut line, &mut col, 1);
                }
                let frac: String = chars[s..i].iter().collect();
                let scale = num_bigint::BigInt::from(10).pow(frac.len() as u32);
                let num: num_bigint::BigInt = format!("{whole}{frac}").parse().expect("digits");
                (Rational::new(num, scale), false)
            } else {
                (Rational::from_integer(whole.parse().expect("digits")), true)
            };
            if i < chars.len() && ident_start(chars[i]) {
                return Err(ParseError { line, col, msg: format!("unexpected `{}` after number", chars[i]) });
            }
            push(&mut out, Tok::Number(value, integral));
            continue;
        }
        if let Some(p) = PUNCT.iter().find(|p| rest.starts_with(**p)) {
            let n = p.chars().count();
            advance(&mut i, &mut line, &mut col, n);
            push(&mut out, Tok::Punct(p));
            continue;
        }
        if let Some(p) = SINGLE.iter().find(|p| rest.starts_with(**p)) {
            advance(&mut i, &mut line, &mut col, 1);
            push(&mut out, Tok::Punct(p));
            continue;
        }
        return Err(ParseError { line, col, msg: format!("unexpected character `{}`", c) });
    }
    out.push(Token { tok: Tok::Eof, line, col });
    Ok(out)
}

/// Cursor over a token list.
pub(crate) struct Cursor {
    toks: Vec<Token>,
    pos: usize,
}

impl Cursor {
    pub fn new(toks: Vec<Token>) -> Self {
        Cursor { toks, pos: 0 }
    }

    pub fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    pub fn peek_at(&self, k: usize) -> &Token {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)]
    }

    pub fn next(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    pub fn is(&self, p: &str) -> bool {
        matches!(&self.peek().tok, Tok::Punct(q) if *q == p)
    }

    pub fn eat(&mut self, p: &str) -> bool {
        if self.is(p) {
            self.next();
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, p: &str) -> Result<Token, ParseError> {
        if self.is(p) {
            Ok(self.next())
        } else {
            Err(self.peek().error(format!("expected `{}`, found {}", p, describe(&self.peek().tok))))
        }
    }

    pub fn ident(&mut self, what: &str) -> Result<(String, Token), ParseError> {
        match &self.peek().tok {
            Tok::Ident(n) => {
                let n = n.clone();
                Ok((n, self.next()))
            }
            other => Err(self.peek().error(format!("expected {}, found {}", what, describe(other)))),
        }
    }

    pub fn at_eof(&self) -> bool {
        self.peek().tok == Tok::Eof
    }
}

pub(crate) fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(n) => format!("`{}`", n),
        Tok::Number(v, _) => format!("number `{}`", v),
        Tok::Punct(p) => format!("`{}`", p),
        Tok::Eof => "end of input".into(),
    }
}
