use super::lexer::{describe, tokenize, Cursor, Tok};
use crate::error::Result;
use crate::semantics::TimedWord;

/// Parse `a@3/10 a@1.3 ...` with absolute timestamps; commas between
/// entries are optional.
pub fn parse_word(src: &str) -> Result<TimedWord> {
    let mut cur = Cursor::new(tokenize(src)?);
    let mut entries = Vec::new();
    while !cur.at_eof() {
        let (letter, _) = cur.ident("a letter")?;
        cur.expect("@")?;
        let at = cur.next();
        let Tok::Number(t, _) = at.tok.clone() else {
            return Err(at.error(format!("expected a timestamp, found {}", describe(&at.tok))).into());
        };
        if let Some((_, prev)) = entries.last() {
            if t < *prev {
                return Err(at.error(format!("timestamp {} is smaller than the previous one", t)).into());
            }
        }
        entries.push((letter, t));
        cur.eat(",");
    }
    TimedWord::new(entries)
}
