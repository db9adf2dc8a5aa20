//! Tokenizer shared by the set-theoretic and emTT concrete syntaxes.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Num(String),
    LBrace,
    RBrace,
    LParen,
    RParen,
    LBrack,
    RBrack,
    Comma,
    Dot,
    Bar,
    Colon,
    Eq,
    Plus,
    Slash,
    Lt,
    Gt,
    Arrow,
    Iff,
    And,
    Or,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Ident(s) | Tok::Num(s) => return f.write_str(s),
            Tok::LBrace => "{",
            Tok::RBrace => "}",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::LBrack => "[",
            Tok::RBrack => "]",
            Tok::Comma => ",",
            Tok::Dot => ".",
            Tok::Bar => "|",
            Tok::Colon => ":",
            Tok::Eq => "=",
            Tok::Plus => "+",
            Tok::Slash => "/",
            Tok::Lt => "<",
            Tok::Gt => ">",
            Tok::Arrow => "->",
            Tok::Iff => "<->",
            Tok::And => "/\\",
            Tok::Or => "\\/",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Spanned {
    pub tok: Tok,
    pub pos: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct LexError {
    pub pos: usize,
    pub ch: char,
}

/// A syntax error in either concrete syntax, located by byte offset.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("parse error at byte {pos}: {message}")]
pub struct ParseError {
    pub pos: usize,
    pub message: String,
}

impl ParseError {
    pub(crate) fn new(pos: usize, message: impl Into<String>) -> ParseError {
        ParseError { pos, message: message.into() }
    }
}

impl From<LexError> for ParseError {
    fn from(e: LexError) -> ParseError {
        ParseError::new(e.pos, alloc::format!("unexpected character `{}`", e.ch))
    }
}

fn ident_char(c: u8) -> bool {
    c.is_ascii_alphanumeric() || c == b'_' || c == b'\''
}

pub(crate) fn lex(src: &str) -> Result<Vec<Spanned>, LexError> {
    let b = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < b.len() {
        let c = b[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'%' => {
                // comment to end of line
                while i < b.len() && b[i] != b'\n' {
                    i += 1;
                }
                continue;
            }
            b'{' => Tok::LBrace,
            b'}' => Tok::RBrace,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'[' => Tok::LBrack,
            b']' => Tok::RBrack,
            b',' => Tok::Comma,
            b'.' => Tok::Dot,
            b'|' => Tok::Bar,
            b':' => Tok::Colon,
            b'=' => Tok::Eq,
            b'+' => Tok::Plus,
            b'>' => Tok::Gt,
            b'<' if src[i..].starts_with("<->") => {
                i += 3;
                out.push(Spanned { tok: Tok::Iff, pos: start });
                continue;
            }
            b'<' => Tok::Lt,
            b'-' if src[i..].starts_with("->") => {
                i += 2;
                out.push(Spanned { tok: Tok::Arrow, pos: start });
                continue;
            }
            b'/' if src[i..].starts_with("/\\") => {
                i += 2;
                out.push(Spanned { tok: Tok::And, pos: start });
                continue;
            }
            b'/' => Tok::Slash,
            b'\\' if src[i..].starts_with("\\/") => {
                i += 2;
                out.push(Spanned { tok: Tok::Or, pos: start });
                continue;
            }
            c if c.is_ascii_digit() => {
                while i < b.len() && b[i].is_ascii_digit() {
                    i += 1;
                }
                out.push(Spanned { tok: Tok::Num(String::from(&src[start..i])), pos: start });
                continue;
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < b.len() && ident_char(b[i]) {
                    i += 1;
                }
                // generated names carry a `#k` suffix
                if i + 1 < b.len() && b[i] == b'#' && b[i + 1].is_ascii_digit() {
                    i += 1;
                    while i < b.len() && b[i].is_ascii_digit() {
                        i += 1;
                    }
                }
                if &src[start..i] == "ex" && i < b.len() && b[i] == b'!' {
                    i += 1;
                }
                out.push(Spanned { tok: Tok::Ident(String::from(&src[start..i])), pos: start });
                continue;
            }
            _ => {
                let ch = src[i..].chars().next().unwrap_or('?');
                return Err(LexError { pos: i, ch });
            }
        };
        i += 1;
        out.push(Spanned { tok, pos: start });
    }
    Ok(out)
}

/// Cursor over a token stream.
pub(crate) struct Cursor {
    toks: Vec<Spanned>,
    idx: usize,
    end: usize,
}

impl Cursor {
    pub fn new(toks: Vec<Spanned>, end: usize) -> Cursor {
        Cursor { toks, idx: 0, end }
    }

    pub fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.idx).map(|s| &s.tok)
    }

    pub fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.idx + k).map(|s| &s.tok)
    }

    pub fn pos(&self) -> usize {
        self.toks.get(self.idx).map(|s| s.pos).unwrap_or(self.end)
    }

    pub fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.idx).map(|s| s.tok.clone());
        if t.is_some() {
            self.idx += 1;
        }
        t
    }

    pub fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.idx += 1;
            true
        } else {
            false
        }
    }

    pub fn peek_ident(&self) -> Option<&str> {
        match self.peek() {
            Some(Tok::Ident(s)) => Some(s),
            _ => None,
        }
    }

    pub fn at_end(&self) -> bool {
        self.idx >= self.toks.len()
    }

    pub fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError::new(self.pos(), message)
    }

    pub fn expect(&mut self, t: &Tok) -> Result<(), ParseError> {
        if self.eat(t) {
            Ok(())
        } else {
            Err(self.unexpected(&alloc::format!("`{}`", t)))
        }
    }

    pub fn unexpected(&self, wanted: &str) -> ParseError {
        match self.peek() {
            Some(t) => self.error(alloc::format!("expected {}, found `{}`", wanted, t)),
            None => self.error(alloc::format!("expected {}, found end of input", wanted)),
        }
    }

    pub fn eat_keyword(&mut self, kw: &str) -> bool {
        if self.peek_ident() == Some(kw) {
            self.idx += 1;
            true
        } else {
            false
        }
    }

    pub fn expect_keyword(&mut self, kw: &str) -> Result<(), ParseError> {
        if self.eat_keyword(kw) {
            Ok(())
        } else {
            Err(self.unexpected(&alloc::format!("`{}`", kw)))
        }
    }

    pub fn finish(&self) -> Result<(), ParseError> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.unexpected("end of input"))
        }
    }
}

pub(crate) fn cursor(src: &str) -> Result<Cursor, ParseError> {
    Ok(Cursor::new(lex(src)?, src.len()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<Tok> {
        lex(s).unwrap().into_iter().map(|s| s.tok).collect()
    }

    #[test]
    fn operators() {
        assert_eq!(
            toks("a /\\ b \\/ c -> d <-> e"),
            [
                Tok::Ident("a".into()),
                Tok::And,
                Tok::Ident("b".into()),
                Tok::Or,
                Tok::Ident("c".into()),
                Tok::Arrow,
                Tok::Ident("d".into()),
                Tok::Iff,
                Tok::Ident("e".into()),
            ]
        );
    }

    #[test]
    fn generated_names_and_unique_exists() {
        assert_eq!(toks("w'#12 ex! x"), [Tok::Ident("w'#12".into()), Tok::Ident("ex!".into()), Tok::Ident("x".into())]);
    }

    #[test]
    fn angle_brackets_next_to_arrow() {
        assert_eq!(toks("<a,b>->c"), [
            Tok::Lt,
            Tok::Ident("a".into()),
            Tok::Comma,
            Tok::Ident("b".into()),
            Tok::Gt,
            Tok::Arrow,
            Tok::Ident("c".into()),
        ]);
    }

    #[test]
    fn rejects_unknown_characters() {
        assert_eq!(lex("a $ b"), Err(LexError { pos: 2, ch: '$' }));
    }
}
