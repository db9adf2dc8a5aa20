//! Minimal s-expression reader and printer.
//!
//! Used as the canonical serialization of every AST, the rules asset, rule
//! instances, and K0 derivation files. Atoms are bare symbols or
//! double-quoted strings; `;` starts a comment that runs to end of line.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Sexp {
    Atom(String),
    Str(String),
    List(Vec<Sexp>),
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SexpError {
    #[error("unexpected end of input")]
    Eof,
    #[error("unexpected `)` at byte {0}")]
    UnexpectedClose(usize),
    #[error("unterminated string starting at byte {0}")]
    UnterminatedString(usize),
    #[error("trailing input at byte {0}")]
    Trailing(usize),
    #[error("{0}")]
    Shape(String),
}

impl Sexp {
    pub fn atom(s: &str) -> Sexp {
        Sexp::Atom(String::from(s))
    }

    pub fn list(items: Vec<Sexp>) -> Sexp {
        Sexp::List(items)
    }

    /// `(head args...)`
    pub fn node(head: &str, args: impl IntoIterator<Item = Sexp>) -> Sexp {
        let mut v = Vec::new();
        v.push(Sexp::atom(head));
        v.extend(args);
        Sexp::List(v)
    }

    pub fn as_atom(&self) -> Option<&str> {
        match self {
            Sexp::Atom(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_list(&self) -> Option<&[Sexp]> {
        match self {
            Sexp::List(v) => Some(v),
            _ => None,
        }
    }

    /// Head symbol and arguments of a non-empty list whose first item is an atom.
    pub fn as_node(&self) -> Option<(&str, &[Sexp])> {
        let l = self.as_list()?;
        let (h, rest) = l.split_first()?;
        Some((h.as_atom()?, rest))
    }

    /// Pretty form: one line while it fits in `width`, otherwise children
    /// on their own lines indented by two spaces.
    pub fn pretty(&self, width: usize) -> String {
        let mut out = String::new();
        pretty_into(self, 0, width, &mut out);
        out
    }
}

fn flat_len(s: &Sexp) -> usize {
    match s {
        Sexp::Atom(a) => a.len(),
        Sexp::Str(a) => a.len() + 2,
        Sexp::List(v) => 2 + v.iter().map(flat_len).sum::<usize>() + v.len().saturating_sub(1),
    }
}

fn pretty_into(s: &Sexp, indent: usize, width: usize, out: &mut String) {
    use core::fmt::Write;
    match s {
        Sexp::List(v) if indent + flat_len(s) > width && v.len() > 1 => {
            out.push('(');
            let _ = write!(out, "{}", v[0]);
            for c in &v[1..] {
                out.push('\n');
                for _ in 0..indent + 2 {
                    out.push(' ');
                }
                pretty_into(c, indent + 2, width, out);
            }
            out.push(')');
        }
        _ => {
            let _ = write!(out, "{}", s);
        }
    }
}

impl fmt::Display for Sexp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sexp::Atom(a) => f.write_str(a),
            Sexp::Str(s) => {
                f.write_str("\"")?;
                for c in s.chars() {
                    match c {
                        '"' => f.write_str("\\\"")?,
                        '\\' => f.write_str("\\\\")?,
                        '\n' => f.write_str("\\n")?,
                        c => fmt::Write::write_char(f, c)?,
                    }
                }
                f.write_str("\"")
            }
            Sexp::List(v) => {
                f.write_str("(")?;
                for (i, c) in v.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    fmt::Display::fmt(c, f)?;
                }
                f.write_str(")")
            }
        }
    }
}

struct Reader<'a> {
    src: &'a [u8],
    text: &'a str,
    pos: usize,
}

impl<'a> Reader<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() {
            match self.src[self.pos] {
                b' ' | b'\t' | b'\n' | b'\r' => self.pos += 1,
                b';' => {
                    while self.pos < self.src.len() && self.src[self.pos] != b'\n' {
                        self.pos += 1;
                    }
                }
                _ => break,
            }
        }
    }

    fn read(&mut self) -> Result<Sexp, SexpError> {
        self.skip_ws();
        if self.pos >= self.src.len() {
            return Err(SexpError::Eof);
        }
        match self.src[self.pos] {
            b'(' => {
                self.pos += 1;
                let mut items = Vec::new();
                loop {
                    self.skip_ws();
                    if self.pos >= self.src.len() {
                        return Err(SexpError::Eof);
                    }
                    if self.src[self.pos] == b')' {
                        self.pos += 1;
                        return Ok(Sexp::List(items));
                    }
                    items.push(self.read()?);
                }
            }
            b')' => Err(SexpError::UnexpectedClose(self.pos)),
            b'"' => {
                let start = self.pos;
                self.pos += 1;
                let mut s = String::new();
                let mut chars = self.text[self.pos..].char_indices();
                loop {
                    match chars.next() {
                        None => return Err(SexpError::UnterminatedString(start)),
                        Some((i, '"')) => {
                            self.pos += i + 1;
                            return Ok(Sexp::Str(s));
                        }
                        Some((_, '\\')) => match chars.next() {
                            Some((_, 'n')) => s.push('\n'),
                            Some((_, c)) => s.push(c),
                            None => return Err(SexpError::UnterminatedString(start)),
                        },
                        Some((_, c)) => s.push(c),
                    }
                }
            }
            _ => {
                let start = self.pos;
                while self.pos < self.src.len() {
                    match self.src[self.pos] {
                        b' ' | b'\t' | b'\n' | b'\r' | b'(' | b')' | b'"' | b';' => break,
                        _ => self.pos += 1,
                    }
                }
                Ok(Sexp::Atom(String::from(&self.text[start..self.pos])))
            }
        }
    }
}

/// Parse exactly one s-expression.
pub fn parse(src: &str) -> Result<Sexp, SexpError> {
    let mut r = Reader { src: src.as_bytes(), text: src, pos: 0 };
    let s = r.read()?;
    r.skip_ws();
    if r.pos < r.src.len() {
        return Err(SexpError::Trailing(r.pos));
    }
    Ok(s)
}

/// Parse a sequence of top-level s-expressions.
pub fn parse_many(src: &str) -> Result<Vec<Sexp>, SexpError> {
    let mut r = Reader { src: src.as_bytes(), text: src, pos: 0 };
    let mut out = Vec::new();
    loop {
        r.skip_ws();
        if r.pos >= r.src.len() {
            return Ok(out);
        }
        out.push(r.read()?);
    }
}

pub(crate) fn shape_err(what: &str, got: &Sexp) -> SexpError {
    SexpError::Shape(alloc::format!("expected {}, got `{}`", what, got))
}

/// Helper for decoding `(head a b c)` nodes with a fixed arity.
pub(crate) fn expect_args<'a>(
    head: &str,
    args: &'a [Sexp],
    n: usize,
    whole: &Sexp,
) -> Result<&'a [Sexp], SexpError> {
    if args.len() != n {
        return Err(SexpError::Shape(alloc::format!(
            "`{}` takes {} arguments, got `{}`",
            head,
            n,
            whole
        )));
    }
    Ok(args)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;

    #[test]
    fn reads_nested_lists_and_comments() {
        let s = parse("(a (b c) ; comment\n \"s t\")").unwrap();
        assert_eq!(
            s,
            Sexp::List(vec![
                Sexp::atom("a"),
                Sexp::List(vec![Sexp::atom("b"), Sexp::atom("c")]),
                Sexp::Str("s t".into()),
            ])
        );
        assert_eq!(s.to_string(), "(a (b c) \"s t\")");
    }

    #[test]
    fn errors() {
        assert_eq!(parse("(a"), Err(SexpError::Eof));
        assert_eq!(parse(")"), Err(SexpError::UnexpectedClose(0)));
        assert!(matches!(parse("a b"), Err(SexpError::Trailing(_))));
        assert!(matches!(parse("\"abc"), Err(SexpError::UnterminatedString(0))));
    }

    #[test]
    fn many() {
        let v = parse_many("(a) b ; x\n (c d)").unwrap();
        assert_eq!(v.len(), 3);
    }

    #[test]
    fn pretty_breaks_long_lists() {
        let s = parse("(rule name (premises (a b c d e f g)) (conclusion x))").unwrap();
        let p = s.pretty(20);
        assert!(p.contains('\n'));
        assert_eq!(parse(&p).unwrap(), s);
    }
}
