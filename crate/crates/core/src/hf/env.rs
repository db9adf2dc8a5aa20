//! Environment literals: `x={}, y={{}}, z={{},{{}}}`.

use alloc::string::String;
use alloc::vec::Vec;

use super::{Env, HFSet};
use crate::name::Name;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("bad environment literal at byte {pos}: {message}")]
pub struct EnvParseError {
    pub pos: usize,
    pub message: String,
}

struct P<'a> {
    s: &'a [u8],
    i: usize,
}

impl P<'_> {
    fn err<T>(&self, message: &str) -> Result<T, EnvParseError> {
        Err(EnvParseError { pos: self.i, message: message.into() })
    }

    fn ws(&mut self) {
        while self.i < self.s.len() && self.s[self.i].is_ascii_whitespace() {
            self.i += 1;
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        self.ws();
        if self.s.get(self.i) == Some(&c) {
            self.i += 1;
            true
        } else {
            false
        }
    }

    fn set(&mut self) -> Result<HFSet, EnvParseError> {
        if !self.eat(b'{') {
            return self.err("expected `{`");
        }
        let mut xs = Vec::new();
        if !self.eat(b'}') {
            loop {
                xs.push(self.set()?);
                if self.eat(b'}') {
                    break;
                }
                if !self.eat(b',') {
                    return self.err("expected `,` or `}`");
                }
            }
        }
        match HFSet::from_children(xs) {
            Some(s) => Ok(s),
            None => self.err("set rank exceeds the supported maximum"),
        }
    }

    fn name(&mut self) -> Result<Name, EnvParseError> {
        self.ws();
        let start = self.i;
        while self.i < self.s.len() && (self.s[self.i].is_ascii_alphanumeric() || matches!(self.s[self.i], b'_' | b'\'' | b'#')) {
            self.i += 1;
        }
        if start == self.i {
            return self.err("expected a variable name");
        }
        Ok(Name::new(core::str::from_utf8(&self.s[start..self.i]).expect("ascii")))
    }

    fn end(&mut self) -> Result<(), EnvParseError> {
        self.ws();
        if self.i < self.s.len() {
            return self.err("unexpected trailing input");
        }
        Ok(())
    }
}

/// A single set literal such as `{{},{{}}}`.
pub fn parse_hfset(src: &str) -> Result<HFSet, EnvParseError> {
    let mut p = P { s: src.as_bytes(), i: 0 };
    let s = p.set()?;
    p.end()?;
    Ok(s)
}

/// Comma-separated `name=set` bindings; later bindings of a name win.
pub fn parse_env(src: &str) -> Result<Env, EnvParseError> {
    let mut p = P { s: src.as_bytes(), i: 0 };
    let mut env = Env::new();
    p.ws();
    if p.i == p.s.len() {
        return Ok(env);
    }
    loop {
        let x = p.name()?;
        if !p.eat(b'=') {
            return p.err("expected `=`");
        }
        let v = p.set()?;
        env.insert(x, v);
        if !p.eat(b',') {
            break;
        }
    }
    p.end()?;
    Ok(env)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hf::format_env;

    #[test]
    fn parses_and_prints() {
        let env = parse_env("x={}, y={{}},z = {{},{{}}}").unwrap();
        assert_eq!(format_env(&env), "x={}, y={{}}, z={{},{{}}}");
        assert_eq!(parse_hfset("{{},{}}").unwrap(), parse_hfset("{{}}").unwrap());
        assert!(parse_env("").unwrap().is_empty());
    }

    #[test]
    fn errors() {
        assert_eq!(parse_env("x={").unwrap_err().pos, 3);
        assert!(parse_env("x {}").is_err());
        assert!(parse_env("x={} y={}").is_err());
        assert_eq!(parse_hfset("{{{{{}}}}}").unwrap().rank(), 4);
        assert!(parse_hfset("{{{{{{}}}}}}").is_err());
    }
}
