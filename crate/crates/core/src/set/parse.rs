//! Recursive-descent parser for the ASCII set-language syntax.

use alloc::boxed::Box;
use alloc::string::String;

use super::sugar::{SFormula, STerm};
use super::{SetNode, SyntaxError};
use crate::lexer::{cursor, Cursor, ParseError, Tok};
use crate::name::{Fresh, Name};

/// Parser knobs.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ParseOptions {
    /// Accept names in the generated `base#k` namespace, e.g. when reading
    /// back printed translator output.
    pub allow_reserved: bool,
}

const KEYWORDS: &[&str] = &[
    "empty", "omega", "Un", "Pow", "sing", "op", "cup", "p1", "p2", "len", "false", "true", "not", "all", "ex",
    "ex!", "in", "sub",
];

pub fn parse_term(src: &str, opts: ParseOptions) -> Result<STerm, ParseError> {
    let mut p = Parser { c: cursor(src)?, opts };
    let t = p.term()?;
    p.c.finish()?;
    Ok(t)
}

pub fn parse_formula(src: &str, opts: ParseOptions) -> Result<SFormula, ParseError> {
    let mut p = Parser { c: cursor(src)?, opts };
    let f = p.formula()?;
    p.c.finish()?;
    Ok(f)
}

/// Parse a term or a formula and elaborate it to core syntax. The separation
/// guard is checked after elaboration.
pub fn parse_node(src: &str, opts: ParseOptions, fresh: &mut Fresh) -> Result<SetNode, ParseError> {
    let node = match parse_term(src, opts) {
        Ok(t) => SetNode::Term(t.elaborate(fresh)),
        Err(term_err) => match parse_formula(src, opts) {
            Ok(f) => SetNode::Formula(f.elaborate(fresh)),
            Err(formula_err) => {
                return Err(if term_err.pos > formula_err.pos { term_err } else { formula_err });
            }
        },
    };
    let wf = match &node {
        SetNode::Term(t) => t.check_well_formed(),
        SetNode::Formula(f) => f.check_well_formed(),
    };
    wf.map_err(|e: SyntaxError| ParseError::new(0, alloc::format!("{}", e)))?;
    Ok(node)
}

struct Parser {
    c: Cursor,
    opts: ParseOptions,
}

impl Parser {
    fn name(&mut self) -> Result<Name, ParseError> {
        let pos = self.c.pos();
        match self.c.peek() {
            Some(Tok::Ident(s)) if !KEYWORDS.contains(&s.as_str()) => {
                let n = Name::new(s);
                if n.is_reserved() && !self.opts.allow_reserved {
                    return Err(ParseError::new(pos, alloc::format!("`{}` uses the reserved `#` namespace", n)));
                }
                self.c.next();
                Ok(n)
            }
            _ => Err(self.c.unexpected("a variable")),
        }
    }

    fn formula(&mut self) -> Result<SFormula, ParseError> {
        let mut lhs = self.imp()?;
        while self.c.eat(&Tok::Iff) {
            let rhs = self.imp()?;
            lhs = SFormula::Iff(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn imp(&mut self) -> Result<SFormula, ParseError> {
        let lhs = self.or()?;
        if self.c.eat(&Tok::Arrow) {
            let rhs = self.imp()?;
            return Ok(SFormula::Imp(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<SFormula, ParseError> {
        let mut lhs = self.and()?;
        while self.c.eat(&Tok::Or) {
            let rhs = self.and()?;
            lhs = SFormula::Or(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<SFormula, ParseError> {
        let mut lhs = self.unary()?;
        while self.c.eat(&Tok::And) {
            let rhs = self.unary()?;
            lhs = SFormula::And(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<SFormula, ParseError> {
        if self.c.eat_keyword("not") {
            return Ok(SFormula::Neg(Box::new(self.unary()?)));
        }
        for kw in ["all", "ex", "ex!"] {
            if self.c.eat_keyword(kw) {
                return self.quantifier(kw);
            }
        }
        self.primary()
    }

    fn quantifier(&mut self, kw: &str) -> Result<SFormula, ParseError> {
        let x = self.name()?;
        let bound = if kw != "ex!" && self.c.eat_keyword("in") { Some(self.term()?) } else { None };
        self.c.expect(&Tok::Dot)?;
        let body = Box::new(self.formula()?);
        Ok(match (kw, bound) {
            ("all", None) => SFormula::Forall(x, body),
            ("ex", None) => SFormula::Exists(x, body),
            ("all", Some(t)) => SFormula::BForall(x, Box::new(t), body),
            ("ex", Some(t)) => SFormula::BExists(x, Box::new(t), body),
            _ => SFormula::ExistsUnique(x, body),
        })
    }

    fn primary(&mut self) -> Result<SFormula, ParseError> {
        if self.c.eat_keyword("false") {
            return Ok(SFormula::Bot);
        }
        if self.c.eat_keyword("true") {
            return Ok(SFormula::Top);
        }
        if self.c.eat(&Tok::LParen) {
            let f = self.formula()?;
            self.c.expect(&Tok::RParen)?;
            return Ok(f);
        }
        let a = self.term()?;
        if self.c.eat(&Tok::Eq) {
            Ok(SFormula::Eq(a, self.term()?))
        } else if self.c.eat_keyword("in") {
            Ok(SFormula::Mem(a, self.term()?))
        } else if self.c.eat_keyword("sub") {
            Ok(SFormula::Subset(a, self.term()?))
        } else {
            Err(self.c.unexpected("`=`, `in` or `sub`"))
        }
    }

    fn unary_app(&mut self) -> Result<Box<STerm>, ParseError> {
        self.c.expect(&Tok::LParen)?;
        let t = self.term()?;
        self.c.expect(&Tok::RParen)?;
        Ok(Box::new(t))
    }

    fn binary_app(&mut self) -> Result<(Box<STerm>, Box<STerm>), ParseError> {
        self.c.expect(&Tok::LParen)?;
        let a = self.term()?;
        self.c.expect(&Tok::Comma)?;
        let b = self.term()?;
        self.c.expect(&Tok::RParen)?;
        Ok((Box::new(a), Box::new(b)))
    }

    fn term(&mut self) -> Result<STerm, ParseError> {
        match self.c.peek().cloned() {
            Some(Tok::LBrace) => {
                self.c.next();
                let is_sep = matches!(self.c.peek(), Some(Tok::Ident(s)) if !KEYWORDS.contains(&s.as_str()))
                    && matches!(self.c.peek_at(1), Some(Tok::Ident(s)) if s == "in");
                if is_sep {
                    let x = self.name()?;
                    self.c.expect_keyword("in")?;
                    let a = self.term()?;
                    self.c.expect(&Tok::Bar)?;
                    let p = self.formula()?;
                    self.c.expect(&Tok::RBrace)?;
                    Ok(STerm::Sep(x, Box::new(a), Box::new(p)))
                } else {
                    let a = self.term()?;
                    self.c.expect(&Tok::Comma)?;
                    let b = self.term()?;
                    self.c.expect(&Tok::RBrace)?;
                    Ok(STerm::Pair(Box::new(a), Box::new(b)))
                }
            }
            Some(Tok::Num(n)) => {
                self.c.next();
                match n.as_str() {
                    "0" => Ok(STerm::Zero),
                    "1" => Ok(STerm::One),
                    _ => Err(ParseError::new(self.c.pos(), String::from("only the numerals 0 and 1 are terms"))),
                }
            }
            Some(Tok::Ident(s)) => match s.as_str() {
                "empty" => {
                    self.c.next();
                    Ok(STerm::Empty)
                }
                "omega" => {
                    self.c.next();
                    Ok(STerm::Omega)
                }
                "Un" | "Pow" | "sing" | "p1" | "p2" | "len" => {
                    self.c.next();
                    let a = self.unary_app()?;
                    Ok(match s.as_str() {
                        "Un" => STerm::Union(a),
                        "Pow" => STerm::Pow(a),
                        "sing" => STerm::Singleton(a),
                        "p1" => STerm::P1(a),
                        "p2" => STerm::P2(a),
                        _ => STerm::Len(a),
                    })
                }
                "op" | "cup" => {
                    self.c.next();
                    let (a, b) = self.binary_app()?;
                    Ok(if s == "op" { STerm::OrderedPair(a, b) } else { STerm::Cup(a, b) })
                }
                _ => Ok(STerm::Var(self.name()?)),
            },
            _ => Err(self.c.unexpected("a term")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::set::{Formula, Term};

    fn core_formula(src: &str) -> Formula {
        parse_formula(src, ParseOptions::default()).unwrap().elaborate(&mut Fresh::new())
    }

    fn v(s: &str) -> Term {
        Term::var(s)
    }

    #[test]
    fn precedence() {
        let f = core_formula("a in b /\\ b in c \\/ false -> c = d -> false");
        let expected = Formula::imp(
            Formula::or(Formula::and(Formula::mem(v("a"), v("b")), Formula::mem(v("b"), v("c"))), Formula::Bot),
            Formula::imp(Formula::eq(v("c"), v("d")), Formula::Bot),
        );
        assert_eq!(f, expected);
    }

    #[test]
    fn not_binds_tighter_than_and() {
        let f = parse_formula("not x in y /\\ false", ParseOptions::default()).unwrap();
        assert!(matches!(f, SFormula::And(ref l, _) if matches!(**l, SFormula::Neg(_))));
    }

    #[test]
    fn quantifiers_extend_right() {
        let f = core_formula("all x. x in y /\\ y in x");
        assert!(matches!(f, Formula::Forall(_, ref b) if matches!(**b, Formula::And(..))));
        let g = core_formula("false /\\ ex x. x = x \\/ false");
        assert!(matches!(g, Formula::And(_, ref r) if matches!(**r, Formula::Exists(..))));
    }

    #[test]
    fn terms() {
        let t = parse_term("{x in Un({a, omega}) | x = empty}", ParseOptions::default()).unwrap();
        let core = t.elaborate(&mut Fresh::new());
        let expected =
            Term::sep("x", Term::union(Term::pair(v("a"), Term::Omega)), Formula::eq(v("x"), Term::Empty)).unwrap();
        assert_eq!(core, expected);
    }

    #[test]
    fn iff_is_lowest() {
        let f = parse_formula("false -> false <-> true", ParseOptions::default()).unwrap();
        assert!(matches!(f, SFormula::Iff(..)));
    }

    #[test]
    fn reserved_names() {
        assert!(parse_formula("x#1 = y", ParseOptions::default()).is_err());
        assert!(parse_formula("x#1 = y", ParseOptions { allow_reserved: true }).is_ok());
    }

    #[test]
    fn sep_guard_rejected_at_parse_time() {
        let mut fr = Fresh::new();
        assert!(parse_node("{x in x | x = x}", ParseOptions::default(), &mut fr).is_err());
        assert!(parse_node("{x in y | x = x}", ParseOptions::default(), &mut fr).is_ok());
    }

    #[test]
    fn errors_carry_position() {
        let e = parse_formula("x in", ParseOptions::default()).unwrap_err();
        assert_eq!(e.pos, 4);
        let e = parse_formula("x $ y", ParseOptions::default()).unwrap_err();
        assert_eq!(e.pos, 2);
    }
}
