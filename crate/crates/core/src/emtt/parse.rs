//! Recursive-descent parser for the ASCII pre-syntax.

use alloc::boxed::Box;

use super::{Collection, Context, Node, Prop, Term};
use crate::lexer::{cursor, Cursor, ParseError, Tok};
use crate::name::Name;
use crate::set::ParseOptions;

const KEYWORDS: &[&str] = &[
    "N0", "N1", "List", "Sig", "Pi", "P1", "Fun", "V", "prop", "star", "eps", "cons", "emp0", "elN1", "elList", "inl",
    "inr", "elPlus", "elSig", "lam", "ap", "cls", "elQ", "tt", "pr", "name", "emptyV", "UnV", "PowV", "omegaV", "bot",
    "true", "not", "all", "ex",
];

/// Keywords that can only start a collection.
const COLLECTION_START: &[&str] = &["N0", "N1", "P1", "V", "List", "Sig", "Pi", "Fun"];

pub fn parse_collection(src: &str, opts: ParseOptions) -> Result<Collection, ParseError> {
    let mut p = Parser { c: cursor(src)?, opts };
    let x = p.col()?;
    p.c.finish()?;
    Ok(x)
}

pub fn parse_term(src: &str, opts: ParseOptions) -> Result<Term, ParseError> {
    let mut p = Parser { c: cursor(src)?, opts };
    let x = p.term()?;
    p.c.finish()?;
    Ok(x)
}

pub fn parse_prop(src: &str, opts: ParseOptions) -> Result<Prop, ParseError> {
    let mut p = Parser { c: cursor(src)?, opts };
    let x = p.prop()?;
    p.c.finish()?;
    Ok(x)
}

/// `[x:A, y:B, ...]`.
pub fn parse_context(src: &str, opts: ParseOptions) -> Result<Context, ParseError> {
    let mut p = Parser { c: cursor(src)?, opts };
    p.c.expect(&Tok::LBrack)?;
    let mut ctx = Context::new();
    if !p.c.eat(&Tok::RBrack) {
        loop {
            let x = p.name()?;
            p.c.expect(&Tok::Colon)?;
            let a = p.col()?;
            ctx.entries.push((x, a));
            if p.c.eat(&Tok::RBrack) {
                break;
            }
            p.c.expect(&Tok::Comma)?;
        }
    }
    p.c.finish()?;
    Ok(ctx)
}

/// A proposition, a term or a collection, tried in that order.
pub fn parse_node(src: &str, opts: ParseOptions) -> Result<Node, ParseError> {
    let e1 = match parse_prop(src, opts) {
        Ok(p) => return Ok(Node::Prop(p)),
        Err(e) => e,
    };
    let e2 = match parse_term(src, opts) {
        Ok(t) => return Ok(Node::Term(t)),
        Err(e) => e,
    };
    let e3 = match parse_collection(src, opts) {
        Ok(c) => return Ok(Node::Col(c)),
        Err(e) => e,
    };
    let mut best = e1;
    for e in [e2, e3] {
        if e.pos > best.pos {
            best = e;
        }
    }
    Err(best)
}

struct Parser {
    c: Cursor,
    opts: ParseOptions,
}

impl Parser {
    fn name(&mut self) -> Result<Name, ParseError> {
        let pos = self.c.pos();
        match self.c.peek() {
            Some(Tok::Ident(s)) if !KEYWORDS.contains(&s.as_str()) && s != "ex!" => {
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

    fn is_plain_ident(t: Option<&Tok>) -> bool {
        matches!(t, Some(Tok::Ident(s)) if !KEYWORDS.contains(&s.as_str()))
    }

    fn at_collection(&self) -> bool {
        match self.c.peek() {
            Some(Tok::LParen) | Some(Tok::LBrack) => true,
            Some(Tok::Ident(s)) => COLLECTION_START.contains(&s.as_str()),
            Some(Tok::LBrace) => Self::is_plain_ident(self.c.peek_at(1)) && self.c.peek_at(2) == Some(&Tok::Bar),
            _ => false,
        }
    }

    // collections

    fn col(&mut self) -> Result<Collection, ParseError> {
        let mut lhs = self.col_quot()?;
        while self.c.eat(&Tok::Plus) {
            let rhs = self.col_quot()?;
            lhs = Collection::Sum(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn col_quot(&mut self) -> Result<Collection, ParseError> {
        let a = self.col_atom()?;
        if self.c.eat(&Tok::Slash) {
            self.c.expect(&Tok::LParen)?;
            let x = self.name()?;
            self.c.expect(&Tok::Comma)?;
            let y = self.name()?;
            self.c.expect(&Tok::RParen)?;
            self.c.expect(&Tok::Dot)?;
            let p = self.prop()?;
            return Ok(Collection::Quot(Box::new(a), x, y, Box::new(p)));
        }
        Ok(a)
    }

    fn col_atom(&mut self) -> Result<Collection, ParseError> {
        match self.c.peek().cloned() {
            Some(Tok::LParen) => {
                self.c.next();
                let a = self.col()?;
                self.c.expect(&Tok::RParen)?;
                Ok(a)
            }
            Some(Tok::LBrack) => {
                self.c.next();
                self.c.expect_keyword("prop")?;
                let p = self.prop()?;
                self.c.expect(&Tok::RBrack)?;
                Ok(Collection::PropAsCol(Box::new(p)))
            }
            Some(Tok::LBrace) => {
                self.c.next();
                let x = self.name()?;
                self.c.expect(&Tok::Bar)?;
                let p = self.prop()?;
                self.c.expect(&Tok::RBrace)?;
                Ok(Collection::Compr(x, Box::new(p)))
            }
            Some(Tok::Ident(s)) => {
                self.c.next();
                match s.as_str() {
                    "N0" => Ok(Collection::N0),
                    "N1" => Ok(Collection::N1),
                    "P1" => Ok(Collection::PowOne),
                    "V" => Ok(Collection::Univ),
                    "List" => {
                        self.c.expect(&Tok::LParen)?;
                        let a = self.col()?;
                        self.c.expect(&Tok::RParen)?;
                        Ok(Collection::List(Box::new(a)))
                    }
                    "Fun" => {
                        self.c.expect(&Tok::LParen)?;
                        let a = self.col()?;
                        self.c.expect(&Tok::Comma)?;
                        self.c.expect_keyword("P1")?;
                        self.c.expect(&Tok::RParen)?;
                        Ok(Collection::FunPowOne(Box::new(a)))
                    }
                    "Sig" | "Pi" => {
                        let x = self.name()?;
                        self.c.expect(&Tok::Colon)?;
                        let a = self.col()?;
                        self.c.expect(&Tok::Dot)?;
                        let b = self.col()?;
                        Ok(if s == "Sig" {
                            Collection::Sigma(x, Box::new(a), Box::new(b))
                        } else {
                            Collection::Pi(x, Box::new(a), Box::new(b))
                        })
                    }
                    _ => Err(ParseError::new(self.c.pos(), alloc::format!("`{}` does not start a collection", s))),
                }
            }
            _ => Err(self.c.unexpected("a collection")),
        }
    }

    // terms

    fn args1(&mut self) -> Result<Box<Term>, ParseError> {
        self.c.expect(&Tok::LParen)?;
        let a = self.term()?;
        self.c.expect(&Tok::RParen)?;
        Ok(Box::new(a))
    }

    fn args2(&mut self) -> Result<(Box<Term>, Box<Term>), ParseError> {
        self.c.expect(&Tok::LParen)?;
        let a = self.term()?;
        self.c.expect(&Tok::Comma)?;
        let b = self.term()?;
        self.c.expect(&Tok::RParen)?;
        Ok((Box::new(a), Box::new(b)))
    }

    /// `(x)b`
    fn abs1(&mut self) -> Result<(Name, Box<Term>), ParseError> {
        self.c.expect(&Tok::LParen)?;
        let x = self.name()?;
        self.c.expect(&Tok::RParen)?;
        Ok((x, Box::new(self.term()?)))
    }

    /// `(x,y)`
    fn binder_pair(&mut self) -> Result<(Name, Name), ParseError> {
        self.c.expect(&Tok::LParen)?;
        let x = self.name()?;
        self.c.expect(&Tok::Comma)?;
        let y = self.name()?;
        self.c.expect(&Tok::RParen)?;
        Ok((x, y))
    }

    /// `[A,(x,y)φ]`
    fn quot_annot(&mut self) -> Result<(Box<Collection>, (Name, Name), Box<Prop>), ParseError> {
        self.c.expect(&Tok::LBrack)?;
        let a = self.col()?;
        self.c.expect(&Tok::Comma)?;
        let xy = self.binder_pair()?;
        let p = self.prop()?;
        self.c.expect(&Tok::RBrack)?;
        Ok((Box::new(a), xy, Box::new(p)))
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        match self.c.peek().cloned() {
            Some(Tok::Lt) => {
                self.c.next();
                let a = self.term()?;
                self.c.expect(&Tok::Comma)?;
                let b = self.term()?;
                self.c.expect(&Tok::Gt)?;
                Ok(Term::PairT(Box::new(a), Box::new(b)))
            }
            Some(Tok::LBrace) => {
                self.c.next();
                let is_sep = Self::is_plain_ident(self.c.peek())
                    && matches!(self.c.peek_at(1), Some(Tok::Ident(s)) if s == "eps");
                if is_sep {
                    let x = self.name()?;
                    self.c.expect_keyword("eps")?;
                    let a = self.term()?;
                    self.c.expect(&Tok::Bar)?;
                    let p = self.prop()?;
                    self.c.expect(&Tok::RBrace)?;
                    Ok(Term::SepV(x, Box::new(a), Box::new(p)))
                } else {
                    let a = self.term()?;
                    self.c.expect(&Tok::Comma)?;
                    let b = self.term()?;
                    self.c.expect(&Tok::RBrace)?;
                    self.c.expect_keyword("V")?;
                    Ok(Term::PairV(Box::new(a), Box::new(b)))
                }
            }
            Some(Tok::Ident(s)) => {
                let kw = s.as_str();
                if !KEYWORDS.contains(&kw) {
                    return Ok(Term::Var(self.name()?));
                }
                self.c.next();
                match kw {
                    "star" => Ok(Term::Star),
                    "eps" => Ok(Term::Eps),
                    "tt" => Ok(Term::TrueT),
                    "emptyV" => Ok(Term::EmptyV),
                    "omegaV" => Ok(Term::OmegaV),
                    "emp0" => Ok(Term::Emp0(self.args1()?)),
                    "inl" => Ok(Term::Inl(self.args1()?)),
                    "inr" => Ok(Term::Inr(self.args1()?)),
                    "UnV" => Ok(Term::UnionV(self.args1()?)),
                    "PowV" => Ok(Term::PowV(self.args1()?)),
                    "elN1" | "cons" | "ap" => {
                        let (a, b) = self.args2()?;
                        Ok(match kw {
                            "elN1" => Term::ElN1(a, b),
                            "cons" => Term::Cons(a, b),
                            _ => Term::Ap(a, b),
                        })
                    }
                    "pr" => {
                        self.c.expect(&Tok::LParen)?;
                        let p = self.prop()?;
                        self.c.expect(&Tok::RParen)?;
                        Ok(Term::PropIntoP1(Box::new(p)))
                    }
                    "name" => {
                        self.c.expect(&Tok::LParen)?;
                        let a = self.col()?;
                        self.c.expect(&Tok::RParen)?;
                        Ok(Term::NameOf(Box::new(a)))
                    }
                    "lam" => {
                        let x = self.name()?;
                        self.c.expect(&Tok::Colon)?;
                        let a = self.col()?;
                        self.c.expect(&Tok::Dot)?;
                        let b = self.term()?;
                        Ok(Term::Lam(x, Box::new(a), Box::new(b)))
                    }
                    "elList" => {
                        self.c.expect(&Tok::LBrack)?;
                        let annot = Box::new(self.col()?);
                        self.c.expect(&Tok::RBrack)?;
                        self.c.expect(&Tok::LParen)?;
                        let list = Box::new(self.term()?);
                        self.c.expect(&Tok::Comma)?;
                        let base = Box::new(self.term()?);
                        self.c.expect(&Tok::Comma)?;
                        self.c.expect(&Tok::LParen)?;
                        let x = self.name()?;
                        self.c.expect(&Tok::Comma)?;
                        let y = self.name()?;
                        self.c.expect(&Tok::Comma)?;
                        let z = self.name()?;
                        self.c.expect(&Tok::RParen)?;
                        let step = Box::new(self.term()?);
                        self.c.expect(&Tok::RParen)?;
                        Ok(Term::ElList { annot, list, base, binders: (x, y, z), step })
                    }
                    "elPlus" => {
                        self.c.expect(&Tok::LParen)?;
                        let a = Box::new(self.term()?);
                        self.c.expect(&Tok::Comma)?;
                        let (x, b) = self.abs1()?;
                        self.c.expect(&Tok::Comma)?;
                        let (y, c) = self.abs1()?;
                        self.c.expect(&Tok::RParen)?;
                        Ok(Term::ElPlus(a, x, b, y, c))
                    }
                    "elSig" => {
                        self.c.expect(&Tok::LParen)?;
                        let a = Box::new(self.term()?);
                        self.c.expect(&Tok::Comma)?;
                        let (x, y) = self.binder_pair()?;
                        let b = Box::new(self.term()?);
                        self.c.expect(&Tok::RParen)?;
                        Ok(Term::ElSigma(a, x, y, b))
                    }
                    "cls" => {
                        let (annot, binders, rel) = self.quot_annot()?;
                        let elem = self.args1()?;
                        Ok(Term::EqCls { elem, annot, binders, rel })
                    }
                    "elQ" => {
                        let (annot, binders, rel) = self.quot_annot()?;
                        self.c.expect(&Tok::LParen)?;
                        let elem = Box::new(self.term()?);
                        self.c.expect(&Tok::Comma)?;
                        let (var, body) = self.abs1()?;
                        self.c.expect(&Tok::RParen)?;
                        Ok(Term::ElQuot { annot, binders, rel, elem, var, body })
                    }
                    _ => Err(ParseError::new(self.c.pos(), alloc::format!("`{}` does not start a term", kw))),
                }
            }
            _ => Err(self.c.unexpected("a term")),
        }
    }

    // propositions

    fn prop(&mut self) -> Result<Prop, ParseError> {
        let mut lhs = self.imp()?;
        while self.c.eat(&Tok::Iff) {
            let rhs = self.imp()?;
            lhs = Prop::and(Prop::imp(lhs.clone(), rhs.clone()), Prop::imp(rhs, lhs));
        }
        Ok(lhs)
    }

    fn imp(&mut self) -> Result<Prop, ParseError> {
        let lhs = self.or()?;
        if self.c.eat(&Tok::Arrow) {
            return Ok(Prop::imp(lhs, self.imp()?));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Prop, ParseError> {
        let mut lhs = self.and()?;
        while self.c.eat(&Tok::Or) {
            lhs = Prop::or(lhs, self.and()?);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Prop, ParseError> {
        let mut lhs = self.unary()?;
        while self.c.eat(&Tok::And) {
            lhs = Prop::and(lhs, self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Prop, ParseError> {
        if self.c.eat_keyword("not") {
            return Ok(Prop::imp(self.unary()?, Prop::Bot));
        }
        let quant = match self.c.peek_ident() {
            Some("all") => Some(true),
            Some("ex") => Some(false),
            _ => None,
        };
        if let Some(is_all) = quant {
            self.c.next();
            let x = self.name()?;
            self.c.expect(&Tok::Colon)?;
            let a = self.col()?;
            self.c.expect(&Tok::Dot)?;
            let body = self.prop()?;
            return Ok(if is_all { Prop::forall(x, a, body) } else { Prop::exists(x, a, body) });
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Prop, ParseError> {
        if self.c.eat_keyword("bot") {
            return Ok(Prop::Bot);
        }
        if self.c.eat_keyword("true") {
            return Ok(Prop::imp(Prop::Bot, Prop::Bot));
        }
        if self.c.eat(&Tok::LParen) {
            let p = self.prop()?;
            self.c.expect(&Tok::RParen)?;
            return Ok(p);
        }
        let a = self.term()?;
        if self.c.eat_keyword("eps") {
            if self.at_collection() {
                let c = self.col()?;
                return Ok(Prop::EpsCol(Box::new(a), Box::new(c)));
            }
            return Ok(Prop::eps(a, self.term()?));
        }
        if self.c.eat(&Tok::Eq) {
            self.c.expect(&Tok::LBrack)?;
            let c = self.col()?;
            self.c.expect(&Tok::RBrack)?;
            return Ok(Prop::eq(c, a, self.term()?));
        }
        Err(self.c.unexpected("`eps` or `=[`"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn o() -> ParseOptions {
        ParseOptions::default()
    }

    #[test]
    fn eps_dispatches_on_the_right_operand() {
        assert!(matches!(parse_prop("x eps y", o()).unwrap(), Prop::EpsTerm(..)));
        assert!(matches!(parse_prop("x eps V", o()).unwrap(), Prop::EpsCol(..)));
        assert!(matches!(parse_prop("x eps {z | bot}", o()).unwrap(), Prop::EpsCol(..)));
        assert!(matches!(parse_prop("x eps {z eps y | bot}", o()).unwrap(), Prop::EpsTerm(..)));
        assert!(matches!(parse_prop("x eps {z, y}V", o()).unwrap(), Prop::EpsTerm(..)));
        assert!(matches!(parse_prop("eps eps eps", o()).unwrap(), Prop::EpsTerm(..)));
        assert!(matches!(parse_prop("x eps (N1 + N0)", o()).unwrap(), Prop::EpsCol(..)));
    }

    #[test]
    fn quantifiers_and_equality() {
        let p = parse_prop("all x:V. ex y:N1. x =[V] y /\\ bot", o()).unwrap();
        assert_eq!(p.to_string(), "all x:V. ex y:N1. x =[V] y /\\ bot");
    }

    #[test]
    fn collections() {
        let c = parse_collection("Sig x:N1. Pi y:List(V). Fun(N0, P1) + [prop bot]", o()).unwrap();
        assert!(matches!(c, Collection::Sigma(..)));
        let q = parse_collection("V / (a,b). a =[V] b", o()).unwrap();
        assert!(matches!(q, Collection::Quot(..)));
    }

    #[test]
    fn terms() {
        let src = "elList[N1](x, eps, (a,b,c)cons(c, b))";
        let t = parse_term(src, o()).unwrap();
        assert_eq!(t.to_string(), "elList[N1](x, eps, (a,b,c)cons(c, b))");
        let src = "elQ[V,(a,b)bot](cls[V,(a,b)bot](x), (z)<z, star>)";
        assert_eq!(parse_term(src, o()).unwrap().to_string(), src);
        let src = "elPlus(inl(tt), (p)p, (q)ap(lam x:V. x, q))";
        assert_eq!(parse_term(src, o()).unwrap().to_string(), src);
    }

    #[test]
    fn contexts() {
        let c = parse_context("[x:V, y:{z | z eps x}]", o()).unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c.to_string(), "[x:V, y:{z | z eps x}]");
        assert!(parse_context("[]", o()).unwrap().is_empty());
    }

    #[test]
    fn node_dispatch() {
        assert!(matches!(parse_node("x", o()).unwrap(), Node::Term(_)));
        assert!(matches!(parse_node("V", o()).unwrap(), Node::Col(_)));
        assert!(matches!(parse_node("x eps y", o()).unwrap(), Node::Prop(_)));
    }
}
