//! Canonical s-expression form of core set syntax.

use alloc::boxed::Box;

use super::{Formula, SetNode, Term};
use crate::name::Name;
use crate::sexp::{expect_args, shape_err, Sexp, SexpError};

fn name_sexp(x: &Name) -> Sexp {
    Sexp::atom(x.as_str())
}

pub(crate) fn name_of(s: &Sexp) -> Result<Name, SexpError> {
    s.as_atom().map(Name::new).ok_or_else(|| shape_err("a variable name", s))
}

impl Term {
    pub fn to_sexp(&self) -> Sexp {
        match self {
            Term::Var(x) => Sexp::node("var", [name_sexp(x)]),
            Term::Empty => Sexp::node("empty", []),
            Term::Omega => Sexp::node("omega", []),
            Term::Pair(a, b) => Sexp::node("pair", [a.to_sexp(), b.to_sexp()]),
            Term::Union(a) => Sexp::node("union", [a.to_sexp()]),
            Term::Pow(a) => Sexp::node("pow", [a.to_sexp()]),
            Term::Sep(x, a, p) => Sexp::node("sep", [name_sexp(x), a.to_sexp(), p.to_sexp()]),
        }
    }

    pub fn from_sexp(s: &Sexp) -> Result<Term, SexpError> {
        let (head, args) = s.as_node().ok_or_else(|| shape_err("a term", s))?;
        Ok(match head {
            "var" => Term::Var(name_of(&expect_args(head, args, 1, s)?[0])?),
            "empty" => {
                expect_args(head, args, 0, s)?;
                Term::Empty
            }
            "omega" => {
                expect_args(head, args, 0, s)?;
                Term::Omega
            }
            "pair" => {
                let a = expect_args(head, args, 2, s)?;
                Term::pair(Term::from_sexp(&a[0])?, Term::from_sexp(&a[1])?)
            }
            "union" => Term::union(Term::from_sexp(&expect_args(head, args, 1, s)?[0])?),
            "pow" => Term::pow(Term::from_sexp(&expect_args(head, args, 1, s)?[0])?),
            "sep" => {
                let a = expect_args(head, args, 3, s)?;
                let t = Term::Sep(name_of(&a[0])?, Box::new(Term::from_sexp(&a[1])?), Box::new(Formula::from_sexp(&a[2])?));
                t.check_well_formed().map_err(|e| SexpError::Shape(alloc::format!("{}", e)))?;
                t
            }
            _ => return Err(shape_err("a term", s)),
        })
    }
}

impl Formula {
    pub fn to_sexp(&self) -> Sexp {
        match self {
            Formula::Bot => Sexp::node("bot", []),
            Formula::Eq(a, b) => Sexp::node("eq", [a.to_sexp(), b.to_sexp()]),
            Formula::Mem(a, b) => Sexp::node("mem", [a.to_sexp(), b.to_sexp()]),
            Formula::And(a, b) => Sexp::node("and", [a.to_sexp(), b.to_sexp()]),
            Formula::Or(a, b) => Sexp::node("or", [a.to_sexp(), b.to_sexp()]),
            Formula::Imp(a, b) => Sexp::node("imp", [a.to_sexp(), b.to_sexp()]),
            Formula::Forall(x, b) => Sexp::node("all", [name_sexp(x), b.to_sexp()]),
            Formula::Exists(x, b) => Sexp::node("ex", [name_sexp(x), b.to_sexp()]),
        }
    }

    pub fn from_sexp(s: &Sexp) -> Result<Formula, SexpError> {
        let (head, args) = s.as_node().ok_or_else(|| shape_err("a formula", s))?;
        let two_terms = |args: &[Sexp]| -> Result<(Term, Term), SexpError> {
            let a = expect_args(head, args, 2, s)?;
            Ok((Term::from_sexp(&a[0])?, Term::from_sexp(&a[1])?))
        };
        let two = |args: &[Sexp]| -> Result<(Formula, Formula), SexpError> {
            let a = expect_args(head, args, 2, s)?;
            Ok((Formula::from_sexp(&a[0])?, Formula::from_sexp(&a[1])?))
        };
        Ok(match head {
            "bot" => {
                expect_args(head, args, 0, s)?;
                Formula::Bot
            }
            "eq" => {
                let (a, b) = two_terms(args)?;
                Formula::Eq(a, b)
            }
            "mem" => {
                let (a, b) = two_terms(args)?;
                Formula::Mem(a, b)
            }
            "and" => {
                let (a, b) = two(args)?;
                Formula::and(a, b)
            }
            "or" => {
                let (a, b) = two(args)?;
                Formula::or(a, b)
            }
            "imp" => {
                let (a, b) = two(args)?;
                Formula::imp(a, b)
            }
            "all" | "ex" => {
                let a = expect_args(head, args, 2, s)?;
                let (x, b) = (name_of(&a[0])?, Formula::from_sexp(&a[1])?);
                if head == "all" {
                    Formula::forall(x, b)
                } else {
                    Formula::exists(x, b)
                }
            }
            _ => return Err(shape_err("a formula", s)),
        })
    }
}

impl SetNode {
    pub fn to_sexp(&self) -> Sexp {
        match self {
            SetNode::Term(t) => t.to_sexp(),
            SetNode::Formula(f) => f.to_sexp(),
        }
    }

    /// Decode either category; the head symbol decides which.
    pub fn from_sexp(s: &Sexp) -> Result<SetNode, SexpError> {
        match s.as_node().map(|(h, _)| h) {
            Some("var" | "empty" | "omega" | "pair" | "union" | "pow" | "sep") => Term::from_sexp(s).map(SetNode::Term),
            Some(_) => Formula::from_sexp(s).map(SetNode::Formula),
            None => Err(shape_err("a term or formula", s)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn round_trip() {
        let f = Formula::forall(
            "x",
            Formula::imp(
                Formula::mem(Term::var("x"), Term::sep("y", Term::Omega, Formula::Bot).unwrap()),
                Formula::eq(Term::pow(Term::Empty), Term::union(Term::pair(Term::var("x"), Term::var("z")))),
            ),
        );
        let s = f.to_sexp();
        assert_eq!(
            s.to_string(),
            "(all x (imp (mem (var x) (sep y (omega) (bot))) (eq (pow (empty)) (union (pair (var x) (var z))))))"
        );
        assert_eq!(Formula::from_sexp(&crate::sexp::parse(&s.to_string()).unwrap()).unwrap(), f);
    }

    #[test]
    fn rejects_bad_shapes() {
        let s = crate::sexp::parse("(pair (empty))").unwrap();
        assert!(Term::from_sexp(&s).is_err());
        let s = crate::sexp::parse("(sep x (var x) (bot))").unwrap();
        assert!(Term::from_sexp(&s).is_err());
    }
}
