//! Pretty printer for the pre-syntax.
//!
//! Collections use three levels: binder forms (`Sig`, `Pi`, quotients) that
//! extend to the right are 0, sums are 1, everything else is atomic (2).
//! Propositions use the same levels as the set language.

use core::fmt::{self, Display, Formatter};

use super::{Collection, Context, Node, Prop, Term};

fn col_level(c: &Collection) -> u8 {
    match c {
        Collection::Sigma(..) | Collection::Pi(..) | Collection::Quot(..) => 0,
        Collection::Sum(..) => 1,
        _ => 2,
    }
}

fn write_col(c: &Collection, ctx: u8, f: &mut Formatter<'_>) -> fmt::Result {
    if col_level(c) < ctx {
        f.write_str("(")?;
        write_col(c, 0, f)?;
        return f.write_str(")");
    }
    match c {
        Collection::N0 => f.write_str("N0"),
        Collection::N1 => f.write_str("N1"),
        Collection::List(a) => {
            f.write_str("List(")?;
            write_col(a, 0, f)?;
            f.write_str(")")
        }
        Collection::Sum(a, b) => {
            write_col(a, 1, f)?;
            f.write_str(" + ")?;
            write_col(b, 2, f)
        }
        Collection::Sigma(x, a, b) | Collection::Pi(x, a, b) => {
            let kw = if matches!(c, Collection::Sigma(..)) { "Sig" } else { "Pi" };
            write!(f, "{} {}:", kw, x)?;
            write_col(a, 2, f)?;
            f.write_str(". ")?;
            write_col(b, 0, f)
        }
        Collection::Quot(a, x, y, p) => {
            write_col(a, 2, f)?;
            write!(f, " / ({},{}). ", x, y)?;
            write_prop(p, 0, f)
        }
        Collection::PowOne => f.write_str("P1"),
        Collection::FunPowOne(a) => {
            f.write_str("Fun(")?;
            write_col(a, 0, f)?;
            f.write_str(", P1)")
        }
        Collection::Compr(x, p) => {
            write!(f, "{{{} | ", x)?;
            write_prop(p, 0, f)?;
            f.write_str("}")
        }
        Collection::PropAsCol(p) => {
            f.write_str("[prop ")?;
            write_prop(p, 0, f)?;
            f.write_str("]")
        }
        Collection::Univ => f.write_str("V"),
    }
}

/// `[A,(x,y)φ]`, shared by the quotient term formers.
fn write_quot_annot(a: &Collection, x: &str, y: &str, p: &Prop, f: &mut Formatter<'_>) -> fmt::Result {
    f.write_str("[")?;
    write_col(a, 0, f)?;
    write!(f, ",({},{})", x, y)?;
    write_prop(p, 0, f)?;
    f.write_str("]")
}

impl Display for Term {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(x) => write!(f, "{}", x),
            Term::Emp0(a) => write!(f, "emp0({})", a),
            Term::Star => f.write_str("star"),
            Term::ElN1(a, b) => write!(f, "elN1({}, {})", a, b),
            Term::Eps => f.write_str("eps"),
            Term::Cons(a, b) => write!(f, "cons({}, {})", a, b),
            Term::ElList { annot, list, base, binders: (x, y, z), step } => {
                f.write_str("elList[")?;
                write_col(annot, 0, f)?;
                write!(f, "]({}, {}, ({},{},{}){})", list, base, x, y, z, step)
            }
            Term::Inl(a) => write!(f, "inl({})", a),
            Term::Inr(a) => write!(f, "inr({})", a),
            Term::ElPlus(a, x, b, y, c) => write!(f, "elPlus({}, ({}){}, ({}){})", a, x, b, y, c),
            Term::PairT(a, b) => write!(f, "<{}, {}>", a, b),
            Term::ElSigma(a, x, y, b) => write!(f, "elSig({}, ({},{}){})", a, x, y, b),
            Term::Lam(x, a, b) => {
                write!(f, "lam {}:", x)?;
                write_col(a, 2, f)?;
                write!(f, ". {}", b)
            }
            Term::Ap(a, b) => write!(f, "ap({}, {})", a, b),
            Term::EqCls { elem, annot, binders: (x, y), rel } => {
                f.write_str("cls")?;
                write_quot_annot(annot, x, y, rel, f)?;
                write!(f, "({})", elem)
            }
            Term::ElQuot { annot, binders: (x, y), rel, elem, var, body } => {
                f.write_str("elQ")?;
                write_quot_annot(annot, x, y, rel, f)?;
                write!(f, "({}, ({}){})", elem, var, body)
            }
            Term::TrueT => f.write_str("tt"),
            Term::PropIntoP1(p) => write!(f, "pr({})", p),
            Term::NameOf(a) => {
                f.write_str("name(")?;
                write_col(a, 0, f)?;
                f.write_str(")")
            }
            Term::EmptyV => f.write_str("emptyV"),
            Term::PairV(a, b) => write!(f, "{{{}, {}}}V", a, b),
            Term::UnionV(a) => write!(f, "UnV({})", a),
            Term::PowV(a) => write!(f, "PowV({})", a),
            Term::SepV(x, a, p) => write!(f, "{{{} eps {} | {}}}", x, a, p),
            Term::OmegaV => f.write_str("omegaV"),
        }
    }
}

fn prop_level(p: &Prop) -> u8 {
    match p {
        Prop::Forall(..) | Prop::Exists(..) => 0,
        Prop::Imp(..) => 1,
        Prop::Or(..) => 2,
        Prop::And(..) => 3,
        _ => 5,
    }
}

fn write_prop(p: &Prop, ctx: u8, f: &mut Formatter<'_>) -> fmt::Result {
    if prop_level(p) < ctx {
        f.write_str("(")?;
        write_prop(p, 0, f)?;
        return f.write_str(")");
    }
    match p {
        Prop::Bot => f.write_str("bot"),
        Prop::EpsTerm(a, b) => write!(f, "{} eps {}", a, b),
        Prop::EpsCol(a, c) => {
            write!(f, "{} eps ", a)?;
            write_col(c, 1, f)
        }
        Prop::EqP(c, a, b) => {
            write!(f, "{} =[", a)?;
            write_col(c, 0, f)?;
            write!(f, "] {}", b)
        }
        Prop::And(a, b) => {
            write_prop(a, 3, f)?;
            f.write_str(" /\\ ")?;
            write_prop(b, 4, f)
        }
        Prop::Or(a, b) => {
            write_prop(a, 2, f)?;
            f.write_str(" \\/ ")?;
            write_prop(b, 3, f)
        }
        Prop::Imp(a, b) => {
            write_prop(a, 2, f)?;
            f.write_str(" -> ")?;
            write_prop(b, 1, f)
        }
        Prop::Forall(x, c, b) | Prop::Exists(x, c, b) => {
            let kw = if matches!(p, Prop::Forall(..)) { "all" } else { "ex" };
            write!(f, "{} {}:", kw, x)?;
            write_col(c, 2, f)?;
            f.write_str(". ")?;
            write_prop(b, 0, f)
        }
    }
}

impl Display for Collection {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        write_col(self, 0, f)
    }
}

impl Display for Prop {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        write_prop(self, 0, f)
    }
}

impl Display for Node {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            Node::Col(c) => c.fmt(f),
            Node::Term(t) => t.fmt(f),
            Node::Prop(p) => p.fmt(f),
        }
    }
}

impl Display for Context {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, (x, a)) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}:", x)?;
            write_col(a, 0, f)?;
        }
        f.write_str("]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::boxed::Box;
    use alloc::string::ToString;

    #[test]
    fn tilde_image_prints_as_expected() {
        let p = Prop::forall("x", Collection::Univ, Prop::eps(Term::var("x"), Term::var("y")));
        assert_eq!(p.to_string(), "all x:V. x eps y");
    }

    #[test]
    fn collections() {
        let s = Collection::Sum(
            Box::new(Collection::N1),
            Box::new(Collection::Sigma("x".into(), Box::new(Collection::Univ), Box::new(Collection::N0))),
        );
        assert_eq!(s.to_string(), "N1 + (Sig x:V. N0)");
        let q = Collection::Quot(Box::new(Collection::List(Box::new(Collection::N1))), "a".into(), "b".into(), Box::new(Prop::Bot));
        assert_eq!(q.to_string(), "List(N1) / (a,b). bot");
    }

    #[test]
    fn terms() {
        let t = Term::ElQuot {
            annot: Box::new(Collection::N1),
            binders: ("x".into(), "y".into()),
            rel: Box::new(Prop::Bot),
            elem: Box::new(Term::var("a")),
            var: "z".into(),
            body: Box::new(Term::PairV(Box::new(Term::var("z")), Box::new(Term::EmptyV))),
        };
        assert_eq!(t.to_string(), "elQ[N1,(x,y)bot](a, (z){z, emptyV}V)");
    }
}
