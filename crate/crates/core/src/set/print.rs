//! Pretty printer for core set syntax. Output parses back to an
//! alpha-equal tree.

use core::fmt::{self, Display, Formatter};

use super::{Formula, Term};

impl Display for Term {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(x) => write!(f, "{}", x),
            Term::Empty => f.write_str("empty"),
            Term::Omega => f.write_str("omega"),
            Term::Pair(a, b) => write!(f, "{{{}, {}}}", a, b),
            Term::Union(a) => write!(f, "Un({})", a),
            Term::Pow(a) => write!(f, "Pow({})", a),
            Term::Sep(x, a, p) => write!(f, "{{{} in {} | {}}}", x, a, p),
        }
    }
}

fn level(p: &Formula) -> u8 {
    match p {
        Formula::Forall(..) | Formula::Exists(..) => 0,
        Formula::Imp(..) => 1,
        Formula::Or(..) => 2,
        Formula::And(..) => 3,
        _ => 5,
    }
}

fn write_at(p: &Formula, ctx: u8, f: &mut Formatter<'_>) -> fmt::Result {
    if level(p) < ctx {
        f.write_str("(")?;
        write_at(p, 0, f)?;
        return f.write_str(")");
    }
    match p {
        Formula::Bot => f.write_str("false"),
        Formula::Eq(a, b) => write!(f, "{} = {}", a, b),
        Formula::Mem(a, b) => write!(f, "{} in {}", a, b),
        Formula::And(a, b) => {
            write_at(a, 3, f)?;
            f.write_str(" /\\ ")?;
            write_at(b, 4, f)
        }
        Formula::Or(a, b) => {
            write_at(a, 2, f)?;
            f.write_str(" \\/ ")?;
            write_at(b, 3, f)
        }
        Formula::Imp(a, b) => {
            write_at(a, 2, f)?;
            f.write_str(" -> ")?;
            write_at(b, 1, f)
        }
        Formula::Forall(x, b) => {
            write!(f, "all {}. ", x)?;
            write_at(b, 0, f)
        }
        Formula::Exists(x, b) => {
            write!(f, "ex {}. ", x)?;
            write_at(b, 0, f)
        }
    }
}

impl Display for Formula {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        write_at(self, 0, f)
    }
}
