//! Standard abbreviations of the set language.
//!
//! The builders at the top produce core syntax directly and are shared with
//! the translations; [`STerm`] and [`SFormula`] form the surface syntax the
//! parser produces, with [`STerm::elaborate`] and [`SFormula::elaborate`]
//! removing every abbreviation.

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use super::{Formula, Term};
use crate::name::{Fresh, Name};

pub fn zero() -> Term {
    Term::Empty
}

/// `1 = {∅}`.
pub fn one() -> Term {
    singleton(Term::Empty)
}

/// `{a} = {a, a}`.
pub fn singleton(a: Term) -> Term {
    Term::pair(a.clone(), a)
}

/// `(a, b) = {{a}, {a, b}}`.
pub fn ordered_pair(a: Term, b: Term) -> Term {
    Term::pair(singleton(a.clone()), Term::pair(a, b))
}

/// `a ∪ b = ⋃{a, b}`.
pub fn cup(a: Term, b: Term) -> Term {
    Term::union(Term::pair(a, b))
}

pub fn neg(p: Formula) -> Formula {
    Formula::imp(p, Formula::Bot)
}

pub fn top() -> Formula {
    Formula::top()
}

pub fn iff(a: Formula, b: Formula) -> Formula {
    Formula::iff(a, b)
}

/// `a ⊆ b = ∀x(x∈a → x∈b)` with `x` fresh.
pub fn subset(a: Term, b: Term, fresh: &mut Fresh) -> Formula {
    let x = fresh.fresh("x");
    let vx = Term::Var(x.clone());
    Formula::forall(x, Formula::imp(Formula::mem(vx.clone(), a), Formula::mem(vx, b)))
}

/// Make `x` safe to bind over `body` next to a bound `t`: if `x` is free in
/// `t`, rename it in `body`.
fn guard_binder(x: &Name, t: &Term, body: Formula, fresh: &mut Fresh) -> (Name, Formula) {
    if t.occurs_free(x) {
        body.reserve_names(fresh);
        t.reserve_names(fresh);
        let x2 = fresh.fresh(x);
        let b2 = body.subst(x, &Term::Var(x2.clone()), fresh);
        (x2, b2)
    } else {
        (x.clone(), body)
    }
}

/// `∀x∈t φ = ∀x(x∈t → φ)`.
pub fn forall_in(x: impl Into<Name>, t: Term, body: Formula, fresh: &mut Fresh) -> Formula {
    let (x, body) = guard_binder(&x.into(), &t, body, fresh);
    let vx = Term::Var(x.clone());
    Formula::forall(x, Formula::imp(Formula::mem(vx, t), body))
}

/// `∃x∈t φ = ∃x(x∈t ∧ φ)`.
pub fn exists_in(x: impl Into<Name>, t: Term, body: Formula, fresh: &mut Fresh) -> Formula {
    let (x, body) = guard_binder(&x.into(), &t, body, fresh);
    let vx = Term::Var(x.clone());
    Formula::exists(x, Formula::and(Formula::mem(vx, t), body))
}

/// `∃!x φ = ∃xφ ∧ ∀x∀y(φ ∧ φ[y/x] → x=y)` with `y` fresh.
pub fn exists_unique(x: impl Into<Name>, body: Formula, fresh: &mut Fresh) -> Formula {
    let x = x.into();
    body.reserve_names(fresh);
    let y = fresh.fresh("y");
    let body_y = body.subst(&x, &Term::Var(y.clone()), fresh);
    Formula::and(
        Formula::exists(x.clone(), body.clone()),
        Formula::forall(
            x.clone(),
            Formula::forall(
                y.clone(),
                Formula::imp(Formula::and(body, body_y), Formula::eq(Term::Var(x), Term::Var(y))),
            ),
        ),
    )
}

/// `p1(a) = ⋃{x∈⋃a | ∀y(y∈a → x∈y)}`.
pub fn p1(a: Term, fresh: &mut Fresh) -> Term {
    a.reserve_names(fresh);
    let x = fresh.fresh("x");
    let y = fresh.fresh("y");
    let (vx, vy) = (Term::Var(x.clone()), Term::Var(y.clone()));
    let body = Formula::forall(y, Formula::imp(Formula::mem(vy.clone(), a.clone()), Formula::mem(vx, vy)));
    Term::union(Term::Sep(x, Box::new(Term::union(a)), Box::new(body)))
}

/// `p2(a) = ⋃{x∈⋃a | x=p1(a) → a={{p1(a)}}}`.
pub fn p2(a: Term, fresh: &mut Fresh) -> Term {
    a.reserve_names(fresh);
    let x = fresh.fresh("x");
    let first = p1(a.clone(), fresh);
    let vx = Term::Var(x.clone());
    let body = Formula::imp(
        Formula::eq(vx, first.clone()),
        Formula::eq(a.clone(), singleton(singleton(first))),
    );
    Term::union(Term::Sep(x, Box::new(Term::union(a)), Box::new(body)))
}

/// `ℓ(a) = {x∈ω | ∃y((x,y)∈a)}`.
pub fn len(a: Term, fresh: &mut Fresh) -> Term {
    a.reserve_names(fresh);
    let x = fresh.fresh("x");
    let y = fresh.fresh("y");
    let body = Formula::exists(
        y.clone(),
        Formula::mem(ordered_pair(Term::Var(x.clone()), Term::Var(y)), a),
    );
    Term::Sep(x, Box::new(Term::Omega), Box::new(body))
}

/// Surface term: core constructors plus abbreviations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum STerm {
    Var(Name),
    Empty,
    Omega,
    Pair(Box<STerm>, Box<STerm>),
    Union(Box<STerm>),
    Pow(Box<STerm>),
    Sep(Name, Box<STerm>, Box<SFormula>),
    Zero,
    One,
    Singleton(Box<STerm>),
    OrderedPair(Box<STerm>, Box<STerm>),
    Cup(Box<STerm>, Box<STerm>),
    P1(Box<STerm>),
    P2(Box<STerm>),
    Len(Box<STerm>),
}

/// Surface formula: core constructors plus abbreviations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SFormula {
    Bot,
    Top,
    Eq(STerm, STerm),
    Mem(STerm, STerm),
    Subset(STerm, STerm),
    Neg(Box<SFormula>),
    And(Box<SFormula>, Box<SFormula>),
    Or(Box<SFormula>, Box<SFormula>),
    Imp(Box<SFormula>, Box<SFormula>),
    Iff(Box<SFormula>, Box<SFormula>),
    Forall(Name, Box<SFormula>),
    Exists(Name, Box<SFormula>),
    ExistsUnique(Name, Box<SFormula>),
    BForall(Name, Box<STerm>, Box<SFormula>),
    BExists(Name, Box<STerm>, Box<SFormula>),
}

impl STerm {
    pub fn is_core(&self) -> bool {
        match self {
            STerm::Var(_) | STerm::Empty | STerm::Omega => true,
            STerm::Pair(a, b) => a.is_core() && b.is_core(),
            STerm::Union(a) | STerm::Pow(a) => a.is_core(),
            STerm::Sep(_, a, p) => a.is_core() && p.is_core(),
            _ => false,
        }
    }

    pub fn free_vars(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<Name>, out: &mut BTreeSet<Name>) {
        match self {
            STerm::Var(x) => {
                if !bound.contains(x) {
                    out.insert(x.clone());
                }
            }
            STerm::Empty | STerm::Omega | STerm::Zero | STerm::One => {}
            STerm::Pair(a, b) | STerm::OrderedPair(a, b) | STerm::Cup(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            STerm::Union(a) | STerm::Pow(a) | STerm::Singleton(a) | STerm::P1(a) | STerm::P2(a) | STerm::Len(a) => {
                a.collect_free(bound, out)
            }
            STerm::Sep(x, a, p) => {
                a.collect_free(bound, out);
                bound.push(x.clone());
                p.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    fn reserve_names(&self, fresh: &mut Fresh) {
        match self {
            STerm::Var(x) => fresh.reserve(x),
            STerm::Empty | STerm::Omega | STerm::Zero | STerm::One => {}
            STerm::Pair(a, b) | STerm::OrderedPair(a, b) | STerm::Cup(a, b) => {
                a.reserve_names(fresh);
                b.reserve_names(fresh);
            }
            STerm::Union(a) | STerm::Pow(a) | STerm::Singleton(a) | STerm::P1(a) | STerm::P2(a) | STerm::Len(a) => {
                a.reserve_names(fresh)
            }
            STerm::Sep(x, a, p) => {
                fresh.reserve(x);
                a.reserve_names(fresh);
                p.reserve_names(fresh);
            }
        }
    }

    /// Replace every abbreviation by its definition.
    pub fn elaborate(&self, fresh: &mut Fresh) -> Term {
        self.reserve_names(fresh);
        self.elab(fresh)
    }

    fn elab(&self, fresh: &mut Fresh) -> Term {
        match self {
            STerm::Var(x) => Term::Var(x.clone()),
            STerm::Empty | STerm::Zero => Term::Empty,
            STerm::Omega => Term::Omega,
            STerm::Pair(a, b) => Term::pair(a.elab(fresh), b.elab(fresh)),
            STerm::Union(a) => Term::union(a.elab(fresh)),
            STerm::Pow(a) => Term::pow(a.elab(fresh)),
            STerm::Sep(x, a, p) => Term::Sep(x.clone(), Box::new(a.elab(fresh)), Box::new(p.elab(fresh))),
            STerm::One => one(),
            STerm::Singleton(a) => singleton(a.elab(fresh)),
            STerm::OrderedPair(a, b) => ordered_pair(a.elab(fresh), b.elab(fresh)),
            STerm::Cup(a, b) => cup(a.elab(fresh), b.elab(fresh)),
            STerm::P1(a) => p1(a.elab(fresh), fresh),
            STerm::P2(a) => p2(a.elab(fresh), fresh),
            STerm::Len(a) => len(a.elab(fresh), fresh),
        }
    }
}

impl SFormula {
    pub fn is_core(&self) -> bool {
        match self {
            SFormula::Bot => true,
            SFormula::Eq(a, b) | SFormula::Mem(a, b) => a.is_core() && b.is_core(),
            SFormula::And(a, b) | SFormula::Or(a, b) | SFormula::Imp(a, b) => a.is_core() && b.is_core(),
            SFormula::Forall(_, b) | SFormula::Exists(_, b) => b.is_core(),
            _ => false,
        }
    }

    pub fn free_vars(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<Name>, out: &mut BTreeSet<Name>) {
        match self {
            SFormula::Bot | SFormula::Top => {}
            SFormula::Eq(a, b) | SFormula::Mem(a, b) | SFormula::Subset(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            SFormula::Neg(a) => a.collect_free(bound, out),
            SFormula::And(a, b) | SFormula::Or(a, b) | SFormula::Imp(a, b) | SFormula::Iff(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            SFormula::Forall(x, b) | SFormula::Exists(x, b) | SFormula::ExistsUnique(x, b) => {
                bound.push(x.clone());
                b.collect_free(bound, out);
                bound.pop();
            }
            SFormula::BForall(x, t, b) | SFormula::BExists(x, t, b) => {
                t.collect_free(bound, out);
                bound.push(x.clone());
                b.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    fn reserve_names(&self, fresh: &mut Fresh) {
        match self {
            SFormula::Bot | SFormula::Top => {}
            SFormula::Eq(a, b) | SFormula::Mem(a, b) | SFormula::Subset(a, b) => {
                a.reserve_names(fresh);
                b.reserve_names(fresh);
            }
            SFormula::Neg(a) => a.reserve_names(fresh),
            SFormula::And(a, b) | SFormula::Or(a, b) | SFormula::Imp(a, b) | SFormula::Iff(a, b) => {
                a.reserve_names(fresh);
                b.reserve_names(fresh);
            }
            SFormula::Forall(x, b) | SFormula::Exists(x, b) | SFormula::ExistsUnique(x, b) => {
                fresh.reserve(x);
                b.reserve_names(fresh);
            }
            SFormula::BForall(x, t, b) | SFormula::BExists(x, t, b) => {
                fresh.reserve(x);
                t.reserve_names(fresh);
                b.reserve_names(fresh);
            }
        }
    }

    pub fn elaborate(&self, fresh: &mut Fresh) -> Formula {
        self.reserve_names(fresh);
        self.elab(fresh)
    }

    fn elab(&self, fresh: &mut Fresh) -> Formula {
        match self {
            SFormula::Bot => Formula::Bot,
            SFormula::Top => top(),
            SFormula::Eq(a, b) => Formula::eq(a.elab(fresh), b.elab(fresh)),
            SFormula::Mem(a, b) => Formula::mem(a.elab(fresh), b.elab(fresh)),
            SFormula::Subset(a, b) => {
                let (a, b) = (a.elab(fresh), b.elab(fresh));
                subset(a, b, fresh)
            }
            SFormula::Neg(a) => neg(a.elab(fresh)),
            SFormula::And(a, b) => Formula::and(a.elab(fresh), b.elab(fresh)),
            SFormula::Or(a, b) => Formula::or(a.elab(fresh), b.elab(fresh)),
            SFormula::Imp(a, b) => Formula::imp(a.elab(fresh), b.elab(fresh)),
            SFormula::Iff(a, b) => iff(a.elab(fresh), b.elab(fresh)),
            SFormula::Forall(x, b) => Formula::forall(x.clone(), b.elab(fresh)),
            SFormula::Exists(x, b) => Formula::exists(x.clone(), b.elab(fresh)),
            SFormula::ExistsUnique(x, b) => {
                let b = b.elab(fresh);
                exists_unique(x.clone(), b, fresh)
            }
            SFormula::BForall(x, t, b) => {
                let (t, b) = (t.elab(fresh), b.elab(fresh));
                forall_in(x.clone(), t, b, fresh)
            }
            SFormula::BExists(x, t, b) => {
                let (t, b) = (t.elab(fresh), b.elab(fresh));
                exists_in(x.clone(), t, b, fresh)
            }
        }
    }
}

impl From<&Term> for STerm {
    fn from(t: &Term) -> STerm {
        match t {
            Term::Var(x) => STerm::Var(x.clone()),
            Term::Empty => STerm::Empty,
            Term::Omega => STerm::Omega,
            Term::Pair(a, b) => STerm::Pair(Box::new((&**a).into()), Box::new((&**b).into())),
            Term::Union(a) => STerm::Union(Box::new((&**a).into())),
            Term::Pow(a) => STerm::Pow(Box::new((&**a).into())),
            Term::Sep(x, a, p) => STerm::Sep(x.clone(), Box::new((&**a).into()), Box::new((&**p).into())),
        }
    }
}

impl From<&Formula> for SFormula {
    fn from(f: &Formula) -> SFormula {
        match f {
            Formula::Bot => SFormula::Bot,
            Formula::Eq(a, b) => SFormula::Eq(a.into(), b.into()),
            Formula::Mem(a, b) => SFormula::Mem(a.into(), b.into()),
            Formula::And(a, b) => SFormula::And(Box::new((&**a).into()), Box::new((&**b).into())),
            Formula::Or(a, b) => SFormula::Or(Box::new((&**a).into()), Box::new((&**b).into())),
            Formula::Imp(a, b) => SFormula::Imp(Box::new((&**a).into()), Box::new((&**b).into())),
            Formula::Forall(x, b) => SFormula::Forall(x.clone(), Box::new((&**b).into())),
            Formula::Exists(x, b) => SFormula::Exists(x.clone(), Box::new((&**b).into())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> Term {
        Term::var(s)
    }

    #[test]
    fn top_and_singleton() {
        let mut fr = Fresh::new();
        assert_eq!(SFormula::Top.elaborate(&mut fr), Formula::imp(Formula::Bot, Formula::Bot));
        let s = STerm::Singleton(Box::new(STerm::Var("x".into())));
        assert_eq!(s.elaborate(&mut fr), Term::pair(v("x"), v("x")));
    }

    #[test]
    fn p1_of_pair_matches_template() {
        let mut fr = Fresh::new();
        let s = STerm::P1(Box::new(STerm::OrderedPair(
            Box::new(STerm::Var("a".into())),
            Box::new(STerm::Var("b".into())),
        )));
        let out = s.elaborate(&mut fr);
        let ab = Term::pair(Term::pair(v("a"), v("a")), Term::pair(v("a"), v("b")));
        let expected = Term::union(
            Term::sep(
                "p",
                Term::union(ab.clone()),
                Formula::forall("q", Formula::imp(Formula::mem(v("q"), ab), Formula::mem(v("p"), v("q")))),
            )
            .unwrap(),
        );
        assert!(out.alpha_eq(&expected), "{out}");
    }

    #[test]
    fn subset_uses_fresh_binder() {
        let mut fr = Fresh::new();
        let f = SFormula::Subset(STerm::Var("x".into()), STerm::Var("y".into())).elaborate(&mut fr);
        let expected = Formula::forall("z", Formula::imp(Formula::mem(v("z"), v("x")), Formula::mem(v("z"), v("y"))));
        assert!(f.alpha_eq(&expected));
    }

    #[test]
    fn bounded_quantifier_renames_binder_free_in_bound() {
        let mut fr = Fresh::new();
        // ∀x∈x (x = x): the bound refers to the outer x
        let f = SFormula::BForall(
            "x".into(),
            Box::new(STerm::Var("x".into())),
            Box::new(SFormula::Eq(STerm::Var("x".into()), STerm::Var("x".into()))),
        )
        .elaborate(&mut fr);
        let expected = Formula::forall("w", Formula::imp(Formula::mem(v("w"), v("x")), Formula::eq(v("w"), v("w"))));
        assert!(f.alpha_eq(&expected), "{f}");
    }

    #[test]
    fn exists_unique_shape() {
        let mut fr = Fresh::new();
        let f = exists_unique("z", Formula::eq(v("z"), Term::Empty), &mut fr);
        let expected = Formula::and(
            Formula::exists("z", Formula::eq(v("z"), Term::Empty)),
            Formula::forall(
                "z",
                Formula::forall(
                    "y",
                    Formula::imp(
                        Formula::and(Formula::eq(v("z"), Term::Empty), Formula::eq(v("y"), Term::Empty)),
                        Formula::eq(v("z"), v("y")),
                    ),
                ),
            ),
        );
        assert!(f.alpha_eq(&expected));
    }

    #[test]
    fn elaboration_is_identity_on_core() {
        let core = Formula::forall("x", Formula::mem(v("x"), Term::pow(v("y"))));
        let s: SFormula = (&core).into();
        assert!(s.is_core());
        assert_eq!(s.elaborate(&mut Fresh::new()), core);
    }
}
