//! Free variables, capture-avoiding substitution, alpha-equivalence and
//! Barendregt normalization for set-theoretic syntax.

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use super::{Formula, Term};
use crate::name::{Fresh, Name};

/// A simultaneous substitution of terms for variables.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Substitution {
    map: BTreeMap<Name, Term>,
}

impl Substitution {
    pub fn new() -> Substitution {
        Substitution::default()
    }

    pub fn single(x: impl Into<Name>, t: Term) -> Substitution {
        let mut s = Substitution::new();
        s.insert(x, t);
        s
    }

    pub fn insert(&mut self, x: impl Into<Name>, t: Term) -> &mut Substitution {
        self.map.insert(x.into(), t);
        self
    }

    pub fn with(mut self, x: impl Into<Name>, t: Term) -> Substitution {
        self.insert(x, t);
        self
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    fn get(&self, x: &Name) -> Option<&Term> {
        self.map.get(x)
    }

    fn range_mentions(&self, x: &Name) -> bool {
        self.map.values().any(|t| t.occurs_free(x))
    }

    /// Restrict to the variables that actually occur free in a scope,
    /// dropping the one shadowed by `binder`.
    fn enter(&self, binder: &Name, scope_free: &BTreeSet<Name>) -> Substitution {
        Substitution {
            map: self
                .map
                .iter()
                .filter(|(k, _)| *k != binder && scope_free.contains(*k))
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
        }
    }

    fn reserve_into(&self, fresh: &mut Fresh) {
        for (k, v) in &self.map {
            fresh.reserve(k);
            v.reserve_names(fresh);
        }
    }
}

impl Term {
    pub fn free_vars(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    pub(crate) fn collect_free(&self, bound: &mut Vec<Name>, out: &mut BTreeSet<Name>) {
        match self {
            Term::Var(x) => {
                if !bound.contains(x) {
                    out.insert(x.clone());
                }
            }
            Term::Empty | Term::Omega => {}
            Term::Pair(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Term::Union(a) | Term::Pow(a) => a.collect_free(bound, out),
            Term::Sep(x, a, p) => {
                a.collect_free(bound, out);
                bound.push(x.clone());
                p.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn occurs_free(&self, x: &Name) -> bool {
        match self {
            Term::Var(y) => y == x,
            Term::Empty | Term::Omega => false,
            Term::Pair(a, b) => a.occurs_free(x) || b.occurs_free(x),
            Term::Union(a) | Term::Pow(a) => a.occurs_free(x),
            Term::Sep(y, a, p) => a.occurs_free(x) || (y != x && p.occurs_free(x)),
        }
    }

    /// Every name in the tree, free or bound.
    pub fn all_names(&self, out: &mut BTreeSet<Name>) {
        match self {
            Term::Var(x) => {
                out.insert(x.clone());
            }
            Term::Empty | Term::Omega => {}
            Term::Pair(a, b) => {
                a.all_names(out);
                b.all_names(out);
            }
            Term::Union(a) | Term::Pow(a) => a.all_names(out),
            Term::Sep(x, a, p) => {
                out.insert(x.clone());
                a.all_names(out);
                p.all_names(out);
            }
        }
    }

    pub fn reserve_names(&self, fresh: &mut Fresh) {
        match self {
            Term::Var(x) => fresh.reserve(x),
            Term::Empty | Term::Omega => {}
            Term::Pair(a, b) => {
                a.reserve_names(fresh);
                b.reserve_names(fresh);
            }
            Term::Union(a) | Term::Pow(a) => a.reserve_names(fresh),
            Term::Sep(x, a, p) => {
                fresh.reserve(x);
                a.reserve_names(fresh);
                p.reserve_names(fresh);
            }
        }
    }

    /// `self[t/x]`, capture-avoiding.
    pub fn subst(&self, x: &Name, t: &Term, fresh: &mut Fresh) -> Term {
        self.subst_many(&Substitution::single(x.clone(), t.clone()), fresh)
    }

    /// Simultaneous capture-avoiding substitution.
    pub fn subst_many(&self, s: &Substitution, fresh: &mut Fresh) -> Term {
        self.reserve_names(fresh);
        s.reserve_into(fresh);
        self.subst_rec(s, fresh)
    }

    pub(crate) fn subst_rec(&self, s: &Substitution, fresh: &mut Fresh) -> Term {
        if s.is_empty() {
            return self.clone();
        }
        match self {
            Term::Var(x) => s.get(x).cloned().unwrap_or_else(|| self.clone()),
            Term::Empty | Term::Omega => self.clone(),
            Term::Pair(a, b) => Term::Pair(Box::new(a.subst_rec(s, fresh)), Box::new(b.subst_rec(s, fresh))),
            Term::Union(a) => Term::Union(Box::new(a.subst_rec(s, fresh))),
            Term::Pow(a) => Term::Pow(Box::new(a.subst_rec(s, fresh))),
            Term::Sep(x, a, p) => {
                let a2 = a.subst_rec(s, fresh);
                let scope_free = p.free_vars();
                let mut inner = s.enter(x, &scope_free);
                // the binder must stay out of the (new) bound as well
                let clash = inner.range_mentions(x) || a2.occurs_free(x);
                if clash {
                    let x2 = fresh.fresh(x);
                    inner.insert(x.clone(), Term::Var(x2.clone()));
                    Term::Sep(x2, Box::new(a2), Box::new(p.subst_rec(&inner, fresh)))
                } else {
                    Term::Sep(x.clone(), Box::new(a2), Box::new(p.subst_rec(&inner, fresh)))
                }
            }
        }
    }

    pub fn alpha_eq(&self, other: &Term) -> bool {
        aeq_term(self, other, &mut Vec::new())
    }

    /// Rename bound variables so none coincides with a free variable or
    /// shadows an enclosing binder.
    pub fn normalize(&self) -> Term {
        let mut fresh = Fresh::new();
        self.reserve_names(&mut fresh);
        let free = self.free_vars();
        norm_term(self, &free, &mut Vec::new(), &mut fresh)
    }
}

impl Formula {
    pub fn free_vars(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    pub(crate) fn collect_free(&self, bound: &mut Vec<Name>, out: &mut BTreeSet<Name>) {
        match self {
            Formula::Bot => {}
            Formula::Eq(a, b) | Formula::Mem(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Forall(x, b) | Formula::Exists(x, b) => {
                bound.push(x.clone());
                b.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn occurs_free(&self, x: &Name) -> bool {
        match self {
            Formula::Bot => false,
            Formula::Eq(a, b) | Formula::Mem(a, b) => a.occurs_free(x) || b.occurs_free(x),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => a.occurs_free(x) || b.occurs_free(x),
            Formula::Forall(y, b) | Formula::Exists(y, b) => y != x && b.occurs_free(x),
        }
    }

    pub fn all_names(&self, out: &mut BTreeSet<Name>) {
        match self {
            Formula::Bot => {}
            Formula::Eq(a, b) | Formula::Mem(a, b) => {
                a.all_names(out);
                b.all_names(out);
            }
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                a.all_names(out);
                b.all_names(out);
            }
            Formula::Forall(x, b) | Formula::Exists(x, b) => {
                out.insert(x.clone());
                b.all_names(out);
            }
        }
    }

    pub fn reserve_names(&self, fresh: &mut Fresh) {
        match self {
            Formula::Bot => {}
            Formula::Eq(a, b) | Formula::Mem(a, b) => {
                a.reserve_names(fresh);
                b.reserve_names(fresh);
            }
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                a.reserve_names(fresh);
                b.reserve_names(fresh);
            }
            Formula::Forall(x, b) | Formula::Exists(x, b) => {
                fresh.reserve(x);
                b.reserve_names(fresh);
            }
        }
    }

    /// `self[t/x]`, capture-avoiding.
    pub fn subst(&self, x: &Name, t: &Term, fresh: &mut Fresh) -> Formula {
        self.subst_many(&Substitution::single(x.clone(), t.clone()), fresh)
    }

    pub fn subst_many(&self, s: &Substitution, fresh: &mut Fresh) -> Formula {
        self.reserve_names(fresh);
        s.reserve_into(fresh);
        self.subst_rec(s, fresh)
    }

    /// `self[y/x]` for a variable `y`.
    pub fn rename_free(&self, x: &Name, y: &Name, fresh: &mut Fresh) -> Formula {
        self.subst(x, &Term::Var(y.clone()), fresh)
    }

    pub(crate) fn subst_rec(&self, s: &Substitution, fresh: &mut Fresh) -> Formula {
        if s.is_empty() {
            return self.clone();
        }
        match self {
            Formula::Bot => Formula::Bot,
            Formula::Eq(a, b) => Formula::Eq(a.subst_rec(s, fresh), b.subst_rec(s, fresh)),
            Formula::Mem(a, b) => Formula::Mem(a.subst_rec(s, fresh), b.subst_rec(s, fresh)),
            Formula::And(a, b) => Formula::and(a.subst_rec(s, fresh), b.subst_rec(s, fresh)),
            Formula::Or(a, b) => Formula::or(a.subst_rec(s, fresh), b.subst_rec(s, fresh)),
            Formula::Imp(a, b) => Formula::imp(a.subst_rec(s, fresh), b.subst_rec(s, fresh)),
            Formula::Forall(x, b) => {
                let (x2, b2) = subst_under(x, b, s, fresh);
                Formula::Forall(x2, b2)
            }
            Formula::Exists(x, b) => {
                let (x2, b2) = subst_under(x, b, s, fresh);
                Formula::Exists(x2, b2)
            }
        }
    }

    pub fn alpha_eq(&self, other: &Formula) -> bool {
        aeq_formula(self, other, &mut Vec::new())
    }

    pub fn normalize(&self) -> Formula {
        let mut fresh = Fresh::new();
        self.reserve_names(&mut fresh);
        let free = self.free_vars();
        norm_formula(self, &free, &mut Vec::new(), &mut fresh)
    }
}

fn subst_under(x: &Name, body: &Formula, s: &Substitution, fresh: &mut Fresh) -> (Name, Box<Formula>) {
    let scope_free = body.free_vars();
    let mut inner = s.enter(x, &scope_free);
    if inner.is_empty() {
        return (x.clone(), Box::new(body.clone()));
    }
    if inner.range_mentions(x) {
        let x2 = fresh.fresh(x);
        inner.insert(x.clone(), Term::Var(x2.clone()));
        (x2, Box::new(body.subst_rec(&inner, fresh)))
    } else {
        (x.clone(), Box::new(body.subst_rec(&inner, fresh)))
    }
}

fn lookup(stack: &[(Name, Name)], x: &Name, left: bool) -> Option<usize> {
    stack
        .iter()
        .rposition(|(l, r)| if left { l == x } else { r == x })
}

fn aeq_var(x: &Name, y: &Name, stack: &[(Name, Name)]) -> bool {
    match (lookup(stack, x, true), lookup(stack, y, false)) {
        (None, None) => x == y,
        (Some(i), Some(j)) => i == j,
        _ => false,
    }
}

fn aeq_term(a: &Term, b: &Term, stack: &mut Vec<(Name, Name)>) -> bool {
    match (a, b) {
        (Term::Var(x), Term::Var(y)) => aeq_var(x, y, stack),
        (Term::Empty, Term::Empty) | (Term::Omega, Term::Omega) => true,
        (Term::Pair(a1, a2), Term::Pair(b1, b2)) => aeq_term(a1, b1, stack) && aeq_term(a2, b2, stack),
        (Term::Union(x), Term::Union(y)) | (Term::Pow(x), Term::Pow(y)) => aeq_term(x, y, stack),
        (Term::Sep(x, a1, p1), Term::Sep(y, b1, q1)) => {
            if !aeq_term(a1, b1, stack) {
                return false;
            }
            stack.push((x.clone(), y.clone()));
            let r = aeq_formula(p1, q1, stack);
            stack.pop();
            r
        }
        _ => false,
    }
}

fn aeq_formula(a: &Formula, b: &Formula, stack: &mut Vec<(Name, Name)>) -> bool {
    match (a, b) {
        (Formula::Bot, Formula::Bot) => true,
        (Formula::Eq(a1, a2), Formula::Eq(b1, b2)) | (Formula::Mem(a1, a2), Formula::Mem(b1, b2)) => {
            aeq_term(a1, b1, stack) && aeq_term(a2, b2, stack)
        }
        (Formula::And(a1, a2), Formula::And(b1, b2))
        | (Formula::Or(a1, a2), Formula::Or(b1, b2))
        | (Formula::Imp(a1, a2), Formula::Imp(b1, b2)) => aeq_formula(a1, b1, stack) && aeq_formula(a2, b2, stack),
        (Formula::Forall(x, p), Formula::Forall(y, q)) | (Formula::Exists(x, p), Formula::Exists(y, q)) => {
            stack.push((x.clone(), y.clone()));
            let r = aeq_formula(p, q, stack);
            stack.pop();
            r
        }
        _ => false,
    }
}

fn needs_rename(x: &Name, free: &BTreeSet<Name>, bound: &[Name]) -> bool {
    free.contains(x) || bound.contains(x)
}

fn norm_term(t: &Term, free: &BTreeSet<Name>, bound: &mut Vec<Name>, fresh: &mut Fresh) -> Term {
    match t {
        Term::Var(_) | Term::Empty | Term::Omega => t.clone(),
        Term::Pair(a, b) => Term::pair(norm_term(a, free, bound, fresh), norm_term(b, free, bound, fresh)),
        Term::Union(a) => Term::union(norm_term(a, free, bound, fresh)),
        Term::Pow(a) => Term::pow(norm_term(a, free, bound, fresh)),
        Term::Sep(x, a, p) => {
            let a2 = norm_term(a, free, bound, fresh);
            let (x2, p2) = if needs_rename(x, free, bound) {
                let x2 = fresh.fresh(x);
                let p2 = p.subst_rec(&Substitution::single(x.clone(), Term::Var(x2.clone())), fresh);
                (x2, p2)
            } else {
                (x.clone(), (**p).clone())
            };
            bound.push(x2.clone());
            let p3 = norm_formula(&p2, free, bound, fresh);
            bound.pop();
            Term::Sep(x2, Box::new(a2), Box::new(p3))
        }
    }
}

fn norm_formula(f: &Formula, free: &BTreeSet<Name>, bound: &mut Vec<Name>, fresh: &mut Fresh) -> Formula {
    match f {
        Formula::Bot => Formula::Bot,
        Formula::Eq(a, b) => Formula::Eq(norm_term(a, free, bound, fresh), norm_term(b, free, bound, fresh)),
        Formula::Mem(a, b) => Formula::Mem(norm_term(a, free, bound, fresh), norm_term(b, free, bound, fresh)),
        Formula::And(a, b) => Formula::and(norm_formula(a, free, bound, fresh), norm_formula(b, free, bound, fresh)),
        Formula::Or(a, b) => Formula::or(norm_formula(a, free, bound, fresh), norm_formula(b, free, bound, fresh)),
        Formula::Imp(a, b) => Formula::imp(norm_formula(a, free, bound, fresh), norm_formula(b, free, bound, fresh)),
        Formula::Forall(x, b) | Formula::Exists(x, b) => {
            let (x2, b2) = if needs_rename(x, free, bound) {
                let x2 = fresh.fresh(x);
                let b2 = b.subst_rec(&Substitution::single(x.clone(), Term::Var(x2.clone())), fresh);
                (x2, b2)
            } else {
                (x.clone(), (**b).clone())
            };
            bound.push(x2.clone());
            let b3 = norm_formula(&b2, free, bound, fresh);
            bound.pop();
            match f {
                Formula::Forall(..) => Formula::Forall(x2, Box::new(b3)),
                _ => Formula::Exists(x2, Box::new(b3)),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::set::Term as T;

    fn v(s: &str) -> T {
        T::var(s)
    }

    #[test]
    fn free_vars_examples() {
        let f = Formula::mem(v("x"), v("y"));
        assert_eq!(f.free_vars(), ["x", "y"].iter().map(|s| Name::new(s)).collect());
        let t = T::sep("x", v("y"), Formula::mem(v("x"), v("z"))).unwrap();
        assert_eq!(t.free_vars(), ["y", "z"].iter().map(|s| Name::new(s)).collect());
        let f = Formula::forall("x", Formula::mem(v("x"), T::Omega));
        assert!(f.free_vars().is_empty());
    }

    #[test]
    fn subst_examples() {
        let mut fr = Fresh::new();
        let f = Formula::mem(v("x"), v("y"));
        assert_eq!(f.subst(&"x".into(), &T::Empty, &mut fr), Formula::mem(T::Empty, v("y")));

        let g = Formula::forall("x", Formula::mem(v("x"), v("y")));
        assert_eq!(g.subst(&"x".into(), &T::Omega, &mut fr), g);

        let mut fr = Fresh::new();
        let h = Formula::exists("z", Formula::eq(v("z"), v("x")));
        let out = h.subst(&"x".into(), &v("z"), &mut fr);
        assert_eq!(out, Formula::exists("z#1", Formula::eq(v("z#1"), v("z"))));
        assert_eq!(out.free_vars(), [Name::new("z")].into_iter().collect());
    }

    #[test]
    fn subst_keeps_sep_guard() {
        // {y ∈ x | y ∈ y}[y/x] must rename the binder so it stays out of the bound
        let t = T::sep("y", v("x"), Formula::mem(v("y"), v("y"))).unwrap();
        let mut fr = Fresh::new();
        let out = t.subst(&"x".into(), &v("y"), &mut fr);
        out.check_well_formed().unwrap();
        let expected = T::sep("w", v("y"), Formula::mem(v("w"), v("w"))).unwrap();
        assert!(out.alpha_eq(&expected));
    }

    #[test]
    fn alpha_examples() {
        let a = Formula::forall("x", Formula::mem(v("x"), v("y")));
        let b = Formula::forall("z", Formula::mem(v("z"), v("y")));
        let c = Formula::forall("z", Formula::mem(v("z"), v("w")));
        assert!(a.alpha_eq(&b));
        assert!(!a.alpha_eq(&c));
        let s1 = T::sep("x", v("y"), Formula::Bot).unwrap();
        let s2 = T::sep("z", v("y"), Formula::Bot).unwrap();
        assert!(s1.alpha_eq(&s2));
        // a bound variable is never alpha-equal to a free one
        let d = Formula::forall("x", Formula::mem(v("x"), v("x")));
        let e = Formula::forall("z", Formula::mem(v("z"), v("x")));
        assert!(!d.alpha_eq(&e));
    }

    #[test]
    fn normalize_renames_clashing_binders() {
        // x ∈ y ∧ ∀x (x = x)
        let f = Formula::and(
            Formula::mem(v("x"), v("y")),
            Formula::forall("x", Formula::eq(v("x"), v("x"))),
        );
        let n = f.normalize();
        assert!(n.alpha_eq(&f));
        match &n {
            Formula::And(_, r) => match &**r {
                Formula::Forall(x, _) => assert_ne!(x.as_str(), "x"),
                other => panic!("{other:?}"),
            },
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn normalize_renames_shadowing() {
        let f = Formula::forall("x", Formula::exists("x", Formula::eq(v("x"), v("x"))));
        let n = f.normalize();
        assert!(n.alpha_eq(&f));
        let mut names = BTreeSet::new();
        n.all_names(&mut names);
        assert_eq!(names.len(), 2);
    }
}
