//! Variable machinery for the pre-syntax, written once over the slot
//! signatures of the constructors.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use super::{build, signature, Collection, Node, NodeRef, Prop, Sig, Slot, SlotRef, Term};
use crate::name::{Fresh, Name};

/// A simultaneous substitution of pre-terms for variables.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Substitution {
    map: BTreeMap<Name, Term>,
}

impl Substitution {
    pub fn new() -> Substitution {
        Substitution::default()
    }

    pub fn single(x: impl Into<Name>, t: Term) -> Substitution {
        Substitution::new().with(x, t)
    }

    pub fn with(mut self, x: impl Into<Name>, t: Term) -> Substitution {
        self.map.insert(x.into(), t);
        self
    }

    pub fn insert(&mut self, x: impl Into<Name>, t: Term) {
        self.map.insert(x.into(), t);
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn get(&self, x: &Name) -> Option<&Term> {
        self.map.get(x)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Name, &Term)> {
        self.map.iter()
    }

    fn restrict(&self, keep: &BTreeSet<Name>) -> Substitution {
        Substitution {
            map: self.map.iter().filter(|(k, _)| keep.contains(*k)).map(|(k, v)| (k.clone(), v.clone())).collect(),
        }
    }

    fn range_mentions(&self, x: &Name) -> bool {
        self.map.values().any(|t| NodeRef::Term(t).occurs_free(x))
    }

    fn reserve_into(&self, fresh: &mut Fresh) {
        for (k, v) in &self.map {
            fresh.reserve(k);
            NodeRef::Term(v).reserve_names(fresh);
        }
    }
}

fn binders_in<'a>(slots: &[SlotRef<'a>], sig: &[Sig]) -> Vec<&'a Name> {
    slots
        .iter()
        .zip(sig)
        .filter_map(|(s, g)| match (s, g) {
            (SlotRef::Name(x), Sig::Bind) => Some(*x),
            _ => None,
        })
        .collect()
}

fn in_scope(mask: u8, i: usize) -> bool {
    mask & (1 << i) != 0
}

impl<'a> NodeRef<'a> {
    fn sig(self) -> &'static [Sig] {
        signature(self.tag()).expect("every constructor has a signature")
    }

    pub(crate) fn collect_free(self, bound: &mut Vec<Name>, out: &mut BTreeSet<Name>) {
        if let NodeRef::Term(Term::Var(x)) = self {
            if !bound.contains(x) {
                out.insert(x.clone());
            }
            return;
        }
        let slots = self.slots();
        let sig = self.sig();
        let binders = binders_in(&slots, sig);
        for (s, g) in slots.iter().zip(sig) {
            if let (SlotRef::Node(child), Sig::Sub(_, mask)) = (s, g) {
                let before = bound.len();
                for (i, b) in binders.iter().enumerate() {
                    if in_scope(*mask, i) {
                        bound.push((*b).clone());
                    }
                }
                child.collect_free(bound, out);
                bound.truncate(before);
            }
        }
    }

    pub(crate) fn free_vars(self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    pub(crate) fn occurs_free(self, x: &Name) -> bool {
        if let NodeRef::Term(Term::Var(y)) = self {
            return y == x;
        }
        let slots = self.slots();
        let sig = self.sig();
        let binders = binders_in(&slots, sig);
        slots.iter().zip(sig).any(|(s, g)| match (s, g) {
            (SlotRef::Node(child), Sig::Sub(_, mask)) => {
                let shadowed = binders.iter().enumerate().any(|(i, b)| in_scope(*mask, i) && *b == x);
                !shadowed && child.occurs_free(x)
            }
            _ => false,
        })
    }

    pub(crate) fn all_names(self, out: &mut BTreeSet<Name>) {
        for s in self.slots() {
            match s {
                SlotRef::Name(x) => {
                    out.insert(x.clone());
                }
                SlotRef::Node(n) => n.all_names(out),
            }
        }
    }

    pub(crate) fn reserve_names(self, fresh: &mut Fresh) {
        for s in self.slots() {
            match s {
                SlotRef::Name(x) => fresh.reserve(x),
                SlotRef::Node(n) => n.reserve_names(fresh),
            }
        }
    }

    pub(crate) fn subst_rec(self, s: &Substitution, fresh: &mut Fresh) -> Node {
        if s.is_empty() {
            return self.to_owned();
        }
        if let NodeRef::Term(Term::Var(x)) = self {
            return Node::Term(s.get(x).cloned().unwrap_or_else(|| Term::Var(x.clone())));
        }
        let s = s.restrict(&self.free_vars());
        if s.is_empty() {
            return self.to_owned();
        }
        let slots = self.slots();
        let sig = self.sig();
        let binders = binders_in(&slots, sig);
        let renamed: Vec<Name> =
            binders.iter().map(|b| if s.range_mentions(b) { fresh.fresh(b) } else { (*b).clone() }).collect();
        let mut bi = 0;
        let mut out = Vec::with_capacity(slots.len());
        for (slot, g) in slots.iter().zip(sig) {
            match (slot, g) {
                (SlotRef::Name(_), Sig::Bind) => {
                    out.push(Slot::Name(renamed[bi].clone()));
                    bi += 1;
                }
                (SlotRef::Name(x), _) => out.push(Slot::Name((*x).clone())),
                (SlotRef::Node(child), Sig::Sub(_, mask)) => {
                    let mut inner = s.clone();
                    for (i, b) in binders.iter().enumerate() {
                        if in_scope(*mask, i) {
                            inner.map.remove(*b);
                        }
                    }
                    for (i, b) in binders.iter().enumerate() {
                        if in_scope(*mask, i) && renamed[i] != **b {
                            inner.map.insert((*b).clone(), Term::Var(renamed[i].clone()));
                        }
                    }
                    out.push(Slot::Node(child.subst_rec(&inner, fresh)));
                }
                (SlotRef::Node(child), _) => out.push(Slot::Node(child.to_owned())),
            }
        }
        build(self.tag(), out).expect("slots rebuilt in signature order")
    }

    pub(crate) fn subst(self, s: &Substitution, fresh: &mut Fresh) -> Node {
        self.reserve_names(fresh);
        s.reserve_into(fresh);
        self.subst_rec(s, fresh)
    }

    pub(crate) fn alpha_eq(self, other: NodeRef<'_>, stack: &mut Vec<(Name, Name)>) -> bool {
        if let (NodeRef::Term(Term::Var(x)), NodeRef::Term(Term::Var(y))) = (self, other) {
            let l = stack.iter().rposition(|(a, _)| a == x);
            let r = stack.iter().rposition(|(_, b)| b == y);
            return match (l, r) {
                (None, None) => x == y,
                (Some(i), Some(j)) => i == j,
                _ => false,
            };
        }
        if self.tag() != other.tag() {
            return false;
        }
        let (ls, rs) = (self.slots(), other.slots());
        let sig = self.sig();
        let (lb, rb) = (binders_in(&ls, sig), binders_in(&rs, sig));
        for ((a, b), g) in ls.iter().zip(&rs).zip(sig) {
            if let (SlotRef::Node(a), SlotRef::Node(b), Sig::Sub(_, mask)) = (a, b, g) {
                let before = stack.len();
                for i in 0..lb.len() {
                    if in_scope(*mask, i) {
                        stack.push((lb[i].clone(), rb[i].clone()));
                    }
                }
                let ok = a.alpha_eq(*b, stack);
                stack.truncate(before);
                if !ok {
                    return false;
                }
            }
        }
        true
    }

    fn normalize_rec(self, free: &BTreeSet<Name>, bound: &mut Vec<Name>, fresh: &mut Fresh) -> Node {
        if let NodeRef::Term(Term::Var(_)) = self {
            return self.to_owned();
        }
        let slots = self.slots();
        let sig = self.sig();
        let binders = binders_in(&slots, sig);
        let renamed: Vec<Name> = binders
            .iter()
            .map(|b| if free.contains(*b) || bound.contains(*b) { fresh.fresh(b) } else { (*b).clone() })
            .collect();
        let mut bi = 0;
        let mut out = Vec::with_capacity(slots.len());
        for (slot, g) in slots.iter().zip(sig) {
            match (slot, g) {
                (SlotRef::Name(_), Sig::Bind) => {
                    out.push(Slot::Name(renamed[bi].clone()));
                    bi += 1;
                }
                (SlotRef::Name(x), _) => out.push(Slot::Name((*x).clone())),
                (SlotRef::Node(child), Sig::Sub(_, mask)) => {
                    let mut ren = Substitution::new();
                    for (i, b) in binders.iter().enumerate() {
                        if in_scope(*mask, i) && renamed[i] != **b {
                            ren.insert((*b).clone(), Term::Var(renamed[i].clone()));
                        }
                    }
                    let child = child.subst_rec(&ren, fresh);
                    let before = bound.len();
                    for (i, r) in renamed.iter().enumerate() {
                        if in_scope(*mask, i) {
                            bound.push(r.clone());
                        }
                    }
                    out.push(Slot::Node(child.as_ref().normalize_rec(free, bound, fresh)));
                    bound.truncate(before);
                }
                (SlotRef::Node(child), _) => out.push(Slot::Node(child.to_owned())),
            }
        }
        build(self.tag(), out).expect("slots rebuilt in signature order")
    }

    pub(crate) fn normalize(self) -> Node {
        let mut fresh = Fresh::new();
        self.reserve_names(&mut fresh);
        let free = self.free_vars();
        self.normalize_rec(&free, &mut Vec::new(), &mut fresh)
    }
}

macro_rules! typed_ops {
    ($ty:ident, $variant:ident, $into:ident) => {
        impl $ty {
            pub fn free_vars(&self) -> BTreeSet<Name> {
                NodeRef::$variant(self).free_vars()
            }

            pub fn occurs_free(&self, x: &Name) -> bool {
                NodeRef::$variant(self).occurs_free(x)
            }

            /// Every name in the tree, free or bound.
            pub fn all_names(&self) -> BTreeSet<Name> {
                let mut out = BTreeSet::new();
                NodeRef::$variant(self).all_names(&mut out);
                out
            }

            pub fn reserve_names(&self, fresh: &mut Fresh) {
                NodeRef::$variant(self).reserve_names(fresh)
            }

            /// `self[t/x]`, capture-avoiding.
            pub fn subst(&self, x: &Name, t: &Term, fresh: &mut Fresh) -> $ty {
                self.subst_many(&Substitution::single(x.clone(), t.clone()), fresh)
            }

            /// Simultaneous capture-avoiding substitution.
            pub fn subst_many(&self, s: &Substitution, fresh: &mut Fresh) -> $ty {
                NodeRef::$variant(self).subst(s, fresh).$into().expect("substitution preserves the sort")
            }

            pub fn alpha_eq(&self, other: &$ty) -> bool {
                NodeRef::$variant(self).alpha_eq(NodeRef::$variant(other), &mut Vec::new())
            }

            /// Rename bound variables so none is also free or shadows an
            /// enclosing binder.
            pub fn normalize(&self) -> $ty {
                NodeRef::$variant(self).normalize().$into().expect("normalization preserves the sort")
            }
        }
    };
}

typed_ops!(Collection, Col, into_col);
typed_ops!(Term, Term, into_term);
typed_ops!(Prop, Prop, into_prop);

impl Node {
    pub fn free_vars(&self) -> BTreeSet<Name> {
        self.as_ref().free_vars()
    }

    pub fn all_names(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.as_ref().all_names(&mut out);
        out
    }

    pub fn subst_many(&self, s: &Substitution, fresh: &mut Fresh) -> Node {
        self.as_ref().subst(s, fresh)
    }

    pub fn alpha_eq(&self, other: &Node) -> bool {
        self.as_ref().alpha_eq(other.as_ref(), &mut Vec::new())
    }

    pub fn normalize(&self) -> Node {
        self.as_ref().normalize()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::boxed::Box;

    fn v(s: &str) -> Term {
        Term::var(s)
    }

    fn names(xs: &[&str]) -> BTreeSet<Name> {
        xs.iter().map(|s| Name::new(s)).collect()
    }

    #[test]
    fn free_vars_examples() {
        let lam = Term::Lam("x".into(), Box::new(Collection::Univ), Box::new(v("x")));
        assert!(lam.free_vars().is_empty());
        let sig = Collection::Sigma(
            "x".into(),
            Box::new(Collection::Univ),
            Box::new(Collection::PropAsCol(Box::new(Prop::eps(v("x"), v("y"))))),
        );
        assert_eq!(sig.free_vars(), names(&["y"]));
        let el = Term::ElList {
            annot: Box::new(Collection::Univ),
            list: Box::new(v("a")),
            base: Box::new(v("b")),
            binders: ("x".into(), "y".into(), "z".into()),
            step: Box::new(v("z")),
        };
        assert_eq!(el.free_vars(), names(&["a", "b"]));
    }

    #[test]
    fn lam_annotation_is_outside_binder_scope() {
        let lam = Term::Lam(
            "x".into(),
            Box::new(Collection::Compr("z".into(), Box::new(Prop::eps(v("z"), v("x"))))),
            Box::new(v("x")),
        );
        assert_eq!(lam.free_vars(), names(&["x"]));
    }

    #[test]
    fn subst_examples() {
        let mut fr = Fresh::new();
        let p = Prop::eps(v("x"), v("y"));
        assert_eq!(p.subst(&"x".into(), &Term::OmegaV, &mut fr), Prop::eps(Term::OmegaV, v("y")));

        let lam = Term::Lam("x".into(), Box::new(Collection::Univ), Box::new(v("x")));
        assert_eq!(lam.subst(&"x".into(), &Term::EmptyV, &mut fr), lam);

        let mut fr = Fresh::new();
        let c = Collection::Compr("y".into(), Box::new(Prop::eq(Collection::Univ, v("y"), v("x"))));
        let out = c.subst(&"x".into(), &v("y"), &mut fr);
        assert_eq!(out, Collection::Compr("y#1".into(), Box::new(Prop::eq(Collection::Univ, v("y#1"), v("y")))));
        assert_eq!(out.free_vars(), names(&["y"]));
    }

    #[test]
    fn subst_reaches_annotations() {
        let mut fr = Fresh::new();
        let p = Prop::forall("z", Collection::Compr("w".into(), Box::new(Prop::eps(v("w"), v("x")))), Prop::Bot);
        let out = p.subst(&"x".into(), &Term::EmptyV, &mut fr);
        let expected =
            Prop::forall("z", Collection::Compr("w".into(), Box::new(Prop::eps(v("w"), Term::EmptyV))), Prop::Bot);
        assert_eq!(out, expected);
    }

    #[test]
    fn alpha_examples() {
        let pi = |x: &str| Collection::Pi(x.into(), Box::new(Collection::Univ), Box::new(Collection::Univ));
        assert!(pi("x").alpha_eq(&pi("y")));
        let q = |x: &str, y: &str| Collection::Quot(Box::new(Collection::N1), x.into(), y.into(), Box::new(Prop::Bot));
        assert!(q("x", "y").alpha_eq(&q("a", "b")));
        let c = |z: &str| Collection::Compr("x".into(), Box::new(Prop::eps(v("x"), v(z))));
        assert!(!c("y").alpha_eq(&c("z")));
    }

    #[test]
    fn alpha_respects_binder_order() {
        let q = |x: &str, y: &str| {
            Collection::Quot(Box::new(Collection::N1), x.into(), y.into(), Box::new(Prop::eps(v("a"), v("b"))))
        };
        assert!(!q("a", "b").alpha_eq(&q("b", "a")));
        assert!(!q("a", "b").alpha_eq(&q("c", "d")));
        assert!(q("a", "b").alpha_eq(&q("a", "b")));
    }

    #[test]
    fn normalize_removes_clashes() {
        // x ε y ∧ (∀x∈V) x ε x
        let p = Prop::and(Prop::eps(v("x"), v("y")), Prop::forall("x", Collection::Univ, Prop::eps(v("x"), v("x"))));
        let n = p.normalize();
        assert!(n.alpha_eq(&p));
        match &n {
            Prop::And(_, r) => assert!(matches!(&**r, Prop::Forall(x, _, _) if x.as_str() != "x")),
            _ => unreachable!(),
        }
    }
}
