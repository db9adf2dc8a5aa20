//! Seeded random generators for both languages.
//!
//! Depth counts constructor nesting with variables and constants at depth
//! 0, so an atom over variables has depth 0. Every output is normalized so
//! no binder shadows another or clashes with a free variable.

use alloc::boxed::Box;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::GenConfig;
use crate::emtt::{Collection, Prop, Term as PreTerm};
use crate::name::Name;
use crate::set::{Formula, Term};
use crate::TheoryFlavor;

pub(crate) struct Gen<'a> {
    pub cfg: &'a GenConfig,
    pub rng: &'a mut ChaCha8Rng,
}

impl Gen<'_> {
    fn name(&mut self) -> Name {
        self.cfg.pool.choose(self.rng).expect("pool is not empty").clone()
    }

    /// Two distinct names, or the same name twice for a singleton pool.
    fn names2(&mut self) -> (Name, Name) {
        let (a, b, _) = self.names3();
        (a, b)
    }

    fn names3(&mut self) -> (Name, Name, Name) {
        let mut p = self.cfg.pool.clone();
        p.shuffle(self.rng);
        let at = |i: usize| p[i.min(p.len() - 1)].clone();
        (at(0), at(1), at(2))
    }

    fn coin(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p)
    }

    fn pick(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }

    // set language

    fn set_leaf(&mut self) -> Term {
        match self.pick(if self.cfg.omega_allowed { 6 } else { 5 }) {
            0..=3 => Term::Var(self.name()),
            4 => Term::Empty,
            _ => Term::Omega,
        }
    }

    fn set_term_raw(&mut self, depth: usize, delta0: bool) -> Term {
        if depth == 0 || self.coin(0.3) {
            return self.set_leaf();
        }
        let pow = self.cfg.flavor != TheoryFlavor::Czf;
        let d = depth - 1;
        match self.pick(if pow { 4 } else { 3 }) {
            0 => Term::pair(self.set_term_raw(d, delta0), self.set_term_raw(d, delta0)),
            1 => Term::union(self.set_term_raw(d, delta0)),
            2 => {
                let a = self.set_term_raw(d, delta0);
                let body_delta0 = delta0 || self.cfg.flavor == TheoryFlavor::Czf;
                let body = self.set_formula_raw(d, body_delta0);
                let free = a.free_vars();
                let candidates: Vec<Name> = self.cfg.pool.iter().filter(|x| !free.contains(*x)).cloned().collect();
                match candidates.choose(self.rng) {
                    Some(x) => Term::Sep(x.clone(), Box::new(a), Box::new(body)),
                    None => a,
                }
            }
            _ => Term::pow(self.set_term_raw(d, delta0)),
        }
    }

    fn set_atom(&mut self, depth: usize, delta0: bool) -> Formula {
        let a = self.set_term_raw(depth, delta0);
        let b = self.set_term_raw(depth, delta0);
        if self.coin(0.5) {
            Formula::eq(a, b)
        } else {
            Formula::mem(a, b)
        }
    }

    fn set_formula_raw(&mut self, depth: usize, delta0: bool) -> Formula {
        if depth == 0 {
            return match self.pick(5) {
                0 => Formula::Bot,
                1 | 2 => Formula::eq(Term::Var(self.name()), Term::Var(self.name())),
                _ => Formula::mem(Term::Var(self.name()), Term::Var(self.name())),
            };
        }
        let d = depth - 1;
        match self.pick(9) {
            0 => Formula::Bot,
            1 | 2 => self.set_atom(d, delta0),
            3 => Formula::and(self.set_formula_raw(d, delta0), self.set_formula_raw(d, delta0)),
            4 => Formula::or(self.set_formula_raw(d, delta0), self.set_formula_raw(d, delta0)),
            5 => Formula::imp(self.set_formula_raw(d, delta0), self.set_formula_raw(d, delta0)),
            q => {
                let x = self.name();
                if !delta0 {
                    let body = self.set_formula_raw(d, false);
                    return if q == 6 { Formula::forall(x, body) } else { Formula::exists(x, body) };
                }
                // `∀x(x ∈ a → φ)` spends two levels on the pattern itself
                if d == 0 {
                    return self.set_formula_raw(0, true);
                }
                let body = self.set_formula_raw(d - 1, true);
                let bound = self.set_term_raw(d - 1, true);
                if bound.occurs_free(&x) {
                    return body;
                }
                let vx = Term::Var(x.clone());
                if q == 6 {
                    Formula::forall(x, Formula::imp(Formula::mem(vx, bound), body))
                } else {
                    Formula::exists(x, Formula::and(Formula::mem(vx, bound), body))
                }
            }
        }
    }

    pub fn set_formula(&mut self, depth: usize) -> Formula {
        self.set_formula_raw(depth, false).normalize()
    }

    pub fn delta0_formula(&mut self, depth: usize) -> Formula {
        self.set_formula_raw(depth, true).normalize()
    }

    pub fn set_term(&mut self, depth: usize) -> Term {
        self.set_term_raw(depth, false).normalize()
    }

    // emTT pre-syntax

    fn pvar(&mut self) -> PreTerm {
        PreTerm::Var(self.name())
    }

    /// Annotations come from a small pool.
    fn annotation(&mut self, depth: usize) -> Collection {
        match self.pick(if depth > 0 { 4 } else { 3 }) {
            0 => Collection::N0,
            1 => Collection::N1,
            2 => Collection::Univ,
            _ => Collection::Compr(self.name(), Box::new(self.prop_raw(depth - 1))),
        }
    }

    fn preterm_leaf(&mut self) -> PreTerm {
        match self.pick(if self.cfg.omega_allowed { 9 } else { 8 }) {
            0..=3 => self.pvar(),
            4 => PreTerm::Star,
            5 => PreTerm::Eps,
            6 => PreTerm::TrueT,
            7 => PreTerm::EmptyV,
            _ => PreTerm::OmegaV,
        }
    }

    pub(crate) fn preterm_raw(&mut self, depth: usize) -> PreTerm {
        if depth == 0 || self.coin(0.25) {
            return self.preterm_leaf();
        }
        let d = depth - 1;
        let list_ok = depth <= 1 || self.cfg.deep;
        loop {
            return match self.pick(21) {
                0 => PreTerm::Emp0(Box::new(self.preterm_raw(d))),
                1 => PreTerm::ElN1(Box::new(self.preterm_raw(d)), Box::new(self.preterm_raw(d))),
                2 => PreTerm::Cons(Box::new(self.preterm_raw(d)), Box::new(self.preterm_raw(d))),
                3 if list_ok => PreTerm::ElList {
                    annot: Box::new(self.annotation(d)),
                    list: Box::new(self.preterm_raw(d)),
                    base: Box::new(self.preterm_raw(d)),
                    binders: self.names3(),
                    step: Box::new(self.preterm_raw(d)),
                },
                3 => continue,
                4 => PreTerm::Inl(Box::new(self.preterm_raw(d))),
                5 => PreTerm::Inr(Box::new(self.preterm_raw(d))),
                6 => PreTerm::ElPlus(Box::new(self.preterm_raw(d)), self.name(), Box::new(self.preterm_raw(d)), self.name(), Box::new(self.preterm_raw(d))),
                7 => PreTerm::PairT(Box::new(self.preterm_raw(d)), Box::new(self.preterm_raw(d))),
                8 => {
                    let (x, y) = self.names2();
                    PreTerm::ElSigma(Box::new(self.preterm_raw(d)), x, y, Box::new(self.preterm_raw(d)))
                }
                9 => PreTerm::Lam(self.name(), Box::new(self.annotation(d)), Box::new(self.preterm_raw(d))),
                10 => PreTerm::Ap(Box::new(self.preterm_raw(d)), Box::new(self.preterm_raw(d))),
                11 => PreTerm::EqCls {
                    elem: Box::new(self.preterm_raw(d)),
                    annot: Box::new(self.annotation(d)),
                    binders: self.names2(),
                    rel: Box::new(self.prop_raw(d)),
                },
                12 => PreTerm::ElQuot {
                    annot: Box::new(self.annotation(d)),
                    binders: self.names2(),
                    rel: Box::new(self.prop_raw(d)),
                    elem: Box::new(self.preterm_raw(d)),
                    var: self.name(),
                    body: Box::new(self.preterm_raw(d)),
                },
                13 => PreTerm::PropIntoP1(Box::new(self.prop_raw(d))),
                14 => PreTerm::NameOf(Box::new(self.annotation(d))),
                15 => PreTerm::PairV(Box::new(self.preterm_raw(d)), Box::new(self.preterm_raw(d))),
                16 => PreTerm::UnionV(Box::new(self.preterm_raw(d))),
                17 if self.cfg.flavor != TheoryFlavor::Czf => PreTerm::PowV(Box::new(self.preterm_raw(d))),
                17 => continue,
                18 => {
                    let a = self.preterm_raw(d);
                    let x = self.name();
                    if a.occurs_free(&x) {
                        a
                    } else {
                        PreTerm::SepV(x, Box::new(a), Box::new(self.prop_raw(d)))
                    }
                }
                _ => self.preterm_leaf(),
            };
        }
    }

    pub(crate) fn prop_raw(&mut self, depth: usize) -> Prop {
        if depth == 0 {
            return match self.pick(5) {
                0 => Prop::Bot,
                1 | 2 => Prop::eps(self.pvar(), self.pvar()),
                _ => Prop::eq(Collection::Univ, self.pvar(), self.pvar()),
            };
        }
        let d = depth - 1;
        match self.pick(10) {
            0 => Prop::Bot,
            1 => Prop::eps(self.preterm_raw(d), self.preterm_raw(d)),
            2 => Prop::EpsCol(Box::new(self.preterm_raw(d)), Box::new(self.annotation(d))),
            3 => Prop::eq(self.annotation(d), self.preterm_raw(d), self.preterm_raw(d)),
            4 => Prop::and(self.prop_raw(d), self.prop_raw(d)),
            5 => Prop::or(self.prop_raw(d), self.prop_raw(d)),
            6 => Prop::imp(self.prop_raw(d), self.prop_raw(d)),
            7 => Prop::forall(self.name(), self.annotation(d), self.prop_raw(d)),
            _ => Prop::exists(self.name(), self.annotation(d), self.prop_raw(d)),
        }
    }

    pub(crate) fn collection_raw(&mut self, depth: usize) -> Collection {
        if depth == 0 {
            return match self.pick(4) {
                0 => Collection::N0,
                1 => Collection::N1,
                2 => Collection::Univ,
                _ => Collection::PowOne,
            };
        }
        let d = depth - 1;
        match self.pick(10) {
            0 => Collection::List(Box::new(self.collection_raw(d))),
            1 => Collection::Sum(Box::new(self.collection_raw(d)), Box::new(self.collection_raw(d))),
            2 => Collection::Sigma(self.name(), Box::new(self.collection_raw(d)), Box::new(self.collection_raw(d))),
            3 => Collection::Pi(self.name(), Box::new(self.collection_raw(d)), Box::new(self.collection_raw(d))),
            4 => {
                let (x, y) = self.names2();
                Collection::Quot(Box::new(self.collection_raw(d)), x, y, Box::new(self.prop_raw(d)))
            }
            5 => Collection::FunPowOne(Box::new(self.collection_raw(d))),
            6 | 7 => Collection::Compr(self.name(), Box::new(self.prop_raw(d))),
            8 => Collection::PropAsCol(Box::new(self.prop_raw(d))),
            _ => self.collection_raw(0),
        }
    }

    pub fn preterm(&mut self, depth: usize) -> PreTerm {
        self.preterm_raw(depth).normalize()
    }

    pub fn prop(&mut self, depth: usize) -> Prop {
        self.prop_raw(depth).normalize()
    }

    pub fn collection(&mut self, depth: usize) -> Collection {
        self.collection_raw(depth).normalize()
    }
}

/// Constructor nesting with leaves at 0, for both set syntax sorts.
pub fn set_depth(f: &Formula) -> usize {
    fn t(x: &Term) -> usize {
        match x {
            Term::Var(_) | Term::Empty | Term::Omega => 0,
            Term::Pair(a, b) => 1 + t(a).max(t(b)),
            Term::Union(a) | Term::Pow(a) => 1 + t(a),
            Term::Sep(_, a, p) => 1 + t(a).max(set_depth(p)),
        }
    }
    match f {
        Formula::Bot => 0,
        Formula::Eq(a, b) | Formula::Mem(a, b) => {
            let d = t(a).max(t(b));
            if d == 0 {
                0
            } else {
                d + 1
            }
        }
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => 1 + set_depth(a).max(set_depth(b)),
        Formula::Forall(_, b) | Formula::Exists(_, b) => 1 + set_depth(b),
    }
}
