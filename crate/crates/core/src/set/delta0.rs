//! The Δ0 fragment and the per-theory restrictions on the term language.

use alloc::vec::Vec;

use super::{Formula, SetNode, Term};
use crate::TheoryFlavor;

/// Whether `t` is generated by the Δ0-term clauses. Under CZF the powerset
/// constructor is not part of the language at all.
pub fn is_delta0_term(t: &Term, flavor: TheoryFlavor) -> bool {
    match t {
        Term::Var(_) | Term::Empty | Term::Omega => true,
        Term::Pair(a, b) => is_delta0_term(a, flavor) && is_delta0_term(b, flavor),
        Term::Union(a) => is_delta0_term(a, flavor),
        Term::Pow(a) => flavor != TheoryFlavor::Czf && is_delta0_term(a, flavor),
        Term::Sep(x, a, p) => !a.occurs_free(x) && is_delta0_term(a, flavor) && is_delta0_formula(p, flavor),
    }
}

/// Whether `f` is generated by the Δ0-formula clauses. Bounded quantifiers
/// are recognized by shape: `∀x(x∈a → φ)` and `∃x(x∈a ∧ φ)`.
pub fn is_delta0_formula(f: &Formula, flavor: TheoryFlavor) -> bool {
    match f {
        Formula::Bot => true,
        Formula::Eq(a, b) | Formula::Mem(a, b) => is_delta0_term(a, flavor) && is_delta0_term(b, flavor),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
            is_delta0_formula(a, flavor) && is_delta0_formula(b, flavor)
        }
        Formula::Forall(x, body) => match &**body {
            Formula::Imp(guard, rest) => bounded(x, guard, rest, flavor),
            _ => false,
        },
        Formula::Exists(x, body) => match &**body {
            Formula::And(guard, rest) => bounded(x, guard, rest, flavor),
            _ => false,
        },
    }
}

fn bounded(x: &crate::Name, guard: &Formula, rest: &Formula, flavor: TheoryFlavor) -> bool {
    match guard {
        Formula::Mem(Term::Var(y), a) if y == x => {
            !a.occurs_free(x) && is_delta0_term(a, flavor) && is_delta0_formula(rest, flavor)
        }
        _ => false,
    }
}

pub fn is_delta0(node: &SetNode, flavor: TheoryFlavor) -> bool {
    match node {
        SetNode::Term(t) => is_delta0_term(t, flavor),
        SetNode::Formula(f) => is_delta0_formula(f, flavor),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ViolationKind {
    /// `P(a)` is not a CZF term.
    PowForbidden,
    /// A CZF separation body must be Δ0.
    NonDelta0Separation,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlavorViolation {
    pub kind: ViolationKind,
    /// The offending subterm.
    pub term: Term,
}

impl core::fmt::Display for FlavorViolation {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self.kind {
            ViolationKind::PowForbidden => write!(f, "powerset is not a CZF term: {}", self.term),
            ViolationKind::NonDelta0Separation => write!(f, "separation body is not Δ0: {}", self.term),
        }
    }
}

/// All violations of the flavor's term restrictions, in pre-order. IZF and
/// ZF impose none.
pub fn flavor_check(node: &SetNode, flavor: TheoryFlavor) -> Result<(), Vec<FlavorViolation>> {
    let mut out = Vec::new();
    if flavor == TheoryFlavor::Czf {
        match node {
            SetNode::Term(t) => walk_term(t, &mut out),
            SetNode::Formula(f) => walk_formula(f, &mut out),
        }
    }
    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}

fn walk_term(t: &Term, out: &mut Vec<FlavorViolation>) {
    match t {
        Term::Var(_) | Term::Empty | Term::Omega => {}
        Term::Pair(a, b) => {
            walk_term(a, out);
            walk_term(b, out);
        }
        Term::Union(a) => walk_term(a, out),
        Term::Pow(a) => {
            out.push(FlavorViolation { kind: ViolationKind::PowForbidden, term: t.clone() });
            walk_term(a, out);
        }
        Term::Sep(_, a, p) => {
            if !is_delta0_formula(p, TheoryFlavor::Czf) {
                out.push(FlavorViolation { kind: ViolationKind::NonDelta0Separation, term: t.clone() });
            }
            walk_term(a, out);
            walk_formula(p, out);
        }
    }
}

fn walk_formula(f: &Formula, out: &mut Vec<FlavorViolation>) {
    match f {
        Formula::Bot => {}
        Formula::Eq(a, b) | Formula::Mem(a, b) => {
            walk_term(a, out);
            walk_term(b, out);
        }
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
            walk_formula(a, out);
            walk_formula(b, out);
        }
        Formula::Forall(_, b) | Formula::Exists(_, b) => walk_formula(b, out),
    }
}
