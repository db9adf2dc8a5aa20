//! The language of CZF, IZF and ZF: terms, formulas, sugar, variables and
//! the Δ0 fragment.

use alloc::boxed::Box;

use crate::name::Name;

mod delta0;
mod parse;
mod print;
pub(crate) mod sexp;
pub mod sugar;
mod vars;

pub use delta0::{flavor_check, is_delta0, is_delta0_formula, is_delta0_term, FlavorViolation, ViolationKind};
pub use parse::{parse_formula, parse_node, parse_term, ParseOptions};
pub use sugar::{STerm, SFormula};
pub use vars::Substitution;

/// A set-theoretic term.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Var(Name),
    Empty,
    Omega,
    Pair(Box<Term>, Box<Term>),
    Union(Box<Term>),
    Pow(Box<Term>),
    /// `{x ∈ a | φ}`; the binder scopes over the body only.
    Sep(Name, Box<Term>, Box<Formula>),
}

/// A set-theoretic formula.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Bot,
    Eq(Term, Term),
    Mem(Term, Term),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Imp(Box<Formula>, Box<Formula>),
    Forall(Name, Box<Formula>),
    Exists(Name, Box<Formula>),
}

/// Either syntactic category, for operations that accept both.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SetNode {
    Term(Term),
    Formula(Formula),
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SyntaxError {
    #[error("separation binder `{0}` occurs free in its bound")]
    SepBinderFree(Name),
    #[error("variable `{0}` uses the reserved `#` namespace")]
    ReservedName(Name),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(Name::new(name))
    }

    pub fn pair(a: Term, b: Term) -> Term {
        Term::Pair(Box::new(a), Box::new(b))
    }

    pub fn union(a: Term) -> Term {
        Term::Union(Box::new(a))
    }

    pub fn pow(a: Term) -> Term {
        Term::Pow(Box::new(a))
    }

    /// Checked separation constructor: the binder may not occur free in the bound.
    pub fn sep(x: impl Into<Name>, bound: Term, body: Formula) -> Result<Term, SyntaxError> {
        let x = x.into();
        if bound.occurs_free(&x) {
            return Err(SyntaxError::SepBinderFree(x));
        }
        Ok(Term::Sep(x, Box::new(bound), Box::new(body)))
    }

    /// Every `Sep` in the tree respects the binder guard.
    pub fn check_well_formed(&self) -> Result<(), SyntaxError> {
        match self {
            Term::Var(_) | Term::Empty | Term::Omega => Ok(()),
            Term::Pair(a, b) => {
                a.check_well_formed()?;
                b.check_well_formed()
            }
            Term::Union(a) | Term::Pow(a) => a.check_well_formed(),
            Term::Sep(x, a, p) => {
                if a.occurs_free(x) {
                    return Err(SyntaxError::SepBinderFree(x.clone()));
                }
                a.check_well_formed()?;
                p.check_well_formed()
            }
        }
    }

    /// Number of constructors in the tree.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) | Term::Empty | Term::Omega => 1,
            Term::Pair(a, b) => 1 + a.size() + b.size(),
            Term::Union(a) | Term::Pow(a) => 1 + a.size(),
            Term::Sep(_, a, p) => 1 + a.size() + p.size(),
        }
    }

    pub fn mentions_omega(&self) -> bool {
        match self {
            Term::Omega => true,
            Term::Var(_) | Term::Empty => false,
            Term::Pair(a, b) => a.mentions_omega() || b.mentions_omega(),
            Term::Union(a) | Term::Pow(a) => a.mentions_omega(),
            Term::Sep(_, a, p) => a.mentions_omega() || p.mentions_omega(),
        }
    }
}

impl Formula {
    pub fn eq(a: Term, b: Term) -> Formula {
        Formula::Eq(a, b)
    }

    pub fn mem(a: Term, b: Term) -> Formula {
        Formula::Mem(a, b)
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn imp(a: Formula, b: Formula) -> Formula {
        Formula::Imp(Box::new(a), Box::new(b))
    }

    pub fn forall(x: impl Into<Name>, body: Formula) -> Formula {
        Formula::Forall(x.into(), Box::new(body))
    }

    pub fn exists(x: impl Into<Name>, body: Formula) -> Formula {
        Formula::Exists(x.into(), Box::new(body))
    }

    /// `⊤`, i.e. `⊥ → ⊥`.
    pub fn top() -> Formula {
        Formula::imp(Formula::Bot, Formula::Bot)
    }

    /// `φ ↔ ψ` as `(φ → ψ) ∧ (ψ → φ)`.
    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::and(Formula::imp(a.clone(), b.clone()), Formula::imp(b, a))
    }

    /// Left-nested conjunction; `⊤` for an empty iterator.
    pub fn conj(items: impl IntoIterator<Item = Formula>) -> Formula {
        let mut it = items.into_iter();
        match it.next() {
            None => Formula::top(),
            Some(first) => it.fold(first, Formula::and),
        }
    }

    pub fn check_well_formed(&self) -> Result<(), SyntaxError> {
        match self {
            Formula::Bot => Ok(()),
            Formula::Eq(a, b) | Formula::Mem(a, b) => {
                a.check_well_formed()?;
                b.check_well_formed()
            }
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                a.check_well_formed()?;
                b.check_well_formed()
            }
            Formula::Forall(_, b) | Formula::Exists(_, b) => b.check_well_formed(),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Formula::Bot => 1,
            Formula::Eq(a, b) | Formula::Mem(a, b) => 1 + a.size() + b.size(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => 1 + a.size() + b.size(),
            Formula::Forall(_, b) | Formula::Exists(_, b) => 1 + b.size(),
        }
    }

    pub fn mentions_omega(&self) -> bool {
        match self {
            Formula::Bot => false,
            Formula::Eq(a, b) | Formula::Mem(a, b) => a.mentions_omega() || b.mentions_omega(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
                a.mentions_omega() || b.mentions_omega()
            }
            Formula::Forall(_, b) | Formula::Exists(_, b) => b.mentions_omega(),
        }
    }

    /// Depth of connective/quantifier nesting above the atoms.
    pub fn depth(&self) -> usize {
        match self {
            Formula::Bot | Formula::Eq(..) | Formula::Mem(..) => 0,
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => 1 + a.depth().max(b.depth()),
            Formula::Forall(_, b) | Formula::Exists(_, b) => 1 + b.depth(),
        }
    }
}

impl SetNode {
    pub fn free_vars(&self) -> alloc::collections::BTreeSet<Name> {
        match self {
            SetNode::Term(t) => t.free_vars(),
            SetNode::Formula(f) => f.free_vars(),
        }
    }

    pub fn alpha_eq(&self, other: &SetNode) -> bool {
        match (self, other) {
            (SetNode::Term(a), SetNode::Term(b)) => a.alpha_eq(b),
            (SetNode::Formula(a), SetNode::Formula(b)) => a.alpha_eq(b),
            _ => false,
        }
    }

    pub fn normalize(&self) -> SetNode {
        match self {
            SetNode::Term(t) => SetNode::Term(t.normalize()),
            SetNode::Formula(f) => SetNode::Formula(f.normalize()),
        }
    }
}

impl core::fmt::Display for SetNode {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            SetNode::Term(t) => t.fmt(f),
            SetNode::Formula(p) => p.fmt(f),
        }
    }
}
