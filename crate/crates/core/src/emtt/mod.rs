//! Pre-syntax of emTT_T: pre-collections, pre-terms, pre-propositions and
//! pre-contexts.
//!
//! Every constructor is described once by a slot signature (see
//! [`signature`]): an ordered list of binders, free-variable occurrences and
//! subtrees, each subtree tagged with the binders whose scope it lies in.
//! Free variables, substitution, alpha-equivalence, normalization and the
//! s-expression codec are written generically over that description.

use alloc::boxed::Box;
use alloc::vec::Vec;

use crate::name::Name;

mod context;
mod parse;
mod print;
mod sexp;
mod vars;

pub use context::{precontext_wf, Context, ContextError};
pub use parse::{parse_collection, parse_context, parse_node, parse_prop, parse_term};
pub use vars::Substitution;

/// A pre-collection.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Collection {
    N0,
    N1,
    List(Box<Collection>),
    Sum(Box<Collection>, Box<Collection>),
    /// `(Σx∈A)B`, binding `x` in `B`.
    Sigma(Name, Box<Collection>, Box<Collection>),
    /// `(Πx∈A)B`, binding `x` in `B`.
    Pi(Name, Box<Collection>, Box<Collection>),
    /// `A/(x,y)φ`, binding `x`, `y` in `φ`.
    Quot(Box<Collection>, Name, Name, Box<Prop>),
    PowOne,
    /// `A → P(1)`.
    FunPowOne(Box<Collection>),
    /// `{x | φ}`.
    Compr(Name, Box<Prop>),
    /// A proposition used as a collection.
    PropAsCol(Box<Prop>),
    Univ,
}

/// A pre-term.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Var(Name),
    Emp0(Box<Term>),
    Star,
    ElN1(Box<Term>, Box<Term>),
    /// The empty list.
    Eps,
    Cons(Box<Term>, Box<Term>),
    /// `El^A_List(a, b, (x,y,z)c)`.
    ElList {
        annot: Box<Collection>,
        list: Box<Term>,
        base: Box<Term>,
        binders: (Name, Name, Name),
        step: Box<Term>,
    },
    Inl(Box<Term>),
    Inr(Box<Term>),
    /// `El_+(a, (x)b, (y)c)`.
    ElPlus(Box<Term>, Name, Box<Term>, Name, Box<Term>),
    PairT(Box<Term>, Box<Term>),
    /// `El_Σ(a, (x,y)b)`.
    ElSigma(Box<Term>, Name, Name, Box<Term>),
    /// `λx^A.b`.
    Lam(Name, Box<Collection>, Box<Term>),
    Ap(Box<Term>, Box<Term>),
    /// `[a]_{A,(x,y)φ}`.
    EqCls {
        elem: Box<Term>,
        annot: Box<Collection>,
        binders: (Name, Name),
        rel: Box<Prop>,
    },
    /// `El_{A/(x,y)φ}(a, (x')b)`.
    ElQuot {
        annot: Box<Collection>,
        binders: (Name, Name),
        rel: Box<Prop>,
        elem: Box<Term>,
        var: Name,
        body: Box<Term>,
    },
    TrueT,
    /// `[φ]`, a proposition as an element of `P(1)`.
    PropIntoP1(Box<Prop>),
    /// `⌈A⌉`.
    NameOf(Box<Collection>),
    EmptyV,
    PairV(Box<Term>, Box<Term>),
    UnionV(Box<Term>),
    PowV(Box<Term>),
    /// `{x ε a | φ}`.
    SepV(Name, Box<Term>, Box<Prop>),
    OmegaV,
}

/// A pre-proposition.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Prop {
    Bot,
    EpsTerm(Box<Term>, Box<Term>),
    EpsCol(Box<Term>, Box<Collection>),
    /// `a =_A b`.
    EqP(Box<Collection>, Box<Term>, Box<Term>),
    Imp(Box<Prop>, Box<Prop>),
    And(Box<Prop>, Box<Prop>),
    Or(Box<Prop>, Box<Prop>),
    Exists(Name, Box<Collection>, Box<Prop>),
    Forall(Name, Box<Collection>, Box<Prop>),
}

/// Any of the three syntactic categories.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Node {
    Col(Collection),
    Term(Term),
    Prop(Prop),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sort {
    Col,
    Term,
    Prop,
}

#[derive(Clone, Copy, Debug)]
pub(crate) enum NodeRef<'a> {
    Col(&'a Collection),
    Term(&'a Term),
    Prop(&'a Prop),
}

/// One position of a constructor signature. `mask` bit `i` is set when the
/// subtree lies in the scope of the `i`-th binder of the constructor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Sig {
    Bind,
    Free,
    Sub(Sort, u8),
}

#[derive(Clone, Copy, Debug)]
pub(crate) enum SlotRef<'a> {
    Name(&'a Name),
    Node(NodeRef<'a>),
}

#[derive(Clone, Debug)]
pub(crate) enum Slot {
    Name(Name),
    Node(Node),
}

use Sig::{Bind, Free, Sub};
use Sort::{Col as C, Prop as P, Term as T};

/// Slot signature of a constructor, by its s-expression head.
pub(crate) fn signature(tag: &str) -> Option<&'static [Sig]> {
    Some(match tag {
        "N0" | "N1" | "P1" | "V" => &[],
        "List" | "FunP1" => &[Sub(C, 0)],
        "Sum" => &[Sub(C, 0), Sub(C, 0)],
        "Sigma" | "Pi" => &[Bind, Sub(C, 0), Sub(C, 1)],
        "Quot" => &[Sub(C, 0), Bind, Bind, Sub(P, 3)],
        "Compr" => &[Bind, Sub(P, 1)],
        "PropCol" => &[Sub(P, 0)],

        "var" => &[Free],
        "star" | "eps" | "true" | "emptyV" | "omegaV" => &[],
        "emp0" | "inl" | "inr" | "unionV" | "powV" => &[Sub(T, 0)],
        "elN1" | "cons" | "pairT" | "ap" | "pairV" => &[Sub(T, 0), Sub(T, 0)],
        "elList" => &[Sub(C, 0), Sub(T, 0), Sub(T, 0), Bind, Bind, Bind, Sub(T, 7)],
        "elPlus" => &[Sub(T, 0), Bind, Sub(T, 1), Bind, Sub(T, 2)],
        "elSig" => &[Sub(T, 0), Bind, Bind, Sub(T, 3)],
        "lam" => &[Bind, Sub(C, 0), Sub(T, 1)],
        "cls" => &[Sub(T, 0), Sub(C, 0), Bind, Bind, Sub(P, 3)],
        "elQ" => &[Sub(C, 0), Bind, Bind, Sub(P, 3), Sub(T, 0), Bind, Sub(T, 4)],
        "pr" => &[Sub(P, 0)],
        "name" => &[Sub(C, 0)],
        "sepV" => &[Bind, Sub(T, 0), Sub(P, 1)],

        "bot" => &[],
        "epsT" => &[Sub(T, 0), Sub(T, 0)],
        "epsC" => &[Sub(T, 0), Sub(C, 0)],
        "eqP" => &[Sub(C, 0), Sub(T, 0), Sub(T, 0)],
        "imp" | "and" | "or" => &[Sub(P, 0), Sub(P, 0)],
        "ex" | "all" => &[Bind, Sub(C, 0), Sub(P, 1)],
        _ => return None,
    })
}

pub(crate) fn sort_of_tag(tag: &str) -> Option<Sort> {
    Some(match tag {
        "N0" | "N1" | "List" | "Sum" | "Sigma" | "Pi" | "Quot" | "P1" | "FunP1" | "Compr" | "PropCol" | "V" => C,
        "bot" | "epsT" | "epsC" | "eqP" | "imp" | "and" | "or" | "ex" | "all" => P,
        _ => {
            signature(tag)?;
            T
        }
    })
}

fn n(x: &Name) -> SlotRef<'_> {
    SlotRef::Name(x)
}
fn c(x: &Collection) -> SlotRef<'_> {
    SlotRef::Node(NodeRef::Col(x))
}
fn t(x: &Term) -> SlotRef<'_> {
    SlotRef::Node(NodeRef::Term(x))
}
fn p(x: &Prop) -> SlotRef<'_> {
    SlotRef::Node(NodeRef::Prop(x))
}

impl Collection {
    pub(crate) fn tag(&self) -> &'static str {
        match self {
            Collection::N0 => "N0",
            Collection::N1 => "N1",
            Collection::List(_) => "List",
            Collection::Sum(..) => "Sum",
            Collection::Sigma(..) => "Sigma",
            Collection::Pi(..) => "Pi",
            Collection::Quot(..) => "Quot",
            Collection::PowOne => "P1",
            Collection::FunPowOne(_) => "FunP1",
            Collection::Compr(..) => "Compr",
            Collection::PropAsCol(_) => "PropCol",
            Collection::Univ => "V",
        }
    }

    pub(crate) fn slots(&self) -> Vec<SlotRef<'_>> {
        match self {
            Collection::N0 | Collection::N1 | Collection::PowOne | Collection::Univ => Vec::new(),
            Collection::List(a) | Collection::FunPowOne(a) => alloc::vec![c(a)],
            Collection::Sum(a, b) => alloc::vec![c(a), c(b)],
            Collection::Sigma(x, a, b) | Collection::Pi(x, a, b) => alloc::vec![n(x), c(a), c(b)],
            Collection::Quot(a, x, y, f) => alloc::vec![c(a), n(x), n(y), p(f)],
            Collection::Compr(x, f) => alloc::vec![n(x), p(f)],
            Collection::PropAsCol(f) => alloc::vec![p(f)],
        }
    }
}

impl Term {
    pub(crate) fn tag(&self) -> &'static str {
        match self {
            Term::Var(_) => "var",
            Term::Emp0(_) => "emp0",
            Term::Star => "star",
            Term::ElN1(..) => "elN1",
            Term::Eps => "eps",
            Term::Cons(..) => "cons",
            Term::ElList { .. } => "elList",
            Term::Inl(_) => "inl",
            Term::Inr(_) => "inr",
            Term::ElPlus(..) => "elPlus",
            Term::PairT(..) => "pairT",
            Term::ElSigma(..) => "elSig",
            Term::Lam(..) => "lam",
            Term::Ap(..) => "ap",
            Term::EqCls { .. } => "cls",
            Term::ElQuot { .. } => "elQ",
            Term::TrueT => "true",
            Term::PropIntoP1(_) => "pr",
            Term::NameOf(_) => "name",
            Term::EmptyV => "emptyV",
            Term::PairV(..) => "pairV",
            Term::UnionV(_) => "unionV",
            Term::PowV(_) => "powV",
            Term::SepV(..) => "sepV",
            Term::OmegaV => "omegaV",
        }
    }

    pub(crate) fn slots(&self) -> Vec<SlotRef<'_>> {
        match self {
            Term::Var(x) => alloc::vec![n(x)],
            Term::Star | Term::Eps | Term::TrueT | Term::EmptyV | Term::OmegaV => Vec::new(),
            Term::Emp0(a) | Term::Inl(a) | Term::Inr(a) | Term::UnionV(a) | Term::PowV(a) => alloc::vec![t(a)],
            Term::ElN1(a, b) | Term::Cons(a, b) | Term::PairT(a, b) | Term::Ap(a, b) | Term::PairV(a, b) => {
                alloc::vec![t(a), t(b)]
            }
            Term::ElList { annot, list, base, binders: (x, y, z), step } => {
                alloc::vec![c(annot), t(list), t(base), n(x), n(y), n(z), t(step)]
            }
            Term::ElPlus(a, x, b, y, d) => alloc::vec![t(a), n(x), t(b), n(y), t(d)],
            Term::ElSigma(a, x, y, b) => alloc::vec![t(a), n(x), n(y), t(b)],
            Term::Lam(x, a, b) => alloc::vec![n(x), c(a), t(b)],
            Term::EqCls { elem, annot, binders: (x, y), rel } => alloc::vec![t(elem), c(annot), n(x), n(y), p(rel)],
            Term::ElQuot { annot, binders: (x, y), rel, elem, var, body } => {
                alloc::vec![c(annot), n(x), n(y), p(rel), t(elem), n(var), t(body)]
            }
            Term::PropIntoP1(f) => alloc::vec![p(f)],
            Term::NameOf(a) => alloc::vec![c(a)],
            Term::SepV(x, a, f) => alloc::vec![n(x), t(a), p(f)],
        }
    }
}

impl Prop {
    pub(crate) fn tag(&self) -> &'static str {
        match self {
            Prop::Bot => "bot",
            Prop::EpsTerm(..) => "epsT",
            Prop::EpsCol(..) => "epsC",
            Prop::EqP(..) => "eqP",
            Prop::Imp(..) => "imp",
            Prop::And(..) => "and",
            Prop::Or(..) => "or",
            Prop::Exists(..) => "ex",
            Prop::Forall(..) => "all",
        }
    }

    pub(crate) fn slots(&self) -> Vec<SlotRef<'_>> {
        match self {
            Prop::Bot => Vec::new(),
            Prop::EpsTerm(a, b) => alloc::vec![t(a), t(b)],
            Prop::EpsCol(a, b) => alloc::vec![t(a), c(b)],
            Prop::EqP(a, x, y) => alloc::vec![c(a), t(x), t(y)],
            Prop::Imp(a, b) | Prop::And(a, b) | Prop::Or(a, b) => alloc::vec![p(a), p(b)],
            Prop::Exists(x, a, f) | Prop::Forall(x, a, f) => alloc::vec![n(x), c(a), p(f)],
        }
    }
}

impl<'a> NodeRef<'a> {
    pub(crate) fn tag(self) -> &'static str {
        match self {
            NodeRef::Col(x) => x.tag(),
            NodeRef::Term(x) => x.tag(),
            NodeRef::Prop(x) => x.tag(),
        }
    }

    pub(crate) fn slots(self) -> Vec<SlotRef<'a>> {
        match self {
            NodeRef::Col(x) => x.slots(),
            NodeRef::Term(x) => x.slots(),
            NodeRef::Prop(x) => x.slots(),
        }
    }

    pub(crate) fn to_owned(self) -> Node {
        match self {
            NodeRef::Col(x) => Node::Col(x.clone()),
            NodeRef::Term(x) => Node::Term(x.clone()),
            NodeRef::Prop(x) => Node::Prop(x.clone()),
        }
    }
}

impl Node {
    pub(crate) fn as_ref(&self) -> NodeRef<'_> {
        match self {
            Node::Col(x) => NodeRef::Col(x),
            Node::Term(x) => NodeRef::Term(x),
            Node::Prop(x) => NodeRef::Prop(x),
        }
    }

    pub fn sort(&self) -> Sort {
        match self {
            Node::Col(_) => Sort::Col,
            Node::Term(_) => Sort::Term,
            Node::Prop(_) => Sort::Prop,
        }
    }

    pub fn into_col(self) -> Option<Collection> {
        match self {
            Node::Col(x) => Some(x),
            _ => None,
        }
    }

    pub fn into_term(self) -> Option<Term> {
        match self {
            Node::Term(x) => Some(x),
            _ => None,
        }
    }

    pub fn into_prop(self) -> Option<Prop> {
        match self {
            Node::Prop(x) => Some(x),
            _ => None,
        }
    }
}

/// Rebuild a node from its tag and owned slots. The slots must match the
/// tag's signature.
pub(crate) fn build(tag: &str, slots: Vec<Slot>) -> Option<Node> {
    let mut s = slots.into_iter();
    macro_rules! name {
        () => {
            match s.next()? {
                Slot::Name(x) => x,
                _ => return None,
            }
        };
    }
    macro_rules! col {
        () => {
            match s.next()? {
                Slot::Node(Node::Col(x)) => Box::new(x),
                _ => return None,
            }
        };
    }
    macro_rules! term {
        () => {
            match s.next()? {
                Slot::Node(Node::Term(x)) => Box::new(x),
                _ => return None,
            }
        };
    }
    macro_rules! prop {
        () => {
            match s.next()? {
                Slot::Node(Node::Prop(x)) => Box::new(x),
                _ => return None,
            }
        };
    }
    let node = match tag {
        "N0" => Node::Col(Collection::N0),
        "N1" => Node::Col(Collection::N1),
        "List" => Node::Col(Collection::List(col!())),
        "Sum" => Node::Col(Collection::Sum(col!(), col!())),
        "Sigma" => Node::Col(Collection::Sigma(name!(), col!(), col!())),
        "Pi" => Node::Col(Collection::Pi(name!(), col!(), col!())),
        "Quot" => Node::Col(Collection::Quot(col!(), name!(), name!(), prop!())),
        "P1" => Node::Col(Collection::PowOne),
        "FunP1" => Node::Col(Collection::FunPowOne(col!())),
        "Compr" => Node::Col(Collection::Compr(name!(), prop!())),
        "PropCol" => Node::Col(Collection::PropAsCol(prop!())),
        "V" => Node::Col(Collection::Univ),

        "var" => Node::Term(Term::Var(name!())),
        "emp0" => Node::Term(Term::Emp0(term!())),
        "star" => Node::Term(Term::Star),
        "elN1" => Node::Term(Term::ElN1(term!(), term!())),
        "eps" => Node::Term(Term::Eps),
        "cons" => Node::Term(Term::Cons(term!(), term!())),
        "elList" => Node::Term(Term::ElList {
            annot: col!(),
            list: term!(),
            base: term!(),
            binders: (name!(), name!(), name!()),
            step: term!(),
        }),
        "inl" => Node::Term(Term::Inl(term!())),
        "inr" => Node::Term(Term::Inr(term!())),
        "elPlus" => Node::Term(Term::ElPlus(term!(), name!(), term!(), name!(), term!())),
        "pairT" => Node::Term(Term::PairT(term!(), term!())),
        "elSig" => Node::Term(Term::ElSigma(term!(), name!(), name!(), term!())),
        "lam" => Node::Term(Term::Lam(name!(), col!(), term!())),
        "ap" => Node::Term(Term::Ap(term!(), term!())),
        "cls" => Node::Term(Term::EqCls { elem: term!(), annot: col!(), binders: (name!(), name!()), rel: prop!() }),
        "elQ" => Node::Term(Term::ElQuot {
            annot: col!(),
            binders: (name!(), name!()),
            rel: prop!(),
            elem: term!(),
            var: name!(),
            body: term!(),
        }),
        "true" => Node::Term(Term::TrueT),
        "pr" => Node::Term(Term::PropIntoP1(prop!())),
        "name" => Node::Term(Term::NameOf(col!())),
        "emptyV" => Node::Term(Term::EmptyV),
        "pairV" => Node::Term(Term::PairV(term!(), term!())),
        "unionV" => Node::Term(Term::UnionV(term!())),
        "powV" => Node::Term(Term::PowV(term!())),
        "sepV" => Node::Term(Term::SepV(name!(), term!(), prop!())),
        "omegaV" => Node::Term(Term::OmegaV),

        "bot" => Node::Prop(Prop::Bot),
        "epsT" => Node::Prop(Prop::EpsTerm(term!(), term!())),
        "epsC" => Node::Prop(Prop::EpsCol(term!(), col!())),
        "eqP" => Node::Prop(Prop::EqP(col!(), term!(), term!())),
        "imp" => Node::Prop(Prop::Imp(prop!(), prop!())),
        "and" => Node::Prop(Prop::And(prop!(), prop!())),
        "or" => Node::Prop(Prop::Or(prop!(), prop!())),
        "ex" => Node::Prop(Prop::Exists(name!(), col!(), prop!())),
        "all" => Node::Prop(Prop::Forall(name!(), col!(), prop!())),
        _ => return None,
    };
    if s.next().is_some() {
        return None;
    }
    Some(node)
}

impl Term {
    pub fn var(x: &str) -> Term {
        Term::Var(Name::new(x))
    }

    /// Number of constructors in the tree.
    pub fn size(&self) -> usize {
        NodeRef::Term(self).size()
    }
}

impl Collection {
    pub fn size(&self) -> usize {
        NodeRef::Col(self).size()
    }
}

impl Prop {
    pub fn size(&self) -> usize {
        NodeRef::Prop(self).size()
    }

    pub fn imp(a: Prop, b: Prop) -> Prop {
        Prop::Imp(Box::new(a), Box::new(b))
    }

    pub fn and(a: Prop, b: Prop) -> Prop {
        Prop::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Prop, b: Prop) -> Prop {
        Prop::Or(Box::new(a), Box::new(b))
    }

    pub fn eps(a: Term, b: Term) -> Prop {
        Prop::EpsTerm(Box::new(a), Box::new(b))
    }

    pub fn eq(ty: Collection, a: Term, b: Term) -> Prop {
        Prop::EqP(Box::new(ty), Box::new(a), Box::new(b))
    }

    pub fn forall(x: impl Into<Name>, ty: Collection, body: Prop) -> Prop {
        Prop::Forall(x.into(), Box::new(ty), Box::new(body))
    }

    pub fn exists(x: impl Into<Name>, ty: Collection, body: Prop) -> Prop {
        Prop::Exists(x.into(), Box::new(ty), Box::new(body))
    }
}

impl NodeRef<'_> {
    pub(crate) fn size(self) -> usize {
        1 + self
            .slots()
            .into_iter()
            .map(|s| match s {
                SlotRef::Node(n) => n.size(),
                SlotRef::Name(_) => 0,
            })
            .sum::<usize>()
    }
}
