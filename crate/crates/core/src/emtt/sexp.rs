//! Canonical s-expression form, driven by the constructor signatures:
//! `(tag slot ...)` with names as atoms.

use alloc::vec::Vec;

use super::{build, signature, sort_of_tag, Collection, Node, NodeRef, Prop, Sig, SlotRef, Sort, Term};
use crate::set::sexp::name_of;
use crate::sexp::{shape_err, Sexp, SexpError};

fn encode(n: NodeRef<'_>) -> Sexp {
    let args = n.slots().into_iter().map(|s| match s {
        SlotRef::Name(x) => Sexp::atom(x.as_str()),
        SlotRef::Node(m) => encode(m),
    });
    Sexp::node(n.tag(), args.collect::<Vec<_>>())
}

fn sort_name(s: Sort) -> &'static str {
    match s {
        Sort::Col => "a collection",
        Sort::Term => "a term",
        Sort::Prop => "a proposition",
    }
}

fn decode(s: &Sexp, want: Option<Sort>) -> Result<Node, SexpError> {
    let what = want.map_or("an emTT expression", sort_name);
    let (head, args) = s.as_node().ok_or_else(|| shape_err(what, s))?;
    let sort = sort_of_tag(head).ok_or_else(|| shape_err(what, s))?;
    if want.is_some_and(|w| w != sort) {
        return Err(shape_err(what, s));
    }
    let sig = signature(head).ok_or_else(|| shape_err(what, s))?;
    if sig.len() != args.len() {
        return Err(SexpError::Shape(alloc::format!(
            "`{}` takes {} argument(s), got {} in {}",
            head,
            sig.len(),
            args.len(),
            s
        )));
    }
    let mut slots = Vec::with_capacity(args.len());
    for (g, a) in sig.iter().zip(args) {
        slots.push(match g {
            Sig::Bind | Sig::Free => super::Slot::Name(name_of(a)?),
            Sig::Sub(k, _) => super::Slot::Node(decode(a, Some(*k))?),
        });
    }
    build(head, slots).ok_or_else(|| shape_err(what, s))
}

impl Collection {
    pub fn to_sexp(&self) -> Sexp {
        encode(NodeRef::Col(self))
    }

    pub fn from_sexp(s: &Sexp) -> Result<Collection, SexpError> {
        Ok(decode(s, Some(Sort::Col))?.into_col().expect("sort checked"))
    }
}

impl Term {
    pub fn to_sexp(&self) -> Sexp {
        encode(NodeRef::Term(self))
    }

    pub fn from_sexp(s: &Sexp) -> Result<Term, SexpError> {
        Ok(decode(s, Some(Sort::Term))?.into_term().expect("sort checked"))
    }
}

impl Prop {
    pub fn to_sexp(&self) -> Sexp {
        encode(NodeRef::Prop(self))
    }

    pub fn from_sexp(s: &Sexp) -> Result<Prop, SexpError> {
        Ok(decode(s, Some(Sort::Prop))?.into_prop().expect("sort checked"))
    }
}

impl Node {
    pub fn to_sexp(&self) -> Sexp {
        encode(self.as_ref())
    }

    pub fn from_sexp(s: &Sexp) -> Result<Node, SexpError> {
        decode(s, None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::emtt::parse_node;
    use crate::set::ParseOptions;
    use alloc::string::ToString;

    #[test]
    fn round_trips() {
        for src in [
            "all x:V. x eps y",
            "elQ[V,(a,b)bot](cls[V,(a,b)bot](x), (z)<z, star>)",
            "Sig x:List(N1). Fun(V, P1) + {y | y eps x}",
            "{q eps omegaV | ex r:V. r eps q}",
        ] {
            let n = parse_node(src, ParseOptions::default()).unwrap();
            let s = n.to_sexp();
            let back = Node::from_sexp(&crate::sexp::parse(&s.to_string()).unwrap()).unwrap();
            assert_eq!(back, n, "{s}");
        }
    }

    #[test]
    fn rejects_wrong_sort_and_arity() {
        let s = crate::sexp::parse("(epsT (var x) (V))").unwrap();
        assert!(Prop::from_sexp(&s).is_err());
        let s = crate::sexp::parse("(var x y)").unwrap();
        assert!(Term::from_sexp(&s).is_err());
        let s = crate::sexp::parse("(bot)").unwrap();
        assert!(Term::from_sexp(&s).is_err());
    }
}
