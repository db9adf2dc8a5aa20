//! Set-theoretic syntax into emTT pre-syntax. Quantifiers become
//! quantifiers over `V`; everything else maps constructor for constructor.

use alloc::boxed::Box;

use crate::emtt::{Collection, Node, Prop, Term as PreTerm};
use crate::set::{Formula, SetNode, Term};

pub fn tilde_term(t: &Term) -> PreTerm {
    match t {
        Term::Var(x) => PreTerm::Var(x.clone()),
        Term::Empty => PreTerm::EmptyV,
        Term::Omega => PreTerm::OmegaV,
        Term::Pair(a, b) => PreTerm::PairV(Box::new(tilde_term(a)), Box::new(tilde_term(b))),
        Term::Union(a) => PreTerm::UnionV(Box::new(tilde_term(a))),
        Term::Pow(a) => PreTerm::PowV(Box::new(tilde_term(a))),
        Term::Sep(x, a, p) => PreTerm::SepV(x.clone(), Box::new(tilde_term(a)), Box::new(tilde_formula(p))),
    }
}

pub fn tilde_formula(p: &Formula) -> Prop {
    match p {
        Formula::Bot => Prop::Bot,
        Formula::Eq(a, b) => Prop::eq(Collection::Univ, tilde_term(a), tilde_term(b)),
        Formula::Mem(a, b) => Prop::eps(tilde_term(a), tilde_term(b)),
        Formula::And(a, b) => Prop::and(tilde_formula(a), tilde_formula(b)),
        Formula::Or(a, b) => Prop::or(tilde_formula(a), tilde_formula(b)),
        Formula::Imp(a, b) => Prop::imp(tilde_formula(a), tilde_formula(b)),
        Formula::Forall(x, b) => Prop::forall(x.clone(), Collection::Univ, tilde_formula(b)),
        Formula::Exists(x, b) => Prop::exists(x.clone(), Collection::Univ, tilde_formula(b)),
    }
}

pub fn tilde(n: &SetNode) -> Node {
    match n {
        SetNode::Term(t) => Node::Term(tilde_term(t)),
        SetNode::Formula(p) => Node::Prop(tilde_formula(p)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::name::{Fresh, Name};
    use crate::set::strategies;
    use alloc::string::ToString;
    use proptest::prelude::*;

    #[test]
    fn examples() {
        assert_eq!(tilde_term(&Term::var("x")), PreTerm::var("x"));
        assert_eq!(
            tilde_term(&Term::pair(Term::Empty, Term::Omega)),
            PreTerm::PairV(Box::new(PreTerm::EmptyV), Box::new(PreTerm::OmegaV))
        );
        let s = Term::sep("x", Term::var("a"), Formula::Bot).unwrap();
        assert_eq!(
            tilde_term(&s),
            PreTerm::SepV("x".into(), Box::new(PreTerm::var("a")), Box::new(Prop::Bot))
        );
        assert_eq!(tilde_formula(&Formula::mem(Term::var("x"), Term::var("y"))), Prop::eps(PreTerm::var("x"), PreTerm::var("y")));
        assert_eq!(tilde_formula(&Formula::Bot), Prop::Bot);
        let p = Formula::forall("x", Formula::eq(Term::var("x"), Term::var("x")));
        assert_eq!(
            tilde_formula(&p),
            Prop::forall("x", Collection::Univ, Prop::eq(Collection::Univ, PreTerm::var("x"), PreTerm::var("x")))
        );
        assert_eq!(tilde_formula(&Formula::forall("x", Formula::mem(Term::var("x"), Term::var("y")))).to_string(), "all x:V. x eps y");
    }

    fn only_univ(p: &Prop) -> bool {
        p.to_sexp().to_string().split(['(', ' ', ')']).all(|w| {
            !matches!(w, "N0" | "N1" | "List" | "Sum" | "Sigma" | "Pi" | "Quot" | "P1" | "FunP1" | "Compr" | "PropCol")
        })
    }

    proptest! {
        #[test]
        fn free_vars_preserved(p in strategies::formula()) {
            prop_assert_eq!(tilde_formula(&p).free_vars(), p.free_vars());
            prop_assert!(only_univ(&tilde_formula(&p)));
        }

        #[test]
        fn commutes_with_substitution(p in strategies::formula(), t in strategies::term(), x in prop::sample::select(&["x", "y", "z"][..])) {
            let x = Name::new(x);
            let mut f1 = Fresh::new();
            p.reserve_names(&mut f1);
            t.reserve_names(&mut f1);
            let mut f2 = f1.clone();
            let lhs = tilde_formula(&p.subst(&x, &t, &mut f1));
            let rhs = tilde_formula(&p).subst(&x, &tilde_term(&t), &mut f2);
            prop_assert!(lhs.alpha_eq(&rhs), "{} vs {}", lhs, rhs);
        }

        #[test]
        fn injective_up_to_alpha(p in strategies::formula(), q in strategies::formula()) {
            prop_assert_eq!(p.alpha_eq(&q), tilde_formula(&p).alpha_eq(&tilde_formula(&q)));
        }
    }
}
