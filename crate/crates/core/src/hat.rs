//! emTT pre-syntax into set-theoretic formulas.
//!
//! A pre-collection `A` becomes a formula `η_A` in the placeholder `u`
//! (read `A` as `{u | η_A}`), a pre-term `a` becomes `δ_a` (read `a` as the
//! unique `u` with `δ_a`), and a pre-proposition `φ` becomes `φ̂` with the
//! same free variables. Output is always core syntax.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::emtt::{self, Collection, Context, Prop, Term as PreTerm};
use crate::name::{Fresh, Name};
use crate::set::sugar::{cup, len, ordered_pair, p1, p2, singleton, subset, zero, one};
use crate::set::{Formula, Substitution, Term};

/// The placeholder variable. User input may not mention it.
pub const PLACEHOLDER: &str = "u";

pub fn placeholder() -> Name {
    Name::new(PLACEHOLDER)
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum HatError {
    #[error("input mentions the reserved placeholder variable `{PLACEHOLDER}`")]
    Placeholder,
}

/// Translates with an explicit fresh-name supply, so several translations
/// can share one namespace.
pub struct Translator<'f> {
    fresh: &'f mut Fresh,
    u: Name,
}

fn var(x: &Name) -> Term {
    Term::Var(x.clone())
}

fn subst(p: &Formula, pairs: &[(&Name, Term)], fresh: &mut Fresh) -> Formula {
    let mut s = Substitution::new();
    for (x, t) in pairs {
        s.insert((*x).clone(), t.clone());
    }
    p.subst_many(&s, fresh)
}

impl<'f> Translator<'f> {
    /// The caller must have reserved every name of the input in `fresh`.
    pub fn new(fresh: &'f mut Fresh) -> Translator<'f> {
        Translator { fresh, u: placeholder() }
    }

    fn fresh(&mut self, base: &str) -> Name {
        self.fresh.fresh(base)
    }

    fn u(&self) -> Term {
        var(&self.u)
    }

    /// `φ[t/u]`.
    fn at(&mut self, p: &Formula, t: Term) -> Formula {
        let u = self.u.clone();
        subst(p, &[(&u, t)], self.fresh)
    }

    fn sub(&mut self, p: &Formula, pairs: &[(&Name, Term)]) -> Formula {
        subst(p, pairs, self.fresh)
    }

    fn ex(x: &Name, body: Formula) -> Formula {
        Formula::exists(x.clone(), body)
    }

    fn all(x: &Name, body: Formula) -> Formula {
        Formula::forall(x.clone(), body)
    }

    fn and3(a: Formula, b: Formula, c: Formula) -> Formula {
        Formula::conj([a, b, c])
    }

    /// `∀a∀b∀c((a,b)∈f ∧ (a,c)∈f → b=c)`.
    fn single_valued(&mut self, f: Term) -> Formula {
        let (a, b, c) = (self.fresh("w"), self.fresh("wp"), self.fresh("wpp"));
        let body = Formula::imp(
            Formula::and(
                Formula::mem(ordered_pair(var(&a), var(&b)), f.clone()),
                Formula::mem(ordered_pair(var(&a), var(&c)), f),
            ),
            Formula::eq(var(&b), var(&c)),
        );
        Self::all(&a, Self::all(&b, Self::all(&c, body)))
    }

    /// Rename the binder `x` of a quantifier-like clause when it occurs free
    /// among the parts that stay outside its scope.
    fn guard_prop(&mut self, x: &Name, outside: &BTreeSet<Name>, body: &Prop) -> (Name, Prop) {
        if outside.contains(x) {
            let y = self.fresh(x.as_str());
            let b = body.subst(x, &PreTerm::Var(y.clone()), self.fresh);
            (y, b)
        } else {
            (x.clone(), body.clone())
        }
    }

    pub fn hat(&mut self, p: &Prop) -> Formula {
        match p {
            Prop::Bot => Formula::Bot,
            Prop::EpsTerm(a, b) => {
                let v = self.fresh("v");
                let da = self.delta(a);
                let db = self.delta(b);
                let db = self.at(&db, var(&v));
                let body = Self::and3(da, db, Formula::mem(self.u(), var(&v)));
                Self::ex(&self.u, Self::ex(&v, body))
            }
            Prop::EpsCol(a, c) => {
                let da = self.delta(a);
                let ec = self.eta(c);
                Self::ex(&self.u, Formula::and(da, ec))
            }
            Prop::EqP(c, a, b) => {
                let da = self.delta(a);
                let db = self.delta(b);
                let ec = self.eta(c);
                Self::ex(&self.u, Self::and3(da, db, ec))
            }
            Prop::And(a, b) => Formula::and(self.hat(a), self.hat(b)),
            Prop::Or(a, b) => Formula::or(self.hat(a), self.hat(b)),
            Prop::Imp(a, b) => Formula::imp(self.hat(a), self.hat(b)),
            Prop::Forall(x, c, body) | Prop::Exists(x, c, body) => {
                let (x, body) = self.guard_prop(x, &c.free_vars(), body);
                let ec = self.eta(c);
                let guard = self.at(&ec, var(&x));
                let b = self.hat(&body);
                if matches!(p, Prop::Forall(..)) {
                    Self::all(&x, Formula::imp(guard, b))
                } else {
                    Self::ex(&x, Formula::and(guard, b))
                }
            }
        }
    }

    /// `η_{(Πx∈A)B}` with `B` given as its formula and the variable it
    /// depends on.
    fn eta_pi(&mut self, ea: &Formula, x: &Name, eb: &Formula) -> Formula {
        let (v, w, wp) = (self.fresh("v"), self.fresh("w"), self.fresh("wp"));
        let ea_w = self.at(ea, var(&w));
        let u = self.u.clone();
        let eb_w = self.sub(eb, &[(x, var(&w)), (&u, var(&wp))]);
        let graph = Self::all(
            &v,
            Formula::imp(
                Formula::mem(var(&v), self.u()),
                Self::ex(
                    &w,
                    Self::ex(&wp, Self::and3(Formula::eq(var(&v), ordered_pair(var(&w), var(&wp))), ea_w.clone(), eb_w)),
                ),
            ),
        );
        let svl = self.single_valued(self.u());
        let (w, wp) = (self.fresh("w"), self.fresh("wp"));
        let ea_w = self.at(ea, var(&w));
        let tot = Self::all(
            &w,
            Formula::imp(ea_w, Self::ex(&wp, Formula::mem(ordered_pair(var(&w), var(&wp)), self.u()))),
        );
        Self::and3(graph, svl, tot)
    }

    pub fn eta(&mut self, c: &Collection) -> Formula {
        match c {
            Collection::N0 => Formula::Bot,
            Collection::N1 => Formula::eq(self.u(), zero()),
            Collection::Sigma(x, a, b) => {
                let (v, w) = (self.fresh("v"), self.fresh("w"));
                let ea = self.eta(a);
                let ea = self.at(&ea, var(&v));
                let eb = self.eta(b);
                let u = self.u.clone();
                let eb = self.sub(&eb, &[(x, var(&v)), (&u, var(&w))]);
                let body = Self::and3(ea, eb, Formula::eq(self.u(), ordered_pair(var(&v), var(&w))));
                Self::ex(&v, Self::ex(&w, body))
            }
            Collection::Pi(x, a, b) => {
                let ea = self.eta(a);
                let eb = self.eta(b);
                self.eta_pi(&ea, x, &eb)
            }
            Collection::Sum(a, b) => {
                let (v, w) = (self.fresh("v"), self.fresh("w"));
                let ea = self.eta(a);
                let ea = self.at(&ea, var(&v));
                let eb = self.eta(b);
                let eb = self.at(&eb, var(&w));
                Formula::or(
                    Self::ex(&v, Formula::and(ea, Formula::eq(self.u(), ordered_pair(zero(), var(&v))))),
                    Self::ex(&w, Formula::and(eb, Formula::eq(self.u(), ordered_pair(one(), var(&w))))),
                )
            }
            Collection::List(a) => {
                let ea = self.eta(a);
                self.eta_list(&ea)
            }
            Collection::Quot(a, x, y, p) => {
                let (w, v) = (self.fresh("w"), self.fresh("v"));
                let ea = self.eta(a);
                let ea_w = self.at(&ea, var(&w));
                let ea_v = self.at(&ea, var(&v));
                let ph = self.hat(p);
                let ph = self.sub(&ph, &[(x, var(&w)), (y, var(&v))]);
                let cls = Self::all(&v, Formula::iff(Formula::mem(var(&v), self.u()), Formula::and(ea_v, ph)));
                Self::ex(&w, Formula::and(ea_w, cls))
            }
            Collection::PowOne => {
                let u = self.u();
                subset(u, singleton(zero()), self.fresh)
            }
            Collection::FunPowOne(a) => {
                let x = self.fresh("x");
                let ea = self.eta(a);
                let ep = self.eta(&Collection::PowOne);
                self.eta_pi(&ea, &x, &ep)
            }
            Collection::Compr(x, p) => {
                let ph = self.hat(p);
                let u = self.u();
                self.sub(&ph, &[(x, u)])
            }
            Collection::PropAsCol(p) => {
                let ph = self.hat(p);
                Formula::and(Formula::eq(self.u(), zero()), ph)
            }
            Collection::Univ => Formula::eq(self.u(), self.u()),
        }
    }

    /// `η_{List(A)}` from `η_A`.
    fn eta_list(&mut self, ea: &Formula) -> Formula {
        let (n, v, w, wp) = (self.fresh("n"), self.fresh("v"), self.fresh("w"), self.fresh("wp"));
        let ea_wp = self.at(ea, var(&wp));
        let graph = Self::all(
            &v,
            Formula::iff(
                Formula::mem(var(&v), self.u()),
                Self::ex(
                    &w,
                    Self::ex(
                        &wp,
                        Self::and3(
                            Formula::mem(var(&w), var(&n)),
                            ea_wp,
                            Formula::eq(var(&v), ordered_pair(var(&w), var(&wp))),
                        ),
                    ),
                ),
            ),
        );
        let svl = self.single_valued(self.u());
        let (w, wp) = (self.fresh("w"), self.fresh("wp"));
        let tot = Self::all(
            &w,
            Formula::imp(
                Formula::mem(var(&w), var(&n)),
                Self::ex(&wp, Formula::mem(ordered_pair(var(&w), var(&wp)), self.u())),
            ),
        );
        Self::ex(&n, Formula::conj([Formula::mem(var(&n), Term::Omega), graph, svl, tot]))
    }

    /// `∃v(δ_a[v/u] ∧ body(v))`.
    fn with_value(&mut self, a: &PreTerm, body: impl FnOnce(&mut Self, &Name) -> Formula) -> Formula {
        let v = self.fresh("v");
        let da = self.delta(a);
        let da = self.at(&da, var(&v));
        let b = body(self, &v);
        Self::ex(&v, Formula::and(da, b))
    }

    /// `∃v∃w(δ_a[v/u] ∧ δ_b[w/u] ∧ body(v, w))`.
    fn with_values(&mut self, a: &PreTerm, b: &PreTerm, body: impl FnOnce(&mut Self, Term, Term) -> Formula) -> Formula {
        let (v, w) = (self.fresh("v"), self.fresh("w"));
        let da = self.delta(a);
        let da = self.at(&da, var(&v));
        let db = self.delta(b);
        let db = self.at(&db, var(&w));
        let rest = body(self, var(&v), var(&w));
        Self::ex(&v, Self::ex(&w, Self::and3(da, db, rest)))
    }

    /// Conjoin `y = y` for each free variable of `a` that `d` lost, so the
    /// free variables of the translation match those of the source.
    fn pad(d: Formula, a: &PreTerm) -> Formula {
        let have = d.free_vars();
        let missing: Vec<Name> = a.free_vars().into_iter().filter(|x| !have.contains(x)).collect();
        missing.into_iter().fold(d, |acc, x| Formula::and(acc, Formula::eq(var(&x), var(&x))))
    }

    pub fn delta(&mut self, t: &PreTerm) -> Formula {
        let u = self.u();
        match t {
            PreTerm::Var(x) => Formula::eq(u, var(x)),
            PreTerm::TrueT | PreTerm::Star | PreTerm::Eps => Formula::eq(u, zero()),
            PreTerm::Emp0(_) => Self::pad(Formula::eq(u, zero()), t),
            PreTerm::ElN1(_, b) => {
                let db = self.delta(b);
                Self::pad(db, t)
            }
            PreTerm::PairT(a, b) => self.with_values(a, b, |_, v, w| Formula::eq(u, ordered_pair(v, w))),
            PreTerm::ElSigma(a, x, y, b) => self.with_value(a, |tr, v| {
                let first = p1(var(v), tr.fresh);
                let second = p2(var(v), tr.fresh);
                let db = tr.delta(b);
                tr.sub(&db, &[(x, first), (y, second)])
            }),
            PreTerm::Lam(x, a, b) => {
                let (v, w, wp) = (self.fresh("v"), self.fresh("w"), self.fresh("wp"));
                let ea = self.eta(a);
                let ea = self.at(&ea, var(&w));
                let db = self.delta(b);
                let uu = self.u.clone();
                let db = self.sub(&db, &[(x, var(&w)), (&uu, var(&wp))]);
                let pair = Formula::eq(var(&v), ordered_pair(var(&w), var(&wp)));
                Self::all(
                    &v,
                    Formula::iff(Formula::mem(var(&v), u), Self::ex(&w, Self::ex(&wp, Self::and3(ea, db, pair)))),
                )
            }
            PreTerm::Ap(a, b) => self.with_values(a, b, |tr, v, w| {
                let z = tr.fresh("z");
                let pz = p1(var(&z), tr.fresh);
                let graph = Term::Sep(z, alloc::boxed::Box::new(v), alloc::boxed::Box::new(Formula::eq(pz, w)));
                let value = p2(Term::union(graph), tr.fresh);
                Formula::eq(u, value)
            }),
            PreTerm::Inl(a) | PreTerm::Inr(a) => {
                let tag = if matches!(t, PreTerm::Inl(_)) { zero() } else { one() };
                self.with_value(a, |_, v| Formula::eq(u, ordered_pair(tag, var(v))))
            }
            PreTerm::ElPlus(a, x, b, y, c) => self.with_value(a, |tr, v| {
                let tag = p1(var(v), tr.fresh);
                let l = p2(var(v), tr.fresh);
                let r = p2(var(v), tr.fresh);
                let db = tr.delta(b);
                let db = tr.sub(&db, &[(x, l)]);
                let dc = tr.delta(c);
                let dc = tr.sub(&dc, &[(y, r)]);
                Formula::or(
                    Formula::and(Formula::eq(tag.clone(), zero()), db),
                    Formula::and(Formula::eq(tag, one()), dc),
                )
            }),
            PreTerm::Cons(a, b) => self.with_values(a, b, |tr, v, w| {
                let l = len(v.clone(), tr.fresh);
                Formula::eq(u, cup(v, singleton(ordered_pair(l, w))))
            }),
            PreTerm::ElList { annot, list, base, binders: (x, y, z), step } => {
                self.delta_el_list(annot, list, base, (x, y, z), step)
            }
            PreTerm::EqCls { elem, annot, binders: (x, y), rel } => {
                let (w, v) = (self.fresh("w"), self.fresh("v"));
                let da = self.delta(elem);
                let da = self.at(&da, var(&w));
                let ea = self.eta(annot);
                let ea = self.at(&ea, var(&v));
                let ph = self.hat(rel);
                let ph = self.sub(&ph, &[(x, var(&w)), (y, var(&v))]);
                let cls = Self::all(&v, Formula::iff(Formula::mem(var(&v), u), Formula::and(ea, ph)));
                Self::ex(&w, Formula::and(da, cls))
            }
            PreTerm::ElQuot { elem, var: x, body, .. } => {
                let d = self.with_value(elem, |tr, v| {
                    let (w1, w2) = (tr.fresh("w"), tr.fresh("w"));
                    let db = tr.delta(body);
                    let db = tr.sub(&db, &[(x, var(&w2))]);
                    Formula::and(
                        Self::ex(&w1, Formula::mem(var(&w1), var(v))),
                        Self::all(&w2, Formula::imp(Formula::mem(var(&w2), var(v)), db)),
                    )
                });
                Self::pad(d, t)
            }
            PreTerm::PropIntoP1(p) => {
                let v = self.fresh("v");
                let ph = self.hat(p);
                Self::all(
                    &v,
                    Formula::iff(Formula::mem(var(&v), u), Formula::and(Formula::eq(var(&v), zero()), ph)),
                )
            }
            PreTerm::NameOf(c) => {
                let v = self.fresh("v");
                let ec = self.eta(c);
                let ec = self.at(&ec, var(&v));
                Self::all(&v, Formula::iff(Formula::mem(var(&v), u), ec))
            }
            PreTerm::EmptyV => Formula::eq(u, Term::Empty),
            PreTerm::PairV(a, b) => self.with_values(a, b, |_, v, w| Formula::eq(u, Term::pair(v, w))),
            PreTerm::UnionV(a) => self.with_value(a, |_, v| Formula::eq(u, Term::union(var(v)))),
            PreTerm::PowV(a) => self.with_value(a, |tr, v| {
                let w = tr.fresh("w");
                let sub = subset(var(&w), var(v), tr.fresh);
                Self::all(&w, Formula::iff(Formula::mem(var(&w), u), sub))
            }),
            PreTerm::SepV(x, a, p) => {
                let (x, p) = self.guard_prop(x, &a.free_vars(), p);
                self.with_value(a, |tr, v| {
                    let ph = tr.hat(&p);
                    Self::all(
                        &x,
                        Formula::iff(
                            Formula::mem(var(&x), u),
                            Formula::and(Formula::mem(var(&x), var(v)), ph),
                        ),
                    )
                })
            }
            PreTerm::OmegaV => Formula::eq(u, Term::Omega),
        }
    }

    fn delta_el_list(
        &mut self,
        annot: &Collection,
        list: &PreTerm,
        base: &PreTerm,
        (x, y, z): (&Name, &Name, &Name),
        step: &PreTerm,
    ) -> Formula {
        let f = self.fresh("f");
        let fv = var(&f);
        let ea = self.eta(annot);
        let el = self.eta_list(&ea);

        // f is a function on List(A)
        let (w, w1, w2) = (self.fresh("w"), self.fresh("w1"), self.fresh("w2"));
        let el_w1 = self.at(&el, var(&w1));
        let typed = Self::all(
            &w,
            Formula::imp(
                Formula::mem(var(&w), fv.clone()),
                Self::ex(
                    &w1,
                    Self::ex(&w2, Formula::and(el_w1, Formula::eq(var(&w), ordered_pair(var(&w1), var(&w2))))),
                ),
            ),
        );
        let svl = self.single_valued(fv.clone());
        let (w1, w2) = (self.fresh("w1"), self.fresh("w2"));
        let el_w1 = self.at(&el, var(&w1));
        let tot = Self::all(
            &w1,
            Formula::imp(el_w1, Self::ex(&w2, Formula::mem(ordered_pair(var(&w1), var(&w2)), fv.clone()))),
        );

        // base case
        let v = self.fresh("v");
        let db = self.delta(base);
        let db = self.at(&db, var(&v));
        let at_nil = Self::ex(&v, Formula::and(db, Formula::mem(ordered_pair(zero(), var(&v)), fv.clone())));

        // step case
        let (w1, w2, w3, v) = (self.fresh("w1"), self.fresh("w2"), self.fresh("w3"), self.fresh("v"));
        let ea_w2 = self.at(&ea, var(&w2));
        let dc = self.delta(step);
        let u = self.u.clone();
        let dc = self.sub(&dc, &[(x, var(&w1)), (y, var(&w2)), (z, var(&w3)), (&u, var(&v))]);
        let l = len(var(&w1), self.fresh);
        let extended = cup(var(&w1), singleton(ordered_pair(l, var(&w2))));
        let step_ok = Formula::imp(
            Self::and3(Formula::mem(ordered_pair(var(&w1), var(&w3)), fv.clone()), ea_w2, dc),
            Formula::mem(ordered_pair(extended, var(&v)), fv.clone()),
        );
        let at_cons = Self::all(&w1, Self::all(&w2, Self::all(&w3, Self::all(&v, step_ok))));

        // the value at the given list
        let wp = self.fresh("wp");
        let da = self.delta(list);
        let da = self.at(&da, var(&wp));
        let result = Self::ex(&wp, Formula::and(da, Formula::mem(ordered_pair(var(&wp), self.u()), fv)));

        Self::ex(&f, Formula::conj([typed, svl, tot, at_nil, at_cons, result]))
    }

    /// `[] ↦ ⊤`, `[Γ, x∈A] ↦ Γ̂ ∧ η_A[x/u]`.
    pub fn context(&mut self, ctx: &Context) -> Formula {
        let mut out = Formula::top();
        for (x, a) in &ctx.entries {
            let ea = self.eta(a);
            let ea = self.at(&ea, var(x));
            out = Formula::and(out, ea);
        }
        out
    }
}

fn prepare(names: BTreeSet<Name>) -> Result<Fresh, HatError> {
    let u = placeholder();
    if names.contains(&u) {
        return Err(HatError::Placeholder);
    }
    let mut fresh = Fresh::new();
    fresh.reserve_all(&names);
    Ok(fresh)
}

pub fn eta(c: &Collection) -> Result<Formula, HatError> {
    let mut fresh = prepare(c.all_names())?;
    Ok(Translator::new(&mut fresh).eta(c))
}

pub fn delta(t: &PreTerm) -> Result<Formula, HatError> {
    let mut fresh = prepare(t.all_names())?;
    Ok(Translator::new(&mut fresh).delta(t))
}

pub fn hat(p: &Prop) -> Result<Formula, HatError> {
    let mut fresh = prepare(p.all_names())?;
    Ok(Translator::new(&mut fresh).hat(p))
}

pub fn hat_context(ctx: &Context) -> Result<Formula, HatError> {
    let mut names = BTreeSet::new();
    for (x, a) in &ctx.entries {
        names.insert(x.clone());
        names.extend(a.all_names());
    }
    let mut fresh = prepare(names)?;
    Ok(Translator::new(&mut fresh).context(ctx))
}

/// Translate any pre-syntax node: collections and terms give formulas in
/// `u`, propositions give formulas without it.
pub fn translate_node(n: &emtt::Node) -> Result<Formula, HatError> {
    match n {
        emtt::Node::Col(c) => eta(c),
        emtt::Node::Term(t) => delta(t),
        emtt::Node::Prop(p) => hat(p),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::emtt::{parse_context, parse_prop, parse_term, parse_collection};
    use crate::set::ParseOptions;
    use alloc::boxed::Box;
    use alloc::string::ToString;

    fn o() -> ParseOptions {
        ParseOptions::default()
    }

    fn v(x: &str) -> Term {
        Term::var(x)
    }

    #[test]
    fn small_clauses() {
        assert_eq!(eta(&Collection::N1).unwrap(), Formula::eq(v("u"), Term::Empty));
        assert_eq!(eta(&Collection::Univ).unwrap(), Formula::eq(v("u"), v("u")));
        assert_eq!(eta(&Collection::N0).unwrap(), Formula::Bot);
        assert_eq!(delta(&PreTerm::var("x")).unwrap(), Formula::eq(v("u"), v("x")));
        assert_eq!(delta(&PreTerm::TrueT).unwrap(), Formula::eq(v("u"), Term::Empty));
        assert_eq!(delta(&PreTerm::Eps).unwrap(), Formula::eq(v("u"), Term::Empty));
        assert_eq!(hat(&Prop::Bot).unwrap(), Formula::Bot);
    }

    #[test]
    fn membership_between_terms() {
        let p = hat(&Prop::eps(PreTerm::var("x"), PreTerm::var("y"))).unwrap();
        let expected = Formula::exists(
            "u",
            Formula::exists(
                "v",
                Formula::conj([Formula::eq(v("u"), v("x")), Formula::eq(v("v"), v("y")), Formula::mem(v("u"), v("v"))]),
            ),
        );
        assert!(p.alpha_eq(&expected), "{p}");
    }

    #[test]
    fn quantifier_over_v() {
        let p = parse_prop("all x:V. x =[V] x", o()).unwrap();
        let expected = Formula::forall(
            "x",
            Formula::imp(
                Formula::eq(v("x"), v("x")),
                Formula::exists("u", Formula::conj([Formula::eq(v("u"), v("x")), Formula::eq(v("u"), v("x")), Formula::eq(v("u"), v("u"))])),
            ),
        );
        assert!(hat(&p).unwrap().alpha_eq(&expected));
    }

    #[test]
    fn comprehension_substitutes_placeholder() {
        let c = parse_collection("{x | x eps y}", o()).unwrap();
        let got = eta(&c).unwrap();
        assert_eq!(got.free_vars().into_iter().map(|n| n.to_string()).collect::<Vec<_>>(), ["u", "y"]);
        assert!(matches!(got, Formula::Exists(..)));
    }

    #[test]
    fn contexts() {
        assert_eq!(hat_context(&Context::new()).unwrap(), Formula::top());
        let g = parse_context("[x:V, y:N1]", o()).unwrap();
        let expected = Formula::and(
            Formula::and(Formula::top(), Formula::eq(v("x"), v("x"))),
            Formula::eq(v("y"), Term::Empty),
        );
        assert_eq!(hat_context(&g).unwrap(), expected);
    }

    #[test]
    fn placeholder_is_rejected() {
        assert_eq!(delta(&PreTerm::var("u")), Err(HatError::Placeholder));
        let p = parse_prop("ex u:V. x eps u", o()).unwrap();
        assert_eq!(hat(&p), Err(HatError::Placeholder));
    }

    #[test]
    fn padding_keeps_free_variables() {
        for src in ["emp0(x)", "elN1(x, y)", "elQ[{a | a eps p},(a,b)a eps q](x, (z)z)"] {
            let t = parse_term(src, o()).unwrap();
            let mut want = t.free_vars();
            want.insert(placeholder());
            let got = delta(&t).unwrap().free_vars();
            assert!(t.free_vars().is_subset(&got), "{src}: {got:?}");
            assert!(got.is_subset(&want));
        }
    }

    #[test]
    fn binder_captured_by_its_own_bound_is_renamed() {
        // the binder x also occurs free in the bound collection
        let p = Prop::forall(
            "x",
            Collection::Compr("z".into(), Box::new(Prop::eps(PreTerm::var("z"), PreTerm::var("x")))),
            Prop::eps(PreTerm::var("x"), PreTerm::var("y")),
        );
        let f = hat(&p).unwrap();
        assert_eq!(f.free_vars(), p.free_vars());
    }

    #[test]
    fn output_is_core_and_well_formed() {
        let srcs = [
            "elList[N1](l, eps, (a,b,c)cons(c, b))",
            "ap(lam x:N1. {x, x}V, star)",
            "elPlus(inl(star), (p)p, (q)emptyV)",
            "elSig(<star, emptyV>, (p,q)q)",
            "cls[V,(a,b)a =[V] b](emptyV)",
            "name(Fun(V, P1))",
            "pr(ex z:List(N1). z eps z)",
            "{q eps PowV(omegaV) | q eps UnV(r)}",
        ];
        for src in srcs {
            let t = parse_term(src, o()).unwrap();
            let d = delta(&t).unwrap();
            d.check_well_formed().unwrap();
            let mut want = t.free_vars();
            want.insert(placeholder());
            assert!(d.free_vars().is_subset(&want), "{src}");
        }
    }
}
