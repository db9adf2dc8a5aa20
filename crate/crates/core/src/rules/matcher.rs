//! Instantiation of schemas and comparison with concrete judgments.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use super::{canonical_subject, Binding, Form, Judgment, JudgmentPattern, MetaKind, PatSlot, Pattern, RuleInstance, RuleSchema};
use crate::emtt::{build, Collection, Context, Node, Prop, Slot, Substitution, Term};
use crate::hat::{self, HatError};
use crate::hf::{self, EquivReport, EvalError, RankTooLarge};
use crate::name::{Fresh, Name};
use crate::set;
use crate::TheoryFlavor;

/// Where an instance first disagrees with its schema.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Location {
    Substitution(Name),
    SideCondition,
    PremiseCount,
    /// Zero-based.
    Premise(usize),
    Conclusion,
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Location::Substitution(x) => write!(f, "substitution for `{}`", x),
            Location::SideCondition => f.write_str("side condition"),
            Location::PremiseCount => f.write_str("number of premises"),
            Location::Premise(i) => write!(f, "premise {}", i + 1),
            Location::Conclusion => f.write_str("conclusion"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum MatchError {
    #[error("no rule schema named `{0}`")]
    UnknownSchema(String),
    #[error("rule `{id}` is not part of emTT_{flavor}")]
    NotInFlavor { id: String, flavor: TheoryFlavor },
    #[error("{at}: {reason}")]
    Mismatch { at: Location, reason: String },
}

fn mismatch(at: Location, reason: String) -> MatchError {
    MatchError::Mismatch { at, reason }
}

// ---------------------------------------------------------------- smallness

/// A conservative syntactic test for collections that are sets: every
/// constructor is a set former applied to sets. Comprehensions, `V`, `P(1)`
/// and `A → P(1)` are rejected.
pub fn is_set_collection(c: &Collection) -> bool {
    match c {
        Collection::N0 | Collection::N1 => true,
        Collection::List(a) => is_set_collection(a),
        Collection::Sum(a, b) | Collection::Sigma(_, a, b) | Collection::Pi(_, a, b) => {
            is_set_collection(a) && is_set_collection(b)
        }
        Collection::Quot(a, _, _, r) => is_set_collection(a) && is_small_prop(r),
        Collection::PropAsCol(p) => is_small_prop(p),
        Collection::PowOne | Collection::FunPowOne(_) | Collection::Compr(..) | Collection::Univ => false,
    }
}

/// A conservative syntactic test for small propositions: quantifiers range
/// over syntactic sets, equalities are taken in `V` or in a syntactic set,
/// and membership in a collection never counts as small.
pub fn is_small_prop(p: &Prop) -> bool {
    match p {
        Prop::Bot | Prop::EpsTerm(..) => true,
        Prop::EpsCol(..) => false,
        Prop::EqP(c, _, _) => matches!(**c, Collection::Univ) || is_set_collection(c),
        Prop::Imp(a, b) | Prop::And(a, b) | Prop::Or(a, b) => is_small_prop(a) && is_small_prop(b),
        Prop::Exists(_, c, b) | Prop::Forall(_, c, b) => is_set_collection(c) && is_small_prop(b),
    }
}

// ---------------------------------------------------------------- instantiation

struct Inst<'a> {
    schema: &'a RuleSchema,
    nodes: BTreeMap<Name, Node>,
    vars: BTreeMap<Name, Name>,
    auto: BTreeMap<Name, Name>,
    fresh: Fresh,
    /// (schema name, instance name) of binders in scope, innermost last.
    scope: Vec<(Name, Name)>,
}

fn binding_names(b: &Binding, out: &mut Fresh) {
    match b {
        Binding::Var(x) => out.reserve(x),
        Binding::Node(n) => {
            for x in n.all_names() {
                out.reserve(&x);
            }
        }
    }
}

impl<'a> Inst<'a> {
    fn new(schema: &'a RuleSchema, subst: &[(Name, Binding)], ctx: &Context) -> Result<Inst<'a>, MatchError> {
        let mut fresh = Fresh::new();
        for (x, a) in &ctx.entries {
            fresh.reserve(x);
            for y in a.all_names() {
                fresh.reserve(&y);
            }
        }
        let mut nodes = BTreeMap::new();
        let mut vars = BTreeMap::new();
        for (x, b) in subst {
            let at = || Location::Substitution(x.clone());
            let decl = schema.meta(x).ok_or_else(|| mismatch(at(), format!("`{}` is not a metavariable of this rule", x)))?;
            if nodes.contains_key(x) || vars.contains_key(x) {
                return Err(mismatch(at(), String::from("assigned twice")));
            }
            binding_names(b, &mut fresh);
            let wrong = |what: &str| mismatch(at(), format!("expected {}", what));
            match (decl.kind, b) {
                (MetaKind::Variable, Binding::Var(y)) | (MetaKind::Variable, Binding::Node(Node::Term(Term::Var(y)))) => {
                    vars.insert(x.clone(), y.clone());
                }
                (MetaKind::Variable, _) => return Err(wrong("a variable")),
                (_, Binding::Var(y)) if decl.kind == MetaKind::Term => {
                    nodes.insert(x.clone(), Node::Term(Term::Var(y.clone())));
                }
                (_, Binding::Var(_)) => return Err(wrong(kind_word(decl.kind))),
                (MetaKind::Collection, Binding::Node(n)) => {
                    let n = match n {
                        Node::Col(_) => n.clone(),
                        Node::Prop(p) => Node::Col(Collection::PropAsCol(alloc::boxed::Box::new(p.clone()))),
                        Node::Term(_) => return Err(wrong("a collection")),
                    };
                    nodes.insert(x.clone(), n);
                }
                (MetaKind::Term, Binding::Node(n)) => {
                    if !matches!(n, Node::Term(_)) {
                        return Err(wrong("a term"));
                    }
                    nodes.insert(x.clone(), n.clone());
                }
                (MetaKind::Proposition | MetaKind::SmallProposition, Binding::Node(n)) => {
                    let p = match n {
                        Node::Prop(p) => p.clone(),
                        Node::Col(Collection::PropAsCol(p)) => (**p).clone(),
                        _ => return Err(wrong("a proposition")),
                    };
                    if decl.kind == MetaKind::SmallProposition && !is_small_prop(&p) {
                        return Err(mismatch(at(), format!("`{}` is not syntactically a small proposition", p)));
                    }
                    nodes.insert(x.clone(), Node::Prop(p));
                }
            }
        }
        if let Some(m) = schema.metas.iter().find(|m| !nodes.contains_key(&m.name) && !vars.contains_key(&m.name)) {
            return Err(mismatch(Location::Substitution(m.name.clone()), String::from("not assigned")));
        }
        let mut seen: BTreeMap<&Name, &Name> = BTreeMap::new();
        for (x, y) in &vars {
            if let Some(other) = seen.insert(y, x) {
                return Err(mismatch(
                    Location::SideCondition,
                    format!("variables `{}` and `{}` must be instantiated with distinct names", other, x),
                ));
            }
        }
        Ok(Inst { schema, nodes, vars, auto: BTreeMap::new(), fresh, scope: Vec::new() })
    }

    fn resolve(&mut self, x: &Name) -> Name {
        if let Some(y) = self.vars.get(x) {
            return y.clone();
        }
        if let Some(y) = self.auto.get(x) {
            return y.clone();
        }
        let y = self.fresh.fresh(x.as_str());
        self.auto.insert(x.clone(), y.clone());
        y
    }

    fn lookup(&mut self, x: &Name) -> Name {
        match self.scope.iter().rev().find(|(p, _)| p == x) {
            Some((_, y)) => y.clone(),
            None => self.resolve(x),
        }
    }

    /// The binders that would capture free variables of meta `m`.
    fn check_capture(&self, m: &Name, node: &Node, exempt: &BTreeSet<Name>) -> Result<(), String> {
        let deps = &self.schema.meta(m).expect("declared").deps;
        let free = node.free_vars();
        for (p, y) in self.scope.iter().rev() {
            if deps.contains(p) || exempt.contains(y) {
                continue;
            }
            if free.contains(y) {
                return Err(format!("the instantiation of `{}` mentions `{}`, which the rule binds around it", m, y));
            }
        }
        Ok(())
    }

    fn pattern(&mut self, p: &Pattern) -> Result<Node, String> {
        match p {
            Pattern::Meta(m) => {
                let n = self.nodes[m].clone();
                self.check_capture(m, &n, &BTreeSet::new())?;
                Ok(n)
            }
            Pattern::Sub(m, pairs) => {
                let n = self.nodes[m].clone();
                let mut s = Substitution::new();
                let mut exempt = BTreeSet::new();
                for (x, t) in pairs {
                    let x = self.resolve(x);
                    let t = match self.pattern(t)? {
                        Node::Term(t) => t,
                        _ => unreachable!("checked at load"),
                    };
                    exempt.insert(x.clone());
                    s.insert(x, t);
                }
                self.check_capture(m, &n, &exempt)?;
                Ok(n.subst_many(&s, &mut self.fresh))
            }
            Pattern::Node(tag, slots) => {
                let sig = crate::emtt::signature(tag).expect("checked at load");
                let mut binders = Vec::new();
                for s in slots.iter().zip(sig) {
                    if let (PatSlot::Name(x), crate::emtt::Sig::Bind) = s {
                        let y = self.resolve(x);
                        binders.push((x.clone(), y));
                    }
                }
                let mut out = Vec::with_capacity(slots.len());
                let mut bi = 0;
                for (s, g) in slots.iter().zip(sig) {
                    out.push(match (s, g) {
                        (PatSlot::Name(_), crate::emtt::Sig::Bind) => {
                            bi += 1;
                            Slot::Name(binders[bi - 1].1.clone())
                        }
                        (PatSlot::Name(x), _) => Slot::Name(self.lookup(x)),
                        (PatSlot::Pat(q), crate::emtt::Sig::Sub(_, mask)) => {
                            let before = self.scope.len();
                            for (i, b) in binders.iter().enumerate() {
                                if mask & (1 << i) != 0 {
                                    self.scope.push(b.clone());
                                }
                            }
                            let r = self.pattern(q);
                            self.scope.truncate(before);
                            Slot::Node(r?)
                        }
                        _ => unreachable!("checked at load"),
                    });
                }
                Ok(build(tag, out).expect("checked at load"))
            }
        }
    }

    fn judgment(&mut self, j: &JudgmentPattern, ctx: &Context) -> Result<Judgment, String> {
        let before = self.scope.len();
        let r = (|| {
            let mut context = ctx.clone();
            for (x, a) in &j.ext {
                let y = self.resolve(x);
                if ctx.vars().any(|v| v == &y) {
                    return Err(format!("`{}` is already declared in the ambient context", y));
                }
                let a = self.pattern(a)?.into_col().expect("checked at load");
                context.entries.push((y.clone(), a));
                self.scope.push((x.clone(), y));
            }
            let form = j.form.map(|p| self.pattern(p))?;
            Ok(Judgment { context, form })
        })();
        self.scope.truncate(before);
        r
    }
}

fn kind_word(k: MetaKind) -> &'static str {
    match k {
        MetaKind::Collection => "a collection",
        MetaKind::Term => "a term",
        MetaKind::Proposition => "a proposition",
        MetaKind::SmallProposition => "a small proposition",
        MetaKind::Variable => "a variable",
    }
}

// ---------------------------------------------------------------- comparison

fn same_subject(a: &Node, b: &Node) -> bool {
    canonical_subject(a).alpha_eq(&canonical_subject(b))
}

fn compare(expected: &Judgment, found: &Judgment) -> Result<(), String> {
    let (ec, fc) = (&expected.context.entries, &found.context.entries);
    if ec.len() != fc.len() {
        return Err(format!("expected context {}, found {}", expected.context, found.context));
    }
    for ((x, a), (y, b)) in ec.iter().zip(fc) {
        if x != y || !a.alpha_eq(b) {
            return Err(format!("expected context entry `{} ∈ {}`, found `{} ∈ {}`", x, a, y, b));
        }
    }
    let ok = match (&expected.form, &found.form) {
        (Form::Col(a), Form::Col(b))
        | (Form::Set(a), Form::Set(b))
        | (Form::Prop(a), Form::Prop(b))
        | (Form::PropS(a), Form::PropS(b)) => same_subject(a, b),
        (Form::True(a), Form::True(b)) => a.alpha_eq(b),
        (Form::In(a, c), Form::In(b, d)) => a.alpha_eq(b) && same_subject(c, d),
        (Form::EqIn(a, b, c), Form::EqIn(d, e, f)) => a.alpha_eq(d) && b.alpha_eq(e) && same_subject(c, f),
        (Form::EqType(k, a, b), Form::EqType(l, c, d)) => k == l && same_subject(a, c) && same_subject(b, d),
        _ => false,
    };
    if ok {
        Ok(())
    } else {
        Err(format!("expected `{}`, found `{}`", show(&expected.form), show(&found.form)))
    }
}

fn show(f: &Form<Node>) -> String {
    match f {
        Form::Col(a) => format!("{} col", a),
        Form::Set(a) => format!("{} set", a),
        Form::Prop(a) => format!("{} prop", a),
        Form::PropS(a) => format!("{} prop_s", a),
        Form::True(a) => format!("true ∈ {}", a),
        Form::In(a, b) => format!("{} ∈ {}", a, b),
        Form::EqIn(a, b, c) => format!("{} = {} ∈ {}", a, b, c),
        Form::EqType(k, a, b) => format!("{} = {} {}", a, b, k.as_str()),
    }
}

pub(super) fn match_schema(schema: &RuleSchema, inst: &RuleInstance) -> Result<(), MatchError> {
    let mut it = Inst::new(schema, &inst.subst, &inst.context)?;
    if schema.premises.len() != inst.premises.len() {
        return Err(mismatch(
            Location::PremiseCount,
            format!("the rule has {} premise(s), the instance {}", schema.premises.len(), inst.premises.len()),
        ));
    }
    for (i, (p, q)) in schema.premises.iter().zip(&inst.premises).enumerate() {
        let want = it.judgment(p, &inst.context).map_err(|e| mismatch(Location::Premise(i), e))?;
        compare(&want, q).map_err(|e| mismatch(Location::Premise(i), e))?;
    }
    let want = it.judgment(&schema.conclusion, &inst.context).map_err(|e| mismatch(Location::Conclusion, e))?;
    compare(&want, &inst.conclusion).map_err(|e| mismatch(Location::Conclusion, e))
}

pub(super) fn instantiate_conclusion(
    schema: &RuleSchema,
    subst: &[(Name, Binding)],
    ctx: &Context,
) -> Result<Judgment, MatchError> {
    let mut it = Inst::new(schema, subst, ctx)?;
    it.judgment(&schema.conclusion, ctx).map_err(|e| mismatch(Location::Conclusion, e))
}

// ---------------------------------------------------------------- cross-check

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum CrossCheckError {
    #[error("conclusion is not an equality of collections")]
    NotCharacterization,
    #[error(transparent)]
    Instantiate(#[from] MatchError),
    #[error(transparent)]
    Hat(#[from] HatError),
    #[error("rank {} is outside the supported range", .0.0)]
    Rank(#[from] RankTooLarge),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// For a rule concluding `L = R col`, compare the translation of `w ε R`
/// with `η_L[w/u]` over the rank-`rank` universe.
pub fn characterization_check(
    schema: &RuleSchema,
    subst: &[(Name, Binding)],
    rank: u8,
) -> Result<EquivReport, CrossCheckError> {
    let j = instantiate_conclusion(schema, subst, &Context::new())?;
    let (lhs, rhs) = match j.form {
        Form::EqType(_, Node::Col(l), Node::Col(r)) => (l, r),
        _ => return Err(CrossCheckError::NotCharacterization),
    };
    let mut taken = lhs.all_names();
    taken.extend(rhs.all_names());
    let mut w = Name::new("w");
    let mut k = 0;
    while taken.contains(&w) {
        k += 1;
        w = Name::from(format!("w{}", k));
    }
    let member = Prop::EpsCol(alloc::boxed::Box::new(Term::Var(w.clone())), alloc::boxed::Box::new(rhs));
    let f = hat::hat(&member)?;
    let mut fresh = Fresh::new();
    f.reserve_names(&mut fresh);
    let eta = hat::eta(&lhs)?;
    eta.reserve_names(&mut fresh);
    let g = eta.subst(&hat::placeholder(), &set::Term::Var(w), &mut fresh);
    let mut vars: BTreeSet<Name> = f.free_vars();
    vars.extend(g.free_vars());
    let vars: Vec<Name> = vars.into_iter().collect();
    let u = hf::enumerate_universe(rank)?;
    Ok(hf::check_equivalence(&f, &g, &vars, &u)?)
}
