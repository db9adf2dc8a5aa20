use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

use super::{CheckReport, ConfigError, Failure, GenConfig, Property, Sampler, MAX_SKIP_RATIO};
use crate::emtt::{Collection, Prop, SlotRef, NodeRef, Term as PreTerm};
use crate::hat::{self, placeholder};
use crate::hf::{check_equivalence, check_validity, enumerate_universe, CompiledFormula, Env, EquivReport, HFSet, Universe};
use crate::name::{Fresh, Name};
use crate::set::sugar::{iff, neg, subset};
use crate::set::{Formula, Term};
use crate::tilde::{tilde_formula, tilde_term};
use crate::TheoryFlavor;

/// Result of checking one sample.
#[derive(Default)]
struct Outcome {
    checked: u64,
    skipped: u64,
    failure: Option<(String, Option<Env>)>,
}

impl Outcome {
    fn fail(detail: impl Into<String>, env: Option<Env>) -> Outcome {
        Outcome { failure: Some((detail.into(), env)), ..Outcome::default() }
    }

    fn from_equiv(r: EquivReport, what: impl FnOnce(bool, bool) -> String) -> Outcome {
        let failure = r.counterexample.map(|(env, l, r)| (what(l, r), Some(env)));
        Outcome { checked: r.checked, skipped: r.skipped, failure }
    }

    fn skip_ratio(&self) -> f64 {
        let total = self.checked + self.skipped;
        if total == 0 {
            0.0
        } else {
            self.skipped as f64 / total as f64
        }
    }
}

/// Draw at `max_depth`, drop a level while the sample skips too much, then
/// shrink a failure and record it.
fn run_sample<T: Clone>(
    report: &mut CheckReport,
    index: usize,
    max_depth: usize,
    mut draw: impl FnMut(usize) -> T,
    run: impl Fn(&T) -> Outcome,
    children: impl Fn(&T) -> Vec<T>,
    show: impl Fn(&T) -> String,
) {
    let mut depth = max_depth;
    let (x, out) = loop {
        let x = draw(depth);
        let out = run(&x);
        if out.failure.is_none() && out.skip_ratio() >= MAX_SKIP_RATIO && depth > 0 {
            report.regenerated += 1;
            depth -= 1;
            continue;
        }
        break (x, out);
    };
    report.samples += 1;
    report.checked += out.checked;
    report.skipped += out.skipped;
    if let Some(f) = out.failure {
        let (x, (detail, env)) = shrink(x, f, &children, |c| run(c).failure);
        report.failures.push(Failure { sample: index, input: show(&x), detail, env });
    }
}

/// Greedy descent to a child that still fails.
fn shrink<T, F>(mut x: T, mut f: F, children: impl Fn(&T) -> Vec<T>, fails: impl Fn(&T) -> Option<F>) -> (T, F) {
    'outer: loop {
        for c in children(&x) {
            if let Some(g) = fails(&c) {
                x = c;
                f = g;
                continue 'outer;
            }
        }
        return (x, f);
    }
}

fn set_formula_children(p: &Formula) -> Vec<Formula> {
    match p {
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => vec![(**a).clone(), (**b).clone()],
        Formula::Forall(_, b) | Formula::Exists(_, b) => vec![(**b).clone()],
        _ => Vec::new(),
    }
}

fn set_term_children(t: &Term) -> Vec<Term> {
    match t {
        Term::Pair(a, b) => vec![(**a).clone(), (**b).clone()],
        Term::Union(a) | Term::Pow(a) | Term::Sep(_, a, _) => vec![(**a).clone()],
        _ => Vec::new(),
    }
}

fn emtt_children<T>(n: NodeRef<'_>, pick: impl Fn(NodeRef<'_>) -> Option<T>) -> Vec<T> {
    n.slots()
        .into_iter()
        .filter_map(|s| match s {
            SlotRef::Node(c) => pick(c),
            SlotRef::Name(_) => None,
        })
        .collect()
}

fn preterm_children(t: &PreTerm) -> Vec<PreTerm> {
    emtt_children(NodeRef::Term(t), |c| match c {
        NodeRef::Term(x) => Some(x.normalize()),
        _ => None,
    })
}

fn prop_children(p: &Prop) -> Vec<Prop> {
    emtt_children(NodeRef::Prop(p), |c| match c {
        NodeRef::Prop(x) => Some(x.normalize()),
        _ => None,
    })
}

fn collection_children(a: &Collection) -> Vec<Collection> {
    emtt_children(NodeRef::Col(a), |c| match c {
        NodeRef::Col(x) => Some(x.normalize()),
        _ => None,
    })
}

fn sorted(vars: BTreeSet<Name>) -> Vec<Name> {
    vars.into_iter().collect()
}

fn setup(cfg: &GenConfig) -> Result<Universe, ConfigError> {
    cfg.validate()?;
    enumerate_universe(cfg.rank).map_err(|e| ConfigError::Rank(e.0))
}

/// `ψ ↔ hat(tilde ψ)` on `cfg.sample_count` set formulas.
pub fn check_oneside_formulas(cfg: &GenConfig) -> Result<CheckReport, ConfigError> {
    oneside_formulas(cfg, 0..cfg.sample_count)
}

fn oneside_formulas(cfg: &GenConfig, range: Range<usize>) -> Result<CheckReport, ConfigError> {
    let u = setup(cfg)?;
    let mut report = CheckReport::new(Property::Oneside);
    for i in range {
        let mut s = Sampler::for_sample(cfg, Property::Oneside, i, 0);
        run_sample(
            &mut report,
            i,
            cfg.max_depth,
            |d| s.set_formula(d),
            |psi| oneside_formula(psi, &u),
            set_formula_children,
            |psi| psi.to_string(),
        );
    }
    Ok(report)
}

fn oneside_formula(psi: &Formula, u: &Universe) -> Outcome {
    let image = match hat::hat(&tilde_formula(psi)) {
        Ok(h) => h,
        Err(e) => return Outcome::fail(e.to_string(), None),
    };
    match check_equivalence(psi, &image, &sorted(psi.free_vars()), u) {
        Ok(r) => Outcome::from_equiv(r, |l, r| format!("formula is {}, image is {}; image: {}", l, r, image)),
        Err(e) => Outcome::fail(format!("{}; image: {}", e, image), None),
    }
}

/// `u = a ↔ δ_{tilde a}` on `n` set terms.
pub fn check_oneside_terms(cfg: &GenConfig, n: usize) -> Result<CheckReport, ConfigError> {
    oneside_terms(cfg, 0..n)
}

fn oneside_terms(cfg: &GenConfig, range: Range<usize>) -> Result<CheckReport, ConfigError> {
    let u = setup(cfg)?;
    let mut report = CheckReport::new(Property::Oneside);
    for i in range {
        let mut s = Sampler::for_sample(cfg, Property::Oneside, i, 1);
        run_sample(
            &mut report,
            i,
            cfg.max_depth,
            |d| s.set_term(d),
            |a| oneside_term(a, &u),
            set_term_children,
            |a| a.to_string(),
        );
    }
    Ok(report)
}

fn oneside_term(a: &Term, u: &Universe) -> Outcome {
    let image = match hat::delta(&tilde_term(a)) {
        Ok(h) => h,
        Err(e) => return Outcome::fail(e.to_string(), None),
    };
    let lhs = Formula::eq(Term::Var(placeholder()), a.clone());
    let mut vars = sorted(a.free_vars());
    vars.push(placeholder());
    match check_equivalence(&lhs, &image, &vars, u) {
        Ok(r) => Outcome::from_equiv(r, |l, r| format!("u = a is {}, δ is {}; δ: {}", l, r, image)),
        Err(e) => Outcome::fail(format!("{}; δ: {}", e, image), None),
    }
}

/// Both halves: `sample_count` formulas and two fifths as many terms.
pub fn check_oneside(cfg: &GenConfig) -> Result<CheckReport, ConfigError> {
    oneside(cfg, 0..cfg.sample_count)
}

fn oneside(cfg: &GenConfig, range: Range<usize>) -> Result<CheckReport, ConfigError> {
    let terms = (cfg.sample_count * 2).div_ceil(5);
    let mut report = oneside_formulas(cfg, range.clone())?;
    let t = oneside_terms(cfg, range.start.min(terms)..range.end.min(terms))?;
    // term samples are numbered after all formula samples
    report.samples += t.samples;
    report.checked += t.checked;
    report.skipped += t.skipped;
    report.regenerated += t.regenerated;
    report
        .failures
        .extend(t.failures.into_iter().map(|f| Failure { sample: f.sample + cfg.sample_count, ..f }));
    Ok(report)
}

/// Calls `f` on every assignment of `U` to `n` variables, last fastest,
/// until it returns `false`.
fn for_each_env(n: usize, u: &Universe, mut f: impl FnMut(&[HFSet]) -> bool) {
    let size = u.len() as u32;
    let mut values = vec![HFSet::EMPTY; n];
    loop {
        if !f(&values) {
            return;
        }
        let mut k = n;
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            let next = values[k].code() + 1;
            if next < size {
                values[k] = HFSet::from_code(next).expect("below the universe size");
                break;
            }
            values[k] = HFSet::EMPTY;
        }
    }
}

fn env_of(vars: &[Name], values: &[HFSet]) -> Env {
    vars.iter().cloned().zip(values.iter().copied()).collect()
}

fn v_name() -> Name {
    Name::new("v")
}

/// `δ_t ∧ δ_t[v/u] → u = v` on `cfg.sample_count` pre-terms.
///
/// Per assignment of the parameters, δ_t is evaluated once for each `u`;
/// the pairs `(u, v)` are then counted rather than enumerated. A pair is
/// skipped exactly when left-to-right evaluation of the antecedent would
/// overflow.
pub fn check_delta_functional(cfg: &GenConfig) -> Result<CheckReport, ConfigError> {
    delta_functional_range(cfg, 0..cfg.sample_count)
}

fn delta_functional_range(cfg: &GenConfig, range: Range<usize>) -> Result<CheckReport, ConfigError> {
    let u = setup(cfg)?;
    let mut report = CheckReport::new(Property::DeltaFun);
    for i in range {
        let mut s = Sampler::for_sample(cfg, Property::DeltaFun, i, 0);
        run_sample(
            &mut report,
            i,
            cfg.max_depth,
            |d| s.preterm(d),
            |t| delta_functional(t, &u),
            preterm_children,
            |t| t.to_string(),
        );
    }
    Ok(report)
}

fn delta_functional(t: &PreTerm, u: &Universe) -> Outcome {
    let d = match hat::delta(t) {
        Ok(d) => d,
        Err(e) => return Outcome::fail(e.to_string(), None),
    };
    let params = sorted(t.free_vars());
    let mut vars = params.clone();
    vars.push(placeholder());
    let c = match CompiledFormula::new(&d, &vars) {
        Ok(c) => c,
        Err(e) => return Outcome::fail(format!("{}; δ: {}", e, d), None),
    };
    let size = u.len() as u64;
    let mut out = Outcome::default();
    for_each_env(params.len(), u, |ps| {
        let (mut holds, mut over) = (Vec::new(), 0u64);
        for (w, r) in u.elements().zip(c.eval_last_swept(ps, u)) {
            match r {
                Ok(true) => holds.push(w),
                Ok(false) => {}
                Err(_) => over += 1,
            }
        }
        let skipped = over * size + holds.len() as u64 * over;
        out.skipped += skipped;
        out.checked += size * size - skipped;
        if holds.len() >= 2 {
            let mut env = env_of(&params, ps);
            env.insert(placeholder(), holds[0]);
            env.insert(v_name(), holds[1]);
            out.failure = Some((format!("δ holds for two values; δ: {}", d), Some(env)));
            return false;
        }
        true
    });
    out
}

/// One substitution instance: `t` for `x` in a body of some sort.
#[derive(Clone, Debug)]
struct SubstCase<B> {
    t: PreTerm,
    x: Name,
    body: B,
}

/// Checks `δ_t[v/u] → (l ↔ r)` in every environment. `l` and `r` may
/// mention `u`; the guard is evaluated once per assignment without `u`.
fn guarded_equivalence(guard: &Formula, l: &Formula, r: &Formula, u: &Universe) -> Outcome {
    let (uu, vv) = (placeholder(), v_name());
    let mut free = guard.free_vars();
    free.extend(l.free_vars());
    free.extend(r.free_vars());
    free.remove(&uu);
    free.remove(&vv);
    let params = sorted(free);
    let mut gvars = params.clone();
    gvars.push(vv.clone());
    let mut vars = gvars.clone();
    vars.push(uu.clone());
    let compiled = (CompiledFormula::new(guard, &gvars), CompiledFormula::new(l, &vars), CompiledFormula::new(r, &vars));
    let (cg, cl, cr) = match compiled {
        (Ok(g), Ok(l), Ok(r)) => (g, l, r),
        (g, l, r) => {
            let e = [g.err(), l.err(), r.err()].into_iter().flatten().next().expect("one side failed");
            return Outcome::fail(e.to_string(), None);
        }
    };
    let size = u.len() as u64;
    let mut out = Outcome::default();
    for_each_env(gvars.len(), u, |gs| {
        match cg.eval(gs, u) {
            Err(_) => out.skipped += size,
            Ok(false) => out.checked += size,
            Ok(true) => {
                let sides = cl.eval_last_swept(gs, u).into_iter().zip(cr.eval_last_swept(gs, u));
                for (w, (a, b)) in u.elements().zip(sides) {
                    match (a, b) {
                        (Ok(a), Ok(b)) if a == b => out.checked += 1,
                        (Ok(a), Ok(b)) => {
                            out.checked += 1;
                            let mut values = gs.to_vec();
                            values.push(w);
                            let detail = format!("left is {}, right is {}", a, b);
                            out.failure = Some((detail, Some(env_of(&vars, &values))));
                            return false;
                        }
                        _ => out.skipped += 1,
                    }
                }
            }
        }
        true
    });
    out
}

fn fresh_for(names: impl IntoIterator<Item = Name>) -> Fresh {
    let mut f = Fresh::new();
    let names: Vec<Name> = names.into_iter().collect();
    f.reserve_all(names.iter());
    f.reserve(&v_name());
    f
}

/// A name supply clear of every name in `p`, bound or free.
fn fresh_above(p: &Formula) -> Fresh {
    let mut names = BTreeSet::new();
    p.all_names(&mut names);
    fresh_for(names)
}

fn guard_of(t: &PreTerm) -> Result<Formula, String> {
    let d = hat::delta(t).map_err(|e| e.to_string())?;
    Ok(d.subst(&placeholder(), &Term::Var(v_name()), &mut fresh_above(&d)))
}

fn set_v_for_x(p: &Formula, x: &Name) -> Formula {
    p.subst(x, &Term::Var(v_name()), &mut fresh_above(p))
}

fn subst_term(c: &SubstCase<PreTerm>, u: &Universe) -> Outcome {
    let run = || -> Result<Outcome, String> {
        let guard = guard_of(&c.t)?;
        let mut fresh = fresh_for(c.body.all_names().into_iter().chain(c.t.all_names()));
        let substituted = c.body.subst(&c.x, &c.t, &mut fresh);
        let l = hat::delta(&substituted).map_err(|e| e.to_string())?;
        let r = set_v_for_x(&hat::delta(&c.body).map_err(|e| e.to_string())?, &c.x);
        Ok(guarded_equivalence(&guard, &l, &r, u))
    };
    run().unwrap_or_else(|e| Outcome::fail(e, None))
}

fn subst_collection(c: &SubstCase<Collection>, u: &Universe) -> Outcome {
    let run = || -> Result<Outcome, String> {
        let guard = guard_of(&c.t)?;
        let mut fresh = fresh_for(c.body.all_names().into_iter().chain(c.t.all_names()));
        let substituted = c.body.subst(&c.x, &c.t, &mut fresh);
        let l = hat::eta(&substituted).map_err(|e| e.to_string())?;
        let r = set_v_for_x(&hat::eta(&c.body).map_err(|e| e.to_string())?, &c.x);
        Ok(guarded_equivalence(&guard, &l, &r, u))
    };
    run().unwrap_or_else(|e| Outcome::fail(e, None))
}

fn subst_prop(c: &SubstCase<Prop>, u: &Universe) -> Outcome {
    let run = || -> Result<Outcome, String> {
        let guard = guard_of(&c.t)?;
        let mut fresh = fresh_for(c.body.all_names().into_iter().chain(c.t.all_names()));
        let substituted = c.body.subst(&c.x, &c.t, &mut fresh);
        let l = hat::hat(&substituted).map_err(|e| e.to_string())?;
        let r = set_v_for_x(&hat::hat(&c.body).map_err(|e| e.to_string())?, &c.x);
        Ok(guarded_equivalence(&guard, &l, &r, u))
    };
    run().unwrap_or_else(|e| Outcome::fail(e, None))
}

/// A variable of the body when it has one, so the substitution bites.
fn pick_x(s: &mut Sampler<'_>, free: BTreeSet<Name>) -> Name {
    let fallback = s.name();
    let free: Vec<Name> = free.into_iter().collect();
    if free.is_empty() {
        fallback
    } else {
        let i = fallback.as_str().bytes().map(usize::from).sum::<usize>() % free.len();
        free[i].clone()
    }
}

fn shrink_case<B: Clone>(c: &SubstCase<B>, kids: impl Fn(&B) -> Vec<B>) -> Vec<SubstCase<B>> {
    kids(&c.body).into_iter().map(|body| SubstCase { body, ..c.clone() }).collect()
}

/// The three restated forms of the substitution lemma, each on
/// `cfg.sample_count` triples: `δ_t[v/u] → (δ_{a[t/x]} ↔ δ_a[v/x])`, the
/// same with `η_A`, and with `hat φ`.
pub fn check_substitution(cfg: &GenConfig) -> Result<CheckReport, ConfigError> {
    substitution(cfg, 0..cfg.sample_count)
}

fn substitution(cfg: &GenConfig, range: Range<usize>) -> Result<CheckReport, ConfigError> {
    let u = setup(cfg)?;
    let mut report = CheckReport::new(Property::Subst);
    let inner = cfg.max_depth.saturating_sub(1);
    let samples = range.len();
    for i in range {
        let mut s = Sampler::for_sample(cfg, Property::Subst, i, 0);
        run_sample(
            &mut report,
            i,
            cfg.max_depth,
            |d| {
                let body = s.preterm(d);
                let x = pick_x(&mut s, body.free_vars());
                SubstCase { t: s.preterm(inner.min(d)), x, body }
            },
            |c| subst_term(c, &u),
            |c| shrink_case(c, preterm_children),
            |c| format!("term {} for {} in {}", c.t, c.x, c.body),
        );
        let mut s = Sampler::for_sample(cfg, Property::Subst, i, 1);
        run_sample(
            &mut report,
            i,
            inner,
            |d| {
                let body = s.collection(d);
                let x = pick_x(&mut s, body.free_vars());
                SubstCase { t: s.preterm(d), x, body }
            },
            |c| subst_collection(c, &u),
            |c| shrink_case(c, collection_children),
            |c| format!("term {} for {} in {}", c.t, c.x, c.body),
        );
        let mut s = Sampler::for_sample(cfg, Property::Subst, i, 2);
        run_sample(
            &mut report,
            i,
            cfg.max_depth,
            |d| {
                let body = s.prop(d);
                let x = pick_x(&mut s, body.free_vars());
                SubstCase { t: s.preterm(inner.min(d)), x, body }
            },
            |c| subst_prop(c, &u),
            |c| shrink_case(c, prop_children),
            |c| format!("term {} for {} in {}", c.t, c.x, c.body),
        );
    }
    // three forms were run per triple
    report.samples = samples;
    Ok(report)
}

fn show_names(s: &BTreeSet<Name>) -> String {
    let v: Vec<&str> = s.iter().map(|x| x.as_str()).collect();
    format!("{{{}}}", v.join(", "))
}

fn contract(ok: bool, detail: impl FnOnce() -> String) -> Outcome {
    if ok {
        Outcome { checked: 1, ..Outcome::default() }
    } else {
        Outcome::fail(detail(), None)
    }
}

fn freevars_prop(p: &Prop) -> Outcome {
    match hat::hat(p) {
        Ok(h) => {
            let (a, b) = (p.free_vars(), h.free_vars());
            contract(a == b, || format!("free(φ) = {}, free(hat φ) = {}", show_names(&a), show_names(&b)))
        }
        Err(e) => Outcome::fail(e.to_string(), None),
    }
}

fn within_plus_u(input: BTreeSet<Name>, image: &Formula, what: &str) -> Outcome {
    let out = image.free_vars();
    let mut allowed = input;
    allowed.insert(placeholder());
    contract(out.is_subset(&allowed), || {
        format!("free({}) = {} is not within {}", what, show_names(&out), show_names(&allowed))
    })
}

fn freevars_collection(a: &Collection) -> Outcome {
    match hat::eta(a) {
        Ok(e) => within_plus_u(a.free_vars(), &e, "η"),
        Err(e) => Outcome::fail(e.to_string(), None),
    }
}

fn freevars_term(t: &PreTerm) -> Outcome {
    match hat::delta(t) {
        Ok(d) => within_plus_u(t.free_vars(), &d, "δ"),
        Err(e) => Outcome::fail(e.to_string(), None),
    }
}

/// `free(hat φ) = free(φ)` on `cfg.sample_count` propositions, plus the
/// inclusions for η and δ on as many collections and terms.
pub fn check_freevar_contracts(cfg: &GenConfig) -> Result<CheckReport, ConfigError> {
    freevar_contracts(cfg, 0..cfg.sample_count)
}

fn freevar_contracts(cfg: &GenConfig, range: Range<usize>) -> Result<CheckReport, ConfigError> {
    setup(cfg)?;
    let mut report = CheckReport::new(Property::Freevars);
    let samples = range.len();
    for i in range {
        let mut s = Sampler::for_sample(cfg, Property::Freevars, i, 0);
        let d = cfg.max_depth;
        run_sample(&mut report, i, d, |d| s.prop(d), freevars_prop, prop_children, |p| p.to_string());
        let mut s = Sampler::for_sample(cfg, Property::Freevars, i, 1);
        run_sample(&mut report, i, d, |d| s.collection(d), freevars_collection, collection_children, |a| a.to_string());
        let mut s = Sampler::for_sample(cfg, Property::Freevars, i, 2);
        run_sample(&mut report, i, d, |d| s.preterm(d), freevars_term, preterm_children, |t| t.to_string());
    }
    report.samples = samples;
    Ok(report)
}

fn var(x: &str) -> Term {
    Term::var(x)
}

/// The fixed axioms: extensionality, empty set, pairing, union and,
/// outside CZF, powerset. Free variables are the universally closed ones.
pub fn axiom_instances(flavor: TheoryFlavor) -> Vec<(&'static str, Formula)> {
    let (x, y, z) = (var("x"), var("y"), var("z"));
    let mut fresh = fresh_for(["x", "y", "z"].map(Name::new));
    let mem = Formula::mem;
    let mut out = vec![
        (
            "extensionality",
            Formula::imp(Formula::forall("z", iff(mem(z.clone(), x.clone()), mem(z.clone(), y.clone()))), Formula::eq(x.clone(), y.clone())),
        ),
        ("empty set", neg(mem(x.clone(), Term::Empty))),
        (
            "pairing",
            iff(
                mem(x.clone(), Term::pair(y.clone(), z.clone())),
                Formula::or(Formula::eq(x.clone(), y.clone()), Formula::eq(x.clone(), z.clone())),
            ),
        ),
        (
            "union",
            iff(
                mem(x.clone(), Term::union(y.clone())),
                Formula::exists("z", Formula::and(mem(x.clone(), z.clone()), mem(z.clone(), y.clone()))),
            ),
        ),
    ];
    if flavor != TheoryFlavor::Czf {
        out.push(("powerset", iff(mem(x.clone(), Term::pow(y.clone())), subset(x, y, &mut fresh))));
    }
    out
}

/// `z ∈ {x ∈ y | φ} ↔ z ∈ y ∧ φ[z/x]`.
pub fn separation_instance(phi: &Formula) -> Formula {
    let (x, y, z) = (Name::new("x"), var("y"), var("z"));
    let phi = phi.normalize();
    let mut fresh = fresh_above(&phi);
    let sep = Term::Sep(x.clone(), alloc::boxed::Box::new(y.clone()), alloc::boxed::Box::new(phi.clone()));
    iff(Formula::mem(z.clone(), sep), Formula::and(Formula::mem(z.clone(), y), phi.subst(&x, &z, &mut fresh)))
}

fn axiom_outcome(p: &Formula, u: &Universe) -> Outcome {
    match check_validity(p, &sorted(p.free_vars()), u) {
        Ok(r) => Outcome::from_equiv(r, |_, _| "instance fails".to_string()),
        Err(e) => Outcome::fail(e.to_string(), None),
    }
}

/// The fixed axioms once each, then `cfg.sample_count` separation
/// instances with φ over `x` and `y` (Δ0 for CZF).
pub fn check_axioms(cfg: &GenConfig) -> Result<CheckReport, ConfigError> {
    axioms(cfg, 0..cfg.sample_count)
}

/// The fixed axioms belong to every range starting at 0.
fn axioms(cfg: &GenConfig, range: Range<usize>) -> Result<CheckReport, ConfigError> {
    let u = setup(cfg)?;
    let mut report = CheckReport::new(Property::Axioms);
    let fixed = axiom_instances(cfg.flavor);
    let index = fixed.len();
    for (k, (name, p)) in fixed.into_iter().enumerate() {
        if range.start > 0 {
            break;
        }
        let out = axiom_outcome(&p, &u);
        report.samples += 1;
        report.checked += out.checked;
        report.skipped += out.skipped;
        if let Some((detail, env)) = out.failure {
            report.failures.push(Failure { sample: k, input: format!("{}: {}", name, p), detail, env });
        }
    }
    let sub = GenConfig { pool: vec![Name::new("x"), Name::new("y")], ..cfg.clone() };
    let czf = cfg.flavor == TheoryFlavor::Czf;
    for i in range {
        let mut s = Sampler::for_sample(&sub, Property::Axioms, i, 0);
        run_sample(
            &mut report,
            index + i,
            cfg.max_depth,
            |d| if czf { s.delta0_formula(d) } else { s.set_formula(d) },
            |phi| axiom_outcome(&separation_instance(phi), &u),
            set_formula_children,
            |phi| format!("separation: {}", separation_instance(phi)),
        );
    }
    Ok(report)
}

/// Dispatch by property.
pub fn run_check(p: Property, cfg: &GenConfig) -> Result<CheckReport, ConfigError> {
    run_check_range(p, cfg, 0..cfg.sample_count)
}

/// Only the samples with index in `range`, numbered as in the full run.
/// Reports of consecutive ranges concatenate to the full report.
pub fn run_check_range(p: Property, cfg: &GenConfig, range: Range<usize>) -> Result<CheckReport, ConfigError> {
    let range = range.start.min(cfg.sample_count)..range.end.min(cfg.sample_count);
    match p {
        Property::Oneside => oneside(cfg, range),
        Property::DeltaFun => delta_functional_range(cfg, range),
        Property::Subst => substitution(cfg, range),
        Property::Freevars => freevar_contracts(cfg, range),
        Property::Axioms => axioms(cfg, range),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::boxed::Box;

    #[test]
    fn delta_functional_examples() {
        let u = enumerate_universe(3).unwrap();
        for t in [
            PreTerm::var("x"),
            PreTerm::PairV(Box::new(PreTerm::EmptyV), Box::new(PreTerm::EmptyV)),
            PreTerm::TrueT,
        ] {
            let o = delta_functional(&t, &u);
            assert!(o.failure.is_none(), "{}", t);
            assert!(o.checked > 0);
        }
    }

    #[test]
    fn shrinking_keeps_the_failure() {
        let p = Formula::and(Formula::imp(Formula::Bot, Formula::eq(var("x"), var("x"))), Formula::Bot);
        let has_eq = |f: &Formula| alloc::format!("{}", f).contains('=').then_some(());
        let (min, ()) = shrink(p, (), set_formula_children, has_eq);
        assert_eq!(min.to_string(), "x = x");
    }

    #[test]
    fn substitution_examples() {
        let u = enumerate_universe(3).unwrap();
        let y = PreTerm::var("y");
        let c = SubstCase { t: y.clone(), x: Name::new("x"), body: PreTerm::var("x") };
        assert!(subst_term(&c, &u).failure.is_none());
        let w = Collection::Compr(Name::new("w"), Box::new(Prop::eps(PreTerm::var("w"), PreTerm::var("x"))));
        let c = SubstCase { t: PreTerm::EmptyV, x: Name::new("x"), body: w };
        assert!(subst_collection(&c, &u).failure.is_none());
        let c = SubstCase { t: y, x: Name::new("x"), body: Prop::eps(PreTerm::var("x"), PreTerm::var("z")) };
        let o = subst_prop(&c, &u);
        assert!(o.failure.is_none());
        assert!(o.checked > 0);
    }

    #[test]
    fn freevar_examples() {
        assert!(freevars_prop(&Prop::eps(PreTerm::var("x"), PreTerm::var("y"))).failure.is_none());
        let e = hat::eta(&Collection::N1).unwrap();
        assert_eq!(e.free_vars(), [placeholder()].into_iter().collect());
        let sep = PreTerm::SepV(Name::new("x"), Box::new(PreTerm::var("y")), Box::new(Prop::Bot));
        assert!(freevars_term(&sep).failure.is_none());
    }

    #[test]
    fn axioms_hold_and_a_wrong_one_does_not() {
        let u = enumerate_universe(2).unwrap();
        for (name, p) in axiom_instances(TheoryFlavor::Izf) {
            assert!(axiom_outcome(&p, &u).failure.is_none(), "{}", name);
        }
        let wrong = iff(Formula::mem(var("x"), Term::union(var("y"))), Formula::mem(var("x"), var("y")));
        assert!(axiom_outcome(&wrong, &u).failure.is_some());
        assert_eq!(axiom_instances(TheoryFlavor::Czf).len(), 4);
    }
}
