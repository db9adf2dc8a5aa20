//! Certificates for K0[γ] formulas, the σ mapping into Δ0, and a model
//! check of the Δ0-separation lemma.
//!
//! Whether a formula is in K0[γ] depends on `γ → ∃!z δ` being provable for
//! each bounding witness, which is undecidable. A [`K0Derivation`] spells
//! the witnesses out, [`k0_reconstruct`] checks it against the formula and
//! returns the uniqueness conditions as [`Obligation`]s, and those are
//! model-checked over a finite `V_k`. That can refute an obligation but
//! never prove one, and the status records which rank was used.

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::hf::{self, enumerate_universe, CompiledFormula, Env, EquivReport, EvalError, HFSet, RankTooLarge, Universe};
use crate::name::{Fresh, Name};
use crate::set::sexp::name_of;
use crate::set::sugar::exists_unique;
use crate::set::{Formula, Term};
use crate::sexp::{expect_args, shape_err, Sexp, SexpError};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Atom {
    Bot,
    Eq(Name, Name),
    Mem(Name, Name),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Connective {
    And,
    Or,
    Imp,
}

/// Shape of a bounded step; the two bounded kinds carry their bound variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum StepKind {
    /// `∃z(δ ∧ ∃y∈z φ)`
    ExistsIn(Name),
    /// `∃z(δ ∧ ∀y∈z φ)`
    ForallIn(Name),
    /// `∃z(δ ∧ φ)`
    Plain,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum K0Derivation {
    Atom(Atom),
    Conn(Connective, Box<K0Derivation>, Box<K0Derivation>),
    Step { kind: StepKind, z: Name, delta: Formula, body: Box<K0Derivation> },
}

impl Atom {
    pub fn formula(&self) -> Formula {
        match self {
            Atom::Bot => Formula::Bot,
            Atom::Eq(x, y) => Formula::eq(Term::Var(x.clone()), Term::Var(y.clone())),
            Atom::Mem(x, y) => Formula::mem(Term::Var(x.clone()), Term::Var(y.clone())),
        }
    }
}

impl Connective {
    fn apply(self, a: Formula, b: Formula) -> Formula {
        match self {
            Connective::And => Formula::and(a, b),
            Connective::Or => Formula::or(a, b),
            Connective::Imp => Formula::imp(a, b),
        }
    }

    fn as_str(self) -> &'static str {
        match self {
            Connective::And => "and",
            Connective::Or => "or",
            Connective::Imp => "imp",
        }
    }
}

fn var(x: &Name) -> Term {
    Term::Var(x.clone())
}

fn exists_in(y: &Name, z: &Name, body: Formula) -> Formula {
    Formula::exists(y.clone(), Formula::and(Formula::mem(var(y), var(z)), body))
}

fn forall_in(y: &Name, z: &Name, body: Formula) -> Formula {
    Formula::forall(y.clone(), Formula::imp(Formula::mem(var(y), var(z)), body))
}

impl K0Derivation {
    pub fn atom(a: Atom) -> K0Derivation {
        K0Derivation::Atom(a)
    }

    pub fn conn(c: Connective, a: K0Derivation, b: K0Derivation) -> K0Derivation {
        K0Derivation::Conn(c, Box::new(a), Box::new(b))
    }

    pub fn step(kind: StepKind, z: impl Into<Name>, delta: Formula, body: K0Derivation) -> K0Derivation {
        K0Derivation::Step { kind, z: z.into(), delta, body: Box::new(body) }
    }

    /// The formula this derivation builds.
    pub fn formula(&self) -> Formula {
        match self {
            K0Derivation::Atom(a) => a.formula(),
            K0Derivation::Conn(c, a, b) => c.apply(a.formula(), b.formula()),
            K0Derivation::Step { kind, z, delta, body } => {
                let inner = body.formula();
                let rest = match kind {
                    StepKind::ExistsIn(y) => exists_in(y, z, inner),
                    StepKind::ForallIn(y) => forall_in(y, z, inner),
                    StepKind::Plain => inner,
                };
                Formula::exists(z.clone(), Formula::and(delta.clone(), rest))
            }
        }
    }

    pub fn has_steps(&self) -> bool {
        match self {
            K0Derivation::Atom(_) => false,
            K0Derivation::Conn(_, a, b) => a.has_steps() || b.has_steps(),
            K0Derivation::Step { .. } => true,
        }
    }

    fn all_names(&self, out: &mut BTreeSet<Name>) {
        match self {
            K0Derivation::Atom(Atom::Bot) => {}
            K0Derivation::Atom(Atom::Eq(x, y) | Atom::Mem(x, y)) => {
                out.insert(x.clone());
                out.insert(y.clone());
            }
            K0Derivation::Conn(_, a, b) => {
                a.all_names(out);
                b.all_names(out);
            }
            K0Derivation::Step { kind, z, delta, body } => {
                if let StepKind::ExistsIn(y) | StepKind::ForallIn(y) = kind {
                    out.insert(y.clone());
                }
                out.insert(z.clone());
                delta.all_names(out);
                body.all_names(out);
            }
        }
    }

    /// `(atom (eq x y))`, `(conn and d d)`, `(step exists-in z y δ d)`,
    /// `(step plain z δ d)`; `δ` uses the formula s-expression form.
    pub fn to_sexp(&self) -> Sexp {
        let at = |x: &Name| Sexp::atom(x.as_str());
        match self {
            K0Derivation::Atom(a) => Sexp::node(
                "atom",
                [match a {
                    Atom::Bot => Sexp::node("bot", []),
                    Atom::Eq(x, y) => Sexp::node("eq", [at(x), at(y)]),
                    Atom::Mem(x, y) => Sexp::node("mem", [at(x), at(y)]),
                }],
            ),
            K0Derivation::Conn(c, a, b) => Sexp::node("conn", [Sexp::atom(c.as_str()), a.to_sexp(), b.to_sexp()]),
            K0Derivation::Step { kind, z, delta, body } => {
                let mut args = Vec::new();
                match kind {
                    StepKind::ExistsIn(y) => args.extend([Sexp::atom("exists-in"), at(z), at(y)]),
                    StepKind::ForallIn(y) => args.extend([Sexp::atom("forall-in"), at(z), at(y)]),
                    StepKind::Plain => args.extend([Sexp::atom("plain"), at(z)]),
                }
                args.push(delta.to_sexp());
                args.push(body.to_sexp());
                Sexp::node("step", args)
            }
        }
    }

    pub fn from_sexp(s: &Sexp) -> Result<K0Derivation, SexpError> {
        let (head, args) = s.as_node().ok_or_else(|| shape_err("a K0 derivation", s))?;
        match head {
            "atom" => {
                let a = &expect_args(head, args, 1, s)?[0];
                let (h, xs) = a.as_node().ok_or_else(|| shape_err("an atom", a))?;
                Ok(K0Derivation::Atom(match h {
                    "bot" => {
                        expect_args(h, xs, 0, a)?;
                        Atom::Bot
                    }
                    "eq" | "mem" => {
                        let xs = expect_args(h, xs, 2, a)?;
                        let (x, y) = (name_of(&xs[0])?, name_of(&xs[1])?);
                        if h == "eq" {
                            Atom::Eq(x, y)
                        } else {
                            Atom::Mem(x, y)
                        }
                    }
                    _ => return Err(shape_err("an atom", a)),
                }))
            }
            "conn" => {
                let a = expect_args(head, args, 3, s)?;
                let c = match a[0].as_atom() {
                    Some("and") => Connective::And,
                    Some("or") => Connective::Or,
                    Some("imp") => Connective::Imp,
                    _ => return Err(shape_err("and, or or imp", &a[0])),
                };
                Ok(K0Derivation::conn(c, K0Derivation::from_sexp(&a[1])?, K0Derivation::from_sexp(&a[2])?))
            }
            "step" => {
                let kind = args.first().and_then(Sexp::as_atom);
                let (kind, rest) = match kind {
                    Some(k @ ("exists-in" | "forall-in")) => {
                        let a = expect_args(head, args, 5, s)?;
                        let y = name_of(&a[2])?;
                        let kind = if k == "exists-in" { StepKind::ExistsIn(y) } else { StepKind::ForallIn(y) };
                        (kind, [&a[1], &a[3], &a[4]])
                    }
                    Some("plain") => {
                        let a = expect_args(head, args, 4, s)?;
                        (StepKind::Plain, [&a[1], &a[2], &a[3]])
                    }
                    _ => return Err(shape_err("exists-in, forall-in or plain", s)),
                };
                Ok(K0Derivation::Step {
                    kind,
                    z: name_of(rest[0])?,
                    delta: Formula::from_sexp(rest[1])?,
                    body: Box::new(K0Derivation::from_sexp(rest[2])?),
                })
            }
            _ => Err(shape_err("a K0 derivation", s)),
        }
    }

    /// Read a derivation file: one s-expression, comments allowed.
    pub fn parse(src: &str) -> Result<K0Derivation, SexpError> {
        K0Derivation::from_sexp(&crate::sexp::parse(src)?)
    }
}

impl fmt::Display for K0Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.to_sexp(), f)
    }
}

/// Two distinct witnesses for `δ` in an environment where `γ` holds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub env: Env,
    pub witnesses: (HFSet, HFSet),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ObligationStatus {
    Unchecked,
    /// No refutation in `V_rank`. `confirmed` environments had exactly one
    /// witness or falsified `γ`; `inconclusive` ones had none inside the
    /// universe or overflowed.
    HfVerified { rank: u8, confirmed: u64, inconclusive: u64 },
    Refuted { rank: u8, counterexample: Counterexample },
}

/// `γ → ∃!z δ` for one bounded step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Obligation {
    pub z: Name,
    pub delta: Formula,
    pub formula: Formula,
    pub status: ObligationStatus,
    gamma: Formula,
}

impl Obligation {
    /// Model-check the obligation in `V_rank`. Only a second witness
    /// refutes it: a missing one may just lie above the rank.
    pub fn discharge(&mut self, rank: u8) -> Result<(), RankTooLarge> {
        let u = enumerate_universe(rank)?;
        self.status = self.check(&u);
        Ok(())
    }

    fn check(&self, u: &Universe) -> ObligationStatus {
        let mut params: BTreeSet<Name> = self.gamma.free_vars();
        params.extend(self.delta.free_vars());
        params.remove(&self.z);
        let params: Vec<Name> = params.into_iter().collect();
        let mut with_z = params.clone();
        with_z.push(self.z.clone());
        let g = CompiledFormula::new(&self.gamma, &params).expect("parameters cover γ");
        let d = CompiledFormula::new(&self.delta, &with_z).expect("parameters cover δ");
        let (mut confirmed, mut inconclusive) = (0u64, 0u64);
        let elems: Vec<HFSet> = u.elements().collect();
        let mut idx = alloc::vec![0usize; params.len()];
        loop {
            let vals: Vec<HFSet> = idx.iter().map(|&i| elems[i]).collect();
            match g.eval(&vals, u) {
                Err(_) => inconclusive += 1,
                Ok(false) => confirmed += 1,
                Ok(true) => {
                    let mut found: Option<HFSet> = None;
                    let mut overflow = false;
                    for (w, r) in elems.iter().zip(d.eval_last_swept(&vals, u)) {
                        match r {
                            Ok(true) => {
                                if let Some(first) = found {
                                    let env = params.iter().cloned().zip(vals.iter().copied()).collect();
                                    return ObligationStatus::Refuted {
                                        rank: u.rank(),
                                        counterexample: Counterexample { env, witnesses: (first, *w) },
                                    };
                                }
                                found = Some(*w);
                            }
                            Ok(false) => {}
                            Err(_) => overflow = true,
                        }
                    }
                    if found.is_some() && !overflow {
                        confirmed += 1;
                    } else {
                        inconclusive += 1;
                    }
                }
            }
            if !advance(&mut idx, elems.len()) {
                break;
            }
        }
        ObligationStatus::HfVerified { rank: u.rank(), confirmed, inconclusive }
    }
}

/// Odometer over `n^len` index vectors, last position fastest.
fn advance(idx: &mut [usize], n: usize) -> bool {
    for i in (0..idx.len()).rev() {
        idx[i] += 1;
        if idx[i] < n {
            return true;
        }
        idx[i] = 0;
    }
    false
}

fn names(xs: &[Name]) -> String {
    let parts: Vec<&str> = xs.iter().map(Name::as_str).collect();
    parts.join(", ")
}

/// Why a derivation does not certify a formula.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum Mismatch {
    #[error("at {path}: expected `{expected}`, found `{found}`")]
    Template { path: String, expected: Formula, found: Formula },
    #[error("at {path}: witness formula `{found}` differs from `{expected}`")]
    Witness { path: String, expected: Formula, found: Formula },
    #[error("at {path}: `{name}` is not fresh")]
    NotFresh { path: String, name: Name },
    #[error("free variables {} are not free in the hypothesis", names(.extra))]
    NotClosed { extra: Vec<Name> },
}

struct Walk<'a> {
    gamma: &'a Formula,
    gamma_free: BTreeSet<Name>,
    fresh: Fresh,
    path: Vec<&'static str>,
    /// Step variables seen so far; each must be new.
    steps: BTreeSet<Name>,
    /// Bound variables of the enclosing steps.
    scope: Vec<Name>,
    obligations: Vec<Obligation>,
}

impl Walk<'_> {
    fn path(&self) -> String {
        let mut s = String::from("root");
        for p in &self.path {
            s.push('.');
            s.push_str(p);
        }
        s
    }

    fn template(&self, d: &K0Derivation, found: &Formula) -> Mismatch {
        Mismatch::Template { path: self.path(), expected: d.formula(), found: found.clone() }
    }

    fn not_fresh(&self, name: &Name) -> Mismatch {
        Mismatch::NotFresh { path: self.path(), name: name.clone() }
    }

    /// `body` with its binder `from` renamed to `to`, unless `to` is
    /// already free in `whole` and would be captured.
    fn rebind(&mut self, whole: &Formula, from: &Name, to: &Name, body: &Formula) -> Option<Formula> {
        if from == to {
            return Some(body.clone());
        }
        if whole.occurs_free(to) {
            return None;
        }
        Some(body.subst(from, &var(to), &mut self.fresh))
    }

    fn go(&mut self, phi: &Formula, d: &K0Derivation) -> Result<(), Mismatch> {
        match d {
            K0Derivation::Atom(a) => {
                if *phi == a.formula() {
                    Ok(())
                } else {
                    Err(self.template(d, phi))
                }
            }
            K0Derivation::Conn(c, l, r) => {
                let (pl, pr) = match (c, phi) {
                    (Connective::And, Formula::And(a, b))
                    | (Connective::Or, Formula::Or(a, b))
                    | (Connective::Imp, Formula::Imp(a, b)) => (a, b),
                    _ => return Err(self.template(d, phi)),
                };
                self.path.push("left");
                self.go(pl, l)?;
                self.path.pop();
                self.path.push("right");
                self.go(pr, r)?;
                self.path.pop();
                Ok(())
            }
            K0Derivation::Step { kind, z, delta, body } => {
                let y = match kind {
                    StepKind::ExistsIn(y) | StepKind::ForallIn(y) => Some(y),
                    StepKind::Plain => None,
                };
                if self.gamma_free.contains(z) || self.steps.contains(z) || self.scope.contains(z) || y == Some(z) {
                    return Err(self.not_fresh(z));
                }
                let Formula::Exists(z0, inner) = phi else { return Err(self.template(d, phi)) };
                let Some(inner) = self.rebind(phi, z0, z, inner) else { return Err(self.template(d, phi)) };
                let Formula::And(delta0, rest) = &inner else { return Err(self.template(d, phi)) };
                if !delta0.alpha_eq(delta) {
                    return Err(Mismatch::Witness { path: self.path(), expected: delta.clone(), found: (**delta0).clone() });
                }
                let sub = match (kind, &**rest) {
                    (StepKind::Plain, r) => r.clone(),
                    (StepKind::ExistsIn(y), Formula::Exists(y0, b)) => match &**b {
                        Formula::And(m, b) if **m == Formula::mem(var(y0), var(z)) => {
                            self.rebind(rest, y0, y, b).ok_or_else(|| self.template(d, phi))?
                        }
                        _ => return Err(self.template(d, phi)),
                    },
                    (StepKind::ForallIn(y), Formula::Forall(y0, b)) => match &**b {
                        Formula::Imp(m, b) if **m == Formula::mem(var(y0), var(z)) => {
                            self.rebind(rest, y0, y, b).ok_or_else(|| self.template(d, phi))?
                        }
                        _ => return Err(self.template(d, phi)),
                    },
                    _ => return Err(self.template(d, phi)),
                };
                let formula = Formula::imp(self.gamma.clone(), exists_unique(z.clone(), delta.clone(), &mut self.fresh));
                self.obligations.push(Obligation {
                    z: z.clone(),
                    delta: delta.clone(),
                    formula,
                    status: ObligationStatus::Unchecked,
                    gamma: self.gamma.clone(),
                });
                self.steps.insert(z.clone());
                self.scope.push(z.clone());
                if let Some(y) = y {
                    self.scope.push(y.clone());
                }
                self.path.push("body");
                self.go(&sub, body)?;
                self.path.pop();
                self.scope.truncate(self.scope.len() - 1 - usize::from(y.is_some()));
                Ok(())
            }
        }
    }
}

/// Check that `d` derives `phi` in K0[`gamma`] and return one unchecked
/// obligation per bounded step, in preorder.
///
/// Each node is compared against its clause up to renaming of the step's
/// bound variables. Step variables must be pairwise distinct and not free
/// in `gamma`, since σ leaves them free.
pub fn k0_reconstruct(phi: &Formula, gamma: &Formula, d: &K0Derivation) -> Result<Vec<Obligation>, Mismatch> {
    let mut all = BTreeSet::new();
    phi.all_names(&mut all);
    gamma.all_names(&mut all);
    d.all_names(&mut all);
    let mut fresh = Fresh::new();
    fresh.reserve_all(&all);
    let mut w = Walk {
        gamma,
        gamma_free: gamma.free_vars(),
        fresh,
        path: Vec::new(),
        steps: BTreeSet::new(),
        scope: Vec::new(),
        obligations: Vec::new(),
    };
    w.go(phi, d)?;
    let extra: Vec<Name> = phi.free_vars().difference(&w.gamma_free).cloned().collect();
    if !extra.is_empty() {
        return Err(Mismatch::NotClosed { extra });
    }
    Ok(w.obligations)
}

/// Discharge every obligation at `rank`.
pub fn discharge_all(obligations: &mut [Obligation], rank: u8) -> Result<(), RankTooLarge> {
    let u = enumerate_universe(rank)?;
    for o in obligations {
        o.status = o.check(&u);
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SigmaError {
    #[error("the obligation for `{0}` was refuted")]
    Refuted(Name),
    #[error("the obligation for `{0}` has not been checked")]
    Unchecked(Name),
    #[error("expected {expected} obligations, got {got}")]
    Count { expected: usize, got: usize },
}

/// A σ-image. `leftover` lists the step variables that occur free in
/// `formula`; they stand for the unique witnesses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaImage {
    pub formula: Formula,
    pub leftover: BTreeSet<Name>,
}

fn count_steps(d: &K0Derivation) -> usize {
    match d {
        K0Derivation::Atom(_) => 0,
        K0Derivation::Conn(_, a, b) => count_steps(a) + count_steps(b),
        K0Derivation::Step { body, .. } => 1 + count_steps(body),
    }
}

fn sigma_formula(d: &K0Derivation, zs: &mut BTreeSet<Name>) -> Formula {
    match d {
        K0Derivation::Atom(a) => a.formula(),
        K0Derivation::Conn(c, a, b) => c.apply(sigma_formula(a, zs), sigma_formula(b, zs)),
        K0Derivation::Step { kind, z, body, .. } => {
            zs.insert(z.clone());
            let inner = sigma_formula(body, zs);
            match kind {
                StepKind::ExistsIn(y) => exists_in(y, z, inner),
                StepKind::ForallIn(y) => forall_in(y, z, inner),
                StepKind::Plain => inner,
            }
        }
    }
}

/// σ of a derivation whose obligations (from [`k0_reconstruct`]) have all
/// been discharged without refutation.
pub fn sigma(d: &K0Derivation, obligations: &[Obligation]) -> Result<SigmaImage, SigmaError> {
    let expected = count_steps(d);
    if obligations.len() != expected {
        return Err(SigmaError::Count { expected, got: obligations.len() });
    }
    for o in obligations {
        match o.status {
            ObligationStatus::Refuted { .. } => return Err(SigmaError::Refuted(o.z.clone())),
            ObligationStatus::Unchecked => return Err(SigmaError::Unchecked(o.z.clone())),
            ObligationStatus::HfVerified { .. } => {}
        }
    }
    let mut zs = BTreeSet::new();
    let formula = sigma_formula(d, &mut zs);
    let free = formula.free_vars();
    let leftover = zs.into_iter().filter(|z| free.contains(z)).collect();
    Ok(SigmaImage { formula, leftover })
}

/// Truth value of σ(d) with every step variable set to its unique witness
/// in the current environment; `None` when some witness is missing,
/// ambiguous or overflows.
fn eval_sigma(d: &K0Derivation, env: &mut Env, u: &Universe) -> Result<Option<bool>, EvalError> {
    let get = |env: &Env, x: &Name| env.get(x).copied().ok_or_else(|| EvalError::Unbound(x.clone()));
    match d {
        K0Derivation::Atom(Atom::Bot) => Ok(Some(false)),
        K0Derivation::Atom(Atom::Eq(x, y)) => Ok(Some(get(env, x)? == get(env, y)?)),
        K0Derivation::Atom(Atom::Mem(x, y)) => Ok(Some(get(env, y)?.contains(get(env, x)?))),
        K0Derivation::Conn(c, a, b) => {
            let (Some(l), Some(r)) = (eval_sigma(a, env, u)?, eval_sigma(b, env, u)?) else { return Ok(None) };
            Ok(Some(match c {
                Connective::And => l && r,
                Connective::Or => l || r,
                Connective::Imp => !l || r,
            }))
        }
        K0Derivation::Step { kind, z, delta, body } => {
            let saved_z = env.get(z).copied();
            let mut witness = None;
            for w in u.elements() {
                env.insert(z.clone(), w);
                match hf::eval_formula(delta, env, u) {
                    Ok(true) if witness.is_some() => {
                        witness = None;
                        break;
                    }
                    Ok(true) => witness = Some(w),
                    Ok(false) => {}
                    Err(EvalError::Overflow) => {
                        witness = None;
                        break;
                    }
                    Err(e) => return Err(e),
                }
            }
            let out = match witness {
                None => Ok(None),
                Some(w) => {
                    env.insert(z.clone(), w);
                    match kind {
                        StepKind::Plain => eval_sigma(body, env, u),
                        StepKind::ExistsIn(y) | StepKind::ForallIn(y) => {
                            let all = matches!(kind, StepKind::ForallIn(_));
                            let saved_y = env.get(y).copied();
                            let mut acc = Some(all);
                            for c in w.children() {
                                env.insert(y.clone(), c);
                                match eval_sigma(body, env, u)? {
                                    None => {
                                        acc = None;
                                        break;
                                    }
                                    Some(b) if b != all => acc = Some(b),
                                    Some(_) => {}
                                }
                            }
                            restore(env, y, saved_y);
                            Ok(acc)
                        }
                    }
                }
            };
            restore(env, z, saved_z);
            out
        }
    }
}

fn restore(env: &mut Env, x: &Name, old: Option<HFSet>) {
    match old {
        Some(v) => env.insert(x.clone(), v),
        None => env.remove(x),
    };
}

fn sorted_free(f: &Formula) -> Vec<Name> {
    f.free_vars().into_iter().collect()
}

/// Compare the formula built by `d` with its σ-image in every environment
/// of `V_rank` over the free variables of `gamma` where `gamma` holds,
/// each step variable being set to its unique witness. Environments
/// where `gamma` is false are not counted; ones where a witness is not
/// unique within the universe, or anything overflows, are skipped.
pub fn check_sigma_agreement(d: &K0Derivation, gamma: &Formula, rank: u8) -> Result<EquivReport, K0CheckError> {
    let u = enumerate_universe(rank)?;
    let phi = d.formula();
    let mut vars: BTreeSet<Name> = gamma.free_vars();
    vars.extend(phi.free_vars());
    let vars: Vec<Name> = vars.into_iter().collect();
    let g = CompiledFormula::new(gamma, &vars)?;
    let p = CompiledFormula::new(&phi, &vars)?;
    let elems: Vec<HFSet> = u.elements().collect();
    let mut idx = alloc::vec![0usize; vars.len()];
    let mut report = EquivReport { checked: 0, skipped: 0, counterexample: None };
    loop {
        let vals: Vec<HFSet> = idx.iter().map(|&i| elems[i]).collect();
        match g.eval(&vals, &u) {
            Err(_) => report.skipped += 1,
            Ok(false) => {}
            Ok(true) => {
                let mut env: Env = vars.iter().cloned().zip(vals.iter().copied()).collect();
                match (p.eval(&vals, &u), eval_sigma(d, &mut env, &u)?) {
                    (Ok(l), Some(r)) => {
                        report.checked += 1;
                        if l != r {
                            report.counterexample = Some((env, l, r));
                            return Ok(report);
                        }
                    }
                    _ => report.skipped += 1,
                }
            }
        }
        if !advance(&mut idx, elems.len()) {
            return Ok(report);
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum K0CheckError {
    #[error(transparent)]
    Rank(#[from] RankTooLarge),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// The separation instance `γ → ∀v∃v′∀x(x∈v′ ↔ x∈v ∧ φ)` for the formula
/// built by `d`, with `v`, `v′` fresh.
pub fn separation_statement(d: &K0Derivation, gamma: &Formula, x: &Name) -> Formula {
    let phi = d.formula();
    let mut all = BTreeSet::new();
    phi.all_names(&mut all);
    gamma.all_names(&mut all);
    all.insert(x.clone());
    let mut fresh = Fresh::new();
    fresh.reserve_all(&all);
    let v = fresh.fresh("v");
    let v2 = fresh.fresh("vp");
    let body = Formula::iff(
        Formula::mem(var(x), var(&v2)),
        Formula::and(Formula::mem(var(x), var(&v)), phi),
    );
    Formula::imp(
        gamma.clone(),
        Formula::forall(v, Formula::exists(v2, Formula::forall(x.clone(), body))),
    )
}

/// Model-check [`separation_statement`] in `V_rank` over all its free
/// variables. Call it once the obligations are discharged at that rank.
pub fn check_separation_lemma(
    d: &K0Derivation,
    gamma: &Formula,
    x: &Name,
    rank: u8,
) -> Result<EquivReport, K0CheckError> {
    let u = enumerate_universe(rank)?;
    let s = separation_statement(d, gamma, x);
    Ok(hf::check_validity(&s, &sorted_free(&s), &u)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::set::{is_delta0_formula, parse_formula, ParseOptions};
    use crate::TheoryFlavor;
    use alloc::string::ToString;
    use alloc::vec;
    use proptest::prelude::*;

    fn n(s: &str) -> Name {
        Name::new(s)
    }

    fn f(src: &str) -> Formula {
        parse_formula(src, ParseOptions::default()).unwrap().elaborate(&mut Fresh::new())
    }

    fn mem(x: &str, y: &str) -> K0Derivation {
        K0Derivation::atom(Atom::Mem(n(x), n(y)))
    }

    fn eq(x: &str, y: &str) -> K0Derivation {
        K0Derivation::atom(Atom::Eq(n(x), n(y)))
    }

    fn bot() -> K0Derivation {
        K0Derivation::atom(Atom::Bot)
    }

    /// `∃z(z = P(x) ∧ ∀y∈z (y∈x → y=y))`
    fn pow_step() -> K0Derivation {
        K0Derivation::step(
            StepKind::ForallIn(n("y")),
            "z",
            f("z = Pow(x)"),
            K0Derivation::conn(Connective::Imp, mem("y", "x"), eq("y", "y")),
        )
    }

    #[test]
    fn atoms_and_connectives_reconstruct() {
        let top = f("x = x");
        assert_eq!(k0_reconstruct(&f("x = y"), &f("x = y"), &eq("x", "y")), Ok(vec![]));
        let d = K0Derivation::conn(Connective::And, mem("x", "y"), bot());
        let g = f("x in y \\/ x = y");
        assert_eq!(k0_reconstruct(&f("x in y /\\ false"), &g, &d), Ok(vec![]));
        assert!(matches!(
            k0_reconstruct(&f("x in y /\\ false"), &top, &d),
            Err(Mismatch::NotClosed { extra }) if extra == vec![n("y")]
        ));
        assert!(matches!(
            k0_reconstruct(&f("x in y \\/ false"), &g, &d),
            Err(Mismatch::Template { path, .. }) if path == "root"
        ));
        assert!(matches!(
            k0_reconstruct(&f("x in y /\\ x = y"), &g, &d),
            Err(Mismatch::Template { path, .. }) if path == "root.right"
        ));
    }

    #[test]
    fn pow_example_has_one_obligation() {
        let d = pow_step();
        let gamma = f("x = x");
        let phi = f("ex w. w = Pow(x) /\\ (all a. a in w -> a in x -> a = a)");
        let mut obs = k0_reconstruct(&phi, &gamma, &d).unwrap();
        assert_eq!(obs.len(), 1);
        let expected = Formula::imp(gamma.clone(), exists_unique("z", f("z = Pow(x)"), &mut Fresh::new()));
        assert!(obs[0].formula.alpha_eq(&expected));
        assert_eq!(obs[0].status, ObligationStatus::Unchecked);
        discharge_all(&mut obs, 3).unwrap();
        // P(x) stays in V_3 exactly for the 4 sets of V_2.
        assert_eq!(obs[0].status, ObligationStatus::HfVerified { rank: 3, confirmed: 4, inconclusive: 12 });
        let s = sigma(&d, &obs).unwrap();
        assert!(s.formula.alpha_eq(&f("all y. y in z -> y in x -> y = y")));
        assert_eq!(s.leftover, [n("z")].into_iter().collect());
        assert!(is_delta0_formula(&s.formula, TheoryFlavor::Czf));
        let r = check_sigma_agreement(&d, &gamma, 3).unwrap();
        assert!(r.holds());
        assert_eq!(r.checked, 4);
    }

    #[test]
    fn a_non_unique_witness_is_refuted_and_sigma_refuses() {
        let d = K0Derivation::step(StepKind::ExistsIn(n("y")), "z", f("z in Pow(x)"), eq("y", "x"));
        let mut obs = k0_reconstruct(&d.formula(), &f("x = x"), &d).unwrap();
        assert_eq!(sigma(&d, &obs), Err(SigmaError::Unchecked(n("z"))));
        obs[0].discharge(2).unwrap();
        match &obs[0].status {
            ObligationStatus::Refuted { rank: 2, counterexample } => {
                assert_ne!(counterexample.witnesses.0, counterexample.witnesses.1)
            }
            s => panic!("{:?}", s),
        }
        assert_eq!(sigma(&d, &obs), Err(SigmaError::Refuted(n("z"))));
    }

    #[test]
    fn witness_and_freshness_mismatches() {
        let d = pow_step();
        let gamma = f("x = x");
        let wrong = f("ex z. z = Un(x) /\\ (all y. y in z -> y in x -> y = y)");
        assert!(matches!(k0_reconstruct(&wrong, &gamma, &d), Err(Mismatch::Witness { .. })));
        let bad_body = f("ex z. z = Pow(x) /\\ (all y. y in z -> y in x -> x = y)");
        assert!(matches!(
            k0_reconstruct(&bad_body, &gamma, &d),
            Err(Mismatch::Template { path, .. }) if path == "root.body.right"
        ));
        let g2 = f("x = z");
        assert!(matches!(k0_reconstruct(&d.formula(), &g2, &d), Err(Mismatch::NotFresh { .. })));
        let twice = K0Derivation::conn(Connective::And, pow_step(), pow_step());
        assert!(matches!(k0_reconstruct(&twice.formula(), &gamma, &twice), Err(Mismatch::NotFresh { .. })));
        // The bounded variable may not capture a free one.
        let captured = f("ex z. z = Pow(x) /\\ (all a. a in z -> y in x -> y = y)");
        let g3 = f("x = y");
        assert!(k0_reconstruct(&captured, &g3, &d).is_err());
    }

    #[test]
    fn sigma_examples() {
        assert_eq!(sigma(&mem("x", "y"), &[]).unwrap().formula, f("x in y"));
        let d = K0Derivation::conn(Connective::And, bot(), eq("x", "y"));
        assert_eq!(sigma(&d, &[]).unwrap().formula, f("false /\\ x = y"));
        let d = K0Derivation::step(StepKind::ForallIn(n("y")), "z", f("z = Pow(x)"), mem("x", "z"));
        let mut obs = k0_reconstruct(&d.formula(), &f("x = x"), &d).unwrap();
        discharge_all(&mut obs, 2).unwrap();
        let s = sigma(&d, &obs).unwrap();
        assert_eq!(s.formula, f("all y. y in z -> x in z"));
        let plain = K0Derivation::step(StepKind::Plain, "z", f("z = {x, x}"), mem("x", "z"));
        let mut obs = k0_reconstruct(&plain.formula(), &f("x = x"), &plain).unwrap();
        discharge_all(&mut obs, 2).unwrap();
        assert_eq!(sigma(&plain, &obs).unwrap().formula, f("x in z"));
        assert!(check_sigma_agreement(&plain, &f("x = x"), 2).unwrap().holds());
    }

    #[test]
    fn separation_examples() {
        let top = Formula::top();
        for d in [eq("x", "x"), mem("x", "y"), bot()] {
            let r = check_separation_lemma(&d, &top, &n("x"), 2).unwrap();
            assert!(r.holds(), "{}", d);
            assert!(r.checked > 0);
        }
        let s = separation_statement(&mem("x", "y"), &top, &n("x"));
        assert_eq!(sorted_free(&s), vec![n("y")]);
    }

    #[test]
    fn derivation_file_format() {
        let src = "; pow bound\n(step forall-in z y (eq (var z) (pow (var x))) (conn imp (atom (mem y x)) (atom (eq y y))))";
        let d = K0Derivation::parse(src).unwrap();
        assert_eq!(d, pow_step());
        assert_eq!(K0Derivation::parse(&d.to_string()).unwrap(), d);
        assert!(K0Derivation::parse("(step forall-in z (bot) (atom (bot)))").is_err());
        assert!(K0Derivation::parse("(conn xor (atom (bot)) (atom (bot)))").is_err());
    }

    fn names_strategy() -> impl Strategy<Value = Name> {
        prop::sample::select(&["x", "y", "w"][..]).prop_map(Name::new)
    }

    fn step_free() -> impl Strategy<Value = K0Derivation> {
        let leaf = prop_oneof![
            Just(bot()),
            (names_strategy(), names_strategy()).prop_map(|(a, b)| K0Derivation::atom(Atom::Eq(a, b))),
            (names_strategy(), names_strategy()).prop_map(|(a, b)| K0Derivation::atom(Atom::Mem(a, b))),
        ];
        leaf.prop_recursive(4, 16, 2, |inner| {
            (prop::sample::select(&[Connective::And, Connective::Or, Connective::Imp][..]), inner.clone(), inner)
                .prop_map(|(c, a, b)| K0Derivation::conn(c, a, b))
        })
    }

    /// Step-free derivations with one bounded step wrapped around some of them.
    fn derivation() -> impl Strategy<Value = K0Derivation> {
        (step_free(), 0..4u8, names_strategy(), crate::set::strategies::formula()).prop_map(|(d, k, y, delta)| {
            let kind = match k {
                0 => return d,
                1 => StepKind::ExistsIn(y),
                2 => StepKind::ForallIn(y),
                _ => StepKind::Plain,
            };
            K0Derivation::step(kind, "s", delta, d)
        })
    }

    proptest! {
        #[test]
        fn sigma_is_the_identity_without_steps(d in step_free()) {
            let s = sigma(&d, &[]).unwrap();
            prop_assert_eq!(&s.formula, &d.formula());
            prop_assert!(s.leftover.is_empty());
            prop_assert!(is_delta0_formula(&s.formula, TheoryFlavor::Czf));
        }

        #[test]
        fn reconstruction_respects_the_root_condition(d in derivation(), g in crate::set::strategies::formula()) {
            let phi = d.formula();
            if let Ok(obs) = k0_reconstruct(&phi, &g, &d) {
                prop_assert!(phi.free_vars().is_subset(&g.free_vars()));
                prop_assert_eq!(obs.len(), count_steps(&d));
            }
            // Adding the free variables to the hypothesis is enough unless
            // the step variable clashes with one of them.
            let mut gv: Vec<Formula> = phi.free_vars().iter().map(|x| Formula::eq(var(x), var(x))).collect();
            gv.push(Formula::top());
            let g2 = Formula::conj(gv);
            let r = k0_reconstruct(&phi, &g2, &d);
            prop_assert!(r.is_ok() || matches!(r, Err(Mismatch::NotFresh { .. })), "{:?}", r);
        }

        #[test]
        fn renamed_binders_still_match(d in derivation()) {
            let phi = d.formula();
            let renamed = phi.normalize();
            let g = Formula::conj(phi.free_vars().iter().map(|x| Formula::eq(var(x), var(x))));
            prop_assert_eq!(k0_reconstruct(&phi, &g, &d).is_ok(), k0_reconstruct(&renamed, &g, &d).is_ok());
        }

        #[test]
        fn derivations_round_trip(d in derivation()) {
            prop_assert_eq!(K0Derivation::parse(&d.to_sexp().pretty(40)).unwrap(), d);
        }
    }
}
