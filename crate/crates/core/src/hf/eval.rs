//! Classical evaluation over `V_k`.
//!
//! Quantifiers range over the universe. Terms denote their true HF values;
//! a value outside `V_k` is kept as an opaque "too big" marker, which is
//! enough to decide `t ∈ a` and `t = a` (both false) when `a` is in `V_k`.
//! Whenever the contents of a too-big value are needed the evaluation
//! reports [`EvalError::Overflow`].
//!
//! Formulas are compiled to slot-indexed trees first. Quantifiers are
//! narrowed without changing any definite answer: when the body of `∃x`
//! (or the antecedent of `∀x`) has a conjunct such as `x = t`, `x ∈ t` or
//! `(x, y) ∈ t`, only the sets a few membership steps below `t` are tried.

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use super::{Env, HFSet, Universe};
use crate::name::Name;
use crate::set::{Formula, Term};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("a value escapes the universe")]
    Overflow,
    #[error("variable `{0}` is not bound by the environment")]
    Unbound(Name),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Val {
    In(u32),
    Big,
}

#[derive(Clone, Debug)]
enum CT {
    Var(usize),
    Empty,
    Omega,
    Pair(Box<CT>, Box<CT>),
    /// The leading `usize` of the next three is a cache entry.
    Union(usize, Box<CT>),
    Pow(usize, Box<CT>),
    Sep(usize, usize, Box<CT>, Box<CF>),
}

/// Where a bound variable can take a satisfying value.
#[derive(Clone, Debug)]
enum Hint {
    Scan,
    /// Among the sets reachable from the value of the term in exactly
    /// `depth` membership steps.
    Within(CT, usize),
}

#[derive(Clone, Debug)]
enum CF {
    Bot,
    Eq(CT, CT),
    Mem(CT, CT),
    And(Box<CF>, Box<CF>),
    Or(Box<CF>, Box<CF>),
    Imp(Box<CF>, Box<CF>),
    /// Quantifiers carry a cache entry, the bound slot, a hint and the body.
    Forall(Quant, Box<CF>),
    Exists(Quant, Box<CF>),
}

#[derive(Clone, Debug)]
struct Quant {
    entry: usize,
    slot: usize,
    hint: Hint,
    /// Remember results for every assignment of the free variables, not
    /// only the latest one. Worth it for large bodies only.
    memo: bool,
}

/// Body size from which a quantifier's results are memoized.
const MEMO_SIZE: usize = 40;

struct Compiler {
    scope: Vec<(Name, usize)>,
    slots: usize,
    /// Cache entries by printed term and the slots of its free variables;
    /// equal keys always denote equal values.
    entries: BTreeMap<(String, Vec<usize>), usize>,
    /// Slots each entry depends on.
    deps: Vec<Vec<usize>>,
}

impl Compiler {
    fn new() -> Compiler {
        Compiler { scope: Vec::new(), slots: 0, entries: BTreeMap::new(), deps: Vec::new() }
    }

    fn entry(&mut self, t: &Term) -> Result<usize, EvalError> {
        self.entry_for(t.to_string(), t.free_vars())
    }

    fn entry_for(&mut self, key: String, free: BTreeSet<Name>) -> Result<usize, EvalError> {
        let mut deps = Vec::new();
        for x in free {
            deps.push(self.lookup(&x)?);
        }
        deps.sort_unstable();
        let next = self.deps.len();
        let id = *self.entries.entry((key, deps.clone())).or_insert(next);
        if id == next {
            self.deps.push(deps);
        }
        Ok(id)
    }

    fn lookup(&self, x: &Name) -> Result<usize, EvalError> {
        self.scope
            .iter()
            .rev()
            .find(|(y, _)| y == x)
            .map(|(_, i)| *i)
            .ok_or_else(|| EvalError::Unbound(x.clone()))
    }

    fn bind(&mut self, x: &Name) -> usize {
        let i = self.slots;
        self.slots += 1;
        self.scope.push((x.clone(), i));
        i
    }

    fn term(&mut self, t: &Term) -> Result<CT, EvalError> {
        Ok(match t {
            Term::Var(x) => CT::Var(self.lookup(x)?),
            Term::Empty => CT::Empty,
            Term::Omega => CT::Omega,
            Term::Pair(a, b) => CT::Pair(Box::new(self.term(a)?), Box::new(self.term(b)?)),
            Term::Union(a) => CT::Union(self.entry(t)?, Box::new(self.term(a)?)),
            Term::Pow(a) => CT::Pow(self.entry(t)?, Box::new(self.term(a)?)),
            Term::Sep(x, a, p) => {
                let id = self.entry(t)?;
                let a = self.term(a)?;
                let i = self.bind(x);
                let p = self.formula(p);
                self.scope.pop();
                CT::Sep(id, i, Box::new(a), Box::new(p?))
            }
        })
    }

    /// Find a conjunct of `p` (below any quantifiers in `skip`) of the form
    /// `T(x) = t` or `T(x) ∈ t`, where `x` sits under pairings only in `T`
    /// and `t` mentions neither `x` nor the skipped variables. The shallowest
    /// such constraint wins.
    fn hint(&mut self, x: &Name, skip: &[&Name], p: &Formula) -> Result<Hint, EvalError> {
        let mut conjuncts = Vec::new();
        flatten_and(p, &mut conjuncts);
        let usable = |t: &Term| !t.occurs_free(x) && skip.iter().all(|y| !t.occurs_free(y));
        let mut best: Option<(&Term, usize)> = None;
        for c in conjuncts {
            let found = match c {
                Formula::Eq(a, b) => match (pair_depth(a, x), pair_depth(b, x)) {
                    (Some(d), _) if usable(b) => Some((b, d)),
                    (_, Some(d)) if usable(a) => Some((a, d)),
                    _ => None,
                },
                Formula::Mem(a, b) if usable(b) => pair_depth(a, x).map(|d| (b, d + 1)),
                _ => None,
            };
            if let Some((t, d)) = found {
                if best.is_none_or(|(_, bd)| d < bd) {
                    best = Some((t, d));
                }
            }
        }
        match best {
            Some((t, d)) => Ok(Hint::Within(self.term(t)?, d)),
            None => Ok(Hint::Scan),
        }
    }

    fn formula(&mut self, p: &Formula) -> Result<CF, EvalError> {
        Ok(match p {
            Formula::Bot => CF::Bot,
            Formula::Eq(a, b) => CF::Eq(self.term(a)?, self.term(b)?),
            Formula::Mem(a, b) => CF::Mem(self.term(a)?, self.term(b)?),
            Formula::And(a, b) => CF::And(Box::new(self.formula(a)?), Box::new(self.formula(b)?)),
            Formula::Or(a, b) => CF::Or(Box::new(self.formula(a)?), Box::new(self.formula(b)?)),
            Formula::Imp(a, b) => CF::Imp(Box::new(self.formula(a)?), Box::new(self.formula(b)?)),
            Formula::Forall(..) | Formula::Exists(..) if miniscope(p).is_some() => {
                let q = miniscope(p).expect("checked above");
                self.formula(&q)?
            }
            Formula::Forall(x, body) | Formula::Exists(x, body) => {
                // look through a block of quantifiers of the same kind
                let is_all = matches!(p, Formula::Forall(..));
                let mut skip = Vec::new();
                let mut inner = &**body;
                loop {
                    match inner {
                        Formula::Forall(y, b) if is_all => {
                            skip.push(y);
                            inner = b;
                        }
                        Formula::Exists(y, b) if !is_all => {
                            skip.push(y);
                            inner = b;
                        }
                        _ => break,
                    }
                }
                let guard = match inner {
                    Formula::Imp(a, _) if is_all => Some(&**a),
                    b if !is_all => Some(b),
                    _ => None,
                };
                // the hint term is compiled outside the binder's scope
                let hint = match guard {
                    Some(g) if !skip.contains(&x) => self.hint(x, &skip, g)?,
                    _ => Hint::Scan,
                };
                // formulas are keyed apart from terms by a leading `!`
                let entry = self.entry_for(alloc::format!("!{}", p), p.free_vars())?;
                let slot = self.bind(x);
                let b = self.formula(body);
                self.scope.pop();
                let q = Quant { entry, slot, hint, memo: body.size() >= MEMO_SIZE };
                let b = Box::new(b?);
                if matches!(p, Formula::Forall(..)) {
                    CF::Forall(q, b)
                } else {
                    CF::Exists(q, b)
                }
            }
        })
    }
}

/// Hoist the leading conjuncts that do not mention the binder:
/// `∃x(c ∧ R)` becomes `c ∧ ∃x R` and `∀x(c ∧ R → B)` becomes
/// `c → ∀x(R → B)`. Only a prefix moves, so evaluation order, and with it
/// every result and every overflow, is unchanged; the hoisted part is just
/// no longer recomputed for each value of `x`.
fn miniscope(p: &Formula) -> Option<Formula> {
    let (x, guard) = match p {
        Formula::Exists(x, b) => (x, &**b),
        Formula::Forall(x, b) => match &**b {
            Formula::Imp(a, _) => (x, &**a),
            _ => return None,
        },
        _ => return None,
    };
    let mut cs = Vec::new();
    flatten_and(guard, &mut cs);
    let k = cs.iter().take_while(|c| !c.occurs_free(x)).count();
    if k == 0 {
        return None;
    }
    let outer = Formula::conj(cs[..k].iter().map(|c| (*c).clone()));
    let inner = (k < cs.len()).then(|| Formula::conj(cs[k..].iter().map(|c| (*c).clone())));
    Some(match p {
        Formula::Exists(..) => match inner {
            Some(r) => Formula::and(outer, Formula::exists(x.clone(), r)),
            None => outer,
        },
        Formula::Forall(_, b) => {
            let Formula::Imp(_, then) = &**b else { unreachable!() };
            let rest = match inner {
                Some(r) => Formula::imp(r, (**then).clone()),
                None => (**then).clone(),
            };
            Formula::imp(outer, Formula::forall(x.clone(), rest))
        }
        _ => unreachable!(),
    })
}

/// Depth at which `x` occurs in `t` along a path of pairings only.
fn pair_depth(t: &Term, x: &Name) -> Option<usize> {
    match t {
        Term::Var(y) if y == x => Some(0),
        Term::Pair(a, b) => match (pair_depth(a, x), pair_depth(b, x)) {
            (Some(d), Some(e)) => Some(d.min(e) + 1),
            (Some(d), None) | (None, Some(d)) => Some(d + 1),
            (None, None) => None,
        },
        _ => None,
    }
}

fn flatten_and<'a>(p: &'a Formula, out: &mut Vec<&'a Formula>) {
    match p {
        Formula::And(a, b) => {
            flatten_and(a, out);
            flatten_and(b, out);
        }
        _ => out.push(p),
    }
}

/// A formula compiled against an ordered list of free variables.
#[derive(Clone, Debug)]
pub struct CompiledFormula {
    body: CF,
    vars: Vec<Name>,
    slots: usize,
    deps: Vec<Vec<usize>>,
}

impl CompiledFormula {
    /// Fails if `p` has a free variable outside `vars`.
    pub fn new(p: &Formula, vars: &[Name]) -> Result<CompiledFormula, EvalError> {
        let mut c = Compiler::new();
        for x in vars {
            c.bind(x);
        }
        let body = c.formula(p)?;
        Ok(CompiledFormula { body, vars: vars.to_vec(), slots: c.slots, deps: c.deps })
    }

    pub fn vars(&self) -> &[Name] {
        &self.vars
    }

    /// Evaluate with `values[i]` assigned to the `i`-th variable.
    pub fn eval(&self, values: &[HFSet], u: &Universe) -> Result<bool, EvalError> {
        assert_eq!(values.len(), self.vars.len(), "one value per variable");
        let mut st = State::new(self.slots, &self.deps);
        for (slot, v) in st.env.iter_mut().zip(values) {
            *slot = v.code();
        }
        Machine::new(u).formula(&self.body, &mut st)
    }

    /// Evaluate once for each value of the last variable, in code order,
    /// with `prefix` assigned to the others. Work that does not depend on
    /// the last variable is shared between the runs.
    pub fn eval_last_swept(&self, prefix: &[HFSet], u: &Universe) -> Vec<Result<bool, EvalError>> {
        assert_eq!(prefix.len() + 1, self.vars.len(), "one value per variable but the last");
        let mut st = State::new(self.slots, &self.deps);
        for (slot, v) in st.env.iter_mut().zip(prefix) {
            *slot = v.code();
        }
        let m = Machine::new(u);
        let last = prefix.len();
        u.elements()
            .map(|w| {
                st.set(last, w.code());
                m.formula(&self.body, &mut st)
            })
            .collect()
    }
}

/// Mutable evaluation state: slot values, when each slot was last
/// assigned, and cached term values with the time they were computed.
struct State<'d> {
    env: Vec<u32>,
    assigned: Vec<u64>,
    clock: u64,
    cache: Vec<Option<(u64, Val)>>,
    deps: &'d [Vec<usize>],
    /// Results by entry and the values of its dependencies.
    memo: BTreeMap<Vec<u32>, bool>,
}

impl<'d> State<'d> {
    fn new(slots: usize, deps: &'d [Vec<usize>]) -> State<'d> {
        State {
            env: vec![0; slots],
            assigned: vec![0; slots],
            clock: 0,
            cache: vec![None; deps.len()],
            deps,
            memo: BTreeMap::new(),
        }
    }

    fn set(&mut self, i: usize, v: u32) {
        self.clock += 1;
        self.env[i] = v;
        self.assigned[i] = self.clock;
    }

    fn memo_key(&self, id: usize) -> Vec<u32> {
        let mut k = Vec::with_capacity(self.deps[id].len() + 1);
        k.push(id as u32);
        k.extend(self.deps[id].iter().map(|&s| self.env[s]));
        k
    }

    fn cached(&self, id: usize) -> Option<Val> {
        let (at, v) = self.cache[id]?;
        self.deps[id].iter().all(|&s| self.assigned[s] <= at).then_some(v)
    }
}

struct Machine {
    size: u32,
    rank: u8,
    omega: u32,
}

fn rank(c: u32) -> u8 {
    HFSet(c).rank()
}

/// Member codes in increasing order.
pub(super) fn children(c: u32) -> impl Iterator<Item = u32> {
    let mut rest = c;
    core::iter::from_fn(move || {
        (rest != 0).then(|| {
            let i = rest.trailing_zeros();
            rest &= rest - 1;
            i
        })
    })
}

/// Where a hinted quantifier looks, in increasing code order.
enum Candidates {
    One(u32),
    /// Codes of the set bits; members of a set all have codes below 32.
    Mask(u32),
    All,
}

impl Machine {
    fn new(u: &Universe) -> Machine {
        Machine { size: u.size, rank: u.rank, omega: u.omega().code() }
    }

    fn term(&self, t: &CT, st: &mut State<'_>) -> Result<Val, EvalError> {
        let id = match t {
            CT::Union(id, _) | CT::Pow(id, _) | CT::Sep(id, ..) => *id,
            _ => return self.compute(t, st),
        };
        if let Some(v) = st.cached(id) {
            return Ok(v);
        }
        let at = st.clock;
        let v = self.compute(t, st)?;
        st.cache[id] = Some((at, v));
        Ok(v)
    }

    fn compute(&self, t: &CT, st: &mut State<'_>) -> Result<Val, EvalError> {
        Ok(match t {
            CT::Var(i) => Val::In(st.env[*i]),
            CT::Empty => Val::In(0),
            CT::Omega => Val::In(self.omega),
            CT::Pair(a, b) => match (self.term(a, st)?, self.term(b, st)?) {
                (Val::In(a), Val::In(b)) if rank(a) < self.rank && rank(b) < self.rank => {
                    Val::In(1 << a | 1 << b)
                }
                _ => Val::Big,
            },
            CT::Union(_, a) => match self.term(a, st)? {
                Val::In(a) => Val::In(children(a).fold(0, |acc, x| acc | x)),
                Val::Big => return Err(EvalError::Overflow),
            },
            CT::Pow(_, a) => match self.term(a, st)? {
                Val::In(a) if rank(a) < self.rank => {
                    // every submask of a is a subset
                    let mut code = 0u32;
                    let mut s = a;
                    loop {
                        code |= 1 << s;
                        if s == 0 {
                            break;
                        }
                        s = (s - 1) & a;
                    }
                    Val::In(code)
                }
                _ => Val::Big,
            },
            CT::Sep(_, i, a, p) => match self.term(a, st)? {
                Val::In(a) => {
                    let mut code = 0;
                    for x in children(a) {
                        st.set(*i, x);
                        if self.formula(p, st)? {
                            code |= 1 << x;
                        }
                    }
                    Val::In(code)
                }
                Val::Big => return Err(EvalError::Overflow),
            },
        })
    }

    fn candidates(&self, hint: &Hint, st: &mut State<'_>) -> Candidates {
        let Hint::Within(t, depth) = hint else {
            return Candidates::All;
        };
        match self.term(t, st) {
            Ok(Val::In(c)) if *depth == 0 => Candidates::One(c),
            Ok(Val::In(c)) => {
                let mut mask = c;
                for _ in 1..*depth {
                    mask = children(mask).fold(0, |acc, x| acc | x);
                }
                Candidates::Mask(mask)
            }
            // nothing in the universe equals a value outside it
            Ok(Val::Big) if *depth == 0 => Candidates::Mask(0),
            _ => Candidates::All,
        }
    }

    fn quantify(&self, i: usize, hint: &Hint, body: &CF, st: &mut State<'_>, want: bool) -> Result<bool, EvalError> {
        let try_value = |c: u32, st: &mut State<'_>| -> Result<bool, EvalError> {
            st.set(i, c);
            Ok(self.formula(body, st)? == want)
        };
        match self.candidates(hint, st) {
            Candidates::One(c) => {
                if try_value(c, st)? {
                    return Ok(want);
                }
            }
            Candidates::Mask(m) => {
                for c in children(m) {
                    if try_value(c, st)? {
                        return Ok(want);
                    }
                }
            }
            Candidates::All => {
                for c in 0..self.size {
                    if try_value(c, st)? {
                        return Ok(want);
                    }
                }
            }
        }
        Ok(!want)
    }

    fn formula(&self, p: &CF, st: &mut State<'_>) -> Result<bool, EvalError> {
        match p {
            CF::Bot => Ok(false),
            CF::Eq(a, b) => match (self.term(a, st)?, self.term(b, st)?) {
                (Val::In(a), Val::In(b)) => Ok(a == b),
                (Val::Big, Val::Big) => Err(EvalError::Overflow),
                _ => Ok(false),
            },
            CF::Mem(a, b) => match (self.term(a, st)?, self.term(b, st)?) {
                (Val::In(a), Val::In(b)) => Ok(HFSet(b).contains(HFSet(a))),
                (Val::Big, Val::In(_)) => Ok(false),
                (_, Val::Big) => Err(EvalError::Overflow),
            },
            CF::And(a, b) => Ok(self.formula(a, st)? && self.formula(b, st)?),
            CF::Or(a, b) => Ok(self.formula(a, st)? || self.formula(b, st)?),
            CF::Imp(a, b) => Ok(!self.formula(a, st)? || self.formula(b, st)?),
            CF::Forall(q, body) | CF::Exists(q, body) => {
                if let Some(v) = st.cached(q.entry) {
                    return Ok(v == Val::In(1));
                }
                let key = q.memo.then(|| st.memo_key(q.entry));
                if let Some(b) = key.as_ref().and_then(|k| st.memo.get(k)) {
                    return Ok(*b);
                }
                let at = st.clock;
                let want = matches!(p, CF::Exists(..));
                let b = self.quantify(q.slot, &q.hint, body, st, want)?;
                st.cache[q.entry] = Some((at, Val::In(b as u32)));
                if let Some(k) = key {
                    st.memo.insert(k, b);
                }
                Ok(b)
            }
        }
    }
}

fn env_vars(env: &Env) -> (Vec<Name>, Vec<HFSet>) {
    env.iter().map(|(x, v)| (x.clone(), *v)).unzip()
}

/// Values outside `u` in the environment count as overflow.
fn check_env(env: &Env, u: &Universe) -> Result<(), EvalError> {
    if env.values().all(|v| u.contains(*v)) {
        Ok(())
    } else {
        Err(EvalError::Overflow)
    }
}

pub fn eval_formula(p: &Formula, env: &Env, u: &Universe) -> Result<bool, EvalError> {
    check_env(env, u)?;
    let (vars, values) = env_vars(env);
    CompiledFormula::new(p, &vars)?.eval(&values, u)
}

pub fn eval_term(t: &Term, env: &Env, u: &Universe) -> Result<HFSet, EvalError> {
    check_env(env, u)?;
    let (vars, values) = env_vars(env);
    let mut c = Compiler::new();
    for x in &vars {
        c.bind(x);
    }
    let ct = c.term(t)?;
    let mut st = State::new(c.slots, &c.deps);
    for (slot, v) in st.env.iter_mut().zip(&values) {
        *slot = v.code();
    }
    match Machine::new(u).term(&ct, &mut st)? {
        Val::In(c) => Ok(HFSet(c)),
        Val::Big => Err(EvalError::Overflow),
    }
}

/// Outcome of an exhaustive sweep over environments.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivReport {
    /// Environments where both sides evaluated.
    pub checked: u64,
    /// Environments skipped because a side overflowed.
    pub skipped: u64,
    /// First environment, in enumeration order, where the sides differ,
    /// with the value of each side.
    pub counterexample: Option<(Env, bool, bool)>,
}

impl EquivReport {
    pub fn holds(&self) -> bool {
        self.counterexample.is_none()
    }

    /// Fraction of environments skipped.
    pub fn skip_ratio(&self) -> f64 {
        let total = self.checked + self.skipped;
        if total == 0 {
            0.0
        } else {
            self.skipped as f64 / total as f64
        }
    }
}

fn sweep(
    vars: &[Name],
    u: &Universe,
    mut test: impl FnMut(&[HFSet]) -> Result<Option<(bool, bool)>, EvalError>,
) -> Result<EquivReport, EvalError> {
    let n = vars.len();
    let mut values = vec![HFSet::EMPTY; n];
    let mut report = EquivReport { checked: 0, skipped: 0, counterexample: None };
    let size = u.size;
    loop {
        match test(&values)? {
            None => report.skipped += 1,
            Some((l, r)) => {
                report.checked += 1;
                if l != r {
                    let env = vars.iter().cloned().zip(values.iter().copied()).collect();
                    report.counterexample = Some((env, l, r));
                    return Ok(report);
                }
            }
        }
        // odometer, last variable fastest
        let mut k = n;
        loop {
            if k == 0 {
                return Ok(report);
            }
            k -= 1;
            let next = values[k].code() + 1;
            if next < size {
                values[k] = HFSet(next);
                break;
            }
            values[k] = HFSet::EMPTY;
        }
    }
}

/// Compare `p` and `q` in every environment over `vars`. Only unbound
/// variables are reported as errors; overflows are tallied as skips.
pub fn check_equivalence(p: &Formula, q: &Formula, vars: &[Name], u: &Universe) -> Result<EquivReport, EvalError> {
    let vars = dedup(vars);
    let cp = CompiledFormula::new(p, &vars)?;
    let cq = CompiledFormula::new(q, &vars)?;
    sweep(&vars, u, |vals| {
        let l = match cp.eval(vals, u) {
            Ok(b) => b,
            Err(_) => return Ok(None),
        };
        match cq.eval(vals, u) {
            Ok(r) => Ok(Some((l, r))),
            Err(_) => Ok(None),
        }
    })
}

/// `p` holds in every environment over `vars` (overflows skipped).
pub fn check_validity(p: &Formula, vars: &[Name], u: &Universe) -> Result<EquivReport, EvalError> {
    let vars = dedup(vars);
    let cp = CompiledFormula::new(p, &vars)?;
    sweep(&vars, u, |vals| match cp.eval(vals, u) {
        Ok(b) => Ok(Some((b, true))),
        Err(_) => Ok(None),
    })
}

fn dedup(vars: &[Name]) -> Vec<Name> {
    let mut seen = BTreeSet::new();
    vars.iter().filter(|x| seen.insert((*x).clone())).cloned().collect()
}
