//! Reading and printing schemas and instances.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use super::{
    Binding, EqKind, Form, Judgment, JudgmentPattern, MetaDecl, MetaKind, PatSlot, Pattern, RuleInstance, RuleSchema,
};
use crate::emtt::{signature, sort_of_tag, Context, Node, Sig, Sort};
use crate::name::Name;
use crate::sexp::{self, Sexp, SexpError};
use crate::TheoryFlavor;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum LoadError {
    #[error(transparent)]
    Sexp(#[from] SexpError),
    #[error("rule `{id}`: {msg}")]
    Rule { id: String, msg: String },
    #[error("{0}")]
    Shape(String),
}

type Res<T> = Result<T, String>;

fn atom(s: &Sexp) -> Res<&str> {
    s.as_atom().ok_or_else(|| format!("expected a symbol, got `{}`", s))
}

fn node<'a>(s: &'a Sexp, head: &str) -> Res<&'a [Sexp]> {
    match s.as_node() {
        Some((h, args)) if h == head => Ok(args),
        _ => Err(format!("expected `({} ...)`, got `{}`", head, s)),
    }
}

fn list(s: &Sexp) -> Res<&[Sexp]> {
    s.as_list().ok_or_else(|| format!("expected a list, got `{}`", s))
}

// ---------------------------------------------------------------- shorthands

const MACROS: &[&str] = &["iff", "not", "eqV", "allV", "exV", "single", "opair", "trans"];

fn n(head: &str, args: Vec<Sexp>) -> Sexp {
    Sexp::node(head, args)
}

fn expand_macro(head: &str, a: &[Sexp]) -> Res<Sexp> {
    let want = |k: usize| {
        if a.len() == k {
            Ok(())
        } else {
            Err(format!("`{}` takes {} argument(s)", head, k))
        }
    };
    Ok(match head {
        "iff" => {
            want(2)?;
            n("and", vec![n("imp", vec![a[0].clone(), a[1].clone()]), n("imp", vec![a[1].clone(), a[0].clone()])])
        }
        "not" => {
            want(1)?;
            n("imp", vec![a[0].clone(), n("bot", vec![])])
        }
        "eqV" => {
            want(2)?;
            n("eqP", vec![n("V", vec![]), a[0].clone(), a[1].clone()])
        }
        "allV" | "exV" => {
            want(2)?;
            let q = if head == "allV" { "all" } else { "ex" };
            n(q, vec![a[0].clone(), n("V", vec![]), a[1].clone()])
        }
        "single" => {
            want(1)?;
            n("pairV", vec![a[0].clone(), a[0].clone()])
        }
        "opair" => {
            want(2)?;
            let s = n("pairV", vec![a[0].clone(), a[0].clone()]);
            n("pairV", vec![s, n("pairV", vec![a[0].clone(), a[1].clone()])])
        }
        "trans" => {
            want(1)?;
            // ∅ ε y ∧ (∀z∈V)(z ε y → ⋃{z,{z}} ε y)
            let z = || n("var", vec![Sexp::atom("tz")]);
            let succ = n("unionV", vec![n("pairV", vec![z(), n("pairV", vec![z(), z()])])]);
            n(
                "and",
                vec![
                    n("epsT", vec![n("emptyV", vec![]), a[0].clone()]),
                    n(
                        "all",
                        vec![
                            Sexp::atom("tz"),
                            n("V", vec![]),
                            n("imp", vec![n("epsT", vec![z(), a[0].clone()]), n("epsT", vec![succ, a[0].clone()])]),
                        ],
                    ),
                ],
            )
        }
        _ => unreachable!(),
    })
}

// ---------------------------------------------------------------- patterns

struct SchemaCx<'a> {
    metas: &'a [MetaDecl],
    scope: Vec<Name>,
}

impl SchemaCx<'_> {
    fn meta(&self, x: &str) -> Option<&MetaDecl> {
        self.metas.iter().find(|m| m.name.as_str() == x)
    }

    fn is_var_meta(&self, x: &str) -> bool {
        self.meta(x).is_some_and(|m| m.kind == MetaKind::Variable)
    }

    fn node_meta(&self, x: &str) -> Res<&MetaDecl> {
        match self.meta(x) {
            Some(m) if m.kind != MetaKind::Variable => Ok(m),
            Some(_) => Err(format!("`{}` is a variable, not a syntax metavariable", x)),
            None => Err(format!("undeclared metavariable `{}`", x)),
        }
    }
}

pub(super) fn kind_sort(k: MetaKind) -> Option<Sort> {
    match k {
        MetaKind::Collection => Some(Sort::Col),
        MetaKind::Term => Some(Sort::Term),
        MetaKind::Proposition | MetaKind::SmallProposition => Some(Sort::Prop),
        MetaKind::Variable => None,
    }
}

fn sort_word(s: Sort) -> &'static str {
    match s {
        Sort::Col => "collection",
        Sort::Term => "term",
        Sort::Prop => "proposition",
    }
}

fn decode_pattern(s: &Sexp, want: Option<Sort>, cx: &mut SchemaCx<'_>) -> Res<(Pattern, Sort)> {
    let (head, args) = s.as_node().ok_or_else(|| format!("expected a pattern, got `{}`", s))?;
    if MACROS.contains(&head) {
        let e = expand_macro(head, args)?;
        return decode_pattern(&e, want, cx);
    }
    let (pat, sort) = match head {
        "?" => {
            let [m] = args else { return Err(format!("malformed `{}`", s)) };
            let d = cx.node_meta(atom(m)?)?;
            (Pattern::Meta(d.name.clone()), kind_sort(d.kind).expect("not a variable"))
        }
        "sub" => {
            let (m, pairs) = args.split_first().ok_or_else(|| format!("malformed `{}`", s))?;
            let d = cx.node_meta(atom(m)?)?;
            let (name, sort) = (d.name.clone(), kind_sort(d.kind).expect("not a variable"));
            let mut out = Vec::new();
            for p in pairs {
                let [x, t] = list(p)? else { return Err(format!("malformed substitution pair `{}`", p)) };
                let x = atom(x)?;
                if !cx.is_var_meta(x) {
                    return Err(format!("substituted name `{}` is not a variable metavariable", x));
                }
                out.push((Name::new(x), decode_pattern(t, Some(Sort::Term), cx)?.0));
            }
            (Pattern::Sub(name, out), sort)
        }
        _ => {
            let sort = sort_of_tag(head).ok_or_else(|| format!("unknown constructor `{}`", head))?;
            let sig = signature(head).expect("known tag");
            if sig.len() != args.len() {
                return Err(format!("`{}` takes {} argument(s) in `{}`", head, sig.len(), s));
            }
            let binders: Vec<Name> = sig
                .iter()
                .zip(args)
                .filter(|(g, _)| matches!(g, Sig::Bind))
                .map(|(_, a)| atom(a).map(Name::new))
                .collect::<Res<_>>()?;
            let mut slots = Vec::new();
            for (g, a) in sig.iter().zip(args) {
                slots.push(match g {
                    Sig::Bind => PatSlot::Name(Name::new(atom(a)?)),
                    Sig::Free => {
                        let x = atom(a)?;
                        if !cx.is_var_meta(x) && !cx.scope.iter().any(|b| b.as_str() == x) {
                            return Err(format!("variable `{}` is neither bound nor a declared variable", x));
                        }
                        PatSlot::Name(Name::new(x))
                    }
                    Sig::Sub(k, mask) => {
                        let before = cx.scope.len();
                        for (i, b) in binders.iter().enumerate() {
                            if mask & (1 << i) != 0 {
                                cx.scope.push(b.clone());
                            }
                        }
                        let r = decode_pattern(a, Some(*k), cx);
                        cx.scope.truncate(before);
                        PatSlot::Pat(r?.0)
                    }
                });
            }
            (Pattern::Node(head.to_string(), slots), sort)
        }
    };
    match want {
        Some(w) if w != sort => Err(format!("expected a {}, got `{}`", sort_word(w), s)),
        _ => Ok((pat, sort)),
    }
}

pub(super) fn encode_pattern(p: &Pattern) -> Sexp {
    match p {
        Pattern::Meta(m) => Sexp::node("?", [Sexp::atom(m.as_str())]),
        Pattern::Sub(m, pairs) => {
            let mut v = vec![Sexp::atom(m.as_str())];
            v.extend(pairs.iter().map(|(x, t)| Sexp::list(vec![Sexp::atom(x.as_str()), encode_pattern(t)])));
            Sexp::node("sub", v)
        }
        Pattern::Node(tag, slots) => Sexp::node(
            tag,
            slots
                .iter()
                .map(|s| match s {
                    PatSlot::Name(x) => Sexp::atom(x.as_str()),
                    PatSlot::Pat(q) => encode_pattern(q),
                })
                .collect::<Vec<_>>(),
        ),
    }
}

// ---------------------------------------------------------------- judgments

/// Which sorts each subject position accepts. Collections and propositions
/// are interchangeable where the form is about types.
fn form_sorts(head: &str) -> Option<&'static [&'static [Sort]]> {
    const TY: &[Sort] = &[Sort::Col, Sort::Prop];
    const T: &[Sort] = &[Sort::Term];
    const C: &[Sort] = &[Sort::Col];
    const P: &[Sort] = &[Sort::Prop];
    Some(match head {
        "col" | "set" | "prop" | "prop_s" => &[TY],
        "in" => &[T, C],
        "eq" => &[T, T, C],
        "true-in" => &[P],
        _ => return None,
    })
}

fn eq_kind(s: &str) -> Option<EqKind> {
    Some(match s {
        "col" => EqKind::Col,
        "set" => EqKind::Set,
        "prop" => EqKind::Prop,
        "prop_s" => EqKind::PropS,
        _ => return None,
    })
}

/// Split `(ctx (entries) J)` into its parts; bare judgments have no entries.
fn split_ctx(s: &Sexp) -> Res<(&[Sexp], &Sexp)> {
    match s.as_node() {
        Some(("ctx", [entries, body])) => Ok((list(entries)?, body)),
        Some(("ctx", _)) => Err(format!("malformed `{}`", s)),
        _ => Ok((&[], s)),
    }
}

fn decode_form<X>(
    s: &Sexp,
    mut sub: impl FnMut(&Sexp, &'static [Sort]) -> Res<X>,
) -> Res<Form<X>> {
    let (head, args) = s.as_node().ok_or_else(|| format!("expected a judgment, got `{}`", s))?;
    if head == "eqtype" {
        let [k, a, b] = args else { return Err(format!("malformed `{}`", s)) };
        let k = eq_kind(atom(k)?).ok_or_else(|| format!("unknown equality kind in `{}`", s))?;
        const TY: &[Sort] = &[Sort::Col, Sort::Prop];
        return Ok(Form::EqType(k, sub(a, TY)?, sub(b, TY)?));
    }
    let sorts = form_sorts(head).ok_or_else(|| format!("unknown judgment form `{}`", head))?;
    if sorts.len() != args.len() {
        return Err(format!("`{}` takes {} argument(s)", head, sorts.len()));
    }
    let mut xs = Vec::new();
    for (a, ok) in args.iter().zip(sorts.iter()) {
        xs.push(sub(a, ok)?);
    }
    let mut it = xs.into_iter();
    let mut next = || it.next().expect("arity checked");
    Ok(match head {
        "col" => Form::Col(next()),
        "set" => Form::Set(next()),
        "prop" => Form::Prop(next()),
        "prop_s" => Form::PropS(next()),
        "in" => Form::In(next(), next()),
        "eq" => Form::EqIn(next(), next(), next()),
        "true-in" => Form::True(next()),
        _ => unreachable!(),
    })
}

fn encode_form<X>(f: &Form<X>, enc: impl Fn(&X) -> Sexp) -> Sexp {
    match f {
        Form::Col(a) => Sexp::node("col", [enc(a)]),
        Form::Set(a) => Sexp::node("set", [enc(a)]),
        Form::Prop(a) => Sexp::node("prop", [enc(a)]),
        Form::PropS(a) => Sexp::node("prop_s", [enc(a)]),
        Form::True(a) => Sexp::node("true-in", [enc(a)]),
        Form::In(a, b) => Sexp::node("in", [enc(a), enc(b)]),
        Form::EqIn(a, b, c) => Sexp::node("eq", [enc(a), enc(b), enc(c)]),
        Form::EqType(k, a, b) => Sexp::node("eqtype", [Sexp::atom(k.as_str()), enc(a), enc(b)]),
    }
}

fn wrap_ctx(entries: Vec<Sexp>, body: Sexp) -> Sexp {
    if entries.is_empty() {
        body
    } else {
        Sexp::node("ctx", [Sexp::list(entries), body])
    }
}

fn decode_jpattern(s: &Sexp, cx: &mut SchemaCx<'_>) -> Res<JudgmentPattern> {
    let (entries, body) = split_ctx(s)?;
    let before = cx.scope.len();
    let r = (|| {
        let mut ext = Vec::new();
        for e in entries {
            let [x, a] = list(e)? else { return Err(format!("malformed context entry `{}`", e)) };
            let x = atom(x)?;
            if !cx.is_var_meta(x) {
                return Err(format!("context variable `{}` must be a declared variable", x));
            }
            let a = decode_pattern(a, Some(Sort::Col), cx)?.0;
            ext.push((Name::new(x), a));
            cx.scope.push(Name::new(x));
        }
        let form = decode_form(body, |a, ok| {
            let (p, sort) = decode_pattern(a, None, cx)?;
            if ok.contains(&sort) {
                Ok(p)
            } else {
                Err(format!("`{}` has the wrong sort for this judgment", a))
            }
        })?;
        Ok(JudgmentPattern { ext, form })
    })();
    cx.scope.truncate(before);
    r
}

fn encode_jpattern(j: &JudgmentPattern) -> Sexp {
    let entries = j
        .ext
        .iter()
        .map(|(x, a)| Sexp::list(vec![Sexp::atom(x.as_str()), encode_pattern(a)]))
        .collect();
    wrap_ctx(entries, encode_form(&j.form, encode_pattern))
}

fn decode_node(s: &Sexp, ok: &[Sort]) -> Res<Node> {
    let n = Node::from_sexp(s).map_err(|e| e.to_string())?;
    if ok.contains(&n.sort()) {
        Ok(n)
    } else {
        Err(format!("`{}` has the wrong sort for this judgment", s))
    }
}

pub(super) fn decode_judgment(s: &Sexp) -> Res<Judgment> {
    let (entries, body) = split_ctx(s)?;
    let context = decode_context(entries)?;
    let form = decode_form(body, decode_node)?;
    Ok(Judgment { context, form })
}

fn decode_context(entries: &[Sexp]) -> Res<Context> {
    let mut ctx = Context::new();
    for e in entries {
        let [x, a] = list(e)? else { return Err(format!("malformed context entry `{}`", e)) };
        let a = decode_node(a, &[Sort::Col])?.into_col().expect("sort checked");
        ctx.entries.push((Name::new(atom(x)?), a));
    }
    Ok(ctx)
}

fn encode_context(ctx: &Context) -> Vec<Sexp> {
    ctx.entries.iter().map(|(x, a)| Sexp::list(vec![Sexp::atom(x.as_str()), a.to_sexp()])).collect()
}

pub fn encode_judgment(j: &Judgment) -> Sexp {
    wrap_ctx(encode_context(&j.context), encode_form(&j.form, Node::to_sexp))
}

// ---------------------------------------------------------------- schemas

fn pattern_metas(p: &Pattern, out: &mut BTreeSet<Name>) {
    match p {
        Pattern::Meta(m) => {
            out.insert(m.clone());
        }
        Pattern::Sub(m, pairs) => {
            out.insert(m.clone());
            for (x, t) in pairs {
                out.insert(x.clone());
                pattern_metas(t, out);
            }
        }
        Pattern::Node(_, slots) => {
            for s in slots {
                match s {
                    PatSlot::Name(x) => {
                        out.insert(x.clone());
                    }
                    PatSlot::Pat(q) => pattern_metas(q, out),
                }
            }
        }
    }
}

/// Metavariables (and, harmlessly, bound names) mentioned by a judgment.
fn judgment_names(j: &JudgmentPattern) -> BTreeSet<Name> {
    let mut out = BTreeSet::new();
    for (x, a) in &j.ext {
        out.insert(x.clone());
        pattern_metas(a, &mut out);
    }
    for p in j.form.parts() {
        pattern_metas(p, &mut out);
    }
    out
}

fn decode_schema(s: &Sexp) -> Result<RuleSchema, LoadError> {
    let args = node(s, "rule").map_err(LoadError::Shape)?;
    let id = args
        .first()
        .and_then(Sexp::as_atom)
        .ok_or_else(|| LoadError::Shape(format!("rule without an id: `{}`", s)))?
        .to_string();
    let err = |msg: String| LoadError::Rule { id: id.clone(), msg };
    decode_schema_body(&id, &args[1..]).map_err(err)
}

fn decode_schema_body(id: &str, args: &[Sexp]) -> Res<RuleSchema> {
    let mut it = args.iter();
    let mut next = |what: &str| it.next().ok_or_else(|| format!("missing {}", what));

    let step_args = node(next("step")?, "step")?;
    let step = match step_args {
        [n] => atom(n)?.parse::<u8>().map_err(|_| format!("bad step `{}`", n))?,
        _ => return Err("malformed step".into()),
    };
    let mut flavors = Vec::new();
    for f in node(next("flavors")?, "flavors")? {
        let f = TheoryFlavor::parse(atom(f)?).ok_or_else(|| format!("unknown flavor `{}`", f))?;
        if flavors.contains(&f) {
            return Err(format!("flavor `{}` listed twice", f.as_str()));
        }
        flavors.push(f);
    }
    let derived = match next("status")?.as_node() {
        Some(("primitive", [])) => false,
        Some(("derived", [])) => true,
        _ => return Err("status must be (primitive) or (derived)".into()),
    };

    let mut metas: Vec<MetaDecl> = Vec::new();
    for m in node(next("meta")?, "meta")? {
        let parts = list(m)?;
        let [name, kind, deps @ ..] = parts else { return Err(format!("malformed declaration `{}`", m)) };
        let name = Name::new(atom(name)?);
        let kind = MetaKind::parse(atom(kind)?).ok_or_else(|| format!("unknown kind in `{}`", m))?;
        if metas.iter().any(|d| d.name == name) {
            return Err(format!("`{}` declared twice", name));
        }
        if kind == MetaKind::Variable && !deps.is_empty() {
            return Err(format!("variable `{}` cannot have dependencies", name));
        }
        let deps = deps.iter().map(|d| atom(d).map(Name::new)).collect::<Res<Vec<_>>>()?;
        metas.push(MetaDecl { name, kind, deps });
    }
    for m in &metas {
        for d in &m.deps {
            if !metas.iter().any(|v| &v.name == d && v.kind == MetaKind::Variable) {
                return Err(format!("`{}` depends on `{}`, which is not a declared variable", m.name, d));
            }
        }
    }

    let mut item = next("premises")?;
    let mut fresh = Vec::new();
    if let Some(("fresh", xs)) = item.as_node() {
        for x in xs {
            let x = Name::new(atom(x)?);
            if metas.iter().any(|m| m.name == x) {
                return Err(format!("fresh name `{}` is also a metavariable", x));
            }
            fresh.push(x);
        }
        item = next("premises")?;
    }
    let mut cx = SchemaCx { metas: &metas, scope: Vec::new() };
    let premises =
        node(item, "premises")?.iter().map(|j| decode_jpattern(j, &mut cx)).collect::<Res<Vec<_>>>()?;
    let concl = node(next("conclusion")?, "conclusion")?;
    let [concl] = concl else { return Err("exactly one conclusion expected".into()) };
    let conclusion = decode_jpattern(concl, &mut cx)?;
    if let Some(extra) = it.next() {
        return Err(format!("unexpected `{}`", extra));
    }

    let mut seen = BTreeSet::new();
    for p in &premises {
        seen.extend(judgment_names(p));
    }
    let concl_names = judgment_names(&conclusion);
    for m in &metas {
        if concl_names.contains(&m.name) && !seen.contains(&m.name) {
            return Err(format!("`{}` occurs in the conclusion but in no premise", m.name));
        }
    }
    for f in &fresh {
        if !concl_names.contains(f) && !premises.iter().any(|p| judgment_names(p).contains(f)) {
            return Err(format!("fresh name `{}` is never used", f));
        }
    }
    Ok(RuleSchema { id: id.to_string(), step, flavors, derived, metas, fresh, premises, conclusion })
}

pub(super) fn parse_catalog(src: &str) -> Result<Vec<RuleSchema>, LoadError> {
    let mut out: Vec<RuleSchema> = Vec::new();
    for s in sexp::parse_many(src)? {
        let r = decode_schema(&s)?;
        if out.iter().any(|q| q.id == r.id) {
            return Err(LoadError::Rule { id: r.id, msg: "duplicate id".into() });
        }
        out.push(r);
    }
    Ok(out)
}

pub(super) fn schema_sexp(r: &RuleSchema) -> Sexp {
    let mut v = vec![
        Sexp::atom(&r.id),
        Sexp::node("step", [Sexp::atom(&r.step.to_string())]),
        Sexp::node("flavors", r.flavors.iter().map(|f| Sexp::atom(f.as_str())).collect::<Vec<_>>()),
        Sexp::node(if r.derived { "derived" } else { "primitive" }, []),
        Sexp::node(
            "meta",
            r.metas
                .iter()
                .map(|m| {
                    let mut d = vec![Sexp::atom(m.name.as_str()), Sexp::atom(m.kind.as_str())];
                    d.extend(m.deps.iter().map(|x| Sexp::atom(x.as_str())));
                    Sexp::list(d)
                })
                .collect::<Vec<_>>(),
        ),
    ];
    if !r.fresh.is_empty() {
        v.push(Sexp::node("fresh", r.fresh.iter().map(|x| Sexp::atom(x.as_str())).collect::<Vec<_>>()));
    }
    v.push(Sexp::node("premises", r.premises.iter().map(encode_jpattern).collect::<Vec<_>>()));
    v.push(Sexp::node("conclusion", [encode_jpattern(&r.conclusion)]));
    Sexp::node("rule", v)
}

fn indent_block(s: &str, by: usize) -> String {
    let pad: String = core::iter::repeat_n(' ', by).collect();
    s.replace('\n', &format!("\n{}", pad))
}

/// One header line, then one line per part; long judgments wrap.
pub(super) fn render_schema(r: &RuleSchema) -> String {
    let Sexp::List(items) = schema_sexp(r) else { unreachable!() };
    let mut out = format!("(rule {} {} {} {}", items[1], items[2], items[3], items[4]);
    for part in &items[5..] {
        match part.as_node() {
            Some(("premises", js)) if !js.is_empty() => {
                out.push_str("\n  (premises");
                for j in js {
                    out.push_str("\n    ");
                    out.push_str(&indent_block(&j.pretty(96), 4));
                }
                out.push(')');
            }
            _ => {
                out.push_str("\n  ");
                out.push_str(&indent_block(&part.pretty(98), 2));
            }
        }
    }
    out.push(')');
    out
}

// ---------------------------------------------------------------- instances

/// Read a `(instance ...)` form.
///
/// ```text
/// (instance pairing-formation
///   (subst (a (emptyV)) (b (omegaV)))
///   (premises (in (emptyV) (V)) (in (omegaV) (V)))
///   (conclusion (in (pairV (emptyV) (omegaV)) (V))))
/// ```
///
/// Variable metavariables are bound to bare symbols. An optional
/// `(context ((x A) ...))` after the substitution gives the ambient context;
/// each judgment lists its full context with `(ctx ...)`.
pub fn parse_instance(src: &str) -> Result<RuleInstance, LoadError> {
    let s = sexp::parse(src)?;
    decode_instance(&s).map_err(LoadError::Shape)
}

fn decode_instance(s: &Sexp) -> Res<RuleInstance> {
    let args = node(s, "instance")?;
    let (id, rest) = args.split_first().ok_or("instance without a schema id")?;
    let schema = atom(id)?.to_string();
    let mut it = rest.iter().peekable();
    let mut subst = Vec::new();
    for b in node(it.next().ok_or("missing subst")?, "subst")? {
        let [x, v] = list(b)? else { return Err(format!("malformed binding `{}`", b)) };
        let v = match v {
            Sexp::Atom(y) => Binding::Var(Name::new(y)),
            _ => Binding::Node(Node::from_sexp(v).map_err(|e| e.to_string())?),
        };
        subst.push((Name::new(atom(x)?), v));
    }
    let mut context = Context::new();
    if let Some(Some(("context", [entries]))) = it.peek().map(|s| s.as_node()) {
        context = decode_context(list(entries)?)?;
        it.next();
    }
    let premises = node(it.next().ok_or("missing premises")?, "premises")?
        .iter()
        .map(decode_judgment)
        .collect::<Res<Vec<_>>>()?;
    let c = node(it.next().ok_or("missing conclusion")?, "conclusion")?;
    let [c] = c else { return Err("exactly one conclusion expected".into()) };
    let conclusion = decode_judgment(c)?;
    if let Some(extra) = it.next() {
        return Err(format!("unexpected `{}`", extra));
    }
    Ok(RuleInstance { schema, subst, context, premises, conclusion })
}

pub fn render_instance(inst: &RuleInstance) -> String {
    let mut v = vec![Sexp::atom(&inst.schema)];
    v.push(Sexp::node(
        "subst",
        inst.subst
            .iter()
            .map(|(x, b)| {
                let b = match b {
                    Binding::Var(y) => Sexp::atom(y.as_str()),
                    Binding::Node(n) => n.to_sexp(),
                };
                Sexp::list(vec![Sexp::atom(x.as_str()), b])
            })
            .collect::<Vec<_>>(),
    ));
    if !inst.context.is_empty() {
        v.push(Sexp::node("context", [Sexp::list(encode_context(&inst.context))]));
    }
    v.push(Sexp::node("premises", inst.premises.iter().map(encode_judgment).collect::<Vec<_>>()));
    v.push(Sexp::node("conclusion", [encode_judgment(&inst.conclusion)]));
    Sexp::node("instance", v).pretty(100)
}
