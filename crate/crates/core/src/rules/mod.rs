//! Catalog of the rule schemas that extend emTT with a set theory, and a
//! matcher deciding whether a concrete judgment step is an instance of one.
//!
//! This is not a derivation checker. The base rules of emTT are not part of
//! the catalog, so the only question answered is "is this an instance of
//! schema X", never "is this derivable".

mod load;
mod matcher;

use alloc::string::String;
use alloc::vec::Vec;

use crate::emtt::{Collection, Context, Node};
use crate::name::Name;
use crate::TheoryFlavor;

pub use load::{encode_judgment, parse_instance, render_instance, LoadError};
pub use matcher::{characterization_check, is_set_collection, is_small_prop, CrossCheckError, Location, MatchError};

/// The asset shipped with the crate.
pub const BUILTIN_RULES: &str = include_str!("../../rules/emtt_T.rules");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MetaKind {
    Collection,
    Term,
    Proposition,
    SmallProposition,
    Variable,
}

impl MetaKind {
    pub fn as_str(self) -> &'static str {
        match self {
            MetaKind::Collection => "col",
            MetaKind::Term => "term",
            MetaKind::Proposition => "prop",
            MetaKind::SmallProposition => "prop_s",
            MetaKind::Variable => "var",
        }
    }

    pub fn parse(s: &str) -> Option<MetaKind> {
        Some(match s {
            "col" => MetaKind::Collection,
            "term" => MetaKind::Term,
            "prop" => MetaKind::Proposition,
            "prop_s" => MetaKind::SmallProposition,
            "var" => MetaKind::Variable,
            _ => return None,
        })
    }
}

/// A metavariable. `deps` lists the variable metavariables whose binders
/// the instantiation may mention, e.g. `φ` in `{x | φ}` may mention `x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MetaDecl {
    pub name: Name,
    pub kind: MetaKind,
    pub deps: Vec<Name>,
}

/// A pre-syntax tree with holes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Pattern {
    Meta(Name),
    /// `M[t1/x1, ..., tn/xn]`, simultaneous.
    Sub(Name, Vec<(Name, Pattern)>),
    Node(String, Vec<PatSlot>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PatSlot {
    Name(Name),
    Pat(Pattern),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EqKind {
    Col,
    Set,
    Prop,
    PropS,
}

impl EqKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EqKind::Col => "col",
            EqKind::Set => "set",
            EqKind::Prop => "prop",
            EqKind::PropS => "prop_s",
        }
    }
}

/// The judgment forms appearing in the added rules.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Form<X> {
    Col(X),
    Set(X),
    Prop(X),
    PropS(X),
    In(X, X),
    EqIn(X, X, X),
    EqType(EqKind, X, X),
    True(X),
}

impl<X> Form<X> {
    pub fn parts(&self) -> Vec<&X> {
        match self {
            Form::Col(a) | Form::Set(a) | Form::Prop(a) | Form::PropS(a) | Form::True(a) => alloc::vec![a],
            Form::In(a, b) | Form::EqType(_, a, b) => alloc::vec![a, b],
            Form::EqIn(a, b, c) => alloc::vec![a, b, c],
        }
    }

    pub(crate) fn map<Y, E>(&self, mut f: impl FnMut(&X) -> Result<Y, E>) -> Result<Form<Y>, E> {
        Ok(match self {
            Form::Col(a) => Form::Col(f(a)?),
            Form::Set(a) => Form::Set(f(a)?),
            Form::Prop(a) => Form::Prop(f(a)?),
            Form::PropS(a) => Form::PropS(f(a)?),
            Form::True(a) => Form::True(f(a)?),
            Form::In(a, b) => Form::In(f(a)?, f(b)?),
            Form::EqType(k, a, b) => Form::EqType(*k, f(a)?, f(b)?),
            Form::EqIn(a, b, c) => Form::EqIn(f(a)?, f(b)?, f(c)?),
        })
    }
}

/// A judgment pattern: the ambient context extended by `ext`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JudgmentPattern {
    pub ext: Vec<(Name, Pattern)>,
    pub form: Form<Pattern>,
}

/// A concrete judgment with its full context.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Judgment {
    pub context: Context,
    pub form: Form<Node>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleSchema {
    pub id: String,
    pub step: u8,
    pub flavors: Vec<TheoryFlavor>,
    pub derived: bool,
    pub metas: Vec<MetaDecl>,
    pub fresh: Vec<Name>,
    pub premises: Vec<JudgmentPattern>,
    pub conclusion: JudgmentPattern,
}

impl RuleSchema {
    pub fn in_flavor(&self, f: TheoryFlavor) -> bool {
        self.flavors.contains(&f)
    }

    pub fn meta(&self, x: &Name) -> Option<&MetaDecl> {
        self.metas.iter().find(|m| &m.name == x)
    }

    /// The schema in the asset's s-expression format.
    pub fn render(&self) -> String {
        load::render_schema(self)
    }
}

/// What a metavariable is instantiated with.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Binding {
    Node(Node),
    Var(Name),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleInstance {
    pub schema: String,
    pub subst: Vec<(Name, Binding)>,
    /// The ambient context shared by all judgments of the step.
    pub context: Context,
    pub premises: Vec<Judgment>,
    pub conclusion: Judgment,
}

/// An immutable, ordered set of schemas.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Catalog {
    rules: Vec<RuleSchema>,
}

impl Catalog {
    /// The catalog compiled into the crate.
    pub fn builtin() -> Catalog {
        Catalog::parse(BUILTIN_RULES).expect("the bundled rules asset is well formed")
    }

    pub fn parse(src: &str) -> Result<Catalog, LoadError> {
        load::parse_catalog(src).map(|rules| Catalog { rules })
    }

    pub fn rules(&self) -> &[RuleSchema] {
        &self.rules
    }

    pub fn get(&self, id: &str) -> Option<&RuleSchema> {
        self.rules.iter().find(|r| r.id == id)
    }

    /// The schemas available in `flavor`, in catalog order.
    pub fn list_rules(&self, flavor: TheoryFlavor) -> Vec<&RuleSchema> {
        self.rules.iter().filter(|r| r.in_flavor(flavor)).collect()
    }

    /// Pretty-printed catalog; [`Catalog::parse`] reads it back unchanged.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for r in &self.rules {
            out.push_str(&load::render_schema(r));
            out.push_str("\n\n");
        }
        out
    }

    pub fn match_instance(&self, flavor: TheoryFlavor, inst: &RuleInstance) -> Result<(), MatchError> {
        let schema = self.get(&inst.schema).ok_or_else(|| MatchError::UnknownSchema(inst.schema.clone()))?;
        if !schema.in_flavor(flavor) {
            return Err(MatchError::NotInFlavor { id: inst.schema.clone(), flavor });
        }
        matcher::match_schema(schema, inst)
    }
}

/// Schemas of the bundled catalog available in `flavor`.
pub fn list_rules(flavor: TheoryFlavor) -> Vec<RuleSchema> {
    Catalog::builtin().list_rules(flavor).into_iter().cloned().collect()
}

/// Check `inst` against the bundled catalog.
pub fn match_instance(flavor: TheoryFlavor, inst: &RuleInstance) -> Result<(), MatchError> {
    Catalog::builtin().match_instance(flavor, inst)
}

/// Instantiate the conclusion of `schema` under `subst`, with the ambient
/// context `ctx`.
pub fn instantiate_conclusion(
    schema: &RuleSchema,
    subst: &[(Name, Binding)],
    ctx: &Context,
) -> Result<Judgment, MatchError> {
    matcher::instantiate_conclusion(schema, subst, ctx)
}

pub(crate) fn canonical_subject(n: &Node) -> Node {
    match n {
        Node::Col(Collection::PropAsCol(p)) => Node::Prop((**p).clone()),
        other => other.clone(),
    }
}

#[cfg(test)]
mod tests;
