//! Pre-contexts: ordered declarations `x ∈ A`.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use super::Collection;
use crate::name::Name;

/// A pre-context `[x1 ∈ A1, ..., xn ∈ An]`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Context {
    pub entries: Vec<(Name, Collection)>,
}

impl Context {
    pub fn new() -> Context {
        Context::default()
    }

    pub fn push(mut self, x: impl Into<Name>, a: Collection) -> Context {
        self.entries.push((x.into(), a));
        self
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn vars(&self) -> impl Iterator<Item = &Name> {
        self.entries.iter().map(|(x, _)| x)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ContextError {
    #[error("entry {index}: `{var}` is already declared")]
    Duplicate { index: usize, var: Name },
    #[error("entry {index}: `{var}` is used before it is declared")]
    Undeclared { index: usize, var: Name },
}

/// Variables are pairwise distinct and each collection mentions only
/// variables declared before it. Reports the first offending entry.
pub fn precontext_wf(ctx: &Context) -> Result<(), ContextError> {
    let mut seen = BTreeSet::new();
    for (index, (x, a)) in ctx.entries.iter().enumerate() {
        if let Some(var) = a.free_vars().into_iter().find(|v| !seen.contains(v)) {
            return Err(ContextError::Undeclared { index, var });
        }
        if !seen.insert(x.clone()) {
            return Err(ContextError::Duplicate { index, var: x.clone() });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::emtt::{Prop, Term};
    use alloc::boxed::Box;

    #[test]
    fn examples() {
        assert_eq!(precontext_wf(&Context::new()), Ok(()));
        let c = Collection::Compr("z".into(), Box::new(Prop::eps(Term::var("z"), Term::var("x"))));
        let ok = Context::new().push("x", Collection::Univ).push("y", c.clone());
        assert_eq!(precontext_wf(&ok), Ok(()));
        let dup = Context::new().push("x", Collection::Univ).push("x", Collection::Univ);
        assert_eq!(precontext_wf(&dup), Err(ContextError::Duplicate { index: 1, var: "x".into() }));
        let early = Context::new().push("y", c).push("x", Collection::Univ);
        assert_eq!(precontext_wf(&early), Err(ContextError::Undeclared { index: 0, var: "x".into() }));
    }

    #[test]
    fn self_reference_is_undeclared() {
        let c = Collection::Compr("z".into(), Box::new(Prop::eps(Term::var("z"), Term::var("x"))));
        let ctx = Context::new().push("x", c);
        assert!(matches!(precontext_wf(&ctx), Err(ContextError::Undeclared { index: 0, .. })));
    }
}
