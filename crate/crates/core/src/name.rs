//! Variable names and the fresh-name supply.
//!
//! Fresh names live in a reserved namespace `base#k`. User input may not
//! contain `#`, so a name generated by a [`Fresh`] supply never collides with
//! a name written by hand. Within one run the counter only grows, and
//! [`Fresh::reserve`] bumps it past any `#k` suffix already present in the
//! inputs of an operation.

use alloc::string::String;
use alloc::sync::Arc;
use core::fmt;
use core::ops::Deref;

/// An object-language variable.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Name(Arc<str>);

impl Name {
    pub fn new(s: &str) -> Name {
        Name(Arc::from(s))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// The part before the `#` suffix, if any.
    pub fn base(&self) -> &str {
        match self.0.find('#') {
            Some(i) => &self.0[..i],
            None => &self.0,
        }
    }

    /// The counter of a generated name, `None` for hand-written names.
    pub fn fresh_index(&self) -> Option<u64> {
        let i = self.0.find('#')?;
        self.0[i + 1..].parse().ok()
    }

    pub fn is_reserved(&self) -> bool {
        self.0.contains('#')
    }
}

impl Deref for Name {
    type Target = str;
    fn deref(&self) -> &str {
        &self.0
    }
}

impl From<&str> for Name {
    fn from(s: &str) -> Name {
        Name::new(s)
    }
}

impl From<String> for Name {
    fn from(s: String) -> Name {
        Name(Arc::from(s))
    }
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Per-run fresh-name context.
///
/// Deterministic: the same sequence of requests yields the same names.
#[derive(Clone, Debug)]
pub struct Fresh {
    next: u64,
}

impl Default for Fresh {
    fn default() -> Self {
        Fresh::new()
    }
}

impl Fresh {
    pub fn new() -> Fresh {
        Fresh { next: 1 }
    }

    /// A new name `base#k` where `base` is `hint` stripped of any suffix.
    pub fn fresh(&mut self, hint: &str) -> Name {
        let base = match hint.find('#') {
            Some(i) => &hint[..i],
            None => hint,
        };
        let name = alloc::format!("{}#{}", base, self.next);
        self.next += 1;
        Name::from(name)
    }

    /// Make sure later names never reuse the counter of `name`.
    pub fn reserve(&mut self, name: &Name) {
        if let Some(k) = name.fresh_index() {
            if k >= self.next {
                self.next = k + 1;
            }
        }
    }

    pub fn reserve_all<'a>(&mut self, names: impl IntoIterator<Item = &'a Name>) {
        for n in names {
            self.reserve(n);
        }
    }

    /// The counter value the next name will use.
    pub fn peek(&self) -> u64 {
        self.next
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fresh_names_use_base_and_counter() {
        let mut f = Fresh::new();
        assert_eq!(f.fresh("z").as_str(), "z#1");
        assert_eq!(f.fresh("z#1").as_str(), "z#2");
        assert_eq!(f.fresh("w'").as_str(), "w'#3");
    }

    #[test]
    fn reserve_skips_existing_suffixes() {
        let mut f = Fresh::new();
        f.reserve(&Name::new("v#7"));
        f.reserve(&Name::new("x"));
        assert_eq!(f.fresh("v").as_str(), "v#8");
    }

    #[test]
    fn base_and_index() {
        let n = Name::new("w''#12");
        assert_eq!(n.base(), "w''");
        assert_eq!(n.fresh_index(), Some(12));
        assert!(n.is_reserved());
        assert_eq!(Name::new("x").fresh_index(), None);
    }
}
