//! Symbolic toolkit for the set-theoretic language of CZF/IZF/ZF and the
//! pre-syntax of the extensional Minimalist Foundation extended with set
//! theory (emTT_T).
//!
//! The crate provides:
//!
//! * [`set`]: terms and formulas of CZF/IZF/ZF, sugar elaboration,
//!   capture-avoiding substitution, alpha-equivalence, and the Δ0 classifier.
//! * [`emtt`]: pre-collections, pre-terms, pre-propositions and pre-contexts.
//! * [`tilde`]: the translation from set theory into emTT pre-syntax.
//! * [`hat`]: the translation back (η for collections, δ for terms, φ̂ for
//!   propositions, Γ̂ for contexts).
//! * [`hf`]: a brute-force oracle over rank-bounded hereditarily finite sets.
//! * [`k0`]: certificate checking for K0[γ] formulas and the σ mapping.
//! * [`rules`]: the rule-schema catalog and instance matcher.
//! * [`props`]: seeded generators and property checks.
//!
//! The crate is `no_std` and only needs `alloc`.
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod emtt;
pub mod hat;
pub mod hf;
pub mod k0;
mod lexer;
pub mod name;
pub mod props;
pub mod rules;
pub mod set;
pub mod sexp;
pub mod tilde;

pub use lexer::ParseError;
pub use name::{Fresh, Name};

/// The three set theories the toolkit is parametrised by.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TheoryFlavor {
    Czf,
    Izf,
    Zf,
}

impl TheoryFlavor {
    pub const ALL: [TheoryFlavor; 3] = [TheoryFlavor::Czf, TheoryFlavor::Izf, TheoryFlavor::Zf];

    pub fn as_str(self) -> &'static str {
        match self {
            TheoryFlavor::Czf => "czf",
            TheoryFlavor::Izf => "izf",
            TheoryFlavor::Zf => "zf",
        }
    }

    pub fn parse(s: &str) -> Option<TheoryFlavor> {
        match s.to_ascii_lowercase().as_str() {
            "czf" => Some(TheoryFlavor::Czf),
            "izf" => Some(TheoryFlavor::Izf),
            "zf" => Some(TheoryFlavor::Zf),
            _ => None,
        }
    }
}

impl core::fmt::Display for TheoryFlavor {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(match self {
            TheoryFlavor::Czf => "CZF",
            TheoryFlavor::Izf => "IZF",
            TheoryFlavor::Zf => "ZF",
        })
    }
}
