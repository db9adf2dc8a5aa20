//! Seeded generators and executable checks of the translation lemmas.
//!
//! Every sample draws from its own ChaCha8 stream keyed by the seed, the
//! property and the sample index, so a report is reproducible from the
//! configuration alone and samples can be rerun in isolation.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::emtt::{Collection, Prop, Term as PreTerm};
use crate::hf::{format_env, Env};
use crate::name::Name;
use crate::set::{Formula, Term};
use crate::TheoryFlavor;

mod checks;
mod gen;

pub use checks::{
    check_axioms, check_delta_functional, check_freevar_contracts, check_oneside, check_oneside_formulas,
    check_oneside_terms, check_substitution, run_check, run_check_range,
};
pub use gen::set_depth;

/// Skip ratio at which a sample is regenerated one level shallower.
pub const MAX_SKIP_RATIO: f64 = 0.3;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenConfig {
    pub seed: u64,
    pub max_depth: usize,
    pub pool: Vec<Name>,
    pub rank: u8,
    pub flavor: TheoryFlavor,
    pub omega_allowed: bool,
    pub sample_count: usize,
    /// Let `El_List` appear above depth 1. Its δ-formula grows quickly.
    pub deep: bool,
}

impl Default for GenConfig {
    fn default() -> GenConfig {
        GenConfig {
            seed: 0,
            max_depth: 3,
            pool: vec![Name::new("x"), Name::new("y"), Name::new("z")],
            rank: 3,
            flavor: TheoryFlavor::Izf,
            omega_allowed: false,
            sample_count: 500,
            deep: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ConfigError {
    #[error("max depth {0} exceeds 5")]
    Depth(usize),
    #[error("rank {0} exceeds 3")]
    Rank(u8),
    #[error("the variable pool is empty")]
    EmptyPool,
    #[error("`{0}` cannot be in the variable pool")]
    ReservedName(Name),
}

/// Names the checks use for their own placeholders.
const RESERVED: [&str; 2] = ["u", "v"];

impl GenConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.max_depth > 5 {
            return Err(ConfigError::Depth(self.max_depth));
        }
        if self.rank > 3 {
            return Err(ConfigError::Rank(self.rank));
        }
        if self.pool.is_empty() {
            return Err(ConfigError::EmptyPool);
        }
        if let Some(x) = self.pool.iter().find(|x| RESERVED.contains(&x.as_str()) || x.is_reserved()) {
            return Err(ConfigError::ReservedName(x.clone()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Property {
    Oneside,
    DeltaFun,
    Subst,
    Freevars,
    Axioms,
}

impl Property {
    pub const ALL: [Property; 5] =
        [Property::Oneside, Property::DeltaFun, Property::Subst, Property::Freevars, Property::Axioms];

    pub fn as_str(self) -> &'static str {
        match self {
            Property::Oneside => "oneside",
            Property::DeltaFun => "deltafun",
            Property::Subst => "subst",
            Property::Freevars => "freevars",
            Property::Axioms => "axioms",
        }
    }

    pub fn parse(s: &str) -> Option<Property> {
        Property::ALL.into_iter().find(|p| p.as_str() == s)
    }

    fn stream_id(self) -> u64 {
        self as u64 + 1
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A generator positioned on one sample's random stream.
pub struct Sampler<'a> {
    cfg: &'a GenConfig,
    rng: ChaCha8Rng,
}

impl<'a> Sampler<'a> {
    /// Stream 0 of the seed; what the `gen_*` shorthands use.
    pub fn new(cfg: &'a GenConfig) -> Sampler<'a> {
        Sampler::stream(cfg, 0)
    }

    pub fn stream(cfg: &'a GenConfig, stream: u64) -> Sampler<'a> {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(stream);
        Sampler { cfg, rng }
    }

    /// The stream a check uses for `part` of sample `index`.
    pub fn for_sample(cfg: &'a GenConfig, p: Property, index: usize, part: u64) -> Sampler<'a> {
        Sampler::stream(cfg, p.stream_id() << 40 | part << 32 | index as u64)
    }

    fn gen(&mut self) -> gen::Gen<'_> {
        gen::Gen { cfg: self.cfg, rng: &mut self.rng }
    }

    pub fn set_formula(&mut self, depth: usize) -> Formula {
        self.gen().set_formula(depth)
    }

    /// Δ0 in every flavor.
    pub fn delta0_formula(&mut self, depth: usize) -> Formula {
        self.gen().delta0_formula(depth)
    }

    pub fn set_term(&mut self, depth: usize) -> Term {
        self.gen().set_term(depth)
    }

    pub fn preterm(&mut self, depth: usize) -> PreTerm {
        self.gen().preterm(depth)
    }

    pub fn prop(&mut self, depth: usize) -> Prop {
        self.gen().prop(depth)
    }

    pub fn collection(&mut self, depth: usize) -> Collection {
        self.gen().collection(depth)
    }

    pub fn name(&mut self) -> Name {
        use rand::seq::SliceRandom;
        self.cfg.pool.choose(&mut self.rng).expect("pool is not empty").clone()
    }
}

pub fn gen_set_formula(cfg: &GenConfig) -> Formula {
    Sampler::new(cfg).set_formula(cfg.max_depth)
}

pub fn gen_set_term(cfg: &GenConfig) -> Term {
    Sampler::new(cfg).set_term(cfg.max_depth)
}

pub fn gen_preterm(cfg: &GenConfig) -> PreTerm {
    Sampler::new(cfg).preterm(cfg.max_depth)
}

pub fn gen_prop(cfg: &GenConfig) -> Prop {
    Sampler::new(cfg).prop(cfg.max_depth)
}

pub fn gen_collection(cfg: &GenConfig) -> Collection {
    Sampler::new(cfg).collection(cfg.max_depth)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Failure {
    pub sample: usize,
    /// The minimized input, printed.
    pub input: String,
    pub detail: String,
    pub env: Option<Env>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckReport {
    pub property: Property,
    pub samples: usize,
    /// Environments in which the checked statement was evaluated.
    pub checked: u64,
    /// Environments skipped because a value left the universe.
    pub skipped: u64,
    /// Samples drawn again at a smaller depth for skipping too much.
    pub regenerated: usize,
    pub failures: Vec<Failure>,
}

impl CheckReport {
    pub fn new(property: Property) -> CheckReport {
        CheckReport { property, samples: 0, checked: 0, skipped: 0, regenerated: 0, failures: Vec::new() }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// Append the report of the samples that follow this one's. Sample
    /// indices are global, so merging ranges in order reproduces the
    /// report of the whole run.
    pub fn merge(&mut self, other: CheckReport) {
        self.samples += other.samples;
        self.checked += other.checked;
        self.skipped += other.skipped;
        self.regenerated += other.regenerated;
        self.failures.extend(other.failures);
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "property: {}", self.property)?;
        writeln!(f, "samples: {}", self.samples)?;
        writeln!(f, "checked: {}", self.checked)?;
        writeln!(f, "skipped: {}", self.skipped)?;
        writeln!(f, "regenerated: {}", self.regenerated)?;
        writeln!(f, "failures: {}", self.failures.len())?;
        for x in &self.failures {
            writeln!(f, "failure {}: {}", x.sample, x.input)?;
            if let Some(env) = &x.env {
                writeln!(f, "  env: {}", format_env(env))?;
            }
            writeln!(f, "  {}", x.detail)?;
        }
        writeln!(f, "result: {}", if self.passed() { "pass" } else { "fail" })
    }
}

#[cfg(test)]
mod tests;
