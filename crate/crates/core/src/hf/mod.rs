//! Hereditarily finite sets and a brute-force model checker over the
//! rank-bounded universes `V_k`.
//!
//! A set is stored as its Ackermann code: `code(s) = Σ 2^code(x)` over
//! `x ∈ s`. Codes are canonical, `V_k` is exactly the codes below `|V_k|`,
//! and membership is a bit test. Ranks up to 4 fit in 32 bits.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::name::Name;

mod env;
mod eval;

pub use env::{parse_env, parse_hfset, EnvParseError};
pub use eval::{
    check_equivalence, check_validity, eval_formula, eval_term, CompiledFormula, EquivReport, EvalError,
};

/// Largest supported rank bound; `|V_5| = 2^65536`.
pub const MAX_RANK: u8 = 4;

/// A hereditarily finite set of rank at most [`MAX_RANK`].
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HFSet(u32);

impl HFSet {
    pub const EMPTY: HFSet = HFSet(0);

    pub fn code(self) -> u32 {
        self.0
    }

    /// The set with the given Ackermann code, if its rank is supported.
    pub fn from_code(code: u32) -> Option<HFSet> {
        (code <= u16::MAX as u32).then_some(HFSet(code))
    }

    /// Children in increasing code order.
    pub fn children(self) -> impl Iterator<Item = HFSet> {
        eval::children(self.0).map(HFSet)
    }

    pub fn contains(self, x: HFSet) -> bool {
        x.0 < 32 && self.0 >> x.0 & 1 == 1
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// `rank(∅) = 0`, `rank(s) = 1 + max rank(x)` for `x ∈ s`.
    pub fn rank(self) -> u8 {
        // |V_k| - 1 is the largest code of rank k
        match self.0 {
            0 => 0,
            1 => 1,
            2..=3 => 2,
            4..=15 => 3,
            _ => 4,
        }
    }

    /// Builds a set from its elements; `None` if the result is too big to
    /// represent.
    pub fn from_children(xs: impl IntoIterator<Item = HFSet>) -> Option<HFSet> {
        let mut c: u32 = 0;
        for x in xs {
            if x.0 >= 16 {
                return None;
            }
            c |= 1 << x.0;
        }
        Some(HFSet(c))
    }

    /// The von Neumann natural `n`.
    pub fn natural(n: u8) -> Option<HFSet> {
        let mut s = HFSet::EMPTY;
        for _ in 0..n {
            s = HFSet::from_children(s.children().chain([s]))?;
        }
        Some(s)
    }
}

impl fmt::Display for HFSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, x) in self.children().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", x)?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for HFSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A variable assignment.
pub type Env = BTreeMap<Name, HFSet>;

/// Renders an environment as `x={}, y={{}}`.
pub fn format_env(env: &Env) -> String {
    let parts: Vec<String> = env.iter().map(|(x, s)| alloc::format!("{}={}", x, s)).collect();
    parts.join(", ")
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("rank {0} is too large; the largest supported rank is {MAX_RANK}")]
pub struct RankTooLarge(pub u8);

/// `V_k`: every hereditarily finite set of rank at most `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Universe {
    rank: u8,
    size: u32,
}

pub fn enumerate_universe(k: u8) -> Result<Universe, RankTooLarge> {
    if k > MAX_RANK {
        return Err(RankTooLarge(k));
    }
    let mut size: u32 = 1;
    for _ in 0..k {
        size = 1 << size;
    }
    Ok(Universe { rank: k, size })
}

impl Universe {
    pub fn rank(&self) -> u8 {
        self.rank
    }

    pub fn len(&self) -> usize {
        self.size as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, s: HFSet) -> bool {
        s.0 < self.size
    }

    /// Elements in code order.
    pub fn elements(&self) -> impl Iterator<Item = HFSet> {
        (0..self.size).map(HFSet)
    }

    /// `ω` cut down to the naturals of rank below `k`.
    pub fn omega(&self) -> HFSet {
        HFSet::from_children((0..self.rank).map(|n| HFSet::natural(n).expect("small natural")))
            .expect("rank of truncated omega is k")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn universe_sizes() {
        let sizes: Vec<usize> = (0..=4).map(|k| enumerate_universe(k).unwrap().len()).collect();
        assert_eq!(sizes, [1, 2, 4, 16, 65536]);
        assert_eq!(enumerate_universe(5), Err(RankTooLarge(5)));
        let v1: Vec<String> = enumerate_universe(1).unwrap().elements().map(|s| s.to_string()).collect();
        assert_eq!(v1, ["{}", "{{}}"]);
    }

    #[test]
    fn ranks_match_definition() {
        fn slow_rank(s: HFSet) -> u8 {
            s.children().map(|x| slow_rank(x) + 1).max().unwrap_or(0)
        }
        for s in enumerate_universe(4).unwrap().elements() {
            assert_eq!(s.rank(), slow_rank(s));
        }
    }

    #[test]
    fn canonical_regardless_of_order() {
        let a = HFSet::from_children([HFSet(1), HFSet(0), HFSet(3)]).unwrap();
        let b = HFSet::from_children([HFSet(3), HFSet(1), HFSet(0), HFSet(1)]).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn naturals_and_omega() {
        assert_eq!(HFSet::natural(3).unwrap().to_string(), "{{},{{}},{{},{{}}}}");
        let u = enumerate_universe(3).unwrap();
        assert_eq!(u.omega(), HFSet::natural(3).unwrap());
        assert_eq!(enumerate_universe(0).unwrap().omega(), HFSet::EMPTY);
    }
}
