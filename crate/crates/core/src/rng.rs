//! Seeded SplitMix64 and the samplers built on it.
//!
//! SplitMix64 is implemented from its published reference algorithm so that
//! any other implementation seeded the same way reproduces the same stream.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::set::{check_dim, DenseSet, GroupElement};

const GOLDEN_GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN_GAMMA);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    /// Uniform integer in `[0, bound)` by rejection of the biased low range.
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0, "empty range");
        let threshold = bound.wrapping_neg() % bound;
        loop {
            let x = self.next_u64();
            if x >= threshold {
                return x % bound;
            }
        }
    }

    /// True with probability `num / den`.
    pub fn bernoulli(&mut self, num: u64, den: u64) -> bool {
        assert!(den > 0 && num <= den);
        u128::from(self.next_u64()) * u128::from(den) < u128::from(num) << 64
    }

    /// Derives an independent stream, e.g. one per trial index.
    pub fn fork(&self, index: u64) -> Self {
        let mut base = Self::new(self.state ^ index.wrapping_mul(GOLDEN_GAMMA));
        Self::new(base.next_u64())
    }
}

/// How to draw a random subset of F₂ⁿ.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RandomSetSpec {
    /// Uniform among sets of exactly this cardinality.
    ExactCard(u64),
    /// Each element independently with probability `num / den`.
    Bernoulli { num: u64, den: u64 },
}

impl RandomSetSpec {
    pub fn sample(&self, n: u32, rng: &mut SplitMix64) -> Result<DenseSet> {
        match *self {
            RandomSetSpec::ExactCard(k) => sample_exact(n, k, rng),
            RandomSetSpec::Bernoulli { num, den } => {
                if den == 0 || num > den {
                    return Err(Error::Precondition(format!("bad probability {num}/{den}")));
                }
                DenseSet::from_predicate(n, |_| rng.bernoulli(num, den))
            }
        }
    }
}

/// First `k` entries of a seeded Fisher–Yates shuffle of `[0, 2ⁿ)`.
pub fn sample_exact(n: u32, k: u64, rng: &mut SplitMix64) -> Result<DenseSet> {
    check_dim(n)?;
    let size = 1u64 << n;
    if k > size {
        return Err(Error::Precondition(format!("cannot draw {k} of {size} elements")));
    }
    let picks = partial_shuffle(size, k, rng);
    DenseSet::from_elements(n, picks.into_iter().map(|x| x as GroupElement))
}

/// `k` distinct values of `[0, size)`, in shuffle order.
pub fn partial_shuffle(size: u64, k: u64, rng: &mut SplitMix64) -> Vec<u64> {
    let mut swapped: HashMap<u64, u64> = HashMap::new();
    let mut out = Vec::with_capacity(k as usize);
    for i in 0..k {
        let j = i + rng.below(size - i);
        let vi = *swapped.get(&i).unwrap_or(&i);
        let vj = *swapped.get(&j).unwrap_or(&j);
        swapped.insert(j, vi);
        out.push(vj);
    }
    out
}
