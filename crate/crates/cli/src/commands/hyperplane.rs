//! Scan of all nonzero characters for a hyperplane, or a coset of one,
//! inside `A + A`.
//!
//! With `S = G ∖ (A + A)` and `raw_S(γ) = Σ_{x∈S} (−1)^⟨γ,x⟩`, the hyperplane
//! `γ^⊥` avoids `S` iff `raw_S(γ) = −|S|`, and the other coset of `γ^⊥`
//! avoids `S` iff `raw_S(γ) = |S|`.

use f2sum::rng::sample_exact;
use f2sum::{Character, DenseSet, Spectrum, Subspace};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::ExperimentConfig;
use crate::error::{usage, Result};
use crate::io::{read_set, render};
use crate::{require_n, trial_rng, RunOutput};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CosetHit {
    pub gamma: u32,
    /// Coset representative: `0` for `γ^⊥` itself.
    pub rep: u32,
}

#[derive(Clone, Debug, Serialize)]
pub struct HyperplaneTrial {
    pub trial: u64,
    pub card: u64,
    pub missing: u64,
    /// Smallest `γ` with `γ^⊥ ⊆ A + A`.
    pub hyperplane: Option<u32>,
    /// Smallest `γ` with some coset of `γ^⊥` inside `A + A`.
    pub coset: Option<CosetHit>,
    /// Direct containment check of both hits.
    pub confirmed: bool,
}

#[derive(Serialize)]
struct Row {
    trial: u64,
    card: u64,
    missing: u64,
    hyperplane: Option<u32>,
    coset_gamma: Option<u32>,
    coset_rep: Option<u32>,
}

#[derive(Serialize)]
struct Summary {
    regime_ok: bool,
    trials: u64,
    hyperplane_found: u64,
    coset_found: u64,
}

/// The cardinality `⌊(1/2 − ε)·2ⁿ⌋ + 1`, the least with density above `1/2 − ε`.
pub fn threshold_card(n: u32, epsilon: &BigRational) -> u64 {
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let scaled = (half - epsilon) * BigRational::from_integer(BigInt::from(1u64 << n));
    let k = scaled.floor().to_integer().to_u64().unwrap_or(0) + 1;
    k.min(1 << n)
}

/// `ε ≤ 1/(2⁹√n)`, checked as `ε²·2¹⁸·n ≤ 1`.
pub fn in_regime(n: u32, epsilon: &BigRational) -> bool {
    epsilon * epsilon * BigRational::from_integer(BigInt::from((1u64 << 18) * u64::from(n))) <= BigRational::one()
}

fn contained(aa: &DenseSet, hit: CosetHit) -> Result<bool> {
    let h = Subspace::perp(aa.n(), &[Character(hit.gamma)])?;
    Ok(h.as_set().translate(hit.rep).is_subset(aa)?)
}

pub fn scan(trial: u64, a: &DenseSet) -> Result<HyperplaneTrial> {
    let n = a.n();
    if n == 0 {
        return usage("hyperplane scan needs n >= 1");
    }
    let aa = a.sumset(a)?;
    let bad = aa.complement();
    let size = bad.card() as i64;
    let spectrum = Spectrum::of_set(&bad);
    let raw = spectrum.raw();
    let hyperplane = (1..1u32 << n).find(|&g| raw[g as usize] == -size);
    let coset = (1..1u32 << n).find_map(|g| match raw[g as usize] {
        r if r == -size => Some(CosetHit { gamma: g, rep: 0 }),
        r if r == size => Some(CosetHit {
            gamma: g,
            rep: 1 << g.trailing_zeros(),
        }),
        _ => None,
    });
    let mut confirmed = true;
    if let Some(g) = hyperplane {
        confirmed &= contained(&aa, CosetHit { gamma: g, rep: 0 })?;
    }
    if let Some(hit) = coset {
        confirmed &= contained(&aa, hit)?;
    }
    Ok(HyperplaneTrial {
        trial,
        card: a.card(),
        missing: bad.card(),
        hyperplane,
        coset,
        confirmed,
    })
}

pub fn run(config: &ExperimentConfig) -> Result<RunOutput> {
    let mut warnings = Vec::new();
    let (trials, regime_ok): (Vec<HyperplaneTrial>, bool) = match &config.input {
        Some(path) => (vec![scan(0, &read_set(path)?)?], false),
        None => {
            let n = require_n(config)?;
            if n > 24 {
                return Err(f2sum::Error::Capacity { n, max: 24 }.into());
            }
            let Some(epsilon) = &config.epsilon else {
                return usage("hyperplane-check needs --epsilon");
            };
            if *epsilon <= BigRational::from_integer(BigInt::from(0)) {
                return usage("--epsilon must be positive");
            }
            let regime = in_regime(n, epsilon);
            if !regime {
                warnings.push(format!(
                    "epsilon = {epsilon} exceeds 1/(2^9 sqrt({n})); results are observations only"
                ));
            }
            let k = threshold_card(n, epsilon);
            let trials = (0..config.trials)
                .into_par_iter()
                .map(|i| scan(i, &sample_exact(n, k, &mut trial_rng(config.seed, i))?))
                .collect::<Result<_>>()?;
            (trials, regime)
        }
    };
    let confirmed = trials.iter().all(|t| t.confirmed);
    let all_found = trials.iter().all(|t| t.hyperplane.is_some() && t.coset.is_some());
    let passed = confirmed && (all_found || !regime_ok);
    let summary = Summary {
        regime_ok,
        trials: trials.len() as u64,
        hyperplane_found: trials.iter().filter(|t| t.hyperplane.is_some()).count() as u64,
        coset_found: trials.iter().filter(|t| t.coset.is_some()).count() as u64,
    };
    let data = render(config, passed, summary, &trials, |t| Row {
        trial: t.trial,
        card: t.card,
        missing: t.missing,
        hyperplane: t.hyperplane,
        coset_gamma: t.coset.map(|c| c.gamma),
        coset_rep: t.coset.map(|c| c.rep),
    })?;
    Ok(RunOutput { data, passed, warnings })
}
