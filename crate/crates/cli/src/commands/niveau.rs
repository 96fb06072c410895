use f2sum::niveau::{
    density_bounds_check, exact_density, low_zero_outcome, niveau_set, sumset_weight_bound_check, DensityBounds,
};
use f2sum::{weight, Character, DenseSet, NiveauParams, Subspace, WitnessOutcome};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::ExperimentConfig;
use crate::error::{usage, Result};
use crate::io::render;
use crate::{trial_rng, RunOutput};

/// Largest `n` at which `A + A` is computed exhaustively.
pub const EXHAUSTIVE_LIMIT: u32 = 18;

#[derive(Clone, Debug, Serialize)]
pub struct NiveauTrial {
    pub trial: u64,
    pub codim: u32,
    pub outcome: WitnessOutcome,
    /// For a non-member claim: the vector lies in `V` and outside `A + A`
    /// (`None` when `A + A` was not computed).
    pub confirmed: Option<bool>,
}

#[derive(Serialize)]
struct Row {
    trial: u64,
    codim: u32,
    vector: u32,
    zeros: u32,
    non_member: bool,
    confirmed: Option<bool>,
}

#[derive(Serialize)]
struct Summary {
    params: NiveauParams,
    /// Exact density as `p/q`.
    density: String,
    bounds: Option<DensityBounds>,
    /// `Some(true)` if every element of `A + A` has at least `n − 2w*` zeros.
    sumset_zero_bound: Option<bool>,
    sumset_min_zeros: Option<u32>,
    non_members: u64,
    inconclusive: u64,
    inconclusive_rate: f64,
}

fn params(config: &ExperimentConfig, n: u32) -> Result<NiveauParams> {
    Ok(match (config.w_star, &config.epsilon) {
        (Some(w), _) => NiveauParams::from_threshold(n, w)?,
        (None, Some(eps)) => NiveauParams::from_epsilon(n, eps.clone())?,
        (None, None) => return usage("niveau needs --w-star or --epsilon"),
    })
}

fn random_subspace(n: u32, max_codim: u32, seed: u64, trial: u64) -> Result<Subspace> {
    let mut rng = trial_rng(seed, trial);
    let c = 1 + rng.below(u64::from(max_codim)) as u32;
    let gammas: Vec<Character> = (0..c)
        .map(|_| Character(1 + rng.below((1u64 << n) - 1) as u32))
        .collect();
    Ok(Subspace::perp(n, &gammas)?)
}

pub fn run(config: &ExperimentConfig) -> Result<RunOutput> {
    // the density side works at any n; subspace trials need a dense group
    let Some(n) = config.n.filter(|&n| n >= 1) else {
        return usage("niveau needs --n >= 1");
    };
    let p = params(config, n)?;
    let mut warnings = Vec::new();
    let trial_count = if n <= f2sum::MAX_DIM {
        config.trials
    } else {
        warnings.push(format!("n = {n} exceeds {}; subspace trials skipped", f2sum::MAX_DIM));
        0
    };
    let max_codim = config.max_codim.min(n - 1);
    if max_codim == 0 && trial_count > 0 {
        return usage("--max-codim must be positive");
    }
    let aa: Option<DenseSet> = if n <= EXHAUSTIVE_LIMIT {
        let a = niveau_set(&p)?;
        Some(a.sumset(&a)?)
    } else {
        None
    };
    let trials: Vec<NiveauTrial> = (0..trial_count)
        .into_par_iter()
        .map(|i| {
            let v = random_subspace(n, max_codim, config.seed, i)?;
            let outcome = low_zero_outcome(&p, v.low_zero_vector()?);
            let confirmed = match (outcome, &aa) {
                (WitnessOutcome::NonMember { vector, .. }, Some(aa)) => {
                    Some(v.contains(vector) && !aa.contains(vector))
                }
                _ => None,
            };
            Ok(NiveauTrial {
                trial: i,
                codim: v.codim(),
                outcome,
                confirmed,
            })
        })
        .collect::<Result<_>>()?;

    let density = exact_density(n, p.w_star).to_rational();
    let bounds = match p.epsilon {
        Some(_) => Some(density_bounds_check(&p)?),
        None => None,
    };
    let sumset_zero_bound = aa
        .as_ref()
        .map(|aa| aa.iter().all(|x| sumset_weight_bound_check(&p, x)));
    let sumset_min_zeros = aa.as_ref().and_then(|aa| aa.iter().map(|x| n - weight(x)).min());
    let non_members = trials
        .iter()
        .filter(|t| matches!(t.outcome, WitnessOutcome::NonMember { .. }))
        .count() as u64;
    let inconclusive = trials.len() as u64 - non_members;
    let passed = sumset_zero_bound != Some(false)
        && bounds.as_ref().is_none_or(|b| b.holds || !b.regime_ok)
        && trials.iter().all(|t| t.confirmed != Some(false));
    let summary = Summary {
        params: p,
        density: density.to_string(),
        bounds,
        sumset_zero_bound,
        sumset_min_zeros,
        non_members,
        inconclusive,
        inconclusive_rate: if trials.is_empty() {
            0.0
        } else {
            inconclusive as f64 / trials.len() as f64
        },
    };
    let data = render(config, passed, summary, &trials, |t| {
        let (vector, zeros, non_member) = match t.outcome {
            WitnessOutcome::NonMember { vector, zeros } => (vector, zeros, true),
            WitnessOutcome::Inconclusive { vector, zeros } => (vector, zeros, false),
        };
        Row {
            trial: t.trial,
            codim: t.codim,
            vector,
            zeros,
            non_member,
            confirmed: t.confirmed,
        }
    })?;
    Ok(RunOutput { data, passed, warnings })
}
