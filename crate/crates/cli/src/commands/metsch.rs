use f2sum::rng::partial_shuffle;
use f2sum::{metsch_bound, metsch_witness, DenseSet, MetschOutcome, Subspace};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::ExperimentConfig;
use crate::error::{usage, Result};
use crate::io::{read_set, render};
use crate::{require_n, trial_rng, RunOutput};

#[derive(Clone, Debug, Serialize)]
pub struct MetschTrial {
    pub trial: u64,
    pub size: u64,
    /// A `d`-dimensional subspace avoiding `S`, if one exists.
    pub witness: Option<Subspace>,
    /// The witness has dimension `d` and misses `S`.
    pub confirmed: bool,
}

#[derive(Serialize)]
struct Row {
    trial: u64,
    size: u64,
    found: bool,
    confirmed: bool,
    basis: String,
}

#[derive(Serialize)]
struct Summary {
    d: u32,
    bound: u64,
    below_bound: bool,
    found: u64,
}

/// `k` distinct nonzero vectors of F₂ⁿ, uniformly.
fn random_nonzero(n: u32, k: u64, seed: u64, trial: u64) -> Result<DenseSet> {
    let mut rng = trial_rng(seed, trial);
    let picks = partial_shuffle((1u64 << n) - 1, k, &mut rng);
    Ok(DenseSet::from_elements(n, picks.into_iter().map(|x| x as u32 + 1))?)
}

fn one(trial: u64, s: &DenseSet, d: u32) -> Result<MetschTrial> {
    let witness = match metsch_witness(s, d)? {
        MetschOutcome::Witness(v) => Some(v),
        MetschOutcome::Blocking => None,
    };
    let confirmed = match &witness {
        Some(v) => v.dim() == d && v.as_set().intersect(s)?.is_empty(),
        None => true,
    };
    Ok(MetschTrial {
        trial,
        size: s.card(),
        witness,
        confirmed,
    })
}

pub fn run(config: &ExperimentConfig) -> Result<RunOutput> {
    let Some(d) = config.d else {
        return usage("metsch needs --d");
    };
    let (trials, n): (Vec<MetschTrial>, u32) = match &config.input {
        Some(path) => {
            let s = read_set(path)?;
            (vec![one(0, &s, d)?], s.n())
        }
        None => {
            let n = require_n(config)?;
            let Some(k) = config.size else {
                return usage("metsch needs --size");
            };
            if k >= 1u64 << n {
                return usage(format!("--size must be below 2^{n}"));
            }
            let trials = (0..config.trials)
                .into_par_iter()
                .map(|i| one(i, &random_nonzero(n, k, config.seed, i)?, d))
                .collect::<Result<_>>()?;
            (trials, n)
        }
    };
    let bound = metsch_bound(n, d)?;
    let below_bound = trials.iter().all(|t| t.size < bound);
    let passed = trials
        .iter()
        .all(|t| t.confirmed && (t.witness.is_some() || !below_bound));
    let summary = Summary {
        d,
        bound,
        below_bound,
        found: trials.iter().filter(|t| t.witness.is_some()).count() as u64,
    };
    let data = render(config, passed, summary, &trials, |t| Row {
        trial: t.trial,
        size: t.size,
        found: t.witness.is_some(),
        confirmed: t.confirmed,
        basis: t
            .witness
            .as_ref()
            .map(|v| {
                v.basis()
                    .iter()
                    .map(|b| format!("{b:#x}"))
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .unwrap_or_default(),
    })?;
    Ok(RunOutput {
        data,
        passed,
        warnings: Vec::new(),
    })
}
