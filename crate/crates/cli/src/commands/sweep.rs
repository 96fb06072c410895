//! Empirical data on the open question: for `α > 1/2 − C/√n`, how small is
//! the least codimension of a subspace inside `A + A`? No assertion is made.

use f2sum::max_subspace_in;
use f2sum::rng::sample_exact;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::ExperimentConfig;
use crate::error::{usage, Result};
use crate::io::render;
use crate::{require_n, RunOutput};

/// Largest `n` for the exhaustive oracle.
pub const SWEEP_LIMIT: u32 = 14;

#[derive(Clone, Debug, Serialize)]
pub struct SweepRow {
    pub n: u32,
    #[serde(rename = "C")]
    pub c: f64,
    pub trial: u64,
    pub alpha: String,
    pub achieved_codim: u32,
}

/// `⌊(1/2 − C/√n)·2ⁿ⌋ + 1`, clamped to `[1, 2ⁿ]`.
pub fn sweep_card(n: u32, c: f64) -> u64 {
    let total = (1u64 << n) as f64;
    let k = ((0.5 - c / f64::from(n).sqrt()) * total).floor().max(0.0) as u64 + 1;
    k.min(1 << n)
}

pub fn run(config: &ExperimentConfig) -> Result<RunOutput> {
    let n = require_n(config)?;
    if n > SWEEP_LIMIT {
        return Err(f2sum::Error::Capacity { n, max: SWEEP_LIMIT }.into());
    }
    if n == 0 || config.c_grid.iter().any(|c| !c.is_finite() || *c < 0.0) {
        return usage("question-sweep needs n >= 1 and finite C >= 0");
    }
    let jobs: Vec<(u64, f64, u64)> = config
        .c_grid
        .iter()
        .enumerate()
        .flat_map(|(ci, &c)| (0..config.trials).map(move |t| (ci as u64, c, t)))
        .collect();
    let rows: Vec<SweepRow> = jobs
        .into_par_iter()
        .map(|(ci, c, t)| {
            let mut rng = f2sum::SplitMix64::new(config.seed).fork(ci).fork(t);
            let a = sample_exact(n, sweep_card(n, c), &mut rng)?;
            let v = max_subspace_in(&a.sumset(&a)?)?;
            Ok(SweepRow {
                n,
                c,
                trial: t,
                alpha: a.density().to_rational().to_string(),
                achieved_codim: v.codim(),
            })
        })
        .collect::<Result<_>>()?;
    let data = render(config, true, (), &rows, |r| r.clone())?;
    Ok(RunOutput {
        data,
        passed: true,
        warnings: Vec::new(),
    })
}
