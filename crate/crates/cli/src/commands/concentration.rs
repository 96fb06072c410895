use f2sum::concentration::{basis_concentration_check, expansion_containment, mcdiarmid_check, BasisSet};
use f2sum::rng::sample_exact;
use f2sum::DyadicRational;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::ExperimentConfig;
use crate::error::{usage, Result};
use crate::io::render;
use crate::{require_n, trial_rng, RunOutput};

#[derive(Clone, Debug, Serialize)]
pub struct ConcentrationTrial {
    pub trial: u64,
    pub card: u64,
    pub r: u32,
    /// Exact density of `Ham_r(A)`.
    pub lhs: DyadicRational,
    pub rhs: f64,
    pub holds: bool,
    pub bases: u32,
    pub bases_holding: u32,
    pub containment_holding: u32,
    /// Smallest `lhs − rhs` over the random bases.
    pub min_basis_margin: Option<f64>,
}

#[derive(Serialize)]
struct Row {
    trial: u64,
    card: u64,
    r: u32,
    lhs: f64,
    rhs: f64,
    holds: bool,
    bases: u32,
    bases_holding: u32,
    containment_holding: u32,
}

#[derive(Serialize)]
struct Summary {
    trials: u64,
    standard_holding: u64,
    basis_checks: u64,
    basis_holding: u64,
    containment_holding: u64,
}

fn one(n: u32, bases: u32, seed: u64, trial: u64) -> Result<ConcentrationTrial> {
    let mut rng = trial_rng(seed, trial);
    // log-uniform sizes, so that small sets with a nontrivial bound are common
    let scale = rng.below(u64::from(n));
    let k = 1 + rng.below(1u64 << scale);
    let r = rng.below(u64::from(n) + 1) as u32;
    let a = sample_exact(n, k, &mut rng)?;
    let std = mcdiarmid_check(&a, r)?;
    let mut bases_holding = 0;
    let mut containment_holding = 0;
    let mut min_basis_margin: Option<f64> = None;
    for _ in 0..bases {
        let e = BasisSet::random(n, &mut rng)?;
        let c = basis_concentration_check(&a, &e, r)?;
        bases_holding += u32::from(c.holds);
        containment_holding += u32::from(expansion_containment(&a, &e, r)?);
        let margin = c.lhs.to_f64() - c.rhs;
        min_basis_margin = Some(min_basis_margin.map_or(margin, |m| m.min(margin)));
    }
    Ok(ConcentrationTrial {
        trial,
        card: k,
        r,
        lhs: std.lhs,
        rhs: std.rhs,
        holds: std.holds,
        bases,
        bases_holding,
        containment_holding,
        min_basis_margin,
    })
}

pub fn run(config: &ExperimentConfig) -> Result<RunOutput> {
    let n = require_n(config)?;
    if n == 0 {
        return usage("concentration needs n >= 1");
    }
    let trials: Vec<ConcentrationTrial> = (0..config.trials)
        .into_par_iter()
        .map(|i| one(n, config.bases, config.seed, i))
        .collect::<Result<_>>()?;
    let summary = Summary {
        trials: trials.len() as u64,
        standard_holding: trials.iter().filter(|t| t.holds).count() as u64,
        basis_checks: trials.iter().map(|t| u64::from(t.bases)).sum(),
        basis_holding: trials.iter().map(|t| u64::from(t.bases_holding)).sum(),
        containment_holding: trials.iter().map(|t| u64::from(t.containment_holding)).sum(),
    };
    let passed = trials
        .iter()
        .all(|t| t.holds && t.bases_holding == t.bases && t.containment_holding == t.bases);
    let data = render(config, passed, summary, &trials, |t| Row {
        trial: t.trial,
        card: t.card,
        r: t.r,
        lhs: t.lhs.to_f64(),
        rhs: t.rhs,
        holds: t.holds,
        bases: t.bases,
        bases_holding: t.bases_holding,
        containment_holding: t.containment_holding,
    })?;
    Ok(RunOutput {
        data,
        passed,
        warnings: Vec::new(),
    })
}
