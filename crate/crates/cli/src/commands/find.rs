use f2sum::rng::sample_exact;
use f2sum::{find_subspace, verify_report, DenseSet, FinderReport, StoppingRule};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::ExperimentConfig;
use crate::error::Result;
use crate::io::{read_set, render};
use crate::{cardinality, require_n, trial_rng, RunOutput};

#[derive(Serialize)]
pub struct FindTrial {
    pub trial: u64,
    pub card: u64,
    /// Independent replay of the report.
    pub replay_ok: bool,
    pub diagnostics: Vec<String>,
    pub report: FinderReport,
}

#[derive(Serialize)]
struct Row {
    trial: u64,
    n: u32,
    alpha: String,
    card: u64,
    steps: usize,
    achieved_codim: u32,
    theorem_bound: u32,
    verified: bool,
}

#[derive(Serialize)]
struct Summary {
    trials: u64,
    verified: u64,
    max_codim: u32,
    passing: u64,
}

fn one(trial: u64, a: &DenseSet, stopping: StoppingRule) -> Result<FindTrial> {
    let report = find_subspace(a, stopping)?;
    let v = verify_report(a, &report);
    Ok(FindTrial {
        trial,
        card: a.card(),
        replay_ok: v.ok,
        diagnostics: v.diagnostics,
        report,
    })
}

pub fn run(config: &ExperimentConfig) -> Result<RunOutput> {
    let trials: Vec<FindTrial> = match &config.input {
        Some(path) => vec![one(0, &read_set(path)?, config.stopping)?],
        None => {
            let n = require_n(config)?;
            let k = cardinality(config, n)?;
            (0..config.trials)
                .into_par_iter()
                .map(|i| one(i, &sample_exact(n, k, &mut trial_rng(config.seed, i))?, config.stopping))
                .collect::<Result<_>>()?
        }
    };
    let ok = |t: &FindTrial| {
        // under the Metsch rule the bound counts steps, not codimension
        let bounded = match config.stopping {
            StoppingRule::Plain => t.report.achieved_codim <= t.report.theorem_bound,
            StoppingRule::Metsch(_) => t.report.steps.len() as u32 <= t.report.theorem_bound,
        };
        t.replay_ok && t.report.verified && bounded
    };
    let summary = Summary {
        trials: trials.len() as u64,
        verified: trials.iter().filter(|t| t.replay_ok && t.report.verified).count() as u64,
        max_codim: trials.iter().map(|t| t.report.achieved_codim).max().unwrap_or(0),
        passing: trials.iter().filter(|t| ok(t)).count() as u64,
    };
    let passed = trials.iter().all(ok);
    let data = render(config, passed, summary, &trials, |t| Row {
        trial: t.trial,
        n: t.report.n,
        alpha: t.report.alpha.to_rational().to_string(),
        card: t.card,
        steps: t.report.steps.len(),
        achieved_codim: t.report.achieved_codim,
        theorem_bound: t.report.theorem_bound,
        verified: t.replay_ok && t.report.verified,
    })?;
    Ok(RunOutput {
        data,
        passed,
        warnings: Vec::new(),
    })
}
