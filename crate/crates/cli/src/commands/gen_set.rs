use f2sum::rng::sample_exact;
use serde::Serialize;

use crate::config::{ExperimentConfig, Format};
use crate::error::Result;
use crate::{cardinality, require_n, trial_rng, RunOutput};

#[derive(Serialize)]
struct Row {
    element: u32,
}

/// The set `find` would draw as trial 0 with the same seed.
pub fn run(config: &ExperimentConfig) -> Result<RunOutput> {
    let n = require_n(config)?;
    let k = cardinality(config, n)?;
    let a = sample_exact(n, k, &mut trial_rng(config.seed, 0))?;
    let data = match config.format {
        Format::Bin => a.to_bytes(),
        Format::Json => {
            let mut out = serde_json::to_vec(&a.to_document())?;
            out.push(b'\n');
            out
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for element in a.iter() {
                w.serialize(Row { element })?;
            }
            w.into_inner().map_err(|e| crate::CliError::Usage(e.to_string()))?
        }
    };
    Ok(RunOutput {
        data,
        passed: true,
        warnings: Vec::new(),
    })
}
