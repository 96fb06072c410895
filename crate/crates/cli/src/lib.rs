//! Driver for the `f2sum` experiments: set generation, theorem checks and
//! sweeps, with JSON or CSV output.
//!
//! Every command is a function of its [`ExperimentConfig`]. Trials run in
//! parallel, each from its own stream `SplitMix64::new(seed).fork(trial)`,
//! and are collected in trial order, so output does not depend on the
//! schedule.

pub mod commands;
pub mod config;
pub mod error;
pub mod io;

use f2sum::SplitMix64;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

pub use config::{CommandKind, ExperimentConfig, Format};
pub use error::{CliError, Result};

use error::usage;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunOutput {
    pub data: Vec<u8>,
    /// False if any asserted property failed.
    pub passed: bool,
    pub warnings: Vec<String>,
}

pub fn run(config: &ExperimentConfig) -> Result<RunOutput> {
    if config.trials == 0 {
        return usage("--trials must be positive");
    }
    match config.command {
        CommandKind::Find => commands::find::run(config),
        CommandKind::HyperplaneCheck => commands::hyperplane::run(config),
        CommandKind::Niveau => commands::niveau::run(config),
        CommandKind::Concentration => commands::concentration::run(config),
        CommandKind::Metsch => commands::metsch::run(config),
        CommandKind::QuestionSweep => commands::sweep::run(config),
        CommandKind::GenSet => commands::gen_set::run(config),
    }
}

pub(crate) fn trial_rng(seed: u64, trial: u64) -> SplitMix64 {
    SplitMix64::new(seed).fork(trial)
}

pub(crate) fn require_n(config: &ExperimentConfig) -> Result<u32> {
    match config.n {
        Some(n) if n <= f2sum::MAX_DIM => Ok(n),
        Some(n) => Err(f2sum::Error::Capacity { n, max: f2sum::MAX_DIM }.into()),
        None => usage(format!("{} needs --n", config.command.name())),
    }
}

/// `--size`, or `⌈α·2ⁿ⌉` from `--alpha`.
pub(crate) fn cardinality(config: &ExperimentConfig, n: u32) -> Result<u64> {
    let total = 1u64 << n;
    let k = match (config.size, &config.alpha) {
        (Some(k), _) => k,
        (None, Some(alpha)) => {
            let scaled = alpha * BigRational::from_integer(BigInt::from(total));
            scaled.ceil().to_integer().to_u64().unwrap_or(u64::MAX)
        }
        (None, None) => return usage("need --size or --alpha"),
    };
    if k == 0 || k > total {
        return usage(format!("cardinality {k} outside 1..={total}"));
    }
    Ok(k)
}
