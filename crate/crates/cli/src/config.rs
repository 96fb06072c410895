use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use f2sum::increment::ratio_string;
use f2sum::StoppingRule;
use num_rational::BigRational;
use serde::{Serialize, Serializer};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommandKind {
    Find,
    HyperplaneCheck,
    Niveau,
    Concentration,
    Metsch,
    QuestionSweep,
    GenSet,
}

impl CommandKind {
    /// The name accepted by `--command`.
    pub fn name(self) -> String {
        self.to_possible_value()
            .map(|v| v.get_name().to_owned())
            .unwrap_or_default()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    /// Binary set file; `gen-set` only.
    Bin,
}

fn parse_ratio(s: &str) -> Result<BigRational, String> {
    ratio_string::parse(s).map_err(|e| e.to_string())
}

fn opt_ratio<S: Serializer>(r: &Option<BigRational>, s: S) -> Result<S::Ok, S::Error> {
    match r {
        Some(r) => ratio_string::serialize(r, s),
        None => s.serialize_none(),
    }
}

fn display<S: Serializer>(r: &StoppingRule, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(r)
}

/// Everything one run depends on. Echoed into JSON reports (minus `--out`).
#[derive(Clone, Debug, Parser, Serialize)]
#[command(
    name = "f2sum",
    version,
    about = "Experiments on subspaces inside sumsets A + A over F2^n"
)]
pub struct ExperimentConfig {
    #[arg(long, value_enum)]
    pub command: CommandKind,
    #[arg(long)]
    pub n: Option<u32>,
    /// Target density as `p/q`; random sets get ⌈α·2ⁿ⌉ elements.
    #[arg(long, value_parser = parse_ratio)]
    #[serde(serialize_with = "opt_ratio")]
    pub alpha: Option<BigRational>,
    #[arg(long, value_parser = parse_ratio)]
    #[serde(serialize_with = "opt_ratio")]
    pub epsilon: Option<BigRational>,
    #[arg(long, default_value_t = 1)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// `plain` or `metsch:<d>`.
    #[arg(long, default_value = "plain")]
    #[serde(serialize_with = "display")]
    pub stopping: StoppingRule,
    /// Set file, JSON document or binary.
    #[arg(long = "in")]
    pub input: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Subspace dimension for `metsch`.
    #[arg(long)]
    pub d: Option<u32>,
    /// Exact cardinality of random sets; overrides `--alpha`.
    #[arg(long)]
    pub size: Option<u64>,
    /// Niveau threshold; used instead of `--epsilon`.
    #[arg(long)]
    pub w_star: Option<u32>,
    /// Largest codimension of the random subspaces probed by `niveau`.
    #[arg(long, default_value_t = 3)]
    pub max_codim: u32,
    /// Random bases per trial for `concentration`.
    #[arg(long, default_value_t = 20)]
    pub bases: u32,
    /// Values of C for `question-sweep`.
    #[arg(long, value_delimiter = ',', default_value = "0,0.25,0.5,1,2")]
    pub c_grid: Vec<f64>,
}
