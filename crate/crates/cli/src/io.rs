use std::fs;
use std::path::Path;

use f2sum::set::{SetDocument, BINARY_MAGIC};
use f2sum::DenseSet;
use serde::Serialize;

use crate::config::{ExperimentConfig, Format};
use crate::error::{usage, CliError, Result};

/// Reads a set file, binary if it starts with the magic bytes, JSON otherwise.
pub fn read_set(path: &Path) -> Result<DenseSet> {
    let bytes = fs::read(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })?;
    if bytes.starts_with(BINARY_MAGIC) {
        return Ok(DenseSet::from_bytes(&bytes)?);
    }
    let doc: SetDocument = serde_json::from_slice(&bytes)?;
    Ok(DenseSet::from_document(&doc)?)
}

#[derive(Serialize)]
struct Report<'a, S, T> {
    config: &'a ExperimentConfig,
    passed: bool,
    summary: S,
    trials: &'a [T],
}

/// Renders a report as pretty JSON, or the rows as CSV with a header line.
pub(crate) fn render<S, T, R>(
    config: &ExperimentConfig,
    passed: bool,
    summary: S,
    trials: &[T],
    row: impl Fn(&T) -> R,
) -> Result<Vec<u8>>
where
    S: Serialize,
    T: Serialize,
    R: Serialize,
{
    match config.format {
        Format::Json => {
            let mut out = serde_json::to_vec_pretty(&Report {
                config,
                passed,
                summary,
                trials,
            })?;
            out.push(b'\n');
            Ok(out)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for t in trials {
                w.serialize(row(t))?;
            }
            w.into_inner().map_err(|e| CliError::Usage(e.to_string()))
        }
        Format::Bin => usage("--format bin only applies to gen-set"),
    }
}
