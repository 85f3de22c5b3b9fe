//! Batch front end for `gamma-lcm-core`.
//!
//! A run reads a JSON job file, evaluates every (spec, command) pair in
//! parallel and writes `<output>/<spec>/<command>.report` (JSON) plus, where
//! the command produces a curve, `<output>/<spec>/<command>.csv`. Wall-clock
//! data goes only to `<output>/metadata.json`, so reports are reproducible
//! byte for byte.

pub mod config;
pub mod jobs;

use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use rayon::prelude::*;
use serde::Serialize;

use config::{Command, JobConfig};
use jobs::{Curve, Outcome};

pub const EXIT_OK: u8 = 0;
pub const EXIT_INPUT: u8 = 1;
pub const EXIT_CHECK: u8 = 2;

#[derive(Debug, thiserror::Error)]
pub enum InputError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("malformed config: {0}")]
    Parse(String),
    #[error("invalid config: {0}")]
    Invalid(String),
}

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error(transparent)]
    Input(#[from] InputError),
    #[error("cannot write {path}: {source}")]
    Output { path: PathBuf, source: io::Error },
}

impl RunError {
    /// An unwritable output location is treated like bad input.
    pub fn exit_code(&self) -> u8 {
        EXIT_INPUT
    }
}

/// Summary of a finished run.
#[derive(Debug)]
pub struct RunSummary {
    pub outcomes: Vec<Outcome>,
    pub exit_code: u8,
}

#[derive(Serialize)]
struct Metadata<'a> {
    tool: &'static str,
    version: &'static str,
    generated_unix_seconds: u64,
    config: &'a Path,
    seed: u64,
    tolerance_scale: f64,
    commands: Vec<Command>,
    specs: Vec<&'a str>,
    exit_code: u8,
    failures: Vec<String>,
}

fn write(path: &Path, bytes: &[u8]) -> Result<(), RunError> {
    fs::write(path, bytes).map_err(|source| RunError::Output { path: path.to_owned(), source })
}

/// Numbers use Rust's shortest round-trip formatting.
fn curve_csv(curve: &Curve) -> Result<Vec<u8>, csv::Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([curve.abscissa, "value", "error_estimate"])?;
    for row in &curve.rows {
        w.write_record(row.iter().map(|v| format!("{v:?}")))?;
    }
    w.into_inner().map_err(|e| csv::Error::from(e.into_error()))
}

/// Runs every (spec, command) pair of `job` and writes the artifacts.
pub fn execute(job: &JobConfig, config_path: &Path) -> Result<RunSummary, RunError> {
    let pairs: Vec<(usize, Command)> =
        (0..job.specs.len()).flat_map(|i| job.commands.iter().map(move |&c| (i, c))).collect();
    let outcomes: Vec<Outcome> = pairs.par_iter().map(|&(i, c)| jobs::run(job, &job.specs[i], c)).collect();

    let mk =
        |path: &Path| fs::create_dir_all(path).map_err(|source| RunError::Output { path: path.to_owned(), source });
    mk(&job.output_dir)?;
    let mut failures = Vec::new();
    for o in &outcomes {
        let dir = job.output_dir.join(&o.report.spec_name);
        mk(&dir)?;
        let name = o.report.command.as_str();
        let mut text = serde_json::to_string_pretty(&o.report).expect("reports serialize to JSON");
        text.push('\n');
        write(&dir.join(format!("{name}.report")), text.as_bytes())?;
        if let Some(curve) = &o.curve {
            let path = dir.join(format!("{name}.csv"));
            let bytes =
                curve_csv(curve).map_err(|e| RunError::Output { path: path.clone(), source: io::Error::other(e) })?;
            write(&path, &bytes)?;
        }
        if o.counts_as_failure() {
            failures.push(format!("{}/{}", o.report.spec_name, name));
        }
    }
    let exit_code = if failures.is_empty() { EXIT_OK } else { EXIT_CHECK };
    let meta = Metadata {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        generated_unix_seconds: SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0),
        config: config_path,
        seed: job.seed,
        tolerance_scale: job.tol_scale,
        commands: job.commands.clone(),
        specs: job.specs.iter().map(|s| s.name.as_str()).collect(),
        exit_code,
        failures,
    };
    let mut text = serde_json::to_string_pretty(&meta).expect("metadata serializes to JSON");
    text.push('\n');
    write(&job.output_dir.join("metadata.json"), text.as_bytes())?;
    Ok(RunSummary { outcomes, exit_code })
}
