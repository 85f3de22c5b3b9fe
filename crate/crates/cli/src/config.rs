//! Job configuration: parsing, defaults and validation.

use std::collections::HashSet;
use std::fmt;
use std::path::{Path, PathBuf};

use gamma_lcm_core::{ContourConfig, RatioSpec};
use serde::{Deserialize, Serialize};

use crate::InputError;

pub const DEFAULT_OUTPUT: &str = "gamma-lcm-out";
pub const DEFAULT_MC_SAMPLES: usize = 100_000;
pub const DEFAULT_ZERO_GRID: usize = 128;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Classify,
    EvalH,
    VerifyMeasure,
    Identities,
    Zeros,
    McMoments,
}

impl Command {
    pub fn as_str(self) -> &'static str {
        match self {
            Command::Classify => "classify",
            Command::EvalH => "eval-h",
            Command::VerifyMeasure => "verify-measure",
            Command::Identities => "identities",
            Command::Zeros => "zeros",
            Command::McMoments => "mc-moments",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A spec as written in the config file.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecEntry {
    pub name: String,
    #[serde(rename = "A")]
    pub num_scales: Vec<f64>,
    #[serde(rename = "a")]
    pub num_shifts: Vec<f64>,
    #[serde(rename = "B")]
    pub den_scales: Vec<f64>,
    #[serde(rename = "b")]
    pub den_shifts: Vec<f64>,
}

/// Partial [`ContourConfig`]; unset fields keep their defaults.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContourOverrides {
    pub abscissa_c: Option<f64>,
    pub truncation_t: Option<f64>,
    pub quad_rel_tol: Option<f64>,
    pub max_nodes: Option<usize>,
}

impl ContourOverrides {
    pub fn apply(&self) -> ContourConfig {
        let d = ContourConfig::default();
        ContourConfig {
            abscissa_c: self.abscissa_c.or(d.abscissa_c),
            truncation_t: self.truncation_t.unwrap_or(d.truncation_t),
            quad_rel_tol: self.quad_rel_tol.unwrap_or(d.quad_rel_tol),
            max_nodes: self.max_nodes.unwrap_or(d.max_nodes),
        }
    }
}

/// Sample grids. `eval_h` is absolute, `identity` is given as fractions of ρ.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub eval_h: Option<Vec<f64>>,
    pub laplace: Option<Vec<f64>>,
    pub mellin: Option<Vec<f64>>,
    pub identity: Option<Vec<f64>>,
    pub mc: Option<Vec<f64>>,
    pub zero_grid_size: Option<usize>,
    pub mc_samples: Option<usize>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    pub specs: Vec<SpecEntry>,
    #[serde(default)]
    pub commands: Vec<Command>,
    #[serde(default)]
    pub contour: ContourOverrides,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub grids: GridConfig,
    pub output_dir: Option<PathBuf>,
}

/// Resolved grids with defaults filled in.
#[derive(Debug, Clone, Serialize)]
pub struct Grids {
    /// `None` means ρ-relative points inside the support.
    pub eval_h: Option<Vec<f64>>,
    pub laplace: Vec<f64>,
    pub mellin: Vec<f64>,
    pub identity: Vec<f64>,
    pub mc: Vec<f64>,
    pub zero_grid_size: usize,
    pub mc_samples: usize,
}

#[derive(Debug, Clone)]
pub struct NamedSpec {
    pub name: String,
    pub spec: RatioSpec,
}

/// A validated job.
#[derive(Debug, Clone)]
pub struct JobConfig {
    pub specs: Vec<NamedSpec>,
    pub commands: Vec<Command>,
    pub contour: ContourConfig,
    pub seed: u64,
    pub grids: Grids,
    pub output_dir: PathBuf,
    pub tol_scale: f64,
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub output: Option<PathBuf>,
    pub seed: Option<u64>,
    pub tol_scale: Option<f64>,
    pub commands: Vec<Command>,
}

pub fn load(path: &Path, overrides: &Overrides) -> Result<JobConfig, InputError> {
    let text = std::fs::read_to_string(path).map_err(|source| InputError::Io { path: path.to_owned(), source })?;
    parse(&text, path, overrides)
}

pub fn parse(text: &str, path: &Path, overrides: &Overrides) -> Result<JobConfig, InputError> {
    let raw: RawConfig = serde_json::from_str(text)
        .map_err(|e| InputError::Parse(format!("{}:{}:{}: {e}", path.display(), e.line(), e.column())))?;
    validate(raw, overrides)
}

fn invalid(msg: impl Into<String>) -> InputError {
    InputError::Invalid(msg.into())
}

fn check_grid(name: &str, grid: &[f64], lo: f64, hi: f64) -> Result<(), InputError> {
    if grid.is_empty() {
        return Err(invalid(format!("grids.{name} is empty")));
    }
    for (i, &x) in grid.iter().enumerate() {
        if !(x.is_finite() && x > lo && x < hi) {
            return Err(invalid(format!("grids.{name}[{i}] = {x} is outside ({lo}, {hi})")));
        }
    }
    if let Some(i) = grid.windows(2).position(|w| w[0] >= w[1]) {
        return Err(invalid(format!("grids.{name} is not strictly increasing at index {}", i + 1)));
    }
    Ok(())
}

fn valid_name(name: &str) -> bool {
    !name.is_empty()
        && !name.starts_with('.')
        && name.chars().all(|c| c.is_ascii_alphanumeric() || matches!(c, '-' | '_' | '.'))
}

pub fn validate(raw: RawConfig, overrides: &Overrides) -> Result<JobConfig, InputError> {
    if raw.specs.is_empty() {
        return Err(invalid("specs: at least one spec is required"));
    }
    let mut seen = HashSet::new();
    let mut specs = Vec::with_capacity(raw.specs.len());
    for (i, e) in raw.specs.into_iter().enumerate() {
        if !valid_name(&e.name) {
            return Err(invalid(format!(
                "specs[{i}].name {:?} must be nonempty, use only [A-Za-z0-9._-] and not start with '.'",
                e.name
            )));
        }
        if !seen.insert(e.name.clone()) {
            return Err(invalid(format!("specs[{i}].name {:?} is duplicated", e.name)));
        }
        let spec = RatioSpec::new(e.num_scales, e.num_shifts, e.den_scales, e.den_shifts)
            .and_then(|s| s.check_supported_box().map(|_| s))
            .map_err(|err| invalid(format!("specs[{i}] ({}): {err}", e.name)))?;
        specs.push(NamedSpec { name: e.name, spec });
    }

    let mut commands = if overrides.commands.is_empty() { raw.commands } else { overrides.commands.clone() };
    let mut unique = HashSet::new();
    commands.retain(|c| unique.insert(*c));
    if commands.is_empty() {
        return Err(invalid("commands: at least one command is required (in the config or via --command)"));
    }

    let contour = raw.contour.apply();
    if !(contour.quad_rel_tol >= 1e-14 && contour.quad_rel_tol <= 1e-3) {
        return Err(invalid(format!("contour.quad_rel_tol = {} is outside [1e-14, 1e-3]", contour.quad_rel_tol)));
    }
    if !(contour.truncation_t >= 10.0 && contour.truncation_t.is_finite()) {
        return Err(invalid(format!("contour.truncation_t = {} must be at least 10", contour.truncation_t)));
    }
    if contour.max_nodes < 1000 {
        return Err(invalid(format!("contour.max_nodes = {} must be at least 1000", contour.max_nodes)));
    }
    for s in &specs {
        if let Err(err) = contour.validate(&s.spec.derive()) {
            return Err(invalid(format!("contour for spec {}: {err}", s.name)));
        }
    }

    let g = raw.grids;
    let grids = Grids {
        eval_h: g.eval_h,
        laplace: g.laplace.unwrap_or_else(|| vec![0.5, 1.0, 2.0, 4.0]),
        mellin: g.mellin.unwrap_or_else(|| vec![1.0, 2.0, 3.0]),
        identity: g.identity.unwrap_or_else(|| vec![0.25, 0.5, 0.75]),
        mc: g.mc.unwrap_or_else(|| vec![1.5, 2.0, 3.0]),
        zero_grid_size: g.zero_grid_size.unwrap_or(DEFAULT_ZERO_GRID),
        mc_samples: g.mc_samples.unwrap_or(DEFAULT_MC_SAMPLES),
    };
    if let Some(x) = &grids.eval_h {
        check_grid("eval_h", x, 0.0, f64::INFINITY)?;
    }
    check_grid("laplace", &grids.laplace, 0.0, f64::INFINITY)?;
    check_grid("mellin", &grids.mellin, 0.0, f64::INFINITY)?;
    check_grid("identity", &grids.identity, 0.0, 1.0)?;
    check_grid("mc", &grids.mc, 0.0, f64::INFINITY)?;
    if !(4..=1 << 16).contains(&grids.zero_grid_size) {
        return Err(invalid(format!("grids.zero_grid_size = {} is outside [4, 65536]", grids.zero_grid_size)));
    }
    if grids.mc_samples < gamma_lcm_core::verification::MIN_MC_SAMPLES {
        return Err(invalid(format!(
            "grids.mc_samples = {} is below {}",
            grids.mc_samples,
            gamma_lcm_core::verification::MIN_MC_SAMPLES
        )));
    }

    let tol_scale = overrides.tol_scale.unwrap_or(1.0);
    if !(tol_scale > 0.0 && tol_scale.is_finite()) {
        return Err(invalid(format!("--tol-scale = {tol_scale} must be positive and finite")));
    }

    Ok(JobConfig {
        specs,
        commands,
        contour,
        seed: overrides.seed.unwrap_or(raw.seed),
        grids,
        output_dir: overrides.output.clone().or(raw.output_dir).unwrap_or_else(|| PathBuf::from(DEFAULT_OUTPUT)),
        tol_scale,
    })
}
