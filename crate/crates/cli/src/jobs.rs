//! One analysis per (spec, command) pair.

use gamma_lcm_core::foxh::Contour;
use gamma_lcm_core::monotonicity::{self, is_identity_ratio};
use gamma_lcm_core::verification::{self, ResidualReport};
use gamma_lcm_core::{Classification, DerivedInvariants, RatioSpec};
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{Command, JobConfig, NamedSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    /// Computation finished; every check in it passed.
    Ok,
    /// A check finished and failed.
    Failed,
    /// A numerical error stopped the computation.
    Error,
    /// The command's preconditions do not hold for this spec.
    NotApplicable,
}

/// Contents of `<spec>/<command>.report`.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub spec_name: String,
    pub command: Command,
    pub spec: RatioSpec,
    pub derived: DerivedInvariants,
    pub status: Status,
    /// Exploratory results never fail a run.
    pub exploratory: bool,
    pub tolerance_scale: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    pub result: Value,
}

/// A curve written next to the report.
#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    pub abscissa: &'static str,
    pub rows: Vec<[f64; 3]>,
}

#[derive(Debug)]
pub struct Outcome {
    pub report: Report,
    pub curve: Option<Curve>,
}

impl Outcome {
    pub fn counts_as_failure(&self) -> bool {
        matches!(self.report.status, Status::Failed | Status::Error)
    }
}

struct Partial {
    status: Status,
    reason: Option<String>,
    result: Value,
    curve: Option<Curve>,
}

impl Partial {
    fn not_applicable(reason: impl Into<String>) -> Self {
        Self { status: Status::NotApplicable, reason: Some(reason.into()), result: Value::Null, curve: None }
    }

    fn error(err: impl ToString) -> Self {
        Self { status: Status::Error, reason: Some(err.to_string()), result: Value::Null, curve: None }
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize to JSON")
}

fn status_of(passed: bool) -> Status {
    if passed {
        Status::Ok
    } else {
        Status::Failed
    }
}

fn residual_curve(abscissa: &'static str, r: &ResidualReport) -> Curve {
    let rows = r.sample_points.iter().zip(&r.lhs).zip(&r.error_estimates).map(|((&x, &v), &e)| [x, v, e]).collect();
    Curve { abscissa, rows }
}

pub fn run(job: &JobConfig, entry: &NamedSpec, command: Command) -> Outcome {
    let spec = &entry.spec;
    let p = match command {
        Command::Classify => classify(spec),
        Command::EvalH => eval_h(job, spec),
        Command::VerifyMeasure => verify_measure(job, spec),
        Command::Identities => identities(job, spec),
        Command::Zeros => zeros(job, spec),
        Command::McMoments => mc_moments(job, spec),
    };
    Outcome {
        report: Report {
            spec_name: entry.name.clone(),
            command,
            spec: spec.clone(),
            derived: spec.derive(),
            status: p.status,
            exploratory: command == Command::Zeros,
            tolerance_scale: job.tol_scale,
            reason: p.reason,
            result: p.result,
        },
        curve: p.curve,
    }
}

fn classify(spec: &RatioSpec) -> Partial {
    let verdict = monotonicity::classify(spec);
    let rows = monotonicity::q_sample_grid(monotonicity::DEFAULT_Q_GRID)
        .into_iter()
        .filter_map(|t| {
            let (v, m) = spec.eval_p_with_magnitude(-t.ln()).ok()?;
            Some([t, v, monotonicity::DEFAULT_Q_TOL * m.min(1.0)])
        })
        .collect();
    Partial { status: Status::Ok, reason: None, result: to_value(&verdict), curve: Some(Curve { abscissa: "t", rows }) }
}

fn eval_h(job: &JobConfig, spec: &RatioSpec) -> Partial {
    let contour = match Contour::new(spec, &job.contour) {
        Ok(c) => c,
        Err(e) => return Partial::not_applicable(e.to_string()),
    };
    let d = *contour.derived();
    let warnings = job.contour.validate(&d).unwrap_or_default();
    let grid = job.grids.eval_h.clone().unwrap_or_else(|| (1..=64).map(|k| d.rho * k as f64 / 65.0).collect());
    let mut rows = Vec::with_capacity(grid.len());
    let mut samples = Vec::with_capacity(grid.len());
    let mut skipped = Vec::new();
    for x in grid {
        match contour.eval(x) {
            Ok(h) => {
                rows.push([x, h.value, h.error_estimate]);
                samples.push(json!({"x": x, "evaluation": h}));
            }
            Err(gamma_lcm_core::Error::SingularPoint { .. }) => skipped.push(x),
            Err(e) => return Partial::error(format!("x = {x}: {e}")),
        }
    }
    Partial {
        status: Status::Ok,
        reason: None,
        result: json!({"contour": job.contour, "abscissa_c": contour.abscissa(), "warnings": warnings,
                       "samples": samples, "skipped_near_rho": skipped}),
        curve: Some(Curve { abscissa: "x", rows }),
    }
}

/// `None` when `H` has a density on `(0, ρ)`, otherwise why it does not.
fn measure_precondition(d: &DerivedInvariants) -> Option<String> {
    if !d.sums_equal() {
        Some(format!("sum A = {} differs from sum B = {}", d.sum_a, d.sum_b))
    } else if d.mu <= 0.0 {
        Some(format!("mu = {} is not positive", d.mu))
    } else if d.rho > 1.0 + 1e-12 {
        Some(format!("rho = {} exceeds 1", d.rho))
    } else {
        None
    }
}

fn verify_measure(job: &JobConfig, spec: &RatioSpec) -> Partial {
    let d = spec.derive();
    let identity = is_identity_ratio(spec);
    if !identity {
        if let Some(reason) = measure_precondition(&d) {
            return Partial::not_applicable(reason);
        }
    }
    let mut checks = Vec::new();
    let mut laplace = match verification::laplace_reconstruct(spec, &job.grids.laplace, &job.contour) {
        Ok(r) => r,
        Err(e) => return Partial::error(e),
    };
    laplace.scale_tolerance(job.tol_scale);
    let curve = residual_curve("x", &laplace);
    checks.push(laplace);
    match verification::laplace_reconstruct(spec, &job.grids.mellin, &job.contour) {
        Ok(mut r) => {
            r.check_id = "mellin_identity".into();
            r.scale_tolerance(job.tol_scale);
            checks.push(r);
        }
        Err(e) => return Partial::error(e),
    }
    let classification = monotonicity::classify(spec).classification;
    if classification == Classification::Lcm && !identity {
        match verification::h_positivity(spec, &job.contour, 64) {
            Ok(mut r) => {
                r.scale_tolerance(job.tol_scale);
                checks.push(r);
            }
            Err(e) => return Partial::error(e),
        }
    }
    let passed = checks.iter().all(|c| c.passed);
    Partial {
        status: status_of(passed),
        reason: None,
        result: json!({"classification": classification, "checks": checks}),
        curve: Some(curve),
    }
}

fn identities(job: &JobConfig, spec: &RatioSpec) -> Partial {
    let d = spec.derive();
    let mut checks = Vec::new();
    let mut skipped = Vec::new();
    let mut curve = None;
    let unit_scales = spec.p() == spec.q() && spec.num_scales().iter().chain(spec.den_scales()).all(|&k| k == 1.0);
    if !unit_scales {
        skipped.push("g_integral_equation: needs p = q and unit scales".to_string());
    } else if let Some(reason) = measure_precondition(&d) {
        skipped.push(format!("g_integral_equation: {reason}"));
    } else {
        match verification::g_integral_equation_residual(
            spec.num_shifts(),
            spec.den_shifts(),
            &job.grids.identity,
            &job.contour,
        ) {
            Ok(mut r) => {
                r.scale_tolerance(job.tol_scale);
                checks.push(r);
            }
            Err(e) => return Partial::error(e),
        }
    }
    if let Some(reason) = measure_precondition(&d) {
        skipped.push(format!("h_integral_identity: {reason}"));
    } else {
        let x: Vec<f64> = job.grids.identity.iter().map(|f| f * d.rho).collect();
        match verification::h_integral_identity_residual(spec, &x, &job.contour) {
            Ok(mut r) => {
                r.scale_tolerance(job.tol_scale);
                curve = Some(residual_curve("x", &r));
                checks.push(r);
            }
            Err(e) => return Partial::error(e),
        }
    }
    if checks.is_empty() {
        return Partial::not_applicable(skipped.join("; "));
    }
    if curve.is_none() {
        curve = Some(residual_curve("x", &checks[0]));
    }
    let passed = checks.iter().all(|c| c.passed);
    Partial { status: status_of(passed), reason: None, result: json!({"checks": checks, "skipped": skipped}), curve }
}

fn zeros(job: &JobConfig, spec: &RatioSpec) -> Partial {
    let n = job.grids.zero_grid_size;
    let report = match verification::count_zeros(spec, &job.contour, n) {
        Ok(r) => r,
        Err(e) => return Partial::error(e),
    };
    let rows = (1..n)
        .filter_map(|k| {
            let t = k as f64 / n as f64;
            let (v, m) = spec.eval_p_with_magnitude(-t.ln()).ok()?;
            Some([t, v, monotonicity::DEFAULT_Q_TOL * m.min(1.0)])
        })
        .collect();
    let flag = (!report.conjecture_consistent).then(|| "H has more sign changes than Q".to_string());
    Partial {
        status: Status::Ok,
        reason: flag,
        result: json!({"grid_size": n, "counts": report}),
        curve: Some(Curve { abscissa: "t", rows }),
    }
}

/// With `A = B` and `b > a`, `W(x)/W(1)` is `E u^{x−1}` for
/// `u = ∏ζₖ^{Aₖ}`, `ζₖ ~ Beta(aₖ + Aₖ, bₖ − aₖ)`.
fn mc_moments(job: &JobConfig, spec: &RatioSpec) -> Partial {
    if spec.num_scales() != spec.den_scales() {
        return Partial::not_applicable("needs A = B factor by factor");
    }
    if spec.num_shifts().iter().zip(spec.den_shifts()).any(|(a, b)| b <= a) {
        return Partial::not_applicable("needs b_k > a_k for every factor");
    }
    let scales = spec.num_scales();
    let alphas: Vec<f64> = spec.num_shifts().iter().zip(scales).map(|(a, k)| a + k).collect();
    let betas: Vec<f64> = spec.num_shifts().iter().zip(spec.den_shifts()).map(|(a, b)| b - a).collect();
    let mut r =
        match verification::mc_beta_moments(&alphas, &betas, scales, &job.grids.mc, job.grids.mc_samples, job.seed) {
            Ok(r) => r,
            Err(e) => return Partial::error(e),
        };
    r.scale_tolerance(job.tol_scale);
    // the exact moments must be the normalised gamma ratio
    let w1 = spec.eval_w(1.0);
    let consistency: Vec<Option<f64>> = job
        .grids
        .mc
        .iter()
        .zip(&r.rhs)
        .map(|(&x, &exact)| match (spec.eval_w(x), &w1) {
            (Ok(w), Ok(w1)) => Some(((w / w1 - exact) / exact).abs()),
            _ => None,
        })
        .collect();
    Partial {
        status: status_of(r.passed),
        reason: None,
        result: json!({"alphas": alphas, "betas": betas, "samples": job.grids.mc_samples, "seed": job.seed,
                       "check": r, "gamma_ratio_relative_difference": consistency}),
        curve: Some(Curve { abscissa: "x", rows: residual_curve("x", &r).rows }),
    }
}
