//! Independent cross-checks of the representation `W(x) = ∫ e^{−tx} H(e^{−t}) dt`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use rand_chacha::ChaCha8Rng;
use rand_core::SeedableRng;
use rand_distr::{Distribution, Gamma};

use crate::error::{Error, Result};
use crate::foxh::{self, Contour, ContourConfig};
use crate::math::binomial;
use crate::monotonicity::{is_identity_ratio, DEFAULT_Q_TOL};
use crate::ratio::RatioSpec;
use crate::specfun;

pub const LAPLACE_TOL: f64 = 1e-6;
pub const G_IDENTITY_TOL: f64 = 1e-7;
pub const H_IDENTITY_TOL: f64 = 1e-5;
pub const CM_PROBE_SLACK: f64 = 1e-6;
pub const MC_SIGMAS: f64 = 5.0;
pub const MAX_PROBE_ORDER: usize = 8;
pub const MIN_MC_SAMPLES: usize = 10_000;
/// Final bracket width for zero counting.
pub const ZERO_BRACKET_WIDTH: f64 = 1e-8;

/// Residuals of one check over a set of sample points.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ResidualReport {
    pub check_id: String,
    pub sample_points: Vec<f64>,
    /// Computed side of the identity at each sample point.
    pub lhs: Vec<f64>,
    /// Reference side of the identity at each sample point.
    pub rhs: Vec<f64>,
    /// Error estimate attached to `lhs` (quadrature error, standard error, ...).
    pub error_estimates: Vec<f64>,
    pub residuals: Vec<f64>,
    pub max_residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl ResidualReport {
    fn new(check_id: &str, tolerance: f64) -> Self {
        Self {
            check_id: String::from(check_id),
            sample_points: Vec::new(),
            lhs: Vec::new(),
            rhs: Vec::new(),
            error_estimates: Vec::new(),
            residuals: Vec::new(),
            max_residual: 0.0,
            tolerance,
            passed: true,
        }
    }

    fn push(&mut self, x: f64, lhs: f64, rhs: f64, error: f64, residual: f64) {
        self.sample_points.push(x);
        self.lhs.push(lhs);
        self.rhs.push(rhs);
        self.error_estimates.push(error);
        self.residuals.push(residual);
        // NaN residuals must fail the check, so compare by negation
        if !(residual <= self.max_residual) {
            self.max_residual = residual;
        }
        self.passed = self.max_residual <= self.tolerance;
    }

    /// Multiplies the tolerance by `factor` and re-evaluates `passed`.
    pub fn scale_tolerance(&mut self, factor: f64) {
        self.tolerance *= factor;
        self.passed = self.max_residual <= self.tolerance;
    }
}

/// Relative residual when the reference is safely away from zero, absolute otherwise.
fn residual(lhs: f64, rhs: f64, floor: f64) -> f64 {
    let d = (lhs - rhs).abs();
    if rhs.abs() > floor {
        d / rhs.abs()
    } else {
        d
    }
}

/// Rebuilds `W(x)` as `∫₀^ρ u^{x−1}H(u)du` and compares it with the gamma product.
///
/// When numerator and denominator coincide the representing measure is the
/// unit mass at `t = 0` and the reconstruction is exactly 1.
pub fn laplace_reconstruct(spec: &RatioSpec, x_grid: &[f64], cfg: &ContourConfig) -> Result<ResidualReport> {
    let mut report = ResidualReport::new("laplace_reconstruct", LAPLACE_TOL);
    if is_identity_ratio(spec) {
        for &x in x_grid {
            let w = spec.eval_w(x)?;
            report.push(x, 1.0, w, 0.0, residual(1.0, w, 0.0));
        }
        return Ok(report);
    }
    let contour = Contour::new(spec, cfg)?;
    for &x in x_grid {
        let m = foxh::mellin_with(&contour, spec, x)?;
        report.push(x, m.lhs, m.rhs, m.lhs_error, residual(m.lhs, m.rhs, 0.0));
    }
    Ok(report)
}

/// `log(1/x)·G(x) = ∫_x^1 G(t) Σ((x/t)^{aₖ} − (x/t)^{bₖ}) dt/(t−x)`.
pub fn g_integral_equation_residual(
    a: &[f64],
    b: &[f64],
    x_grid: &[f64],
    cfg: &ContourConfig,
) -> Result<ResidualReport> {
    if a.len() != b.len() {
        return Err(Error::Domain(format!("a has {} entries but b has {}", a.len(), b.len())));
    }
    let spec = RatioSpec::unweighted(a, b)?;
    let contour = Contour::new(&spec, cfg)?;
    let drift: f64 = b.iter().zip(a).map(|(bk, ak)| bk - ak).sum();
    let mut report = ResidualReport::new("g_integral_equation", G_IDENTITY_TOL);
    for &x in x_grid {
        if !(x > 0.0 && x < 1.0) {
            return Err(Error::Domain(format!("x must lie in (0, 1), got {x}")));
        }
        let g = contour.eval(x)?;
        let lambda = -x.ln();
        let lhs = lambda * g.value;
        // with t = e^{−τ} and d = λ − τ: t − x = x·(e^d − 1), (x/t)^a = e^{−a d}
        let kernel = |d: f64| -> f64 {
            if d <= 0.0 {
                return drift / x;
            }
            let num: f64 = a.iter().zip(b).map(|(ak, bk)| (-ak * d).exp_m1() - (-bk * d).exp_m1()).sum();
            num / (x * d.exp_m1())
        };
        let weight = |tau: f64| -> Result<f64> { Ok((-tau).exp() * kernel(lambda - tau)) };
        let r = contour.integrate_tau(lambda, contour.abscissa(), lhs.abs().max(1e-300), &weight)?;
        report.push(x, r.value, lhs, r.error, residual(r.value, lhs, 1e-8));
    }
    Ok(report)
}

/// `H(x)·log(ρ/x) = ∫_{x/ρ}^1 H(x/u) Q(u) du/u`.
pub fn h_integral_identity_residual(spec: &RatioSpec, x_grid: &[f64], cfg: &ContourConfig) -> Result<ResidualReport> {
    let contour = Contour::new(spec, cfg)?;
    let d = *contour.derived();
    if d.rho > 1.0 + 1e-12 {
        return Err(Error::Domain(format!("the H identity needs rho <= 1, got {}", d.rho)));
    }
    let mut report = ResidualReport::new("h_integral_identity", H_IDENTITY_TOL);
    for &x in x_grid {
        if !(x > 0.0 && x < d.rho) {
            return Err(Error::Domain(format!("x must lie in (0, rho = {}), got {x}", d.rho)));
        }
        let h = contour.eval(x)?;
        let lambda = d.log_rho - x.ln();
        // u = (x/ρ)e^{τ}: x/u = ρe^{−τ}, du/u = dτ, Q(u) = P(λ − τ)
        let weight = |tau: f64| -> Result<f64> { spec.eval_p((lambda - tau).max(f64::MIN_POSITIVE)) };
        let r = contour.integrate_tau(lambda, contour.abscissa(), (h.value * lambda).abs().max(1e-300), &weight)?;
        let rhs = r.value / lambda;
        report.push(x, rhs, h.value, r.error / lambda + h.error_estimate, residual(rhs, h.value, 1e-8));
    }
    Ok(report)
}

/// Forward-difference probe of complete monotonicity of `W` at `x0`.
///
/// Sample points are the orders `n`; `lhs` holds `(−1)ⁿΔⁿW(x0)/hⁿ` and the
/// residual is the sign deficit `−(−1)ⁿΔⁿW(x0)/W(x0)`, so the check passes
/// when every residual is at most `10⁻⁶`.
pub fn cm_probe(spec: &RatioSpec, x0: f64, h: f64, max_order: usize) -> Result<ResidualReport> {
    if !(1..=MAX_PROBE_ORDER).contains(&max_order) {
        return Err(Error::Domain(format!("max_order must be in 1..={MAX_PROBE_ORDER}, got {max_order}")));
    }
    if !(h > 0.0 && x0 - max_order as f64 * h > 0.0) {
        return Err(Error::Domain(format!("need h > 0 and x0 - max_order*h > 0, got x0 = {x0}, h = {h}")));
    }
    let w: Vec<f64> = (0..=max_order).map(|k| spec.eval_w(x0 + k as f64 * h)).collect::<Result<_>>()?;
    let w0 = w[0];
    let mut report = ResidualReport::new("cm_probe", CM_PROBE_SLACK);
    for n in 1..=max_order {
        let mut diff = 0.0;
        for (k, &wk) in w.iter().enumerate().take(n + 1) {
            let sign = if (n - k) % 2 == 0 { 1.0 } else { -1.0 };
            diff += sign * binomial(n as u32, k as u32) * wk;
        }
        let signed = if n % 2 == 0 { diff } else { -diff };
        report.push(n as f64, signed / h.powi(n as i32), 0.0, 0.0, -signed / w0);
    }
    Ok(report)
}

/// Monte-Carlo moments of `u = ∏ζₖ^{Aₖ}` with `ζₖ ~ Beta(αₖ, βₖ)` against
/// `E u^{x−1} = ∏ Γ(αₖ+βₖ)Γ(Aₖx+αₖ−Aₖ) / (Γ(αₖ)Γ(Aₖx+αₖ+βₖ−Aₖ))`.
///
/// Residuals are z-scores `|estimate − exact| / standard error`. Each grid
/// point draws from its own ChaCha stream, so results do not depend on
/// evaluation order.
pub fn mc_beta_moments(
    alphas: &[f64],
    betas: &[f64],
    scales: &[f64],
    x_grid: &[f64],
    n_samples: usize,
    rng_seed: u64,
) -> Result<ResidualReport> {
    let p = alphas.len();
    if p == 0 || betas.len() != p || scales.len() != p {
        return Err(Error::Domain(format!(
            "need equal nonempty lengths, got {}, {}, {}",
            p,
            betas.len(),
            scales.len()
        )));
    }
    if alphas.iter().chain(betas).chain(scales).any(|&v| !(v > 0.0 && v.is_finite())) {
        return Err(Error::Domain(String::from("alphas, betas and scales must be positive and finite")));
    }
    if n_samples < MIN_MC_SAMPLES {
        return Err(Error::Domain(format!("n_samples must be at least {MIN_MC_SAMPLES}, got {n_samples}")));
    }
    let gammas: Vec<(Gamma<f64>, Gamma<f64>)> = alphas
        .iter()
        .zip(betas)
        .map(|(&a, &b)| {
            let ga = Gamma::new(a, 1.0).map_err(|e| Error::Domain(format!("{e}")))?;
            let gb = Gamma::new(b, 1.0).map_err(|e| Error::Domain(format!("{e}")))?;
            Ok((ga, gb))
        })
        .collect::<Result<_>>()?;
    let mut report = ResidualReport::new("mc_beta_moments", MC_SIGMAS);
    for (idx, &x) in x_grid.iter().enumerate() {
        let mut log_exact = 0.0;
        for k in 0..p {
            let (a, b, sc) = (alphas[k], betas[k], scales[k]);
            let shifted = sc * (x - 1.0) + a;
            if !(shifted > 0.0) {
                return Err(Error::Domain(format!("moment of order {} diverges for factor {}", x - 1.0, k + 1)));
            }
            log_exact += specfun::ln_gamma(a + b)? - specfun::ln_gamma(a)? + specfun::ln_gamma(shifted)?
                - specfun::ln_gamma(shifted + b)?;
        }
        let exact = log_exact.exp();
        let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
        rng.set_stream(idx as u64);
        // Welford running mean and variance
        let (mut mean, mut m2) = (0.0, 0.0);
        for i in 0..n_samples {
            let mut log_u = 0.0;
            for (k, (ga, gb)) in gammas.iter().enumerate() {
                let g1: f64 = ga.sample(&mut rng);
                let g2: f64 = gb.sample(&mut rng);
                log_u += scales[k] * (g1.ln() - (g1 + g2).ln());
            }
            let y = ((x - 1.0) * log_u).exp();
            let delta = y - mean;
            mean += delta / (i as f64 + 1.0);
            m2 += delta * (y - mean);
        }
        let se = (m2 / (n_samples as f64 - 1.0) / n_samples as f64).sqrt();
        let z = if se > 0.0 { (mean - exact).abs() / se } else { (mean - exact).abs() / exact * 1e16 };
        report.push(x, mean, exact, se, z);
    }
    Ok(report)
}

/// Sign changes of `Q` on `(0, 1)` and of `H` on `(0, ρ)`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ZeroCountReport {
    pub q_zero_count: usize,
    pub h_zero_count: usize,
    pub q_intervals: Vec<(f64, f64)>,
    pub h_intervals: Vec<(f64, f64)>,
    /// `h_zero_count <= q_zero_count`, or the H side was skipped.
    pub conjecture_consistent: bool,
    /// Why the H side was not sampled, if it was not.
    pub h_skipped: Option<String>,
    /// `Q` vanishes identically; there are no crossings to count.
    pub q_degenerate: bool,
}

/// A sample is kept only when its sign is certain.
fn certain_sign(v: f64, noise: f64) -> Option<bool> {
    if v.is_finite() && v.abs() > noise {
        Some(v > 0.0)
    } else {
        None
    }
}

/// Brackets of certified sign changes on the nested grid `lo + (hi − lo)k/n`,
/// each refined by bisection to [`ZERO_BRACKET_WIDTH`].
fn sign_change_brackets(
    f: &mut dyn FnMut(f64) -> Option<bool>,
    lo: f64,
    hi: f64,
    n: usize,
    width: f64,
) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    let mut last: Option<(f64, bool)> = None;
    for k in 1..n {
        let t = lo + (hi - lo) * k as f64 / n as f64;
        let Some(sign) = f(t) else { continue };
        if let Some((t_prev, s_prev)) = last {
            if s_prev != sign {
                let (mut a, mut b) = (t_prev, t);
                while b - a > width {
                    let m = 0.5 * (a + b);
                    match f(m) {
                        Some(s) if s == s_prev => a = m,
                        Some(_) => b = m,
                        None => break,
                    }
                }
                out.push((a, b));
            }
        }
        last = Some((t, sign));
    }
    out
}

/// Exploratory count of sign changes of `Q` and `H`. Never fails on the
/// outcome; `conjecture_consistent = false` is a flag, not an error.
pub fn count_zeros(spec: &RatioSpec, cfg: &ContourConfig, grid_size: usize) -> Result<ZeroCountReport> {
    let n = grid_size.max(4);
    let q_degenerate = is_identity_ratio(spec);
    let q_intervals = if q_degenerate {
        Vec::new()
    } else {
        let mut q = |t: f64| -> Option<bool> {
            let (v, m) = spec.eval_p_with_magnitude(-t.ln()).ok()?;
            certain_sign(v, 10.0 * DEFAULT_Q_TOL * m.min(1.0))
        };
        sign_change_brackets(&mut q, 0.0, 1.0, n, ZERO_BRACKET_WIDTH)
    };
    let mut h_skipped = None;
    let mut h_intervals = Vec::new();
    match Contour::new(spec, cfg) {
        Ok(contour) => {
            let rho = contour.derived().rho;
            let mut h = |x: f64| -> Option<bool> {
                let r = contour.eval(x).ok()?;
                certain_sign(r.value, 10.0 * r.error_estimate + 1e-300)
            };
            h_intervals = sign_change_brackets(&mut h, 0.0, rho, n, ZERO_BRACKET_WIDTH * rho.min(1.0));
        }
        Err(Error::Unsupported(reason)) => h_skipped = Some(reason),
        Err(e) => return Err(e),
    }
    let q_zero_count = q_intervals.len();
    let h_zero_count = h_intervals.len();
    Ok(ZeroCountReport {
        q_zero_count,
        h_zero_count,
        q_intervals,
        h_intervals,
        conjecture_consistent: h_skipped.is_some() || h_zero_count <= q_zero_count,
        h_skipped,
        q_degenerate,
    })
}

/// `−min(H, 0)` on `n` interior points of `(0, ρ)`; passes when no sample is
/// below `−10·quad_rel_tol`.
pub fn h_positivity(spec: &RatioSpec, cfg: &ContourConfig, n: usize) -> Result<ResidualReport> {
    let contour = Contour::new(spec, cfg)?;
    let rho = contour.derived().rho;
    let mut report = ResidualReport::new("h_positivity", 10.0 * cfg.quad_rel_tol);
    for k in 1..=n {
        let x = rho * k as f64 / (n as f64 + 1.0);
        let r = contour.eval(x)?;
        report.push(x, r.value, 0.0, r.error_estimate, (-r.value).max(0.0));
    }
    Ok(report)
}
