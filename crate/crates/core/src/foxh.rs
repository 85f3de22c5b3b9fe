//! The representing measure of `W`: the Fox H-function `H^{p,0}_{q,p}`.
//!
//! For ΣA = ΣB and μ > 0 the density `H` is supported on `(0, ρ]` and
//!
//! ```text
//!   H(x) = (1/2πi) ∫_{c−i∞}^{c+i∞} W(s) x^{−s} ds .
//! ```
//!
//! Writing `W(s) = ρ^s (A* s^{−μ} + g(s))` splits `H = h + v`. The leading
//! part `h(x) = A*·log(ρ/x)^{μ−1}/Γ(μ)` is the inverse Laplace transform of
//! `s^{−μ}` and is exact. The remainder `v` is a real integral along
//! `Re s = c` of `g(s) = O(|s|^{−μ−1})`, computed by Gauss–Kronrod panels up to
//! a switch-over point and by lobe-wise summation with epsilon extrapolation
//! beyond it.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::math::{cexpm1, cln1p, Complex64, PI};
use crate::quad::{self, QuadResult, TailSettings};
use crate::ratio::{DerivedInvariants, RatioSpec};
use crate::specfun;

/// Relative distance from ρ inside which `H` is not evaluated.
pub const SINGULAR_RADIUS: f64 = 1e-6;

/// Every gamma argument at least this large in modulus switches `g` to the
/// cancellation-free Stirling-difference form.
const STIRLING_SWITCH: f64 = 15.0;

/// Below this `τ = log(ρ/x)` the remainder is modelled as `v(τ₀)(τ/τ₀)^μ`.
const TAU_MODEL: f64 = 1e-4;

/// Fraction of ∫|integrand| that always counts as an acceptable absolute error.
const ABS_FLOOR: f64 = 1e-4;

/// Contour and quadrature settings.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct ContourConfig {
    /// Abscissa `c` of the vertical contour; `None` picks `max(γ, 0) + 1`.
    pub abscissa_c: Option<f64>,
    /// Switch-over point from plain panels to cycle extrapolation.
    pub truncation_t: f64,
    pub quad_rel_tol: f64,
    /// Budget of integrand evaluations per contour integral.
    pub max_nodes: usize,
}

impl Default for ContourConfig {
    fn default() -> Self {
        Self { abscissa_c: None, truncation_t: 400.0, quad_rel_tol: 1e-8, max_nodes: 200_000 }
    }
}

impl ContourConfig {
    pub fn abscissa(&self, derived: &DerivedInvariants) -> f64 {
        self.abscissa_c.unwrap_or(derived.gamma_pole.max(0.0) + 1.0)
    }

    /// Checks the settings against a spec; returns warnings that do not
    /// prevent evaluation.
    pub fn validate(&self, derived: &DerivedInvariants) -> Result<Vec<String>> {
        let c = self.abscissa(derived);
        if !(c > derived.gamma_pole && c > 0.0 && c.is_finite()) {
            return Err(Error::Domain(format!(
                "abscissa c = {c} must exceed both 0 and the rightmost pole {}",
                derived.gamma_pole
            )));
        }
        if !(self.truncation_t >= 10.0 && self.truncation_t.is_finite()) {
            return Err(Error::Domain(format!("truncation T = {} must be at least 10", self.truncation_t)));
        }
        if !(1e-14..=1e-3).contains(&self.quad_rel_tol) {
            return Err(Error::Domain(format!("quad_rel_tol = {} outside [1e-14, 1e-3]", self.quad_rel_tol)));
        }
        if self.max_nodes < 1000 {
            return Err(Error::Domain(format!("max_nodes = {} is below 1000", self.max_nodes)));
        }
        let mut warnings = Vec::new();
        if derived.mu < 0.2 {
            warnings.push(format!(
                "mu = {} is small: g decays like t^(-{:.3}) and accuracy near x = rho degrades",
                derived.mu,
                derived.mu + 1.0
            ));
        }
        Ok(warnings)
    }
}

/// `H(x) = leading_part + remainder_part`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct HEvaluation {
    pub value: f64,
    pub leading_part: f64,
    pub remainder_part: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
}

/// A spec prepared for contour integration.
#[derive(Debug, Clone)]
pub struct Contour {
    num: Vec<(f64, f64)>,
    den: Vec<(f64, f64)>,
    derived: DerivedInvariants,
    delta: f64,
    ln_gamma_mu: f64,
    c: f64,
    cfg: ContourConfig,
}

/// Remainder integral at one point, before scaling by `e^{−cL}`.
#[derive(Debug, Clone, Copy)]
struct Remainder {
    value: f64,
    error: f64,
    abs_integral: f64,
    evaluations: usize,
    converged: bool,
}

impl Contour {
    /// Prepares `spec` for evaluation. Requires ΣA = ΣB and μ > 0.
    pub fn new(spec: &RatioSpec, cfg: &ContourConfig) -> Result<Self> {
        let derived = spec.derive();
        if !derived.sums_equal() {
            return Err(Error::Unsupported(format!(
                "H is only evaluated for sum A = sum B, got {} and {}",
                derived.sum_a, derived.sum_b
            )));
        }
        if !(derived.mu > 0.0) {
            return Err(Error::Unsupported(format!("H is only evaluated for mu > 0, got {}", derived.mu)));
        }
        cfg.validate(&derived)?;
        Ok(Self {
            num: spec.numerator().collect(),
            den: spec.denominator().collect(),
            delta: derived.sum_a - derived.sum_b,
            ln_gamma_mu: specfun::ln_gamma(derived.mu)?,
            c: cfg.abscissa(&derived),
            derived,
            cfg: *cfg,
        })
    }

    pub fn derived(&self) -> &DerivedInvariants {
        &self.derived
    }

    pub fn abscissa(&self) -> f64 {
        self.c
    }

    /// `log(W(s)ρ^{−s}/(A* s^{−μ}))`.
    fn log_excess(&self, s: Complex64) -> Result<Complex64> {
        let d = &self.derived;
        let ln_s = s.ln();
        let stable = self.num.iter().chain(&self.den).all(|&(k, sh)| (s * k + sh).norm() >= STIRLING_SWITCH);
        if stable {
            let piece = |k: f64, sh: f64| {
                let z = s * k + sh;
                (z - 0.5) * cln1p((s * k).inv() * sh) - sh + specfun::stirling_correction(z)
            };
            let mut e = (s * ln_s - s) * self.delta;
            for &(k, sh) in &self.num {
                e += piece(k, sh);
            }
            for &(k, sh) in &self.den {
                e -= piece(k, sh);
            }
            return Ok(e);
        }
        let mut e = ln_s * d.mu - s * d.log_rho - d.log_stirling_const;
        for &(k, sh) in &self.num {
            e += specfun::log_gamma(s * k + sh)?.value;
        }
        for &(k, sh) in &self.den {
            e -= specfun::log_gamma(s * k + sh)?.value;
        }
        Ok(e)
    }

    /// `g(s) = W(s)ρ^{−s} − A* s^{−μ}`.
    pub fn g(&self, s: Complex64) -> Result<Complex64> {
        let lead = (-s.ln() * self.derived.mu).exp() * self.derived.stirling_const;
        Ok(lead * cexpm1(self.log_excess(s)?))
    }

    /// The complex contour integrand `g(c+it)(x/ρ)^{−(c+it)}/(2π)` without the
    /// real factor `e^{−cL}`, where `L = log(x/ρ)`.
    pub fn integrand(&self, l: f64, t: f64) -> Result<Complex64> {
        let s = Complex64::new(self.c, t);
        let phase = Complex64::new(0.0, -t * l).exp();
        Ok(self.g(s)? * phase / (2.0 * PI))
    }

    /// Largest `|g(c+it)|·t^{μ+1}` over sixteen points of `[T/2, T]`.
    pub fn decay_constant(&self) -> Result<f64> {
        let t_max = self.cfg.truncation_t;
        let mut best: f64 = 0.0;
        for k in 0..16 {
            let t = t_max * (0.5 + 0.5 * k as f64 / 15.0);
            let g = self.g(Complex64::new(self.c, t))?;
            best = best.max(g.norm() * t.powf(self.derived.mu + 1.0));
        }
        Ok(best)
    }

    /// `h(x)`; zero for `x > ρ`.
    pub fn leading_part(&self, x: f64) -> f64 {
        let ell = self.derived.log_rho - x.ln();
        if ell <= 0.0 {
            return 0.0;
        }
        let mu = self.derived.mu;
        (self.derived.log_stirling_const + (mu - 1.0) * ell.ln() - self.ln_gamma_mu).exp()
    }

    /// `(1/π)∫₀^∞ Re[g(c+it)e^{−itL}] dt` with a caller-supplied stopping rule
    /// `goal(v, ∫|·|)` on the unscaled value.
    fn remainder(&self, l: f64, c: f64, goal: &dyn Fn(f64, f64) -> f64) -> Result<Remainder> {
        let mut f = |t: f64| -> Result<f64> {
            let g = self.g(Complex64::new(c, t))?;
            let (sin, cos) = (t * l).sin_cos();
            Ok((g.re * cos + g.im * sin) / PI)
        };
        let half = PI / l.abs();
        let t_switch = self.cfg.truncation_t.min((40.0 * half).max(10.0));
        let mut breaks = alloc::vec![0.0];
        let mut width = 1.0_f64;
        while *breaks.last().unwrap() < t_switch {
            let next = (breaks.last().unwrap() + width.min(half)).min(t_switch);
            breaks.push(next);
            width *= 2.0;
        }
        let budget = self.cfg.max_nodes;
        let head = quad::integrate_adaptive(&mut f, &breaks, |v, a| 0.5 * goal(v, a), budget / 2)?;
        let tail_tol = 0.5 * goal(head.value, head.abs_integral);
        let tail = quad::integrate_oscillatory_tail(
            &mut f,
            t_switch,
            TailSettings {
                half_period: half,
                abs_tol: tail_tol,
                min_cycles: 8,
                max_cycles: 4000,
                max_evals: budget.saturating_sub(head.evaluations),
            },
        )?;
        let mut error = head.error + tail.error;
        if !tail.converged {
            let c_fit = self.decay_constant()?;
            error += 2.0 * c_fit * t_switch.powf(-self.derived.mu - 1.0) / (PI * l.abs());
        }
        Ok(Remainder {
            value: head.value + tail.value,
            error,
            abs_integral: head.abs_integral + tail.abs_integral,
            evaluations: head.evaluations + tail.evaluations,
            converged: head.converged && tail.converged,
        })
    }

    /// `H(x)` with the configured abscissa.
    pub fn eval(&self, x: f64) -> Result<HEvaluation> {
        let rho = self.derived.rho;
        if !(x > 0.0 && x.is_finite()) {
            return Err(Error::Domain(format!("H(x) requires finite x > 0, got {x}")));
        }
        if (x - rho).abs() <= SINGULAR_RADIUS * rho {
            return Err(Error::SingularPoint { x, rho });
        }
        let leading = self.leading_part(x);
        let l = x.ln() - self.derived.log_rho;
        let scale = (-self.c * l).exp();
        let rel = self.cfg.quad_rel_tol;
        let goal = |v: f64, a: f64| rel * (leading + v * scale).abs().max(ABS_FLOOR * a * scale) / scale;
        let r = self.remainder(l, self.c, &goal)?;
        let remainder = r.value * scale;
        let error = r.error * scale;
        let value = leading + remainder;
        let target = goal(r.value, r.abs_integral) * scale;
        if !r.converged && error > 1e3 * target {
            return Err(Error::Accuracy { estimate: value, error });
        }
        Ok(HEvaluation {
            value,
            leading_part: leading,
            remainder_part: remainder,
            error_estimate: error,
            evaluations: r.evaluations,
        })
    }

    /// `v(ρe^{−τ})` to absolute accuracy `abs_tol`, evaluated on the abscissa `c`.
    fn remainder_at_tau(&self, tau: f64, c: f64, abs_tol: f64) -> Result<(f64, f64, usize)> {
        let l = -tau;
        let scale = (c * tau).exp();
        let rel = self.cfg.quad_rel_tol;
        let leading = self.leading_part(self.derived.rho * (-tau).exp());
        let goal = |v: f64, a: f64| {
            let h = (leading + v * scale).abs();
            (rel * h).max(abs_tol).max(rel * ABS_FLOOR * a * scale) / scale
        };
        let r = self.remainder(l, c, &goal)?;
        Ok((r.value * scale, r.error * scale, r.evaluations))
    }

    /// `∫₀^{τ_hi} H(ρe^{−τ}) w(τ) dτ`, with `scale` the expected magnitude of
    /// the result (used only to set tolerances).
    ///
    /// The leading part is integrated after substituting `r = τ^μ`, which
    /// removes its endpoint singularity. The remainder vanishes like `τ^μ` at
    /// the origin, so below `τ₀ = 10⁻⁴` it is replaced by that power law and
    /// above it is integrated in `log τ`.
    pub(crate) fn integrate_tau(
        &self,
        tau_hi: f64,
        c: f64,
        scale: f64,
        weight: &dyn Fn(f64) -> Result<f64>,
    ) -> Result<QuadResult> {
        let d = &self.derived;
        let mu = d.mu;
        let rel = self.cfg.quad_rel_tol;
        let tol = 0.05 * rel * scale.abs().max(f64::MIN_POSITIVE);
        let mut evals = 0usize;

        // leading part
        let h_coef = (d.log_stirling_const - specfun::ln_gamma(mu + 1.0)?).exp();
        let tau1 = tau_hi.min(1.0);
        let mut fr = |r: f64| -> Result<f64> { Ok(h_coef * weight(r.powf(1.0 / mu))?) };
        let h1 = quad::integrate(&mut fr, 0.0, tau1.powf(mu), 0.25 * tol, 0.0, self.cfg.max_nodes)?;
        evals += h1.evaluations;
        let h_coef_tau = (d.log_stirling_const - self.ln_gamma_mu).exp();
        let mut ft = |tau: f64| -> Result<f64> { Ok(h_coef_tau * tau.powf(mu - 1.0) * weight(tau)?) };
        let h2 = if tau_hi > tau1 {
            quad::integrate_adaptive(&mut ft, &geometric_breaks(tau1, tau_hi), |_, _| 0.25 * tol, self.cfg.max_nodes)?
        } else {
            QuadResult { value: 0.0, error: 0.0, abs_integral: 0.0, evaluations: 0, converged: true }
        };
        evals += h2.evaluations;

        // remainder part
        let tau0 = TAU_MODEL.min(0.5 * tau_hi);
        let span = tau_hi.max(1.0);
        let v_tol = |w: f64| 0.1 * tol / (span * w.abs().max(1e-300));
        let mut inner_evals = 0usize;
        let mut inner_err = 0.0;
        let w0 = weight(tau0)?;
        let (v0, e0, n0) = self.remainder_at_tau(tau0, c, v_tol(w0))?;
        inner_evals += n0;
        let mut model = |tau: f64| -> Result<f64> { Ok((tau / tau0).powf(mu) * weight(tau)?) };
        let (m_int, _, _) = quad::gk21(&mut model, 0.0, tau0)?;
        let head_v = v0 * m_int;
        let mut fy = |y: f64| -> Result<f64> {
            let tau = y.exp();
            let w = weight(tau)?;
            let (v, e, n) = self.remainder_at_tau(tau, c, v_tol(w))?;
            inner_evals += n;
            inner_err += e * (w * tau).abs();
            Ok(v * w * tau)
        };
        let (y0, y1) = (tau0.ln(), tau_hi.ln());
        let pieces = ((y1 - y0) / 3.0).ceil().max(1.0) as usize;
        let ybreaks: Vec<f64> = (0..=pieces).map(|k| y0 + (y1 - y0) * k as f64 / pieces as f64).collect();
        let vq = quad::integrate_adaptive(&mut fy, &ybreaks, |_, _| 0.5 * tol, 40 * quad::NODES_PER_PANEL)?;
        evals += vq.evaluations;
        // each outer node's inner error is weighted by a quadrature weight of
        // order (y1 - y0) / nodes; this keeps the bookkeeping conservative
        let inner_bound = inner_err * (y1 - y0) / vq.evaluations.max(1) as f64 + e0 * m_int.abs();
        Ok(QuadResult {
            value: h1.value + h2.value + head_v + vq.value,
            error: h1.error + h2.error + vq.error + inner_bound + (head_v * 1e-3).abs(),
            abs_integral: h1.abs_integral + h2.abs_integral + vq.abs_integral + head_v.abs(),
            evaluations: evals + inner_evals,
            converged: h1.converged && h2.converged && vq.converged,
        })
    }
}

fn geometric_breaks(lo: f64, hi: f64) -> Vec<f64> {
    let mut b = alloc::vec![lo];
    let mut x = lo;
    while x * 2.0 < hi {
        x *= 2.0;
        b.push(x);
    }
    b.push(hi);
    b
}

/// `H^{p,0}_{q,p}(x)` for the ratio `spec`.
pub fn eval_h(spec: &RatioSpec, x: f64, cfg: &ContourConfig) -> Result<HEvaluation> {
    Contour::new(spec, cfg)?.eval(x)
}

/// Meijer `G^{p,0}_{p,p}(x)`: the all-ones special case with support `(0, 1)`.
pub fn eval_g(a: &[f64], b: &[f64], x: f64, cfg: &ContourConfig) -> Result<HEvaluation> {
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::Domain(format!("G(x) is evaluated on (0, 1), got {x}")));
    }
    if a.len() != b.len() {
        return Err(Error::Domain(format!("a has {} entries but b has {}", a.len(), b.len())));
    }
    eval_h(&RatioSpec::unweighted(a, b)?, x, cfg)
}

/// Both sides of `∫₀^ρ H(x)x^{s−1}dx = W(s)`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MellinCheck {
    pub s: f64,
    /// The quadrature side.
    pub lhs: f64,
    /// The gamma-product side.
    pub rhs: f64,
    pub lhs_error: f64,
}

impl MellinCheck {
    pub fn relative_residual(&self) -> f64 {
        ((self.lhs - self.rhs) / self.rhs).abs()
    }
}

/// Upper cut-off for `τ = log(ρ/x)` when the integrand decays like `e^{−κτ}`.
fn tau_cutoff(kappa: f64) -> f64 {
    (40.0 / kappa).min(700.0)
}

/// Mellin transform of `H` at real `s > γ` against the gamma product.
pub fn mellin_check(spec: &RatioSpec, s: f64, cfg: &ContourConfig) -> Result<MellinCheck> {
    let contour = Contour::new(spec, cfg)?;
    mellin_with(&contour, spec, s)
}

pub(crate) fn mellin_with(contour: &Contour, spec: &RatioSpec, s: f64) -> Result<MellinCheck> {
    let d = *contour.derived();
    if !(s > d.gamma_pole) {
        return Err(Error::Domain(format!("Mellin transform needs s > gamma = {}, got {s}", d.gamma_pole)));
    }
    let rhs = spec.eval_w(s)?;
    // Keep the contour left of s so x^{s-1} damps the e^{c τ} growth of the
    // contour integrand as x → 0.
    let lo = d.gamma_pole.max(0.0);
    let c = if s > lo { contour.abscissa().min(0.5 * (lo + s)) } else { contour.abscissa().min(lo + 0.05) };
    let log_rho_s = s * d.log_rho;
    let weight = move |tau: f64| -> Result<f64> { Ok((log_rho_s - s * tau).exp()) };
    let r = contour.integrate_tau(tau_cutoff(s - d.gamma_pole), c, rhs, &weight)?;
    Ok(MellinCheck { s, lhs: r.value, rhs, lhs_error: r.error })
}
