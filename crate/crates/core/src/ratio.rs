//! The gamma ratio `W(x) = ∏Γ(Aᵢx+aᵢ) / ∏Γ(Bⱼx+bⱼ)` and its kernels.
//!
//! Besides `W` itself this module evaluates the derivatives of `log W`, the
//! exponential kernel `P(u)` whose sign decides complete monotonicity of
//! `(log W)''`, its substituted form `Q(t) = P(−log t)`, and the invariants
//! ρ, μ, γ and A* that govern the representing measure.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::math::LN_2PI;
use crate::specfun;

/// Relative tolerance under which ΣA and ΣB count as equal.
pub const SUM_EQUALITY_TOL: f64 = 1e-12;

/// Largest parameter magnitude accepted from user input.
pub const SUPPORTED_MAGNITUDE: f64 = 1e3;

/// Largest `p + q` accepted from user input.
pub const SUPPORTED_FACTORS: usize = 20;

/// The vectors `(A, a, B, b)` defining `W`.
///
/// Order is preserved exactly as given; some sufficient conditions are
/// order-sensitive.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(try_from = "RawSpec", into = "RawSpec"))]
pub struct RatioSpec {
    num_scales: Vec<f64>,
    num_shifts: Vec<f64>,
    den_scales: Vec<f64>,
    den_shifts: Vec<f64>,
}

#[cfg(feature = "serde")]
#[derive(serde::Serialize, serde::Deserialize)]
struct RawSpec {
    #[serde(rename = "A")]
    num_scales: Vec<f64>,
    #[serde(rename = "a")]
    num_shifts: Vec<f64>,
    #[serde(rename = "B")]
    den_scales: Vec<f64>,
    #[serde(rename = "b")]
    den_shifts: Vec<f64>,
}

#[cfg(feature = "serde")]
impl TryFrom<RawSpec> for RatioSpec {
    type Error = Error;

    fn try_from(raw: RawSpec) -> Result<Self> {
        RatioSpec::new(raw.num_scales, raw.num_shifts, raw.den_scales, raw.den_shifts)
    }
}

#[cfg(feature = "serde")]
impl From<RatioSpec> for RawSpec {
    fn from(spec: RatioSpec) -> Self {
        RawSpec {
            num_scales: spec.num_scales,
            num_shifts: spec.num_shifts,
            den_scales: spec.den_scales,
            den_shifts: spec.den_shifts,
        }
    }
}

fn check_vector(name: &str, v: &[f64], positive: bool) -> Result<()> {
    for (i, &x) in v.iter().enumerate() {
        let ok = x.is_finite() && if positive { x > 0.0 } else { x >= 0.0 };
        if !ok {
            let want = if positive { "> 0" } else { ">= 0" };
            return Err(Error::InvalidSpec(format!("{name}[{i}] = {x} must be finite and {want}")));
        }
    }
    Ok(())
}

impl RatioSpec {
    /// Validates and builds a spec from numerator scales/shifts `A, a` and
    /// denominator scales/shifts `B, b`.
    pub fn new(num_scales: Vec<f64>, num_shifts: Vec<f64>, den_scales: Vec<f64>, den_shifts: Vec<f64>) -> Result<Self> {
        if num_scales.is_empty() || den_scales.is_empty() {
            return Err(Error::InvalidSpec(String::from("need at least one numerator and one denominator factor")));
        }
        if num_scales.len() != num_shifts.len() {
            return Err(Error::InvalidSpec(format!(
                "A has {} entries but a has {}",
                num_scales.len(),
                num_shifts.len()
            )));
        }
        if den_scales.len() != den_shifts.len() {
            return Err(Error::InvalidSpec(format!(
                "B has {} entries but b has {}",
                den_scales.len(),
                den_shifts.len()
            )));
        }
        check_vector("A", &num_scales, true)?;
        check_vector("a", &num_shifts, false)?;
        check_vector("B", &den_scales, true)?;
        check_vector("b", &den_shifts, false)?;
        Ok(Self { num_scales, num_shifts, den_scales, den_shifts })
    }

    /// Convenience constructor from slices.
    pub fn from_slices(a_scale: &[f64], a_shift: &[f64], b_scale: &[f64], b_shift: &[f64]) -> Result<Self> {
        Self::new(a_scale.to_vec(), a_shift.to_vec(), b_scale.to_vec(), b_shift.to_vec())
    }

    /// The unweighted ratio ∏Γ(x+aₖ)/∏Γ(x+bₖ).
    pub fn unweighted(num_shifts: &[f64], den_shifts: &[f64]) -> Result<Self> {
        Self::new(
            alloc::vec![1.0; num_shifts.len()],
            num_shifts.to_vec(),
            alloc::vec![1.0; den_shifts.len()],
            den_shifts.to_vec(),
        )
    }

    /// Rejects specs outside the box the artifact is tuned for: every entry
    /// at most 1e3 and at most 20 gamma factors in total.
    pub fn check_supported_box(&self) -> Result<()> {
        if self.p() + self.q() > SUPPORTED_FACTORS {
            return Err(Error::Unsupported(format!(
                "p + q = {} exceeds the supported maximum of {SUPPORTED_FACTORS}",
                self.p() + self.q()
            )));
        }
        let all = self.num_scales.iter().chain(&self.num_shifts).chain(&self.den_scales).chain(&self.den_shifts);
        if let Some(x) = all.copied().find(|x| *x > SUPPORTED_MAGNITUDE) {
            return Err(Error::Unsupported(format!("entry {x} exceeds the supported magnitude {SUPPORTED_MAGNITUDE}")));
        }
        Ok(())
    }

    pub fn p(&self) -> usize {
        self.num_scales.len()
    }

    pub fn q(&self) -> usize {
        self.den_scales.len()
    }

    pub fn num_scales(&self) -> &[f64] {
        &self.num_scales
    }

    pub fn num_shifts(&self) -> &[f64] {
        &self.num_shifts
    }

    pub fn den_scales(&self) -> &[f64] {
        &self.den_scales
    }

    pub fn den_shifts(&self) -> &[f64] {
        &self.den_shifts
    }

    pub(crate) fn numerator(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.num_scales.iter().copied().zip(self.num_shifts.iter().copied())
    }

    pub(crate) fn denominator(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.den_scales.iter().copied().zip(self.den_shifts.iter().copied())
    }

    /// Computes ρ, μ, γ, the entropies and the Stirling constant A*.
    pub fn derive(&self) -> DerivedInvariants {
        let sum_a = self.num_scales.iter().sum::<f64>();
        let sum_b = self.den_scales.iter().sum::<f64>();
        let entropy_a = self.num_scales.iter().map(|a| a * a.ln()).sum::<f64>();
        let entropy_b = self.den_scales.iter().map(|b| b * b.ln()).sum::<f64>();
        let log_rho = entropy_a - entropy_b;
        let pq_half = (self.p() as f64 - self.q() as f64) / 2.0;
        let mu = self.den_shifts.iter().sum::<f64>() - self.num_shifts.iter().sum::<f64>() + pq_half;
        let gamma_pole = -self.numerator().map(|(a, sh)| sh / a).fold(f64::INFINITY, f64::min);
        let log_stirling_const = pq_half * LN_2PI
            + self.numerator().map(|(a, sh)| (sh - 0.5) * a.ln()).sum::<f64>()
            + self.denominator().map(|(b, sh)| (0.5 - sh) * b.ln()).sum::<f64>();
        DerivedInvariants {
            sum_a,
            sum_b,
            rho: log_rho.exp(),
            log_rho,
            mu,
            gamma_pole,
            entropy_a,
            entropy_b,
            stirling_const: log_stirling_const.exp(),
            log_stirling_const,
        }
    }

    fn check_arguments(&self, x: f64) -> Result<()> {
        if !(x > 0.0) || !x.is_finite() {
            return Err(Error::Domain(format!("x must be positive and finite, got {x}")));
        }
        for (i, (a, sh)) in self.numerator().enumerate() {
            if a * x + sh <= 0.0 {
                return Err(Error::Domain(format!(
                    "numerator factor {i}: Γ({a}·{x}+{sh}) has a non-positive argument"
                )));
            }
        }
        for (j, (b, sh)) in self.denominator().enumerate() {
            if b * x + sh <= 0.0 {
                return Err(Error::Domain(format!(
                    "denominator factor {j}: Γ({b}·{x}+{sh}) has a non-positive argument"
                )));
            }
        }
        Ok(())
    }

    /// `log W(x)` as a single sum of log-gammas.
    pub fn ln_w(&self, x: f64) -> Result<f64> {
        self.check_arguments(x)?;
        let mut acc = 0.0;
        for (a, sh) in self.numerator() {
            acc += specfun::ln_gamma(a * x + sh)?;
        }
        for (b, sh) in self.denominator() {
            acc -= specfun::ln_gamma(b * x + sh)?;
        }
        Ok(acc)
    }

    /// `W(x)`, exponentiated once from the summed log-gammas.
    pub fn eval_w(&self, x: f64) -> Result<f64> {
        Ok(self.ln_w(x)?.exp())
    }

    /// First or second derivative of `log W` at `x`.
    pub fn log_w_derivative(&self, x: f64, order: u32) -> Result<f64> {
        self.check_arguments(x)?;
        let mut acc = 0.0;
        match order {
            1 => {
                for (a, sh) in self.numerator() {
                    acc += a * specfun::digamma(a * x + sh)?.value;
                }
                for (b, sh) in self.denominator() {
                    acc -= b * specfun::digamma(b * x + sh)?.value;
                }
            }
            2 => {
                for (a, sh) in self.numerator() {
                    acc += a * a * specfun::trigamma(a * x + sh)?.value;
                }
                for (b, sh) in self.denominator() {
                    acc -= b * b * specfun::trigamma(b * x + sh)?.value;
                }
            }
            _ => return Err(Error::Domain(format!("derivative order must be 1 or 2, got {order}"))),
        }
        Ok(acc)
    }

    /// Whether ΣA and ΣB agree to [`SUM_EQUALITY_TOL`].
    pub fn scale_sums_equal(&self) -> bool {
        let d = self.derive();
        sums_equal(d.sum_a, d.sum_b)
    }

    /// The kernel
    /// `P(u) = Σ e^{−aᵢu/Aᵢ}/(1−e^{−u/Aᵢ}) − Σ e^{−bⱼu/Bⱼ}/(1−e^{−u/Bⱼ})`.
    ///
    /// Each term is split as `Aᵢ/u + r(aᵢ, u/Aᵢ)` where `r` is bounded at 0;
    /// the `1/u` parts are combined analytically, and dropped altogether when
    /// ΣA = ΣB, so there is no cancellation for small `u`.
    pub fn eval_p(&self, u: f64) -> Result<f64> {
        Ok(self.eval_p_with_magnitude(u)?.0)
    }

    /// `P(u)` together with the sum of the absolute values of the pieces it
    /// was assembled from, a scale for judging how far from zero it is.
    pub fn eval_p_with_magnitude(&self, u: f64) -> Result<(f64, f64)> {
        if !(u > 0.0) {
            return Err(Error::Domain(format!("P(u) requires u > 0, got {u}")));
        }
        let sum_a = self.num_scales.iter().sum::<f64>();
        let sum_b = self.den_scales.iter().sum::<f64>();
        let mut acc = if sums_equal(sum_a, sum_b) { 0.0 } else { (sum_a - sum_b) / u };
        let mut mag = acc.abs();
        for (a, sh) in self.numerator() {
            let r = regular_part(sh, u / a);
            acc += r;
            mag += r.abs();
        }
        for (b, sh) in self.denominator() {
            let r = regular_part(sh, u / b);
            acc -= r;
            mag += r.abs();
        }
        Ok((acc, mag))
    }

    /// `Q(t) = P(−log t)` for `t ∈ (0, 1)`.
    pub fn eval_q(&self, t: f64) -> Result<f64> {
        if !(t > 0.0 && t < 1.0) {
            return Err(Error::Domain(format!("Q(t) requires 0 < t < 1, got {t}")));
        }
        self.eval_p(-t.ln())
    }
}

pub(crate) fn sums_equal(x: f64, y: f64) -> bool {
    (x - y).abs() <= SUM_EQUALITY_TOL * x.abs().max(y.abs())
}

/// `φ(t) = 1/(1−e^{−t}) − 1/t`.
fn phi(t: f64) -> f64 {
    if t < 0.5 {
        // 1/2 + Σ B₂ⱼ t^{2j−1}/(2j)!
        const C: [f64; 8] = [
            1.0 / 12.0,
            -1.0 / 720.0,
            1.0 / 30240.0,
            -1.0 / 1209600.0,
            1.0 / 47900160.0,
            -691.0 / 1307674368000.0,
            1.0 / 74724249600.0,
            -3617.0 / 10670622842880000.0,
        ];
        let t2 = t * t;
        let mut acc = 0.0;
        for c in C.iter().rev() {
            acc = acc * t2 + c;
        }
        0.5 + t * acc
    } else {
        -1.0 / (-t).exp_m1() - 1.0 / t
    }
}

/// `e^{−ct}/(1−e^{−t}) − 1/t = e^{−ct}·φ(t) + (e^{−ct} − 1)/t`.
fn regular_part(c: f64, t: f64) -> f64 {
    (-c * t).exp() * phi(t) + (-c * t).exp_m1() / t
}

/// `v(t) = Σ (t^{aₖ} − t^{bₖ})` for the unweighted criterion.
pub fn eval_v(a: &[f64], b: &[f64], t: f64) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::Domain(format!("v(t) needs equal lengths, got {} and {}", a.len(), b.len())));
    }
    if !(t > 0.0 && t <= 1.0) {
        return Err(Error::Domain(format!("v(t) requires 0 < t <= 1, got {t}")));
    }
    Ok(a.iter().zip(b).map(|(x, y)| t.powf(*x) - t.powf(*y)).sum())
}

/// Quantities derived from a [`RatioSpec`].
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DerivedInvariants {
    pub sum_a: f64,
    pub sum_b: f64,
    /// ρ = ∏Aᵢ^{Aᵢ} ∏Bⱼ^{−Bⱼ}, the right end of the H-function support.
    pub rho: f64,
    pub log_rho: f64,
    /// μ = Σb − Σa + (p−q)/2.
    pub mu: f64,
    /// Rightmost pole γ = −min(aᵢ/Aᵢ) of the Mellin–Barnes integrand.
    pub gamma_pole: f64,
    /// Σ Aᵢ log Aᵢ.
    pub entropy_a: f64,
    /// Σ Bⱼ log Bⱼ.
    pub entropy_b: f64,
    /// A* = (2π)^{(p−q)/2} ∏Aᵢ^{aᵢ−1/2} ∏Bⱼ^{1/2−bⱼ}.
    pub stirling_const: f64,
    pub log_stirling_const: f64,
}

impl DerivedInvariants {
    pub fn sums_equal(&self) -> bool {
        sums_equal(self.sum_a, self.sum_b)
    }
}
