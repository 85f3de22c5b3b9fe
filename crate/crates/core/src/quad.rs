//! Adaptive Gauss–Kronrod quadrature, Wynn's epsilon extrapolation and a
//! cycle-summing integrator for slowly decaying oscillatory tails.

use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.000_000_000_000_000_000_000_000_000_000_000,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

/// Number of integrand evaluations per Gauss–Kronrod panel.
pub const NODES_PER_PANEL: usize = 21;

/// Outcome of a quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    /// Estimate of ∫|f|, used to scale absolute tolerances.
    pub abs_integral: f64,
    pub evaluations: usize,
    pub converged: bool,
}

impl QuadResult {
    fn zero() -> Self {
        Self { value: 0.0, error: 0.0, abs_integral: 0.0, evaluations: 0, converged: true }
    }
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    abs_integral: f64,
}

/// One 21-point Gauss–Kronrod panel with the QUADPACK error heuristic.
pub fn gk21<F, E>(f: &mut F, a: f64, b: f64) -> Result<(f64, f64, f64), E>
where
    F: FnMut(f64) -> Result<f64, E>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center)?;
    let mut res_g = 0.0;
    let mut res_k = WGK[10] * fc;
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx)?;
        let f2 = f(center + dx)?;
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = res_k * half;
    let res_abs = res_abs * half.abs();
    let res_asc = res_asc * half.abs();
    let mut err = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    let round = 50.0 * f64::EPSILON * res_abs;
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(round);
    }
    Ok((value, err, res_abs))
}

/// Globally adaptive bisection over the panels delimited by `breaks`.
///
/// Stops when the summed error estimate falls below `target(value, abs_integral)`
/// or when `max_evals` integrand evaluations have been spent.
pub fn integrate_adaptive<F, E, T>(f: &mut F, breaks: &[f64], target: T, max_evals: usize) -> Result<QuadResult, E>
where
    F: FnMut(f64) -> Result<f64, E>,
    T: Fn(f64, f64) -> f64,
{
    if breaks.len() < 2 {
        return Ok(QuadResult::zero());
    }
    let mut panels = Vec::with_capacity(breaks.len() * 4);
    let mut evals = 0;
    for w in breaks.windows(2) {
        let (value, error, abs_integral) = gk21(f, w[0], w[1])?;
        evals += NODES_PER_PANEL;
        panels.push(Panel { a: w[0], b: w[1], value, error, abs_integral });
    }
    loop {
        // Summation in position order keeps the result independent of refinement history.
        let (value, error, abs_integral) = totals(&panels);
        let goal = target(value, abs_integral);
        let floor = 50.0 * f64::EPSILON * abs_integral;
        if error <= goal.max(floor) {
            return Ok(QuadResult { value, error, abs_integral, evaluations: evals, converged: true });
        }
        if evals + 2 * NODES_PER_PANEL > max_evals {
            return Ok(QuadResult { value, error, abs_integral, evaluations: evals, converged: false });
        }
        let (idx, worst) = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .map(|(i, p)| (i, *p))
            .expect("non-empty panel list");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // Panel cannot be split further in floating point.
            return Ok(QuadResult { value, error, abs_integral, evaluations: evals, converged: false });
        }
        let (v1, e1, r1) = gk21(f, worst.a, mid)?;
        let (v2, e2, r2) = gk21(f, mid, worst.b)?;
        evals += 2 * NODES_PER_PANEL;
        panels[idx] = Panel { a: worst.a, b: mid, value: v1, error: e1, abs_integral: r1 };
        panels.insert(idx + 1, Panel { a: mid, b: worst.b, value: v2, error: e2, abs_integral: r2 });
    }
}

fn totals(panels: &[Panel]) -> (f64, f64, f64) {
    panels.iter().fold((0.0, 0.0, 0.0), |acc, p| (acc.0 + p.value, acc.1 + p.error, acc.2 + p.abs_integral))
}

/// Plain adaptive integration of `f` over `[a, b]` to `abs_tol` or `rel_tol·|I|`.
pub fn integrate<F, E>(f: &mut F, a: f64, b: f64, abs_tol: f64, rel_tol: f64, max_evals: usize) -> Result<QuadResult, E>
where
    F: FnMut(f64) -> Result<f64, E>,
{
    integrate_adaptive(f, &[a, b], |v, _| abs_tol.max(rel_tol * v.abs()), max_evals)
}

/// Limit of a sequence of partial sums by Wynn's epsilon algorithm.
///
/// Returns the highest even-column entry of the epsilon table.
pub fn wynn_epsilon(sums: &[f64]) -> f64 {
    let n = sums.len();
    if n == 0 {
        return 0.0;
    }
    let mut best = sums[n - 1];
    let mut prev = vec![0.0; n + 1];
    let mut cur = sums.to_vec();
    for k in 1..n {
        let mut next = Vec::with_capacity(n - k);
        for i in 0..n - k {
            let diff = cur[i + 1] - cur[i];
            if diff == 0.0 || !diff.is_finite() {
                return if k % 2 == 1 { cur[n - k] } else { best };
            }
            next.push(prev[i + 1] + 1.0 / diff);
        }
        if k % 2 == 0 {
            let candidate = next[next.len() - 1];
            if candidate.is_finite() {
                best = candidate;
            } else {
                return best;
            }
        }
        prev = cur;
        cur = next;
    }
    best
}

/// Settings for [`integrate_oscillatory_tail`].
#[derive(Debug, Clone, Copy)]
pub struct TailSettings {
    /// Length of one sign lobe of the oscillation (π/ω).
    pub half_period: f64,
    pub abs_tol: f64,
    pub min_cycles: usize,
    pub max_cycles: usize,
    pub max_evals: usize,
}

/// ∫_start^∞ f for an oscillating `f` with slowly decaying envelope.
///
/// Integrates lobe by lobe and extrapolates the partial sums with
/// [`wynn_epsilon`], the same strategy as QUADPACK's QAWF.
pub fn integrate_oscillatory_tail<F, E>(f: &mut F, start: f64, settings: TailSettings) -> Result<QuadResult, E>
where
    F: FnMut(f64) -> Result<f64, E>,
{
    let per_cycle_tol = settings.abs_tol / (4.0 * settings.max_cycles as f64).sqrt();
    let mut sums: Vec<f64> = Vec::new();
    let mut running = 0.0;
    let mut quad_err = 0.0;
    let mut abs_integral = 0.0;
    let mut evals = 0;
    let mut history: Vec<f64> = Vec::new();
    let mut lo = start;
    for k in 0..settings.max_cycles {
        let hi = start + (k as f64 + 1.0) * settings.half_period;
        let budget = settings.max_evals.saturating_sub(evals).max(2 * NODES_PER_PANEL);
        let r = integrate(f, lo, hi, per_cycle_tol, 0.0, budget.min(settings.max_evals / 4 + NODES_PER_PANEL))?;
        evals += r.evaluations;
        quad_err += r.error;
        abs_integral += r.abs_integral;
        running += r.value;
        sums.push(running);
        lo = hi;
        // Extrapolate over the most recent stretch of partial sums only.
        let window = &sums[sums.len().saturating_sub(24)..];
        let estimate = wynn_epsilon(window);
        history.push(estimate);
        if k + 1 >= settings.min_cycles && history.len() >= 3 {
            let h = history.len();
            let extrap_err = (history[h - 1] - history[h - 2]).abs() + (history[h - 1] - history[h - 3]).abs();
            if extrap_err + quad_err <= settings.abs_tol {
                return Ok(QuadResult {
                    value: estimate,
                    error: extrap_err + quad_err,
                    abs_integral,
                    evaluations: evals,
                    converged: true,
                });
            }
        }
        if evals >= settings.max_evals {
            break;
        }
    }
    let h = history.len();
    let value = history[h - 1];
    let extrap_err = if h >= 3 {
        (history[h - 1] - history[h - 2]).abs() + (history[h - 1] - history[h - 3]).abs()
    } else {
        value.abs()
    };
    Ok(QuadResult { value, error: extrap_err + quad_err, abs_integral, evaluations: evals, converged: false })
}
