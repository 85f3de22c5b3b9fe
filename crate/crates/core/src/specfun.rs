//! Log-gamma, digamma and polygamma in double precision.
//!
//! All routines are pure functions. Error estimates are a-priori bounds built
//! from the truncation of the asymptotic series and the number of rounding
//! operations, not running error analysis.

use alloc::format;
use alloc::string::String;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::math::{Complex64, EULER_GAMMA, LN_2PI};

/// A function value together with an a-priori absolute error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalResult<T = f64> {
    pub value: T,
    pub abs_error_estimate: f64,
}

impl<T> EvalResult<T> {
    fn new(value: T, abs_error_estimate: f64) -> Self {
        Self { value, abs_error_estimate }
    }
}

const EPS: f64 = f64::EPSILON;

/// Distance from a non-positive integer below which an argument counts as a pole.
pub const POLE_TOLERANCE: f64 = 1e-12;

/// Bernoulli numbers B₂, B₄, …, B₂₀.
const BERNOULLI_EVEN: [f64; 10] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
];

/// ζ(k) − 1 for k = 2, 3, …, 39.
#[allow(clippy::excessive_precision)]
const ZETA_MINUS_ONE: [f64; 38] = [
    0.64493406684822643647,
    0.2020569031595942854,
    0.082323233711138191516,
    0.036927755143369926331,
    0.017343061984449139715,
    0.0083492773819228268398,
    0.0040773561979443393787,
    0.0020083928260822144179,
    0.00099457512781808533715,
    0.0004941886041194645587,
    0.00024608655330804829864,
    0.00012271334757848914675,
    0.000061248135058704829259,
    0.000030588236307020493552,
    0.000015282259408651871733,
    0.0000076371976378997622736,
    0.0000038172932649998398565,
    0.0000019082127165539389257,
    0.00000095396203387279611315,
    0.00000047693298678780646312,
    0.00000023845050272773299,
    0.00000011921992596531107307,
    0.000000059608189051259479612,
    0.000000029803503514652280186,
    0.000000014901554828365041235,
    0.000000007450711789835429492,
    0.0000000037253340247884570548,
    0.0000000018626597235130490064,
    0.00000000093132743241966818287,
    0.0000000004656629065033784073,
    0.0000000002328311833676505492,
    0.00000000011641550172700519776,
    0.000000000058207720879027008892,
    0.000000000029103850444970996869,
    0.000000000014551921891041984236,
    0.0000000000072759598350574810145,
    0.0000000000036379795473786511902,
    0.0000000000018189896503070659476,
];

fn nearest_pole(x: f64) -> Option<f64> {
    if x > POLE_TOLERANCE {
        return None;
    }
    let n = x.round();
    if n <= 0.0 && (x - n).abs() <= POLE_TOLERANCE {
        Some(n)
    } else {
        None
    }
}

fn check_real_pole(x: f64) -> Result<()> {
    match nearest_pole(x) {
        Some(pole) => Err(Error::Pole { arg: x, pole }),
        None => Ok(()),
    }
}

/// Stirling series Σ B₂ₖ / (2k(2k−1) z^{2k−1}) for `|z| ≥ 15`.
pub(crate) fn stirling_correction(z: Complex64) -> Complex64 {
    let inv = z.inv();
    let inv2 = inv * inv;
    let mut pow = inv;
    let mut sum = Complex64::new(0.0, 0.0);
    for (k, b) in BERNOULLI_EVEN.iter().enumerate() {
        let m = 2.0 * (k as f64 + 1.0);
        sum += pow * (b / (m * (m - 1.0)));
        pow *= inv2;
    }
    sum
}

fn stirling_correction_real(x: f64) -> f64 {
    stirling_correction(Complex64::new(x, 0.0)).re
}

/// `ln Γ(2 + z)` for `|z| ≤ 0.5`: z(1−γ) + Σ (−1)^k (ζ(k)−1) z^k / k.
fn ln_gamma_two_plus(z: f64) -> f64 {
    let mut sum = 0.0;
    let mut pow = -z;
    for (i, zm1) in ZETA_MINUS_ONE.iter().enumerate() {
        let k = (i + 2) as f64;
        pow *= -z;
        let term = zm1 * pow / k;
        sum += term;
        if term.abs() < 1e-18 * sum.abs().max(1e-300) {
            break;
        }
    }
    z * (1.0 - EULER_GAMMA) + sum
}

/// Real `ln Γ(x)` for `x > 0` with relative accuracy near the zeros at 1 and 2.
fn ln_gamma_positive(x: f64) -> f64 {
    if x < 0.5 {
        // Γ(x) = Γ(x+1)/x
        return ln_gamma_positive(x + 1.0) - x.ln();
    }
    if x < 1.5 {
        let z = x - 1.0;
        // ln Γ(1+z) = ln Γ(2+z) − ln(1+z)
        return ln_gamma_two_plus(z) - z.ln_1p();
    }
    if x < 2.5 {
        return ln_gamma_two_plus(x - 2.0);
    }
    if x < 15.0 {
        let mut y = x;
        let mut prod = 1.0;
        while y >= 2.5 {
            y -= 1.0;
            prod *= y;
        }
        return prod.ln() + ln_gamma_two_plus(y - 2.0);
    }
    (x - 0.5) * x.ln() - x + 0.5 * LN_2PI + stirling_correction_real(x)
}

/// Real `ln |Γ(x)|`, used for the real-argument path of [`log_gamma`].
pub fn ln_gamma(x: f64) -> Result<f64> {
    if x.is_nan() {
        return Err(Error::Domain(String::from("ln_gamma of NaN")));
    }
    check_real_pole(x)?;
    if x > 0.0 {
        return Ok(ln_gamma_positive(x));
    }
    // Reflection: Γ(x)Γ(1−x) = π / sin(πx)
    let s = (core::f64::consts::PI * x).sin().abs();
    Ok(core::f64::consts::PI.ln() - s.ln() - ln_gamma_positive(1.0 - x))
}

/// Principal-branch `log Γ(z)` for complex `z`.
///
/// The branch is analytic on ℂ minus the non-positive real axis, so it is
/// continuous along every vertical line `Re z = c > 0`.
pub fn log_gamma(z: Complex64) -> Result<EvalResult<Complex64>> {
    if z.re.is_nan() || z.im.is_nan() {
        return Err(Error::Domain(String::from("log_gamma of NaN")));
    }
    if z.im.abs() <= POLE_TOLERANCE {
        if let Some(pole) = nearest_pole(z.re) {
            return Err(Error::Pole { arg: z.re, pole });
        }
    }
    if z.im == 0.0 && z.re > 0.0 {
        let v = ln_gamma_positive(z.re);
        return Ok(EvalResult::new(Complex64::new(v, 0.0), 8.0 * EPS * v.abs().max(1.0)));
    }
    let mut w = z;
    let mut shift = Complex64::new(0.0, 0.0);
    let mut steps = 0u32;
    while w.norm() < 15.0 || w.re < 0.5 {
        shift += w.ln();
        w += 1.0;
        steps += 1;
    }
    let ln_w = w.ln();
    let value = (w - 0.5) * ln_w - w + 0.5 * LN_2PI + stirling_correction(w) - shift;
    let magnitude = (w.norm() * ln_w.norm()).max(1.0) + shift.norm();
    Ok(EvalResult::new(value, (8.0 + f64::from(steps)) * EPS * magnitude))
}

/// Real `log Γ(x)` packaged as an [`EvalResult`]; errors on poles.
pub fn log_gamma_real(x: f64) -> Result<EvalResult> {
    let v = ln_gamma(x)?;
    Ok(EvalResult::new(v, 8.0 * EPS * v.abs().max(EPS)))
}

/// Digamma ψ(x) for `x > 0`.
pub fn digamma(x: f64) -> Result<EvalResult> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!("digamma requires x > 0, got {x}")));
    }
    let mut y = x;
    let mut acc = 0.0;
    while y < 10.0 {
        acc -= 1.0 / y;
        y += 1.0;
    }
    let inv2 = 1.0 / (y * y);
    let mut pow = inv2;
    let mut series = 0.0;
    for (k, b) in BERNOULLI_EVEN.iter().take(8).enumerate() {
        series += b / (2.0 * (k as f64 + 1.0)) * pow;
        pow *= inv2;
    }
    let value = y.ln() - 0.5 / y - series + acc;
    Ok(EvalResult::new(value, 16.0 * EPS * (value.abs() + acc.abs() + y.ln())))
}

/// Largest derivative order accepted by [`polygamma`].
pub const MAX_POLYGAMMA_ORDER: u32 = 12;

/// Polygamma ψ⁽ⁿ⁾(x) for `1 ≤ n ≤ 12` and `x > 0`.
///
/// Shifts the argument with ψ⁽ⁿ⁾(x) = ψ⁽ⁿ⁾(x+1) + (−1)ⁿ⁺¹ n!/xⁿ⁺¹ until
/// `x ≥ 10 + n`, then sums the asymptotic series.
pub fn polygamma(n: u32, x: f64) -> Result<EvalResult> {
    if n == 0 || n > MAX_POLYGAMMA_ORDER {
        return Err(Error::Domain(format!("polygamma order must be in 1..=12, got {n}")));
    }
    if !(x > 0.0) {
        return Err(Error::Domain(format!("polygamma requires x > 0, got {x}")));
    }
    let nf = f64::from(n);
    let fact_n = crate::math::factorial(n);
    let threshold = 10.0 + nf;
    let mut y = x;
    // Work with |ψ⁽ⁿ⁾|; the sign is (−1)ⁿ⁺¹.
    let mut shifted = 0.0;
    while y < threshold {
        shifted += y.powi(-(n as i32 + 1));
        y += 1.0;
    }
    shifted *= fact_n;
    let inv = 1.0 / y;
    let mut asym = crate::math::factorial(n - 1) * inv.powi(n as i32) + 0.5 * fact_n * inv.powi(n as i32 + 1);
    let inv2 = inv * inv;
    let mut pow = inv.powi(n as i32) * inv2;
    for (k, b) in BERNOULLI_EVEN.iter().enumerate() {
        let two_k = 2 * (k as u32 + 1);
        // B₂ₖ (2k+n−1)! / (2k)!
        let coeff = b * crate::math::factorial(n - 1) * crate::math::binomial(two_k + n - 1, n - 1);
        let term = coeff * pow;
        asym += term;
        if term.abs() < 1e-18 * asym.abs() {
            break;
        }
        pow *= inv2;
    }
    let magnitude = shifted + asym;
    let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
    Ok(EvalResult::new(sign * magnitude, 32.0 * EPS * magnitude))
}

/// Trigamma ψ′(x).
pub fn trigamma(x: f64) -> Result<EvalResult> {
    polygamma(1, x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::PI;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn log_gamma_trivial_values() {
        let one = log_gamma(Complex64::new(1.0, 0.0)).unwrap().value;
        assert_eq!(one.re, 0.0);
        let half = log_gamma(Complex64::new(0.5, 0.0)).unwrap().value.re;
        assert!(close(half, 0.5 * PI.ln(), 1e-15));
        let five = log_gamma(Complex64::new(5.0, 0.0)).unwrap().value.re;
        assert!(close(five, 24f64.ln(), 1e-15));
    }

    #[test]
    fn log_gamma_poles_are_rejected() {
        for x in [0.0, -1.0, -7.0, -3.0 + 1e-13] {
            assert!(matches!(log_gamma(Complex64::new(x, 0.0)), Err(Error::Pole { .. })));
        }
        assert!(ln_gamma(-2.5).is_ok());
    }

    #[test]
    fn log_gamma_near_one_and_two_is_relatively_accurate() {
        // ln Γ(1+z) ≈ −γ z for tiny z
        // use the representable offset, not the decimal literal
        let z = (1.0 + 1e-9) - 1.0;
        let v = ln_gamma(1.0 + z).unwrap();
        assert!(((v + EULER_GAMMA * z) / v).abs() < 1e-8);
        let z = (2.0 + 1e-9) - 2.0;
        let v2 = ln_gamma(2.0 + z).unwrap();
        assert!(((v2 - (1.0 - EULER_GAMMA) * z) / v2).abs() < 1e-8);
    }

    #[test]
    fn complex_path_agrees_with_real_path() {
        for x in [0.7, 1.3, 3.9, 12.2, 40.0] {
            let real = ln_gamma(x).unwrap();
            // Force the complex path with a vanishing imaginary part.
            let z = log_gamma(Complex64::new(x, 1e-300)).unwrap().value;
            assert!(close(z.re, real, 1e-13 * real.abs().max(1.0)), "x = {x}");
        }
    }

    #[test]
    fn complex_log_gamma_recurrence_and_reflection() {
        let z = Complex64::new(0.3, 2.7);
        let lhs = log_gamma(z + 1.0).unwrap().value;
        let rhs = log_gamma(z).unwrap().value + z.ln();
        // equal up to a multiple of 2πi; on Re z > 0 the branch is the same
        assert!((lhs - rhs).norm() < 1e-13);
        // |Γ(iy)|² = π / (y sinh πy)
        let y = 1.7;
        let lg = log_gamma(Complex64::new(0.0, y)).unwrap().value;
        let expect = 0.5 * (PI / (y * (PI * y).sinh())).ln();
        assert!(close(lg.re, expect, 1e-13));
    }

    #[test]
    fn log_gamma_is_continuous_on_vertical_lines() {
        let c = 0.25;
        let mut prev = log_gamma(Complex64::new(c, -50.0)).unwrap().value;
        let mut t = -50.0;
        while t < 50.0 {
            t += 0.01;
            let cur = log_gamma(Complex64::new(c, t)).unwrap().value;
            assert!((cur - prev).norm() < 0.1, "jump at t = {t}");
            prev = cur;
        }
    }

    #[test]
    fn digamma_values() {
        assert!(close(digamma(1.0).unwrap().value, -EULER_GAMMA, 1e-15));
        assert!(close(digamma(2.0).unwrap().value, 1.0 - EULER_GAMMA, 1e-15));
        let x = 1e6;
        assert!(close(digamma(x).unwrap().value, x.ln() - 0.5 / x, 1e-9));
        assert!(digamma(0.0).is_err());
        assert!(digamma(-1.5).is_err());
    }

    #[test]
    fn polygamma_values() {
        assert!(close(polygamma(1, 1.0).unwrap().value, PI * PI / 6.0, 1e-14));
        let zeta3 = 1.202_056_903_159_594_2;
        assert!(close(polygamma(2, 1.0).unwrap().value, -2.0 * zeta3, 1e-13));
        for x in [0.5, 1.0, 10.0] {
            assert!(trigamma(x).unwrap().value > 0.0);
        }
        assert!(polygamma(0, 1.0).is_err());
        assert!(polygamma(13, 1.0).is_err());
        assert!(polygamma(3, 0.0).is_err());
    }

    #[test]
    fn polygamma_matches_direct_series() {
        // ψ⁽ⁿ⁾(x) = (−1)ⁿ⁺¹ n! Σ 1/(x+k)ⁿ⁺¹, summed with an integral tail.
        for n in [1u32, 3, 6, 12] {
            for x in [0.5, 2.5, 17.0] {
                let mut sum = 0.0;
                let m = 20000;
                for k in (0..m).rev() {
                    sum += (x + k as f64).powi(-(n as i32 + 1));
                }
                let tail_start = x + m as f64 - 0.5;
                sum += tail_start.powi(-(n as i32)) / f64::from(n);
                let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
                let expect = sign * crate::math::factorial(n) * sum;
                let got = polygamma(n, x).unwrap().value;
                assert!(((got - expect) / expect).abs() < 1e-10, "n = {n}, x = {x}: {got} vs {expect}");
            }
        }
    }
}
