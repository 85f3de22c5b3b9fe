//! Small numeric helpers shared across modules.

// `no_std` float math; when std is linked its inherent methods take over
#[allow(unused_imports)]
use num_traits::Float;

pub(crate) use num_complex::Complex64;

pub(crate) const PI: f64 = core::f64::consts::PI;
pub(crate) const LN_2PI: f64 = 1.837_877_066_409_345_5;
pub(crate) const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// `exp(z) - 1` without cancellation for small `|z|`.
pub(crate) fn cexpm1(z: Complex64) -> Complex64 {
    let (sin, cos) = z.im.sin_cos();
    let half = (0.5 * z.im).sin();
    let em1 = z.re.exp_m1();
    Complex64::new(em1 * cos - 2.0 * half * half, (em1 + 1.0) * sin)
}

/// `ln(1 + w)` on the principal branch, accurate for small `|w|`.
pub(crate) fn cln1p(w: Complex64) -> Complex64 {
    let re = 0.5 * (2.0 * w.re + w.norm_sqr()).ln_1p();
    let im = w.im.atan2(1.0 + w.re);
    Complex64::new(re, im)
}

/// Binomial coefficient as a float; exact for the small arguments used here.
pub(crate) fn binomial(n: u32, k: u32) -> f64 {
    let k = k.min(n - k);
    let mut acc = 1.0;
    for i in 0..k {
        acc = acc * f64::from(n - i) / f64::from(i + 1);
    }
    acc
}

pub(crate) fn factorial(n: u32) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * f64::from(k))
}
