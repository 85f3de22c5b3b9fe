//! Decision procedures for logarithmic complete monotonicity of `W`.
//!
//! `W` is l.c.m. exactly when ΣA = ΣB, ρ ≤ 1 and the kernel `P(u)` is
//! nonnegative. The first two are closed-form tests; `P ≥ 0` is attacked with
//! three sufficient conditions and, failing those, a dense sampler of
//! `Q(t) = P(−log t)` on `(0, 1)`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::ratio::{sums_equal, DerivedInvariants, RatioSpec};
use crate::specfun;

/// Slack used by every inequality test.
pub const INEQUALITY_TOL: f64 = 1e-12;

/// Default number of uniform sample points for [`check_q_nonneg`].
pub const DEFAULT_Q_GRID: usize = 512;

/// Default value tolerance for [`check_q_nonneg`].
pub const DEFAULT_Q_TOL: f64 = 1e-10;

/// Largest `n` accepted by [`build_unweighted`].
pub const MAX_UNWEIGHTED_N: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "SCREAMING_SNAKE_CASE"))]
pub enum ConditionId {
    NecA,
    NecB,
    NecC,
    NecD,
    SufA,
    SufB,
    SufC,
    QNonneg,
    /// `(log W)'` is a Bernstein function.
    Bernstein,
}

impl ConditionId {
    pub fn as_str(self) -> &'static str {
        match self {
            ConditionId::NecA => "NEC_A",
            ConditionId::NecB => "NEC_B",
            ConditionId::NecC => "NEC_C",
            ConditionId::NecD => "NEC_D",
            ConditionId::SufA => "SUF_A",
            ConditionId::SufB => "SUF_B",
            ConditionId::SufC => "SUF_C",
            ConditionId::QNonneg => "Q_NONNEG",
            ConditionId::Bernstein => "BERNSTEIN",
        }
    }

    pub fn is_necessary(self) -> bool {
        matches!(self, ConditionId::NecA | ConditionId::NecB | ConditionId::NecC | ConditionId::NecD)
    }
}

impl fmt::Display for ConditionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum ConditionStatus {
    Holds,
    Fails,
    NotApplicable,
    NumericallyUndecided,
}

/// One numeric inequality `lhs ≤ rhs` that went into a decision.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Comparison {
    pub label: String,
    pub lhs: f64,
    pub rhs: f64,
}

impl Comparison {
    fn new(label: String, lhs: f64, rhs: f64) -> Self {
        Self { label, lhs, rhs }
    }

    pub fn satisfied(&self) -> bool {
        leq(self.lhs, self.rhs)
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ConditionEvidence {
    pub condition_id: ConditionId,
    pub status: ConditionStatus,
    pub witness: Option<String>,
    /// The inequalities checked, in the order they were evaluated.
    pub comparisons: Vec<Comparison>,
}

impl ConditionEvidence {
    fn new(condition_id: ConditionId, status: ConditionStatus, witness: Option<String>) -> Self {
        Self { condition_id, status, witness, comparisons: Vec::new() }
    }

    fn from_bool(condition_id: ConditionId, holds: bool, witness: String) -> Self {
        let status = if holds { ConditionStatus::Holds } else { ConditionStatus::Fails };
        Self::new(condition_id, status, Some(witness))
    }

    pub fn holds(&self) -> bool {
        self.status == ConditionStatus::Holds
    }

    pub fn fails(&self) -> bool {
        self.status == ConditionStatus::Fails
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "SCREAMING_SNAKE_CASE"))]
pub enum Classification {
    Lcm,
    BernsteinDerivative,
    NotLcm,
    Inconclusive,
}

impl Classification {
    pub fn as_str(self) -> &'static str {
        match self {
            Classification::Lcm => "LCM",
            Classification::BernsteinDerivative => "BERNSTEIN_DERIVATIVE",
            Classification::NotLcm => "NOT_LCM",
            Classification::Inconclusive => "INCONCLUSIVE",
        }
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Verdict {
    pub classification: Classification,
    pub evidence: Vec<ConditionEvidence>,
    pub derived: DerivedInvariants,
}

impl Verdict {
    pub fn evidence_for(&self, id: ConditionId) -> Option<&ConditionEvidence> {
        self.evidence.iter().find(|e| e.condition_id == id)
    }

    pub fn status_of(&self, id: ConditionId) -> Option<ConditionStatus> {
        self.evidence_for(id).map(|e| e.status)
    }
}

fn leq(lhs: f64, rhs: f64) -> bool {
    lhs <= rhs + INEQUALITY_TOL * 1f64.max(lhs.abs()).max(rhs.abs())
}

fn argmin(v: impl Iterator<Item = f64>) -> (usize, f64) {
    v.enumerate().fold((0, f64::INFINITY), |best, (i, x)| if x < best.1 { (i, x) } else { best })
}

fn argmax(v: impl Iterator<Item = f64>) -> (usize, f64) {
    v.enumerate().fold((0, f64::NEG_INFINITY), |best, (i, x)| if x > best.1 { (i, x) } else { best })
}

/// The four closed-form necessary conditions.
pub fn check_necessary(spec: &RatioSpec) -> Vec<ConditionEvidence> {
    let d = spec.derive();
    let nec_a = ConditionEvidence::from_bool(
        ConditionId::NecA,
        sums_equal(d.sum_a, d.sum_b),
        format!("sum A = {}, sum B = {}", d.sum_a, d.sum_b),
    );
    let nec_b =
        ConditionEvidence::from_bool(ConditionId::NecB, d.rho <= 1.0 + INEQUALITY_TOL, format!("rho = {}", d.rho));
    let nec_c = ConditionEvidence::from_bool(ConditionId::NecC, d.mu >= -INEQUALITY_TOL, format!("mu = {}", d.mu));
    let (i, alpha) = argmin(spec.numerator().map(|(a, sh)| sh / a));
    let (j, beta) = argmin(spec.denominator().map(|(b, sh)| sh / b));
    let mut nec_d = ConditionEvidence::from_bool(
        ConditionId::NecD,
        alpha <= beta + INEQUALITY_TOL,
        format!("min a_i/A_i = {alpha} at i = {}, min b_j/B_j = {beta} at j = {}", i + 1, j + 1),
    );
    nec_d.comparisons.push(Comparison::new(String::from("min a_i/A_i <= min b_j/B_j"), alpha, beta));
    alloc::vec![nec_a, nec_b, nec_c, nec_d]
}

/// ΣA = ΣB and max(aᵢ/Aᵢ) ≤ min((bⱼ−1)/Bⱼ).
pub fn check_sufficient_a(spec: &RatioSpec) -> ConditionEvidence {
    let (i, lhs) = argmax(spec.numerator().map(|(a, sh)| sh / a));
    let (j, rhs) = argmin(spec.denominator().map(|(b, sh)| (sh - 1.0) / b));
    let sums = spec.scale_sums_equal();
    let mut ev = ConditionEvidence::from_bool(
        ConditionId::SufA,
        sums && leq(lhs, rhs),
        if sums {
            format!("max a_i/A_i = {lhs} at i = {}, min (b_j-1)/B_j = {rhs} at j = {}", i + 1, j + 1)
        } else {
            String::from("sum A != sum B")
        },
    );
    ev.comparisons.push(Comparison::new(String::from("max a_i/A_i <= min (b_j-1)/B_j"), lhs, rhs));
    ev
}

/// The `p = q` condition with `Aᵢ ≥ Bᵢ` for `i < p`. Index `p` is the last
/// entry in the order given.
pub fn check_sufficient_b(spec: &RatioSpec) -> ConditionEvidence {
    let p = spec.p();
    if p != spec.q() {
        return ConditionEvidence::new(
            ConditionId::SufB,
            ConditionStatus::NotApplicable,
            Some(format!("p = {p} != q = {}", spec.q())),
        );
    }
    if !spec.scale_sums_equal() {
        return ConditionEvidence::new(ConditionId::SufB, ConditionStatus::Fails, Some(String::from("sum A != sum B")));
    }
    let (aa, ash, bb, bsh) = (spec.num_scales(), spec.num_shifts(), spec.den_scales(), spec.den_shifts());
    let mut ev = ConditionEvidence::new(ConditionId::SufB, ConditionStatus::Holds, None);
    let mut first_failure: Option<String> = None;
    let mut record = |ev: &mut ConditionEvidence, c: Comparison| {
        if !c.satisfied() && first_failure.is_none() {
            first_failure = Some(format!("{} violated: {} > {}", c.label, c.lhs, c.rhs));
        }
        ev.comparisons.push(c);
    };
    for i in 0..p - 1 {
        record(&mut ev, Comparison::new(format!("B_{0} <= A_{0}", i + 1), bb[i], aa[i]));
    }
    let last = (bsh[p - 1] - 1.0) / bb[p - 1];
    if p > 1 {
        let max_head = (0..p - 1).map(|k| bsh[k] / bb[k]).fold(f64::NEG_INFINITY, f64::max);
        record(&mut ev, Comparison::new(format!("max_(k<{p}) b_k/B_k <= (b_{p}-1)/B_{p}"), max_head, last));
    }
    for i in 0..p {
        record(
            &mut ev,
            Comparison::new(format!("a_{0}/A_{0} <= (b_{0}-1)/B_{0}", i + 1), ash[i] / aa[i], (bsh[i] - 1.0) / bb[i]),
        );
    }
    match first_failure {
        Some(w) => {
            ev.status = ConditionStatus::Fails;
            ev.witness = Some(w);
        }
        None => ev.witness = Some(String::from("all inequalities hold")),
    }
    ev
}

fn chain_ascending(label: &str, v: &[f64]) -> Option<String> {
    v.windows(2)
        .position(|w| !leq(w[0], w[1]))
        .map(|k| format!("{label} not ascending at index {}: {} > {}", k + 1, v[k], v[k + 1]))
}

/// The majorization condition with both chains in the order given.
pub fn check_sufficient_c(spec: &RatioSpec) -> ConditionEvidence {
    let p = spec.p();
    if p != spec.q() {
        return ConditionEvidence::new(
            ConditionId::SufC,
            ConditionStatus::NotApplicable,
            Some(format!("p = {p} != q = {}", spec.q())),
        );
    }
    let a_ratio: Vec<f64> = spec.numerator().map(|(a, sh)| sh / a).collect();
    let b_ratio: Vec<f64> = spec.denominator().map(|(b, sh)| sh / b).collect();
    let a_inv: Vec<f64> = spec.num_scales().iter().map(|a| 1.0 / a).collect();
    let b_inv: Vec<f64> = spec.den_scales().iter().map(|b| 1.0 / b).collect();
    let chains = [("a_i/A_i", &a_ratio), ("b_i/B_i", &b_ratio), ("1/A_i", &a_inv), ("1/B_i", &b_inv)];
    for (label, v) in chains {
        if let Some(w) = chain_ascending(label, v) {
            return ConditionEvidence::new(ConditionId::SufC, ConditionStatus::Fails, Some(w));
        }
    }
    let mut ev = ConditionEvidence::new(ConditionId::SufC, ConditionStatus::Holds, None);
    let (mut sa, mut sb, mut si, mut sj) = (0.0, 0.0, 0.0, 0.0);
    for k in 0..p {
        si += a_inv[k];
        sj += b_inv[k];
        ev.comparisons.push(Comparison::new(format!("sum_(i<={}) 1/A_i <= sum 1/B_i", k + 1), si, sj));
    }
    for k in 0..p {
        sa += a_ratio[k];
        sb += b_ratio[k];
        ev.comparisons.push(Comparison::new(format!("sum_(i<={}) a_i/A_i <= sum b_i/B_i", k + 1), sa, sb));
    }
    match ev.comparisons.iter().find(|c| !c.satisfied()) {
        Some(c) => {
            ev.status = ConditionStatus::Fails;
            ev.witness = Some(format!("{} violated: {} > {}", c.label, c.lhs, c.rhs));
        }
        None => ev.witness = Some(String::from("chains ascending and all prefix sums dominated")),
    }
    ev
}

/// Whether `b ≺^W a`: after sorting both ascending, every prefix sum of `a`
/// is at most the matching prefix sum of `b`.
pub fn weak_supermajorization(a: &[f64], b: &[f64]) -> Result<bool> {
    if a.len() != b.len() {
        return Err(Error::Domain(format!("length mismatch: {} vs {}", a.len(), b.len())));
    }
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (mut sa, mut sb) = (0.0, 0.0);
    for (x, y) in a.iter().zip(&b) {
        sa += x;
        sb += y;
        if !leq(sa, sb) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether the numerator and denominator factor multisets coincide, i.e.
/// `W ≡ 1` and `P ≡ 0`.
pub fn is_identity_ratio(spec: &RatioSpec) -> bool {
    if spec.p() != spec.q() {
        return false;
    }
    let key = |(x, y): (f64, f64)| (x, y);
    let mut num: Vec<(f64, f64)> = spec.numerator().map(key).collect();
    let mut den: Vec<(f64, f64)> = spec.denominator().map(key).collect();
    let cmp = |l: &(f64, f64), r: &(f64, f64)| l.0.total_cmp(&r.0).then(l.1.total_cmp(&r.1));
    num.sort_by(cmp);
    den.sort_by(cmp);
    num == den
}

/// Sample points for the `Q` sampler: `n` uniform points plus geometric
/// clusters toward both endpoints.
pub fn q_sample_grid(n: usize) -> Vec<f64> {
    let step = 1.0 / (n as f64 + 1.0);
    let geometric = (n / 8).max(16);
    let mut t: Vec<f64> = (1..=n).map(|k| k as f64 * step).collect();
    let cluster = |lo: f64| -> Vec<f64> {
        let ratio = (step / lo).ln() / geometric as f64;
        (0..geometric).map(|k| lo * (ratio * k as f64).exp()).collect()
    };
    t.extend(cluster(1e-16));
    t.extend(cluster(1e-10).into_iter().map(|e| 1.0 - e));
    t.sort_by(f64::total_cmp);
    t.dedup();
    t
}

/// Nonnegativity of `Q` on `(0, 1)` by sampling.
///
/// A sample certifies a sign when it clears `tol` scaled by the magnitude of
/// the terms that produced it, capped at 1; this keeps points near `t = 0`,
/// where `Q` is legitimately tiny, from being dismissed as noise.
pub fn check_q_nonneg(spec: &RatioSpec, grid_size: usize, refine_tol: f64) -> ConditionEvidence {
    if is_identity_ratio(spec) {
        return ConditionEvidence::new(
            ConditionId::QNonneg,
            ConditionStatus::Holds,
            Some(String::from("numerator and denominator factors coincide, Q vanishes identically")),
        );
    }
    let n = grid_size.max(64);
    let grid = q_sample_grid(n);
    let tol = refine_tol.abs().max(f64::MIN_POSITIVE);
    let sample = |t: f64| -> (f64, f64) {
        match spec.eval_p_with_magnitude(-t.ln()) {
            Ok((v, m)) => (v, tol * m.min(1.0)),
            Err(_) => (f64::NAN, tol),
        }
    };
    let mut worst = (f64::INFINITY, 0usize, 0.0, tol);
    let mut certified_positive = true;
    for (k, &t) in grid.iter().enumerate() {
        let (v, thr) = sample(t);
        if !(v >= thr) {
            certified_positive = false;
        }
        let score = v / thr;
        if score < worst.0 || score.is_nan() {
            worst = (score, k, v, thr);
        }
    }
    let (_, k, mut v_min, mut thr_min) = worst;
    let mut t_min = grid[k];
    // golden-section refinement between the neighbours of the worst sample
    if v_min.is_finite() {
        let lo = if k == 0 { grid[0] * 0.5 } else { grid[k - 1] };
        let hi = if k + 1 == grid.len() { 0.5 * (1.0 + grid[k]) } else { grid[k + 1] };
        let (t_ref, v_ref, thr_ref) = golden_min(sample, lo, hi, tol);
        if v_ref / thr_ref < v_min / thr_min {
            t_min = t_ref;
            v_min = v_ref;
            thr_min = thr_ref;
            if !(v_ref >= thr_ref) {
                certified_positive = false;
            }
        }
    }
    let mut ev = ConditionEvidence::new(ConditionId::QNonneg, ConditionStatus::NumericallyUndecided, None);
    ev.comparisons.push(Comparison::new(format!("0 <= Q({t_min})"), 0.0, v_min));
    if v_min.is_nan() {
        ev.witness = Some(format!("Q could not be evaluated at t = {t_min}"));
    } else if v_min < -10.0 * thr_min {
        ev.status = ConditionStatus::Fails;
        ev.witness = Some(format!("Q({t_min}) = {v_min}"));
    } else if certified_positive {
        ev.status = ConditionStatus::Holds;
        ev.witness = Some(format!("{} samples positive, minimum Q({t_min}) = {v_min}", grid.len()));
    } else {
        ev.witness = Some(format!("minimum Q({t_min}) = {v_min} within tolerance of zero"));
    }
    ev
}

fn golden_min(mut f: impl FnMut(f64) -> (f64, f64), mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let score = |(v, thr): (f64, f64)| v / thr;
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..80 {
        if (hi - lo) <= tol.max(1e-15) * hi.abs().max(1e-300) {
            break;
        }
        if score(f1) <= score(f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
    }
    if score(f1) <= score(f2) {
        (x1, f1.0, f1.1)
    } else {
        (x2, f2.0, f2.1)
    }
}

/// `lim_{x→0} (log W)'(x) = ΣAᵢψ(aᵢ) − ΣBⱼψ(bⱼ)`; `None` when some shift is 0.
pub fn bernstein_boundary_limit(spec: &RatioSpec) -> Option<f64> {
    if spec.num_shifts().iter().chain(spec.den_shifts()).any(|&s| s == 0.0) {
        return None;
    }
    let mut acc = 0.0;
    for (a, sh) in spec.numerator() {
        acc += a * specfun::digamma(sh).ok()?.value;
    }
    for (b, sh) in spec.denominator() {
        acc -= b * specfun::digamma(sh).ok()?.value;
    }
    Some(acc)
}

fn check_bernstein(spec: &RatioSpec, p_nonneg: bool, q: &ConditionEvidence) -> ConditionEvidence {
    let mut ev = ConditionEvidence::new(ConditionId::Bernstein, ConditionStatus::NumericallyUndecided, None);
    if !p_nonneg {
        if q.fails() {
            ev.status = ConditionStatus::Fails;
            ev.witness = Some(String::from("P takes negative values"));
        } else {
            ev.witness = Some(String::from("nonnegativity of P not established"));
        }
        return ev;
    }
    match bernstein_boundary_limit(spec) {
        None => ev.witness = Some(String::from("boundary limit diverges: some shift is zero")),
        Some(limit) => {
            ev.comparisons.push(Comparison::new(String::from("0 <= sum A_i psi(a_i) - sum B_j psi(b_j)"), 0.0, limit));
            ev.status = if limit >= -INEQUALITY_TOL { ConditionStatus::Holds } else { ConditionStatus::Fails };
            ev.witness = Some(format!("P >= 0 and boundary limit = {limit}"));
        }
    }
    ev
}

/// Full classification with the default `Q` sampler settings.
pub fn classify(spec: &RatioSpec) -> Verdict {
    classify_with(spec, DEFAULT_Q_GRID, DEFAULT_Q_TOL)
}

pub fn classify_with(spec: &RatioSpec, grid_size: usize, refine_tol: f64) -> Verdict {
    let mut evidence = check_necessary(spec);
    let sufficient = [check_sufficient_a(spec), check_sufficient_b(spec), check_sufficient_c(spec)];
    let q = check_q_nonneg(spec, grid_size, refine_tol);
    let p_nonneg = sufficient.iter().any(ConditionEvidence::holds) || q.holds();
    let failed = |id: ConditionId| evidence.iter().any(|e| e.condition_id == id && e.fails());
    let nec_ab_failed = failed(ConditionId::NecA) || failed(ConditionId::NecB);
    let nec_cd_failed = failed(ConditionId::NecC) || failed(ConditionId::NecD);
    let bernstein = nec_ab_failed.then(|| check_bernstein(spec, p_nonneg, &q));
    let classification = if let Some(b) = &bernstein {
        if b.holds() {
            Classification::BernsteinDerivative
        } else {
            Classification::NotLcm
        }
    } else if nec_cd_failed || q.fails() && !p_nonneg {
        Classification::NotLcm
    } else if p_nonneg {
        Classification::Lcm
    } else {
        Classification::Inconclusive
    };
    evidence.extend(sufficient);
    evidence.push(q);
    evidence.extend(bernstein);
    Verdict { classification, evidence, derived: spec.derive() }
}

/// The unweighted ratio whose `v(t)` factors as `∏(t^{βᵢ} − t^{αᵢ})`.
///
/// Numerator shifts are `Σ_{i∈J} αᵢ + Σ_{i∉J} βᵢ` over subsets `J` of even
/// size, denominator shifts the same over odd subsets. Subsets are visited in
/// ascending bitmask order.
pub fn build_unweighted(alpha: &[f64], beta: &[f64]) -> Result<RatioSpec> {
    let n = alpha.len();
    if n != beta.len() {
        return Err(Error::Domain(format!("alpha has {n} entries but beta has {}", beta.len())));
    }
    if n == 0 || n > MAX_UNWEIGHTED_N {
        return Err(Error::Domain(format!("need 1 <= n <= {MAX_UNWEIGHTED_N}, got {n}")));
    }
    for (i, (&a, &b)) in alpha.iter().zip(beta).enumerate() {
        if !(b >= 0.0 && a >= b && a.is_finite()) {
            return Err(Error::Domain(format!("need alpha_{0} >= beta_{0} >= 0, got {a} and {b}", i + 1)));
        }
    }
    let mut num = Vec::with_capacity(1 << (n - 1));
    let mut den = Vec::with_capacity(1 << (n - 1));
    for mask in 0u32..(1 << n) {
        let shift: f64 = (0..n).map(|i| if mask >> i & 1 == 1 { alpha[i] } else { beta[i] }).sum();
        if mask.count_ones() % 2 == 0 {
            num.push(shift);
        } else {
            den.push(shift);
        }
    }
    RatioSpec::unweighted(&num, &den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio::eval_v;

    fn spec(a: &[f64], ash: &[f64], b: &[f64], bsh: &[f64]) -> RatioSpec {
        RatioSpec::from_slices(a, ash, b, bsh).unwrap()
    }

    fn three_over_two() -> RatioSpec {
        spec(&[2.0, 3.0, 1.0], &[0.4, 2.4, 0.9], &[1.0, 5.0], &[2.0, 6.0])
    }

    fn three_over_three() -> RatioSpec {
        spec(&[2.0, 3.0, 1.4], &[0.8, 8.0, 2.3], &[1.0, 2.4, 3.0], &[1.5, 7.8, 11.0])
    }

    fn bernstein_pair() -> RatioSpec {
        spec(&[4.0, 2.0], &[0.7, 1.8], &[3.0, 1.0], &[0.6, 1.2])
    }

    fn equal_scales() -> RatioSpec {
        spec(&[3.0, 2.2, 1.4], &[0.8, 1.8, 2.3], &[3.0, 2.2, 1.4], &[1.2, 1.7, 2.5])
    }

    fn reciprocal() -> RatioSpec {
        spec(&[1.0], &[0.0], &[1.0], &[1.0])
    }

    #[test]
    fn necessary_conditions() {
        assert!(check_necessary(&three_over_two()).iter().all(ConditionEvidence::holds));
        let e4 = check_necessary(&bernstein_pair());
        assert_eq!(e4[0].condition_id, ConditionId::NecA);
        assert!(e4[0].fails());
        let same = spec(&[1.5, 2.0], &[0.3, 1.0], &[1.5, 2.0], &[0.3, 1.0]);
        assert!(check_necessary(&same).iter().all(ConditionEvidence::holds));
        let d_fails = spec(&[1.0], &[2.0], &[1.0], &[1.0]);
        assert!(check_necessary(&d_fails)[3].fails());
    }

    #[test]
    fn sufficient_a() {
        let ev = check_sufficient_a(&three_over_two());
        assert!(ev.holds());
        assert_eq!(ev.comparisons[0].lhs, 0.9);
        assert_eq!(ev.comparisons[0].rhs, 1.0);
        assert!(check_sufficient_a(&three_over_three()).fails());
        assert!(check_sufficient_a(&reciprocal()).holds());
    }

    #[test]
    fn sufficient_b() {
        assert!(check_sufficient_b(&three_over_three()).holds());
        assert_eq!(check_sufficient_b(&three_over_two()).status, ConditionStatus::NotApplicable);
        assert!(check_sufficient_b(&reciprocal()).holds());
        // moving the dominant denominator factor away from the last slot breaks it
        let permuted = spec(&[2.0, 1.4, 3.0], &[0.8, 2.3, 8.0], &[1.0, 3.0, 2.4], &[1.5, 11.0, 7.8]);
        assert!(check_sufficient_b(&permuted).fails());
    }

    #[test]
    fn sufficient_c() {
        assert!(check_sufficient_c(&equal_scales()).holds());
        let e4 = check_sufficient_c(&bernstein_pair());
        assert!(e4.holds());
        let expected = [(0.25, 1.0 / 3.0), (0.75, 4.0 / 3.0), (0.175, 0.2), (1.075, 1.4)];
        assert_eq!(e4.comparisons.len(), 4);
        for (c, (l, r)) in e4.comparisons.iter().zip(expected) {
            assert!((c.lhs - l).abs() < 1e-12 && (c.rhs - r).abs() < 1e-12, "{c:?}");
            assert!(c.lhs < c.rhs);
        }
        assert!(check_sufficient_c(&three_over_three()).fails());
        assert_eq!(check_sufficient_c(&three_over_two()).status, ConditionStatus::NotApplicable);
    }

    #[test]
    fn majorization() {
        assert!(weak_supermajorization(&[0.0, 1.0], &[0.5, 0.5]).unwrap());
        assert!(weak_supermajorization(&[0.3, 2.0], &[2.0, 0.3]).unwrap());
        assert!(!weak_supermajorization(&[1.0, 1.0], &[0.0, 3.0]).unwrap());
        assert!(weak_supermajorization(&[1.0], &[1.0, 2.0]).is_err());
    }

    #[test]
    fn q_sampler() {
        assert!(check_q_nonneg(&reciprocal(), 64, DEFAULT_Q_TOL).holds());
        let neg = spec(&[1.0], &[1.0], &[1.0], &[0.0]);
        let ev = check_q_nonneg(&neg, 64, DEFAULT_Q_TOL);
        assert!(ev.fails());
        assert!((ev.comparisons[0].rhs + 1.0).abs() < 1e-12);
        assert!(check_q_nonneg(&three_over_three(), DEFAULT_Q_GRID, DEFAULT_Q_TOL).holds());
        assert!(check_q_nonneg(&three_over_two(), DEFAULT_Q_GRID, DEFAULT_Q_TOL).holds());
        let same = spec(&[1.5, 2.0], &[0.3, 1.0], &[2.0, 1.5], &[1.0, 0.3]);
        assert!(check_q_nonneg(&same, 64, DEFAULT_Q_TOL).holds());
    }

    #[test]
    fn q_grid_shape() {
        let g = q_sample_grid(512);
        assert_eq!(g.len(), 512 + 2 * 64);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
        assert!(g[0] > 0.0 && *g.last().unwrap() < 1.0);
    }

    #[test]
    fn classifications() {
        assert_eq!(classify(&three_over_two()).classification, Classification::Lcm);
        assert_eq!(classify(&three_over_three()).classification, Classification::Lcm);
        assert_eq!(classify(&equal_scales()).classification, Classification::Lcm);
        let v4 = classify(&bernstein_pair());
        assert_eq!(v4.classification, Classification::BernsteinDerivative);
        assert_eq!(v4.status_of(ConditionId::NecA), Some(ConditionStatus::Fails));
        let same = spec(&[1.5, 2.0], &[0.3, 1.0], &[1.5, 2.0], &[0.3, 1.0]);
        assert_eq!(classify(&same).classification, Classification::Lcm);
        let neg = spec(&[1.0], &[1.0], &[1.0], &[0.0]);
        assert_eq!(classify(&neg).classification, Classification::NotLcm);
    }

    #[test]
    fn bernstein_limit_bernstein_pair() {
        let limit = bernstein_boundary_limit(&bernstein_pair()).unwrap();
        // 4ψ(0.7) + 2ψ(1.8) − 3ψ(0.6) − ψ(1.2)
        assert!((limit - 0.600_786_190_067_744).abs() < 1e-13, "{limit}");
        assert!(bernstein_boundary_limit(&reciprocal()).is_none());
    }

    #[test]
    fn unweighted_builder() {
        let s = build_unweighted(&[2.0], &[1.0]).unwrap();
        assert_eq!(s.num_shifts(), &[1.0]);
        assert_eq!(s.den_shifts(), &[2.0]);
        let (alpha, beta) = ([1.5, 2.0, 0.7], [0.5, 0.25, 0.7]);
        let s = build_unweighted(&alpha, &beta).unwrap();
        assert_eq!(s.p(), 4);
        assert_eq!(s.num_shifts()[0], 0.5 + 0.25 + 0.7);
        for t in [0.05f64, 0.3, 0.77, 1.0] {
            let v = eval_v(s.num_shifts(), s.den_shifts(), t).unwrap();
            let prod: f64 = alpha.iter().zip(&beta).map(|(a, b)| t.powf(*b) - t.powf(*a)).product();
            assert!((v - prod).abs() <= 1e-12 * prod.abs().max(1e-300) + 1e-15);
        }
        assert!(build_unweighted(&[1.0], &[2.0]).is_err());
        assert!(build_unweighted(&[1.0; 13], &[0.0; 13]).is_err());
        assert_eq!(classify(&build_unweighted(&[2.0, 1.0], &[0.5, 0.0]).unwrap()).classification, Classification::Lcm);
    }
}
