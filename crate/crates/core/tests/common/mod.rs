//! Fixtures shared by the integration suites.
#![allow(dead_code)]

use gamma_lcm_core::RatioSpec;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

pub fn spec(a: &[f64], ash: &[f64], b: &[f64], bsh: &[f64]) -> RatioSpec {
    RatioSpec::from_slices(a, ash, b, bsh).unwrap()
}

pub fn three_over_two() -> RatioSpec {
    spec(&[2.0, 3.0, 1.0], &[0.4, 2.4, 0.9], &[1.0, 5.0], &[2.0, 6.0])
}

pub fn three_over_three() -> RatioSpec {
    spec(&[2.0, 3.0, 1.4], &[0.8, 8.0, 2.3], &[1.0, 2.4, 3.0], &[1.5, 7.8, 11.0])
}

pub fn bernstein_pair() -> RatioSpec {
    spec(&[4.0, 2.0], &[0.7, 1.8], &[3.0, 1.0], &[0.6, 1.2])
}

pub fn equal_scales() -> RatioSpec {
    spec(&[3.0, 2.2, 1.4], &[0.8, 1.8, 2.3], &[3.0, 2.2, 1.4], &[1.2, 1.7, 2.5])
}

/// Seeded source of test parameters.
pub struct Gen(ChaCha8Rng);

impl Gen {
    pub fn new(seed: u64) -> Self {
        Self(ChaCha8Rng::seed_from_u64(seed))
    }

    pub fn unit(&mut self) -> f64 {
        (self.0.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.unit()
    }

    pub fn index(&mut self, lo: usize, hi: usize) -> usize {
        lo + (self.0.next_u64() % (hi - lo + 1) as u64) as usize
    }

    fn scales(&mut self, n: usize) -> Vec<f64> {
        (0..n).map(|_| self.uniform(0.5, 3.0)).collect()
    }

    /// `max aᵢ/Aᵢ ≤ min (bⱼ−1)/Bⱼ` with equal scale sums.
    pub fn sufficient_a(&mut self) -> RatioSpec {
        let (p, q) = (self.index(1, 3), self.index(1, 3));
        let aa = self.scales(p);
        let raw = self.scales(q);
        let k = aa.iter().sum::<f64>() / raw.iter().sum::<f64>();
        let bb: Vec<f64> = raw.iter().map(|b| b * k).collect();
        let theta = self.uniform(0.0, 2.0);
        let ash: Vec<f64> = aa.iter().map(|a| a * theta * self.unit()).collect();
        let bsh: Vec<f64> = bb.iter().map(|b| 1.0 + b * (theta + self.unit())).collect();
        RatioSpec::new(aa, ash, bb, bsh).unwrap()
    }

    /// The `p = q` chain condition with the last index dominant.
    pub fn sufficient_b(&mut self) -> RatioSpec {
        let p = self.index(1, 3);
        let aa = self.scales(p);
        let mut bb: Vec<f64> = aa[..p - 1].iter().map(|a| a * self.uniform(0.3, 1.0)).collect();
        bb.push(aa.iter().sum::<f64>() - bb.iter().sum::<f64>());
        let mut ash = vec![0.0; p];
        let mut bsh = vec![0.0; p];
        let mut head_max: f64 = 0.0;
        for i in 0..p - 1 {
            let r = self.uniform(0.0, 2.0);
            bsh[i] = 1.0 + bb[i] * r;
            ash[i] = aa[i] * r * self.unit();
            head_max = head_max.max(bsh[i] / bb[i]);
        }
        let last = head_max + self.unit();
        bsh[p - 1] = 1.0 + bb[p - 1] * last;
        ash[p - 1] = aa[p - 1] * last * self.unit();
        RatioSpec::new(aa, ash, bb, bsh).unwrap()
    }

    /// Ascending chains with dominated prefix sums. Every third draw has
    /// `A = B`.
    pub fn sufficient_c(&mut self) -> RatioSpec {
        let p = self.index(1, 3);
        let equal_scales = self.index(0, 2) == 0;
        let mut inv_a: Vec<f64> = (0..p).map(|_| self.uniform(1.0 / 3.0, 2.0)).collect();
        inv_a.sort_by(f64::total_cmp);
        let mut inv_b: Vec<f64> =
            inv_a.iter().map(|x| if equal_scales { *x } else { x + self.uniform(0.0, 0.5) }).collect();
        inv_b.sort_by(f64::total_cmp);
        let mut ra: Vec<f64> = (0..p).map(|_| self.uniform(0.0, 1.5)).collect();
        ra.sort_by(f64::total_cmp);
        let mut rb: Vec<f64> = ra.iter().map(|x| x + self.uniform(0.0, 0.5)).collect();
        rb.sort_by(f64::total_cmp);
        let aa: Vec<f64> = inv_a.iter().map(|x| 1.0 / x).collect();
        let bb: Vec<f64> = inv_b.iter().map(|x| 1.0 / x).collect();
        let ash = aa.iter().zip(&ra).map(|(a, r)| a * r).collect();
        let bsh = bb.iter().zip(&rb).map(|(b, r)| b * r).collect();
        RatioSpec::new(aa, ash, bb, bsh).unwrap()
    }

    /// Equal scale sums with `min aᵢ/Aᵢ ≥ min bⱼ/Bⱼ + 0.2`.
    pub fn necessary_d_violation(&mut self) -> RatioSpec {
        let (p, q) = (self.index(1, 3), self.index(1, 3));
        let aa = self.scales(p);
        let raw = self.scales(q);
        let k = aa.iter().sum::<f64>() / raw.iter().sum::<f64>();
        let bb: Vec<f64> = raw.iter().map(|b| b * k).collect();
        let beta = self.uniform(0.0, 1.0);
        let alpha = beta + self.uniform(0.2, 1.0);
        let ash: Vec<f64> = aa.iter().map(|a| a * (alpha + self.uniform(0.0, 1.0))).collect();
        let mut bsh: Vec<f64> = bb.iter().map(|b| b * (beta + self.uniform(0.0, 2.0))).collect();
        bsh[0] = bb[0] * beta;
        RatioSpec::new(aa, ash, bb, bsh).unwrap()
    }

    /// Equal scale sums with unconstrained shifts; `μ` and `log ρ` may have
    /// either sign.
    pub fn balanced(&mut self) -> RatioSpec {
        let (p, q) = (self.index(1, 3), self.index(1, 3));
        let aa = self.scales(p);
        let raw = self.scales(q);
        let k = aa.iter().sum::<f64>() / raw.iter().sum::<f64>();
        let bb: Vec<f64> = raw.iter().map(|b| b * k).collect();
        let ash = (0..p).map(|_| self.uniform(0.0, 3.0)).collect();
        let bsh = (0..q).map(|_| self.uniform(0.0, 4.0)).collect();
        RatioSpec::new(aa, ash, bb, bsh).unwrap()
    }

    /// A [`Gen::balanced`] draw conditioned on `μ > 0.3` and `ρ ≤ 1`.
    pub fn balanced_positive_mu(&mut self) -> RatioSpec {
        loop {
            let s = self.balanced();
            let d = s.derive();
            if d.mu > 0.3 && d.rho <= 1.0 {
                return s;
            }
        }
    }

    /// Strictly positive `(α, β)` pairs for beta-product moments.
    pub fn beta_params(&mut self, n: usize) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
        let alphas = (0..n).map(|_| self.uniform(0.5, 3.0)).collect();
        let betas = (0..n).map(|_| self.uniform(0.5, 3.0)).collect();
        let scales = (0..n).map(|_| self.uniform(0.5, 2.0)).collect();
        (alphas, betas, scales)
    }
}
