use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geometry::Polytope;
use crate::math::{self, sqrt, Complex64};

/// Monte-Carlo estimate with per-component standard errors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub value: Complex64,
    pub std_error_re: f64,
    pub std_error_im: f64,
}

impl McEstimate {
    /// `sqrt(se_re^2 + se_im^2)`, the standard error of the complex estimate.
    pub fn std_error(&self) -> f64 {
        sqrt(self.std_error_re * self.std_error_re + self.std_error_im * self.std_error_im)
    }
}

/// Rejection sampling of `∫_P e^{-i s·x} dx` over the bounding box.
pub fn brute_force_ft(p: &Polytope, s: &[f64], budget: usize, seed: u64) -> McEstimate {
    brute_force_ft_batch(p, core::slice::from_ref(&s.to_vec()), budget, seed)[0]
}

/// Same as [`brute_force_ft`] for several frequencies sharing one sample set.
pub fn brute_force_ft_batch(
    p: &Polytope,
    freqs: &[Vec<f64>],
    budget: usize,
    seed: u64,
) -> Vec<McEstimate> {
    let dim = p.dim();
    let (lo, hi) = p.bounding_box();
    let box_vol: f64 = lo.iter().zip(&hi).map(|(a, b)| b - a).product();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // Per frequency: sum re, sum im, sum re^2, sum im^2.
    let mut acc = alloc::vec![[0.0f64; 4]; freqs.len()];
    let mut x = alloc::vec![0.0; dim];
    for _ in 0..budget {
        for k in 0..dim {
            x[k] = lo[k] + rng.random::<f64>() * (hi[k] - lo[k]);
        }
        if !p.contains(&x) {
            continue;
        }
        for (a, s) in acc.iter_mut().zip(freqs) {
            let z = math::cis_neg(math::dot(s, &x));
            a[0] += z.re;
            a[1] += z.im;
            a[2] += z.re * z.re;
            a[3] += z.im * z.im;
        }
    }
    let n = budget.max(1) as f64;
    acc.iter()
        .map(|a| {
            let (mr, mi) = (a[0] / n, a[1] / n);
            let vr = (a[2] / n - mr * mr).max(0.0);
            let vi = (a[3] / n - mi * mi).max(0.0);
            McEstimate {
                value: Complex64::new(mr, mi) * box_vol,
                std_error_re: box_vol * sqrt(vr / n),
                std_error_im: box_vol * sqrt(vi / n),
            }
        })
        .collect()
}

/// `count` frequencies uniform in the ball `|s| <= max_norm`, deterministic
/// per seed.
pub fn random_frequencies(dim: usize, count: usize, max_norm: f64, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let s: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect();
        if math::norm(&s) <= 1.0 {
            out.push(math::scale(&s, max_norm));
        }
    }
    out
}
