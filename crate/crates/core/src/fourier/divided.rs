//! Divided differences of `exp` over complex nodes.
//!
//! Nodes are first centered on their mean. A cluster of spread below
//! [`TAYLOR_SPREAD`] is summed directly from the Taylor expansion
//!
//! ```text
//! exp[u_0, ..., u_k] = sum_{p >= 0} h_p(u_0, ..., u_k) / (k + p)!
//! ```
//!
//! where `h_p` is the complete homogeneous symmetric polynomial of degree `p`.
//! Wider clusters use scaling and squaring of the bidiagonal matrix
//! `Z = diag(z) + subdiag(1)`, whose exponential holds
//! `exp[z_j, ..., z_i]` in entry `(i, j)`. Both routes are continuous through
//! confluent nodes.

use alloc::vec;
use alloc::vec::Vec;

use crate::math::Complex64;

/// Node spread below which the Taylor series is summed directly.
pub const TAYLOR_SPREAD: f64 = 0.5;
/// Relative size of the last Taylor term kept.
const SERIES_CUTOFF: f64 = 1e-16;
const MAX_TERMS: usize = 400;

/// `exp[z_0, ..., z_n]`.
pub fn exp_divided_difference(nodes: &[Complex64]) -> Complex64 {
    assert!(
        !nodes.is_empty(),
        "divided difference needs at least one node"
    );
    let n = nodes.len() - 1;
    let center = nodes.iter().sum::<Complex64>() / (n + 1) as f64;
    let w: Vec<Complex64> = nodes.iter().map(|z| z - center).collect();
    let spread = spread(&w);
    let factor = center.exp();
    if spread < TAYLOR_SPREAD {
        return factor * taylor_prefixes(&w)[n];
    }

    let mut steps = 0u32;
    let mut sigma = 1.0;
    while spread / sigma >= TAYLOR_SPREAD {
        sigma *= 2.0;
        steps += 1;
    }
    let scaled: Vec<Complex64> = w.iter().map(|z| z / sigma).collect();

    // exp(Z / sigma) as a dense lower-triangular matrix.
    let m = n + 1;
    let mut mat = vec![Complex64::new(0.0, 0.0); m * m];
    for j in 0..m {
        let row = taylor_prefixes(&scaled[j..]);
        let mut damp = 1.0;
        for (k, v) in row.into_iter().enumerate() {
            mat[(j + k) * m + j] = v * damp;
            damp /= sigma;
        }
    }
    for _ in 0..steps {
        mat = square_lower(&mat, m);
    }
    factor * mat[n * m]
}

fn spread(w: &[Complex64]) -> f64 {
    let mut s: f64 = 0.0;
    for (a, za) in w.iter().enumerate() {
        for zb in &w[a + 1..] {
            s = s.max((za - zb).norm());
        }
    }
    s
}

/// `exp[u_0, ..., u_i]` for every prefix `i`, by Taylor series.
pub(crate) fn taylor_prefixes(u: &[Complex64]) -> Vec<Complex64> {
    let m = u.len();
    let zero = Complex64::new(0.0, 0.0);
    // h[i] = h_p(u_0..u_i) for the current degree p.
    let mut h = vec![Complex64::new(1.0, 0.0); m];
    // 1 / (i + p)! for the current p.
    let mut inv_fact: Vec<f64> = (0..m)
        .scan(1.0, |acc, i| {
            if i > 0 {
                *acc /= i as f64;
            }
            Some(*acc)
        })
        .collect();
    let base_inv = inv_fact.clone();
    let mut sum: Vec<Complex64> = h.iter().zip(&inv_fact).map(|(hi, f)| hi * f).collect();
    let mut done = vec![false; m];
    // |h_p(u_0..u_i)| / (i+p)! <= r^p / (p! i!), which also covers terms that
    // vanish by symmetry (centered nodes make h_1 = 0).
    let r = u.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let mut bound = 1.0;
    for p in 1..MAX_TERMS {
        bound *= r / p as f64;
        let mut prev = zero;
        for i in 0..m {
            h[i] = prev + u[i] * h[i];
            prev = h[i];
        }
        let mut all_done = true;
        for i in 0..m {
            inv_fact[i] /= (i + p) as f64;
            if done[i] {
                continue;
            }
            let term = h[i] * inv_fact[i];
            sum[i] += term;
            let next = term.norm().max(bound * base_inv[i]);
            if next < SERIES_CUTOFF * sum[i].norm() {
                done[i] = true;
            } else {
                all_done = false;
            }
        }
        if all_done {
            break;
        }
    }
    sum
}

fn square_lower(a: &[Complex64], m: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); m * m];
    for i in 0..m {
        for j in 0..=i {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in j..=i {
                acc += a[i * m + k] * a[k * m + j];
            }
            out[i * m + j] = acc;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::factorial;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Recursive definition; only trustworthy for well-separated nodes.
    fn naive(nodes: &[Complex64]) -> Complex64 {
        if nodes.len() == 1 {
            return nodes[0].exp();
        }
        let k = nodes.len() - 1;
        (naive(&nodes[1..]) - naive(&nodes[..k])) / (nodes[k] - nodes[0])
    }

    #[test]
    fn single_node_is_exp() {
        let z = c(0.3, -2.0);
        assert!((exp_divided_difference(&[z]) - z.exp()).norm() < 1e-15);
    }

    #[test]
    fn confluent_nodes_give_derivative_over_factorial() {
        for n in 1..6 {
            let z = c(0.0, 1.7);
            let nodes = vec![z; n + 1];
            let expect = z.exp() / factorial(n);
            assert!((exp_divided_difference(&nodes) - expect).norm() < 1e-15);
            let far = vec![c(0.0, 40.0); n + 1];
            let expect = far[0].exp() / factorial(n);
            assert!((exp_divided_difference(&far) - expect).norm() < 1e-14);
        }
    }

    #[test]
    fn separated_nodes_match_recursion() {
        let sets = [
            vec![c(0.0, 0.0), c(0.0, -3.0), c(0.0, 5.0)],
            vec![c(0.0, 1.0), c(0.0, -2.0), c(0.0, 4.5), c(0.0, 9.0)],
            vec![c(0.5, 1.0), c(-1.0, -2.0), c(0.0, 7.0), c(2.0, 0.0)],
        ];
        for nodes in sets {
            let a = exp_divided_difference(&nodes);
            let b = naive(&nodes);
            assert!((a - b).norm() < 1e-12 * b.norm().max(1e-3), "{a} vs {b}");
        }
    }

    #[test]
    fn both_routes_agree_at_the_threshold() {
        // Spread just below and just above the switch point.
        for spread in [0.4999, 0.5001, 0.9, 1.1] {
            let nodes = [
                c(0.0, 0.0),
                c(0.0, spread),
                c(0.0, spread / 3.0),
                c(0.0, 0.1),
            ];
            let a = exp_divided_difference(&nodes);
            let mut shifted = nodes;
            // Divided differences are symmetric in their nodes.
            shifted.reverse();
            let b = exp_divided_difference(&shifted);
            assert!((a - b).norm() < 1e-15);
            let d = naive(&nodes);
            assert!((a - d).norm() < 1e-10);
        }
    }
}
