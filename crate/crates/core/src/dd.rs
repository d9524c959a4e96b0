//! Double-double arithmetic: `hi + lo` with `|lo| <= ulp(hi)/2`, about 106
//! significant bits. Used where huge terms cancel, i.e. evaluating
//! E-functions near their singular set.

use alloc::vec::Vec;
use core::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

fn two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    let bb = s - a;
    Dd {
        hi: s,
        lo: (a - (s - bb)) + (b - bb),
    }
}

fn fast_two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    Dd {
        hi: s,
        lo: b - (s - a),
    }
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };
    const FRAC_PI_2: Dd = Dd {
        hi: core::f64::consts::FRAC_PI_2,
        lo: 6.123_233_995_736_766e-17,
    };

    /// The exact difference `a - b`.
    pub fn diff(a: f64, b: f64) -> Dd {
        two_sum(a, -b)
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn abs(self) -> Dd {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }
}

impl From<f64> for Dd {
    fn from(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, y: Dd) -> Dd {
        let s = two_sum(self.hi, y.hi);
        let t = two_sum(self.lo, y.lo);
        let s = fast_two_sum(s.hi, s.lo + t.hi);
        fast_two_sum(s.hi, s.lo + t.lo)
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, y: Dd) -> Dd {
        self + -y
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, y: Dd) -> Dd {
        let p = self.hi * y.hi;
        let e = libm::fma(self.hi, y.hi, -p) + (self.hi * y.lo + self.lo * y.hi);
        fast_two_sum(p, e)
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, y: Dd) -> Dd {
        let q1 = self.hi / y.hi;
        let r = self - y * Dd::from(q1);
        let q2 = r.hi / y.hi;
        let r = r - y * Dd::from(q2);
        let q3 = r.hi / y.hi;
        let q = fast_two_sum(q1, q2);
        q + Dd::from(q3)
    }
}

/// `Σ a_k b_k` accumulated in double-double.
pub fn dot(a: impl IntoIterator<Item = Dd>, b: &[f64]) -> Dd {
    a.into_iter()
        .zip(b)
        .fold(Dd::ZERO, |acc, (x, &y)| acc + x * Dd::from(y))
}

/// `(head - tail)·s` from the exact coordinate differences.
pub fn diff_dot(head: &[f64], tail: &[f64], s: &[f64]) -> Dd {
    dot(head.iter().zip(tail).map(|(&h, &t)| Dd::diff(h, t)), s)
}

/// `det(heads[k] - tail)` for 2 or 3 heads, from the exact differences.
pub fn edge_det(tail: &[f64], heads: &[&[f64]]) -> Dd {
    let e: Vec<Vec<Dd>> = heads
        .iter()
        .map(|h| h.iter().zip(tail).map(|(&a, &b)| Dd::diff(a, b)).collect())
        .collect();
    let minor = |a: &[Dd], b: &[Dd], i: usize, j: usize| a[i] * b[j] - a[j] * b[i];
    match e.len() {
        2 => minor(&e[0], &e[1], 0, 1),
        3 => {
            e[0][0] * minor(&e[1], &e[2], 1, 2) - e[0][1] * minor(&e[1], &e[2], 0, 2)
                + e[0][2] * minor(&e[1], &e[2], 0, 1)
        }
        n => unimplemented!("edge_det in dimension {n}"),
    }
}

/// `(cos x, sin x)` by reduction modulo `π/2` and Taylor series on
/// `|r| <= π/4`. Accurate to a few units of `2^-104` for `|x|` up to ~1e6.
pub fn cos_sin(x: Dd) -> (Dd, Dd) {
    let k = crate::math::round((x / Dd::FRAC_PI_2).hi);
    let r = x - Dd::FRAC_PI_2 * Dd::from(k);
    let r2 = r * r;
    // sin r = r Σ (-r²)^j / (2j+1)!, cos r = Σ (-r²)^j / (2j)!
    let (mut c, mut s) = (Dd::ONE, Dd::ONE);
    let (mut tc, mut ts) = (Dd::ONE, Dd::ONE);
    for j in 1..=14 {
        let j = j as f64;
        tc = -(tc * r2) / Dd::from((2.0 * j - 1.0) * (2.0 * j));
        ts = -(ts * r2) / Dd::from((2.0 * j) * (2.0 * j + 1.0));
        c = c + tc;
        s = s + ts;
    }
    let s = s * r;
    match (k as i64).rem_euclid(4) {
        0 => (c, s),
        1 => (-s, c),
        2 => (-c, -s),
        _ => (s, -c),
    }
}
