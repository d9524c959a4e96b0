//! Float helpers that work without `std`, plus the small dense linear algebra
//! the geometry code needs (dots, determinants, affine rank).

use alloc::vec::Vec;

pub use num_complex::Complex64;

#[inline]
pub fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub fn sin(x: f64) -> f64 {
    libm::sin(x)
}

#[inline]
pub fn cos(x: f64) -> f64 {
    libm::cos(x)
}

#[inline]
pub fn exp(x: f64) -> f64 {
    libm::exp(x)
}

#[inline]
pub fn atan2(y: f64, x: f64) -> f64 {
    libm::atan2(y, x)
}

#[inline]
pub fn ceil(x: f64) -> f64 {
    libm::ceil(x)
}

#[inline]
pub fn floor(x: f64) -> f64 {
    libm::floor(x)
}

#[inline]
pub fn round(x: f64) -> f64 {
    libm::round(x)
}

#[inline]
pub fn powi(x: f64, n: i32) -> f64 {
    libm::pow(x, n as f64)
}

#[inline]
pub fn log2(x: f64) -> f64 {
    libm::log2(x)
}

/// `e^{-i theta}`.
#[inline]
pub fn cis_neg(theta: f64) -> Complex64 {
    let (s, c) = libm::sincos(theta);
    Complex64::new(c, -s)
}

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub fn norm(a: &[f64]) -> f64 {
    sqrt(dot(a, a))
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn scale(a: &[f64], k: f64) -> Vec<f64> {
    a.iter().map(|x| x * k).collect()
}

/// Max-norm distance.
pub fn dist_inf(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    sqrt(a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum())
}

pub fn cross3(a: &[f64], b: &[f64]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// Squared norm of the wedge product `a ^ b`, i.e. `|a|^2 |b|^2 - (a.b)^2`,
/// summed from 2x2 minors so small angles keep their precision.
pub fn wedge_norm_sq(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len();
    let mut acc = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            let m = a[i] * b[j] - a[j] * b[i];
            acc += m * m;
        }
    }
    acc
}

pub fn centroid(points: &[Vec<f64>]) -> Vec<f64> {
    let dim = points.first().map_or(0, Vec::len);
    let mut c = alloc::vec![0.0; dim];
    for p in points {
        for (ci, pi) in c.iter_mut().zip(p) {
            *ci += pi;
        }
    }
    let k = points.len().max(1) as f64;
    c.iter_mut().for_each(|x| *x /= k);
    c
}

/// Determinant of a square matrix given as rows, by partial-pivot elimination.
#[allow(clippy::needless_range_loop)]
pub fn det(rows: &[Vec<f64>]) -> f64 {
    let n = rows.len();
    match n {
        0 => return 1.0,
        1 => return rows[0][0],
        2 => return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0],
        3 => return dot(&rows[0], &cross3(&rows[1], &rows[2])),
        _ => {}
    }
    let mut m: Vec<Vec<f64>> = rows.to_vec();
    let mut d = 1.0;
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))
            .unwrap();
        if m[pivot][col] == 0.0 {
            return 0.0;
        }
        if pivot != col {
            m.swap(pivot, col);
            d = -d;
        }
        d *= m[col][col];
        for r in (col + 1)..n {
            let f = m[r][col] / m[col][col];
            for c in col..n {
                m[r][c] -= f * m[col][c];
            }
        }
    }
    d
}

/// Rank of a set of vectors by modified Gram-Schmidt; a vector counts as new
/// when its residual exceeds `tol`.
pub fn rank(vectors: &[Vec<f64>], tol: f64) -> usize {
    let mut basis: Vec<Vec<f64>> = Vec::new();
    // Process longest first so the tolerance compares against a stable basis.
    let mut order: Vec<usize> = (0..vectors.len()).collect();
    order.sort_by(|&a, &b| norm(&vectors[b]).total_cmp(&norm(&vectors[a])));
    for i in order {
        let mut r = vectors[i].clone();
        for _ in 0..2 {
            for b in &basis {
                let k = dot(&r, b);
                r.iter_mut().zip(b).for_each(|(x, y)| *x -= k * y);
            }
        }
        let nr = norm(&r);
        if nr > tol {
            r.iter_mut().for_each(|x| *x /= nr);
            basis.push(r);
        }
    }
    basis.len()
}

/// Dimension of the affine hull of `points`.
pub fn affine_rank(points: &[Vec<f64>], tol: f64) -> usize {
    let Some(first) = points.first() else {
        return 0;
    };
    let diffs: Vec<Vec<f64>> = points[1..].iter().map(|p| sub(p, first)).collect();
    rank(&diffs, tol)
}

pub fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}
