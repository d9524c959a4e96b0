//! `F_P(s) = ∫_P e^{-i s·x} dx` for convex polytopes.
//!
//! The reference path sums closed-form simplex transforms over a
//! triangulation. [`EFunction`] gives the vertex-cone representation
//! `Σ_v Q_v(s) e^{-i v·s}` and its squared modulus; [`brute_force_ft`] is a
//! Monte-Carlo oracle.

mod divided;
mod efunction;
mod oracle;

use alloc::vec::Vec;

use crate::geometry::{Point, Polytope, Simplex};
use crate::math::{self, Complex64};

pub use divided::{exp_divided_difference, TAYLOR_SPREAD};
pub use efunction::{vertex_cone_efunction, EFunction, ETerm, Edge, RationalTerm, TAU_SING};
pub use oracle::{brute_force_ft, brute_force_ft_batch, random_frequencies, McEstimate};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FourierError {
    #[error("tangent cone at vertex {vertex} is not pointed")]
    DegenerateVertex { vertex: usize },
    #[error("evaluation point is within the singular guard of edge {edge:?}")]
    NearSingular { edge: Point },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("vertex-cone representation is only built for dimensions 2 and 3, got {0}")]
    UnsupportedDimension(usize),
    #[error("E-function terms are inconsistent: {0}")]
    InvalidTerms(&'static str),
}

/// `∫_Δ e^{-i s·x} dx = n!·vol(Δ)·exp[-i s·v_0, ..., -i s·v_n]`.
pub fn simplex_ft(sx: &Simplex, s: &[f64]) -> Complex64 {
    ft_from_vertices(sx.vertices(), sx.signed_det().abs(), s)
}

fn ft_from_vertices(vertices: &[Point], abs_det: f64, s: &[f64]) -> Complex64 {
    let nodes: Vec<Complex64> = vertices
        .iter()
        .map(|v| Complex64::new(0.0, -math::dot(v, s)))
        .collect();
    exp_divided_difference(&nodes) * abs_det
}

/// Sum of [`simplex_ft`] over [`Polytope::triangulate`].
pub fn polytope_ft(p: &Polytope, s: &[f64]) -> Complex64 {
    FtEvaluator::new(p).eval(s)
}

/// A polytope's triangulation kept around for repeated evaluation.
#[derive(Debug, Clone)]
pub struct FtEvaluator {
    dim: usize,
    simplices: Vec<(Vec<Point>, f64)>,
}

impl FtEvaluator {
    pub fn new(p: &Polytope) -> Self {
        Self {
            dim: p.dim(),
            simplices: p
                .triangulate()
                .into_iter()
                .map(|s| {
                    let d = s.signed_det().abs();
                    (s.vertices().to_vec(), d)
                })
                .collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn eval(&self, s: &[f64]) -> Complex64 {
        assert_eq!(s.len(), self.dim, "frequency dimension mismatch");
        self.simplices
            .iter()
            .map(|(v, d)| ft_from_vertices(v, *d, s))
            .sum()
    }

    pub fn modulus(&self, s: &[f64]) -> f64 {
        self.eval(s).norm()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{shapes, Sign};
    use alloc::vec;
    use core::f64::consts::PI;

    /// Separable closed form for an axis box, independent of the simplex path.
    fn box_ft(lo: &[f64], hi: &[f64], s: &[f64]) -> Complex64 {
        let mut acc = Complex64::new(1.0, 0.0);
        for k in 0..s.len() {
            let f = if s[k].abs() * (hi[k] - lo[k]) < 1e-6 {
                Complex64::new(hi[k] - lo[k], 0.0) * math::cis_neg(s[k] * (lo[k] + hi[k]) / 2.0)
            } else {
                (math::cis_neg(s[k] * lo[k]) - math::cis_neg(s[k] * hi[k]))
                    / Complex64::new(0.0, s[k])
            };
            acc *= f;
        }
        acc
    }

    /// Tensor Gauss-Legendre on the unit square mapped onto the triangle
    /// (Duffy collapse), with the interval split into panels.
    fn triangle_quadrature(tri: &[[f64; 2]; 3], s: [f64; 2]) -> Complex64 {
        // 10-point Gauss-Legendre on [0,1].
        const X: [f64; 5] = [
            0.148_874_338_981_631_2,
            0.433_395_394_129_247_2,
            0.679_409_568_299_024_4,
            0.865_063_366_688_984_5,
            0.973_906_528_517_171_7,
        ];
        const W: [f64; 5] = [
            0.295_524_224_714_752_9,
            0.269_266_719_309_996_4,
            0.219_086_362_515_982,
            0.149_451_349_150_580_6,
            0.066_671_344_308_688_1,
        ];
        let mut nodes = Vec::new();
        let panels = 8;
        for p in 0..panels {
            let a = p as f64 / panels as f64;
            let h = 1.0 / panels as f64;
            for k in 0..5 {
                for sign in [-1.0, 1.0] {
                    nodes.push((a + h * (1.0 + sign * X[k]) / 2.0, W[k] * h / 2.0));
                }
            }
        }
        let [a, b, c] = tri;
        let jac = ((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])).abs();
        let mut acc = Complex64::new(0.0, 0.0);
        for &(u, wu) in &nodes {
            for &(v, wv) in &nodes {
                // (u, v) in the square -> barycentric (u(1-v), uv)
                let l1 = u * (1.0 - v);
                let l2 = u * v;
                let x = a[0] + l1 * (b[0] - a[0]) + l2 * (c[0] - a[0]);
                let y = a[1] + l1 * (b[1] - a[1]) + l2 * (c[1] - a[1]);
                acc += math::cis_neg(s[0] * x + s[1] * y) * (wu * wv * u * jac);
            }
        }
        acc
    }

    #[test]
    fn values_at_origin_are_volumes() {
        let tri = shapes::standard_simplex(2);
        assert!((polytope_ft(&tri, &[0.0, 0.0]) - 0.5).norm() < 1e-15);
        let tet = shapes::standard_simplex(3);
        assert!((polytope_ft(&tet, &[0.0; 3]) - 1.0 / 6.0).norm() < 1e-15);
        let ico = shapes::icosahedron();
        assert!((polytope_ft(&ico, &[0.0; 3]).re - ico.volume()).abs() < 1e-12 * ico.volume());
    }

    #[test]
    fn confluent_triangle_matches_quadrature() {
        let tri = [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]];
        let s = [PI, PI];
        let q = triangle_quadrature(&tri, s);
        let p = shapes::standard_simplex(2);
        let f = polytope_ft(&p, &s);
        assert!((f - q).norm() < 1e-9, "{f} vs {q}");
        for s in [[1.0, -2.0], [4.0, 0.3], [-7.0, 7.0]] {
            let q = triangle_quadrature(&tri, s);
            assert!((polytope_ft(&p, &s) - q).norm() < 1e-9);
        }
    }

    #[test]
    fn cube_matches_box_closed_form() {
        let cube = shapes::unit_cube();
        let f = polytope_ft(&cube, &[PI, PI, PI]);
        let expect = (2.0 / PI).powi(3);
        assert!((f.norm() - expect).abs() < 1e-13);
        let lo = [-0.3, 0.2, 1.0];
        let hi = [0.4, 1.7, 1.5];
        let b = shapes::axis_box(&lo, &hi);
        for s in [[0.5, -1.0, 2.0], [3.0, 0.0, -4.0], [1e-9, 2.0, 0.1]] {
            let a = polytope_ft(&b, &s);
            let c = box_ft(&lo, &hi, &s);
            assert!((a - c).norm() <= 1e-12 * c.norm(), "{a} vs {c}");
        }
    }

    #[test]
    fn conjugate_symmetry_and_congruence() {
        let p = shapes::regular_tetrahedron();
        let q = p.transform(Sign::Minus, &[0.3, -2.0, 1.0]);
        for s in [[0.3, 0.7, -1.1], [2.0, 0.0, 0.0], [-4.0, 1.0, 3.0]] {
            let f = polytope_ft(&p, &s);
            let neg: Vec<f64> = s.iter().map(|x| -x).collect();
            assert!((polytope_ft(&p, &neg) - f.conj()).norm() < 1e-14);
            assert!((polytope_ft(&q, &s).norm() - f.norm()).abs() < 1e-12 * f.norm());
        }
    }

    #[test]
    fn square_simplices_sum() {
        let sq = shapes::unit_square();
        let s = [1.0, 2.0];
        let direct: Complex64 = sq.triangulate().iter().map(|t| simplex_ft(t, &s)).sum();
        assert_eq!(direct, polytope_ft(&sq, &s));
        // Four-dimensional simplex: generic dimension works through simplex_ft.
        let mut v = vec![vec![0.0; 4]];
        for k in 0..4 {
            let mut e = vec![0.0; 4];
            e[k] = 1.0;
            v.push(e);
        }
        let s4 = Simplex::new(v).unwrap();
        assert!((simplex_ft(&s4, &[0.0; 4]).re - 1.0 / 24.0).abs() < 1e-16);
    }
}
