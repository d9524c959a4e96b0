//! Full-dimensional convex polytopes in R^2 and R^3 with both vertex and
//! halfspace descriptions, plus simplices, clipping and difference multisets.

mod assemble;
mod clip;
mod hull;
mod multiset;
pub mod shapes;

use alloc::vec::Vec;

use crate::math::{self, dot};

pub use multiset::{difference_multiset, general_position_check, DifferenceMultiset};

/// Absolute tolerance for coincidence and incidence tests, in model units.
pub const TAU_GEOM: f64 = 1e-9;
/// Tolerance on the sine of the angle between two directions.
pub const TAU_ANG: f64 = 1e-9;

pub type Point = Vec<f64>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GeometryError {
    #[error("input points span an affine subspace of dimension {rank}, expected {dim}")]
    DegenerateInput { rank: usize, dim: usize },
    #[error("dimension {0} is not supported here (expected 2 or 3)")]
    UnsupportedDimension(usize),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("input contains a non-finite coordinate")]
    NonFinite,
    #[error("a simplex in R^{dim} needs {expected} vertices, got {found}")]
    SimplexVertexCount {
        dim: usize,
        expected: usize,
        found: usize,
    },
    #[error("simplex vertices are affinely dependent")]
    DegenerateSimplex,
}

/// Closed halfspace `{x : normal . x <= offset}` with a unit normal.
#[derive(Debug, Clone, PartialEq)]
pub struct Halfspace {
    pub normal: Vec<f64>,
    pub offset: f64,
}

impl Halfspace {
    /// Builds a halfspace, normalizing `normal` (and `offset` with it).
    pub fn new(normal: Vec<f64>, offset: f64) -> Self {
        let len = math::norm(&normal);
        Self {
            normal: normal.iter().map(|x| x / len).collect(),
            offset: offset / len,
        }
    }

    /// The closure of the complement.
    pub fn flipped(&self) -> Self {
        Self {
            normal: self.normal.iter().map(|x| -x).collect(),
            offset: -self.offset,
        }
    }

    #[inline]
    pub fn signed_distance(&self, x: &[f64]) -> f64 {
        dot(&self.normal, x) - self.offset
    }
}

/// A facet: its supporting halfspace and the indices of its vertices. In 3D the
/// vertices are in counter-clockwise order seen from outside; in 2D the pair
/// follows the counter-clockwise boundary.
#[derive(Debug, Clone, PartialEq)]
pub struct Facet {
    pub vertices: Vec<usize>,
    pub halfspace: Halfspace,
}

/// `+1` or `-1` in `P' = eps * P + v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn from_i32(v: i32) -> Option<Self> {
        match v {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }
}

/// Full-dimensional convex polytope.
///
/// Vertices are exactly the extreme points. Facets are recomputed whenever a
/// polytope is built, so the two descriptions always agree to within
/// [`TAU_GEOM`].
#[derive(Debug, Clone, PartialEq)]
pub struct Polytope {
    dim: usize,
    vertices: Vec<Point>,
    facets: Vec<Facet>,
}

impl Polytope {
    /// Convex hull of `points` in R^2 or R^3.
    ///
    /// The returned vertices are a subset of the input, kept in input order.
    pub fn convex_hull(points: &[Point]) -> Result<Self, GeometryError> {
        hull::convex_hull(points)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    /// Closed-set membership.
    pub fn contains(&self, x: &[f64]) -> bool {
        self.facets
            .iter()
            .all(|f| f.halfspace.signed_distance(x) <= TAU_GEOM)
    }

    /// Fan triangulation from vertex 0 over the (fan-triangulated) facets that
    /// do not contain vertex 0.
    pub fn triangulate(&self) -> Vec<Simplex> {
        let apex = &self.vertices[0];
        let mut out = Vec::new();
        for facet in self.facets.iter().filter(|f| !f.vertices.contains(&0)) {
            let fv = &facet.vertices;
            match self.dim {
                2 => out.push(Simplex::new_unchecked(alloc::vec![
                    apex.clone(),
                    self.vertices[fv[0]].clone(),
                    self.vertices[fv[1]].clone(),
                ])),
                _ => {
                    for k in 1..fv.len() - 1 {
                        out.push(Simplex::new_unchecked(alloc::vec![
                            apex.clone(),
                            self.vertices[fv[0]].clone(),
                            self.vertices[fv[k]].clone(),
                            self.vertices[fv[k + 1]].clone(),
                        ]));
                    }
                }
            }
        }
        out
    }

    pub fn volume(&self) -> f64 {
        self.triangulate().iter().map(Simplex::volume).sum()
    }

    /// Volume centroid.
    pub fn centroid(&self) -> Point {
        let mut c = alloc::vec![0.0; self.dim];
        let mut total = 0.0;
        for s in self.triangulate() {
            let v = s.volume();
            let sc = math::centroid(s.vertices());
            for (ci, x) in c.iter_mut().zip(&sc) {
                *ci += v * x;
            }
            total += v;
        }
        c.iter_mut().for_each(|x| *x /= total);
        c
    }

    /// Mean of the vertices.
    pub fn vertex_centroid(&self) -> Point {
        math::centroid(&self.vertices)
    }

    /// `eps * P + shift`.
    pub fn transform(&self, eps: Sign, shift: &[f64]) -> Self {
        assert_eq!(shift.len(), self.dim, "shift dimension mismatch");
        let e = eps.value();
        let vertices = self
            .vertices
            .iter()
            .map(|x| x.iter().zip(shift).map(|(xi, vi)| e * xi + vi).collect())
            .collect();
        let facets = self
            .facets
            .iter()
            .map(|f| {
                let normal: Vec<f64> = f.halfspace.normal.iter().map(|x| e * x).collect();
                let offset = f.halfspace.offset + e * dot(&f.halfspace.normal, shift);
                let mut verts = f.vertices.clone();
                // Point reflection reverses orientation in odd dimensions.
                if eps == Sign::Minus && self.dim % 2 == 1 {
                    verts[1..].reverse();
                }
                Facet {
                    vertices: verts,
                    halfspace: Halfspace { normal, offset },
                }
            })
            .collect();
        Self {
            dim: self.dim,
            vertices,
            facets,
        }
    }

    pub fn translate(&self, shift: &[f64]) -> Self {
        self.transform(Sign::Plus, shift)
    }

    /// `P ∩ h`, or `None` when the result has no interior.
    pub fn clip(&self, h: &Halfspace) -> Option<Self> {
        clip::clip(self, h)
    }

    /// `P ∩ Q` by clipping `P` with every facet halfspace of `Q`.
    pub fn intersect(&self, other: &Self) -> Result<Option<Self>, GeometryError> {
        if self.dim != other.dim {
            return Err(GeometryError::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        let mut acc = self.clone();
        for f in &other.facets {
            match acc.clip(&f.halfspace) {
                Some(p) => acc = p,
                None => return Ok(None),
            }
        }
        Ok(Some(acc))
    }

    /// Edges as vertex index pairs `(i, j)` with `i < j`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let inc = self.vertex_facets();
        let mut out = Vec::new();
        for i in 0..self.vertices.len() {
            for j in (i + 1)..self.vertices.len() {
                let shared = inc[i].iter().filter(|f| inc[j].contains(f)).count();
                if shared + 1 >= self.dim {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// For each vertex, the indices of the facets containing it.
    pub fn vertex_facets(&self) -> Vec<Vec<usize>> {
        let mut inc = alloc::vec![Vec::new(); self.vertices.len()];
        for (fi, f) in self.facets.iter().enumerate() {
            for &v in &f.vertices {
                inc[v].push(fi);
            }
        }
        inc
    }

    /// Axis-aligned bounding box as `(lo, hi)`.
    pub fn bounding_box(&self) -> (Point, Point) {
        let mut lo = alloc::vec![f64::INFINITY; self.dim];
        let mut hi = alloc::vec![f64::NEG_INFINITY; self.dim];
        for v in &self.vertices {
            for k in 0..self.dim {
                lo[k] = lo[k].min(v[k]);
                hi[k] = hi[k].max(v[k]);
            }
        }
        (lo, hi)
    }

    pub(crate) fn from_parts(dim: usize, vertices: Vec<Point>, facets: Vec<Facet>) -> Self {
        Self {
            dim,
            vertices,
            facets,
        }
    }
}

/// `n + 1` affinely independent points in R^n.
#[derive(Debug, Clone, PartialEq)]
pub struct Simplex {
    vertices: Vec<Point>,
}

impl Simplex {
    pub fn new(vertices: Vec<Point>) -> Result<Self, GeometryError> {
        let dim = vertices.first().map_or(0, Vec::len);
        if vertices.len() != dim + 1 {
            return Err(GeometryError::SimplexVertexCount {
                dim,
                expected: dim + 1,
                found: vertices.len(),
            });
        }
        if let Some(v) = vertices.iter().find(|v| v.len() != dim) {
            return Err(GeometryError::DimensionMismatch {
                expected: dim,
                found: v.len(),
            });
        }
        let s = Self { vertices };
        if s.signed_det().abs() <= TAU_GEOM {
            return Err(GeometryError::DegenerateSimplex);
        }
        Ok(s)
    }

    pub(crate) fn new_unchecked(vertices: Vec<Point>) -> Self {
        Self { vertices }
    }

    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    /// Determinant of the edge matrix `[v_1 - v_0, ..., v_n - v_0]`.
    pub fn signed_det(&self) -> f64 {
        let v0 = &self.vertices[0];
        let rows: Vec<Vec<f64>> = self.vertices[1..]
            .iter()
            .map(|v| math::sub(v, v0))
            .collect();
        math::det(&rows)
    }

    pub fn volume(&self) -> f64 {
        self.signed_det().abs() / math::factorial(self.dim())
    }
}

#[cfg(test)]
mod tests {
    use super::shapes;
    use super::*;
    use alloc::vec;

    #[test]
    fn cube_with_center_point() {
        let mut pts = shapes::unit_cube().vertices().to_vec();
        pts.push(vec![0.5, 0.5, 0.5]);
        let p = Polytope::convex_hull(&pts).unwrap();
        assert_eq!(p.vertices().len(), 8);
        assert_eq!(p.facets().len(), 6);
        assert!((p.volume() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn triangle_hull() {
        let p = Polytope::convex_hull(&[vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert_eq!(p.facets().len(), 3);
        assert!((p.volume() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn regular_tetrahedron_volume_matches_closed_form() {
        let p = shapes::regular_tetrahedron();
        assert_eq!(p.facets().len(), 4);
        assert!(p.facets().iter().all(|f| f.vertices.len() == 3));
        // Independent route: determinant of the edge matrix.
        let v = p.vertices();
        let rows: Vec<Vec<f64>> = v[1..].iter().map(|x| math::sub(x, &v[0])).collect();
        let by_det = math::det(&rows).abs() / 6.0;
        let edge = math::dist(&v[0], &v[1]);
        let closed = edge * edge * edge / (6.0 * math::sqrt(2.0));
        assert!((by_det - closed).abs() < 1e-12);
        assert!((p.volume() - closed).abs() < 1e-12);
    }

    #[test]
    fn degenerate_hull_is_rejected() {
        let err = Polytope::convex_hull(&[
            vec![0.0, 0.0, 0.0],
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![1.0, 1.0, 0.0],
        ])
        .unwrap_err();
        assert_eq!(err, GeometryError::DegenerateInput { rank: 2, dim: 3 });
        assert!(matches!(
            Polytope::convex_hull(&[vec![0.0; 4], vec![1.0, 0.0, 0.0, 0.0]]),
            Err(GeometryError::UnsupportedDimension(4))
        ));
    }

    #[test]
    fn triangulations() {
        let cube = shapes::unit_cube();
        let t = cube.triangulate();
        assert_eq!(t.len(), 6);
        let total: f64 = t.iter().map(|s| s.signed_det().abs() / 6.0).sum();
        assert!((total - 1.0).abs() < 1e-12);

        let tet = shapes::standard_simplex(3);
        assert_eq!(tet.triangulate().len(), 1);
        assert!((tet.volume() - 1.0 / 6.0).abs() < 1e-15);

        let sq = shapes::unit_square();
        let t = sq.triangulate();
        assert_eq!(t.len(), 2);
        assert!(t.iter().all(|s| (s.volume() - 0.5).abs() < 1e-15));
        assert!((shapes::standard_simplex(2).volume() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn clip_cases() {
        let cube = shapes::unit_cube();
        let half = cube
            .clip(&Halfspace::new(vec![1.0, 0.0, 0.0], 0.5))
            .unwrap();
        assert!((half.volume() - 0.5).abs() < 1e-12);
        assert_eq!(half.vertices().len(), 8);

        let same = cube
            .clip(&Halfspace::new(vec![1.0, 0.0, 0.0], 2.0))
            .unwrap();
        assert_eq!(same, cube);

        let corner = cube
            .clip(&Halfspace::new(vec![1.0, 1.0, 1.0], 0.5))
            .unwrap();
        assert_eq!(corner.vertices().len(), 4);
        assert!((corner.volume() - 0.125 / 6.0).abs() < 1e-12);

        assert!(cube
            .clip(&Halfspace::new(vec![1.0, 0.0, 0.0], -0.5))
            .is_none());
        // Touching only a face has no interior.
        assert!(cube
            .clip(&Halfspace::new(vec![1.0, 0.0, 0.0], 0.0))
            .is_none());
    }

    #[test]
    fn intersections() {
        let cube = shapes::unit_cube();
        let same = cube.intersect(&cube).unwrap().unwrap();
        assert!((same.volume() - cube.volume()).abs() < 1e-12);
        let shifted = cube.translate(&[0.5, 0.0, 0.0]);
        let half = cube.intersect(&shifted).unwrap().unwrap();
        assert!((half.volume() - 0.5).abs() < 1e-12);
        let far = cube.translate(&[2.0, 0.0, 0.0]);
        assert!(cube.intersect(&far).unwrap().is_none());
        assert!(cube.intersect(&shapes::unit_square()).is_err());
    }

    #[test]
    fn transforms() {
        let cube = shapes::unit_cube();
        assert_eq!(cube.transform(Sign::Plus, &[0.0; 3]), cube);
        let r = cube.transform(Sign::Minus, &[0.0; 3]);
        let (lo, hi) = r.bounding_box();
        assert_eq!(lo, vec![-1.0; 3]);
        assert_eq!(hi, vec![0.0; 3]);
        assert!((r.volume() - 1.0).abs() < 1e-12);
        for f in r.facets() {
            for &v in &f.vertices {
                assert!(f.halfspace.signed_distance(&r.vertices()[v]).abs() < 1e-12);
            }
        }
        // (eps, v) then (eps, -eps v) is the identity.
        let v = [0.3, -1.0, 2.0];
        for eps in [Sign::Plus, Sign::Minus] {
            let undo: Vec<f64> = v.iter().map(|x| -eps.value() * x).collect();
            let twice = cube.transform(eps, &v).transform(eps, &undo);
            for (a, b) in twice.vertices().iter().zip(cube.vertices()) {
                assert!(math::dist(a, b) < 1e-15);
            }
            assert_eq!(twice.facets().len(), 6);
        }
    }

    #[test]
    fn contains_is_closed() {
        let cube = shapes::unit_cube();
        assert!(cube.contains(&[0.5, 0.5, 0.5]));
        assert!(!cube.contains(&[2.0, 0.0, 0.0]));
        assert!(cube.contains(&[1.0, 0.5, 0.5]));
    }

    #[test]
    fn simplex_validation() {
        assert!(Simplex::new(vec![vec![0.0, 0.0], vec![1.0, 0.0]]).is_err());
        assert_eq!(
            Simplex::new(vec![vec![0.0, 0.0], vec![1.0, 1.0], vec![2.0, 2.0]]),
            Err(GeometryError::DegenerateSimplex)
        );
    }
}
