use alloc::vec::Vec;

use super::FourierError;
use crate::dd::{self, Dd};
use crate::geometry::{DifferenceMultiset, Point, Polytope, TAU_GEOM};
use crate::math::{self, atan2, cross3, dot, Complex64};

/// Normalized `|e·s| / (|e| |s|)` at or below which evaluation is refused.
pub const TAU_SING: f64 = 1e-8;

/// A polytope edge kept by its endpoints, so `e·s` can be evaluated from the
/// exact coordinate differences.
#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    pub tail: Point,
    pub head: Point,
}

impl Edge {
    pub fn new(tail: Point, head: Point) -> Self {
        Self { tail, head }
    }

    pub fn vector(&self) -> Point {
        math::sub(&self.head, &self.tail)
    }

    pub fn dot(&self, s: &[f64]) -> f64 {
        dd::diff_dot(&self.head, &self.tail, s).to_f64()
    }
}

/// `weight · (-i)^phase / ∏_e (e·s)`: a homogeneous rational function of
/// degree `-edges.len()`. Phases are kept in `{0, 1}`; a factor `-1` is folded
/// into the weight. The weight is double-double because near the singular set
/// the terms of an E-function are huge and cancel.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalTerm {
    pub weight: Dd,
    pub phase: u8,
    pub edges: Vec<Edge>,
}

impl RationalTerm {
    pub fn new(weight: impl Into<Dd>, phase: u8, edges: Vec<Edge>) -> Self {
        let weight = weight.into();
        let phase = phase % 4;
        if phase >= 2 {
            Self {
                weight: -weight,
                phase: phase - 2,
                edges,
            }
        } else {
            Self {
                weight,
                phase,
                edges,
            }
        }
    }

    pub fn degree(&self) -> i32 {
        -(self.edges.len() as i32)
    }

    /// `(re, im)` at `s`; the caller guarantees no denominator vanishes.
    fn eval(&self, s: &[f64]) -> (Dd, Dd) {
        let den = self
            .edges
            .iter()
            .fold(Dd::ONE, |d, e| d * dd::diff_dot(&e.head, &e.tail, s));
        let v = self.weight / den;
        match self.phase {
            0 => (v, Dd::ZERO),
            _ => (Dd::ZERO, -v),
        }
    }
}

/// One exponential `e^{-i v·s}` with its rational coefficient. `multiplicity`
/// counts how many ordered vertex pairs were merged into this exponent (1 for
/// a first-order transform).
#[derive(Debug, Clone, PartialEq)]
pub struct ETerm {
    pub exponent: Point,
    pub multiplicity: usize,
    pub coeff: Vec<RationalTerm>,
}

/// `F(s) = Σ_k P_k(s) e^{-i v_k·s}` with pairwise distinct `v_k` and
/// coefficients homogeneous of one common degree.
#[derive(Debug, Clone, PartialEq)]
pub struct EFunction {
    dim: usize,
    degree: i32,
    terms: Vec<ETerm>,
}

impl EFunction {
    /// The zero function.
    pub fn zero(dim: usize, degree: i32) -> Self {
        Self {
            dim,
            degree,
            terms: Vec::new(),
        }
    }

    /// Validates degrees, dimensions and distinctness of exponents.
    pub fn from_terms(dim: usize, degree: i32, terms: Vec<ETerm>) -> Result<Self, FourierError> {
        for (k, t) in terms.iter().enumerate() {
            if t.exponent.len() != dim {
                return Err(FourierError::DimensionMismatch {
                    expected: dim,
                    found: t.exponent.len(),
                });
            }
            if t.coeff.iter().any(|r| r.degree() != degree) {
                return Err(FourierError::InvalidTerms(
                    "coefficient degree differs from the function degree",
                ));
            }
            if t.coeff
                .iter()
                .flat_map(|r| &r.edges)
                .any(|e| e.tail.len() != dim || e.head.len() != dim)
            {
                return Err(FourierError::InvalidTerms(
                    "edge dimension differs from the function dimension",
                ));
            }
            if terms[..k]
                .iter()
                .any(|o| math::dist_inf(&o.exponent, &t.exponent) <= TAU_GEOM)
            {
                return Err(FourierError::InvalidTerms("exponents are not distinct"));
            }
        }
        Ok(Self { dim, degree, terms })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> i32 {
        self.degree
    }

    pub fn terms(&self) -> &[ETerm] {
        &self.terms
    }

    /// Smallest normalized `|e·s| / (|e||s|)` over all denominator edges, with
    /// the edge attaining it. `None` for a function without denominators.
    pub fn singular_margin(&self, s: &[f64]) -> Option<(f64, &Edge)> {
        let ns = math::norm(s);
        self.terms
            .iter()
            .flat_map(|t| &t.coeff)
            .flat_map(|r| &r.edges)
            .map(|e| {
                let m = if ns == 0.0 {
                    0.0
                } else {
                    e.dot(s).abs() / (math::norm(&e.vector()) * ns)
                };
                (m, e)
            })
            .min_by(|a, b| a.0.total_cmp(&b.0))
    }

    /// Term-wise evaluation. Fails with [`FourierError::NearSingular`] when a
    /// denominator edge is within [`TAU_SING`] of orthogonal to `s`.
    pub fn eval(&self, s: &[f64]) -> Result<Complex64, FourierError> {
        if s.len() != self.dim {
            return Err(FourierError::DimensionMismatch {
                expected: self.dim,
                found: s.len(),
            });
        }
        if let Some((m, e)) = self.singular_margin(s) {
            if m <= TAU_SING {
                return Err(FourierError::NearSingular { edge: e.vector() });
            }
        }
        let (mut re, mut im) = (Dd::ZERO, Dd::ZERO);
        for t in &self.terms {
            let (mut qr, mut qi) = (Dd::ZERO, Dd::ZERO);
            for r in &t.coeff {
                let (a, b) = r.eval(s);
                qr = qr + a;
                qi = qi + b;
            }
            let (c, sn) = dd::cos_sin(dd::dot(t.exponent.iter().map(|&x| Dd::from(x)), s));
            // (qr + i qi)(c - i sn)
            re = re + qr * c + qi * sn;
            im = im + qi * c - qr * sn;
        }
        Ok(Complex64::new(re.to_f64(), im.to_f64()))
    }

    /// `|F(s)|^2 = F(s)·conj(F(s))` as an E-function of twice the degree, with
    /// exponents `v_a - v_b` merged when they coincide.
    pub fn squared_modulus(&self) -> Self {
        let mut terms: Vec<ETerm> = Vec::new();
        for a in &self.terms {
            for b in &self.terms {
                let exponent = math::sub(&a.exponent, &b.exponent);
                let coeff: Vec<RationalTerm> = a
                    .coeff
                    .iter()
                    .flat_map(|ra| {
                        b.coeff.iter().map(move |rb| {
                            let mut edges = ra.edges.clone();
                            edges.extend(rb.edges.iter().cloned());
                            // conj((-i)^k) = (-i)^{-k}
                            RationalTerm::new(ra.weight * rb.weight, ra.phase + 4 - rb.phase, edges)
                        })
                    })
                    .collect();
                let mult = a.multiplicity * b.multiplicity;
                match terms
                    .iter_mut()
                    .find(|t| math::dist_inf(&t.exponent, &exponent) <= TAU_GEOM)
                {
                    Some(t) => {
                        t.multiplicity += mult;
                        t.coeff.extend(coeff);
                    }
                    None => terms.push(ETerm {
                        exponent,
                        multiplicity: mult,
                        coeff,
                    }),
                }
            }
        }
        Self {
            dim: self.dim,
            degree: 2 * self.degree,
            terms,
        }
    }

    /// Exponent vectors with their merge multiplicities.
    pub fn exponent_support(&self) -> DifferenceMultiset {
        DifferenceMultiset::from_weighted(
            self.terms
                .iter()
                .map(|t| (t.exponent.clone(), t.multiplicity)),
            TAU_GEOM,
        )
    }
}

/// Brion-type representation: each vertex tangent cone is split into
/// simplicial cones `v + cone(e_1..e_n)`, each contributing
/// `|det(e_1..e_n)| / (i^n ∏ e_k·s)` to the coefficient of `e^{-i v·s}`.
/// Edge generators are the polytope's edge vectors leaving `v`.
pub fn vertex_cone_efunction(p: &Polytope) -> Result<EFunction, FourierError> {
    let n = p.dim();
    if n != 2 && n != 3 {
        return Err(FourierError::UnsupportedDimension(n));
    }
    let verts = p.vertices();
    let mut neighbors: Vec<Vec<usize>> = alloc::vec![Vec::new(); verts.len()];
    for (i, j) in p.edges() {
        neighbors[i].push(j);
        neighbors[j].push(i);
    }
    let incident = p.vertex_facets();
    let mut terms = Vec::with_capacity(verts.len());
    for (vi, v) in verts.iter().enumerate() {
        let gens: Vec<Point> = neighbors[vi]
            .iter()
            .map(|&j| math::sub(&verts[j], v))
            .collect();
        // Minus the sum of the incident outward normals: every edge leaving
        // `v` misses at least one incident facet, so it has a strictly
        // positive component along this axis.
        let mut axis = alloc::vec![0.0; n];
        for &f in &incident[vi] {
            for (a, x) in axis.iter_mut().zip(&p.facets()[f].halfspace.normal) {
                *a -= x;
            }
        }
        let cones = simplicial_cones(n, &gens, &axis)
            .ok_or(FourierError::DegenerateVertex { vertex: vi })?;
        let coeff = cones
            .into_iter()
            .map(|cone| {
                let heads: Vec<&[f64]> =
                    cone.iter().map(|&k| &verts[neighbors[vi][k]][..]).collect();
                let edges = heads
                    .iter()
                    .map(|h| Edge::new(v.clone(), h.to_vec()))
                    .collect();
                RationalTerm::new(dd::edge_det(v, &heads).abs(), n as u8, edges)
            })
            .collect();
        terms.push(ETerm {
            exponent: v.clone(),
            multiplicity: 1,
            coeff,
        });
    }
    Ok(EFunction {
        dim: n,
        degree: -(n as i32),
        terms,
    })
}

/// Splits the pointed cone spanned by `gens` into simplicial cones (as index
/// lists into `gens`) by fanning its cross-section polygon. `axis` must have a
/// positive product with every generator; it need not lie inside the cone.
fn simplicial_cones(n: usize, gens: &[Point], axis: &[f64]) -> Option<Vec<Vec<usize>>> {
    if gens.len() < n {
        return None;
    }
    let units: Vec<Point> = gens
        .iter()
        .map(|g| math::scale(g, 1.0 / math::norm(g)))
        .collect();
    let len = math::norm(axis);
    if len <= TAU_GEOM || units.iter().any(|u| dot(u, axis) <= TAU_GEOM * len) {
        return None;
    }
    if n == 2 {
        return (gens.len() == 2).then(|| alloc::vec![alloc::vec![0, 1]]);
    }
    // Centrally project onto the plane `x·d = 1`, where the cross-section is a
    // convex polygon, and order the generators around its vertex centroid.
    let d = math::scale(axis, 1.0 / len);
    let section: Vec<Point> = units
        .iter()
        .map(|g| math::scale(g, 1.0 / dot(g, &d)))
        .collect();
    let center = math::centroid(&section);
    let p0 = math::sub(&section[0], &center);
    let u = math::scale(&p0, 1.0 / math::norm(&p0));
    let w = cross3(&d, &u);
    let mut order: Vec<(f64, usize)> = section
        .iter()
        .enumerate()
        .map(|(k, c)| {
            let q = math::sub(c, &center);
            (atan2(dot(&q, &w), dot(&q, &u)), k)
        })
        .collect();
    order.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let idx: Vec<usize> = order.into_iter().map(|(_, k)| k).collect();
    Some(
        (1..idx.len() - 1)
            .map(|j| alloc::vec![idx[0], idx[j], idx[j + 1]])
            .collect(),
    )
}
