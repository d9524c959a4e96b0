//! Rationally parameterized hypersurfaces `σ: R^{n-1} → R^n`, patches of
//! their parameter domain, and numerical certificates for the hyperplane and
//! inner-point conditions.

mod poly;

pub use poly::{Polynomial, Rational};

use alloc::vec::Vec;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geometry::Point;
use crate::math;

/// Minimum `|σ_1|` on a patch.
pub const TAU_PATCH: f64 = 1e-6;
/// Relative singular-value threshold for numerical rank.
pub const TAU_RANK: f64 = 1e-6;
/// Central-difference step for the Jacobian of `σ̂`.
pub const FD_STEP: f64 = 1e-5;
/// Number of parameter points tried by the inner-point check.
pub const INNER_POINT_TRIALS: usize = 16;
/// Grid resolution per axis when validating a patch against `σ_1 = 0`.
const PATCH_CHECK_PER_AXIS: usize = 17;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum HypersurfaceError {
    #[error("first coordinate |σ1| = {value:e} is within the patch margin")]
    FirstCoordinateVanishes { value: f64 },
    #[error("denominator of coordinate {coord} vanishes")]
    DenominatorVanishes { coord: usize },
    #[error("radius must be positive and finite, got {0}")]
    InvalidRadius(f64),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid domain: {0}")]
    InvalidDomain(&'static str),
    #[error("at least one sample is required")]
    NoSamples,
}

/// Post-transform `x ↦ A x + b`.
#[derive(Debug, Clone, PartialEq)]
pub struct Affine {
    pub matrix: Vec<Vec<f64>>,
    pub shift: Point,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RpSurface {
    coords: Vec<Rational>,
    domain: Vec<(f64, f64)>,
    affine: Option<Affine>,
}

impl RpSurface {
    /// `coords` are the `n` coordinate functions in `n - 1` variables;
    /// `domain` gives an open interval per variable (infinite ends allowed).
    pub fn new(coords: Vec<Rational>, domain: Vec<(f64, f64)>) -> Result<Self, HypersurfaceError> {
        let n = coords.len();
        if n < 2 {
            return Err(HypersurfaceError::InvalidDomain(
                "need at least two coordinates",
            ));
        }
        if let Some(c) = coords.iter().find(|c| c.num.nvars() != n - 1) {
            return Err(HypersurfaceError::DimensionMismatch {
                expected: n - 1,
                found: c.num.nvars(),
            });
        }
        if domain.len() != n - 1 {
            return Err(HypersurfaceError::DimensionMismatch {
                expected: n - 1,
                found: domain.len(),
            });
        }
        if domain
            .iter()
            .any(|(a, b)| a.partial_cmp(b) != Some(core::cmp::Ordering::Less))
        {
            return Err(HypersurfaceError::InvalidDomain("empty parameter interval"));
        }
        Ok(Self {
            coords,
            domain,
            affine: None,
        })
    }

    pub fn with_affine(
        mut self,
        matrix: Vec<Vec<f64>>,
        shift: Point,
    ) -> Result<Self, HypersurfaceError> {
        let n = self.dim();
        if shift.len() != n {
            return Err(HypersurfaceError::DimensionMismatch {
                expected: n,
                found: shift.len(),
            });
        }
        if let Some(r) = matrix.iter().find(|r| r.len() != n) {
            return Err(HypersurfaceError::DimensionMismatch {
                expected: n,
                found: r.len(),
            });
        }
        if matrix.len() != n {
            return Err(HypersurfaceError::DimensionMismatch {
                expected: n,
                found: matrix.len(),
            });
        }
        self.affine = Some(Affine { matrix, shift });
        Ok(self)
    }

    /// Ambient dimension `n`.
    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn domain(&self) -> &[(f64, f64)] {
        &self.domain
    }

    pub fn affine(&self) -> Option<&Affine> {
        self.affine.as_ref()
    }

    pub fn eval(&self, t: &[f64]) -> Result<Point, HypersurfaceError> {
        if t.len() != self.dim() - 1 {
            return Err(HypersurfaceError::DimensionMismatch {
                expected: self.dim() - 1,
                found: t.len(),
            });
        }
        let mut x = Vec::with_capacity(self.dim());
        for (coord, c) in self.coords.iter().enumerate() {
            let (num, den) = c.eval_parts(t);
            if den == 0.0 {
                return Err(HypersurfaceError::DenominatorVanishes { coord });
            }
            x.push(num / den);
        }
        Ok(match &self.affine {
            Some(a) => a
                .matrix
                .iter()
                .zip(&a.shift)
                .map(|(row, b)| math::dot(row, &x) + b)
                .collect(),
            None => x,
        })
    }
}

/// The half-angle parameterization of the unit sphere, `t1 > 0`.
pub fn unit_sphere_param(t1: f64, t2: f64) -> [f64; 3] {
    let a = 1.0 + t1 * t1;
    let b = 1.0 + t2 * t2;
    let r = 2.0 * t1 / a;
    [
        r * (1.0 - t2 * t2) / b,
        r * 2.0 * t2 / b,
        (1.0 - t1 * t1) / a,
    ]
}

/// [`unit_sphere_param`] as an [`RpSurface`].
pub fn unit_sphere() -> RpSurface {
    let p = |terms: &[(f64, [u32; 2])]| {
        Polynomial::new(2, terms.iter().map(|(c, e)| (*c, e.to_vec())).collect())
    };
    let den = p(&[(1.0, [0, 0]), (1.0, [2, 0]), (1.0, [0, 2]), (1.0, [2, 2])]);
    let coords = alloc::vec![
        Rational::new(p(&[(2.0, [1, 0]), (-2.0, [1, 2])]), den.clone()),
        Rational::new(p(&[(4.0, [1, 1])]), den),
        Rational::new(
            p(&[(1.0, [0, 0]), (-1.0, [2, 0])]),
            p(&[(1.0, [0, 0]), (1.0, [2, 0])]),
        ),
    ];
    RpSurface::new(
        coords,
        alloc::vec![(0.0, f64::INFINITY), (f64::NEG_INFINITY, f64::INFINITY)],
    )
    .expect("valid sphere parameterization")
}

/// Sphere of the given center and radius: the unit sphere scaled and shifted.
pub fn sphere(center: &[f64], radius: f64) -> Result<RpSurface, HypersurfaceError> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(HypersurfaceError::InvalidRadius(radius));
    }
    let matrix = (0..3)
        .map(|i| (0..3).map(|j| if i == j { radius } else { 0.0 }).collect())
        .collect();
    unit_sphere().with_affine(matrix, center.to_vec())
}

/// `σ̂(t) = (σ_2/σ_1, …, σ_n/σ_1)`.
pub fn normalized_map(surf: &RpSurface, t: &[f64]) -> Result<Point, HypersurfaceError> {
    let x = surf.eval(t)?;
    if x[0].abs() <= TAU_PATCH {
        return Err(HypersurfaceError::FirstCoordinateVanishes { value: x[0] });
    }
    Ok(x[1..].iter().map(|v| v / x[0]).collect())
}

/// Finite union of open boxes in parameter space on which `σ_1` stays away
/// from zero.
#[derive(Debug, Clone, PartialEq)]
pub struct PatchDomain {
    boxes: Vec<Vec<(f64, f64)>>,
}

impl PatchDomain {
    /// Validates the boxes against the surface's domain and checks `|σ_1| >
    /// τ_patch` on a grid of interior points of every box.
    pub fn new(surf: &RpSurface, boxes: Vec<Vec<(f64, f64)>>) -> Result<Self, HypersurfaceError> {
        if boxes.is_empty() {
            return Err(HypersurfaceError::InvalidDomain("patch has no boxes"));
        }
        let d = surf.dim() - 1;
        for b in &boxes {
            if b.len() != d {
                return Err(HypersurfaceError::DimensionMismatch {
                    expected: d,
                    found: b.len(),
                });
            }
            for (&(lo, hi), &(dlo, dhi)) in b.iter().zip(surf.domain()) {
                if !(lo < hi && lo.is_finite() && hi.is_finite()) {
                    return Err(HypersurfaceError::InvalidDomain(
                        "patch box must be bounded and non-empty",
                    ));
                }
                if lo < dlo || hi > dhi {
                    return Err(HypersurfaceError::InvalidDomain(
                        "patch box leaves the parameter domain",
                    ));
                }
            }
            let per = PATCH_CHECK_PER_AXIS;
            let total = per.pow(d as u32);
            for idx in 0..total {
                let mut rem = idx;
                let t: Vec<f64> = b
                    .iter()
                    .map(|&(lo, hi)| {
                        let k = rem % per;
                        rem /= per;
                        lo + (hi - lo) * (k as f64 + 0.5) / per as f64
                    })
                    .collect();
                let x = surf.eval(&t)?;
                if x[0].abs() <= TAU_PATCH {
                    return Err(HypersurfaceError::FirstCoordinateVanishes { value: x[0] });
                }
            }
        }
        Ok(Self { boxes })
    }

    pub fn boxes(&self) -> &[Vec<(f64, f64)>] {
        &self.boxes
    }

    fn dim(&self) -> usize {
        self.boxes[0].len()
    }

    fn volume(b: &[(f64, f64)]) -> f64 {
        b.iter().map(|(lo, hi)| hi - lo).product()
    }

    /// `k` low-discrepancy parameter points: a Halton sequence with a seeded
    /// random shift (mod 1), mapped into a box chosen in proportion to volume.
    pub fn sample_parameters(&self, k: usize, seed: u64) -> Vec<Point> {
        let d = self.dim();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let shift: Vec<f64> = (0..=d).map(|_| rng.random::<f64>()).collect();
        let weights: Vec<f64> = self.boxes.iter().map(|b| Self::volume(b)).collect();
        let total: f64 = weights.iter().sum();
        (1..=k)
            .map(|i| {
                let u: Vec<f64> = (0..=d)
                    .map(|a| {
                        let x = radical_inverse(i as u64, PRIMES[a]) + shift[a];
                        x - math::floor(x)
                    })
                    .collect();
                let mut acc = 0.0;
                let chosen = weights
                    .iter()
                    .position(|w| {
                        acc += w / total;
                        u[d] < acc
                    })
                    .unwrap_or(self.boxes.len() - 1);
                self.boxes[chosen]
                    .iter()
                    .zip(&u)
                    // Keep strictly inside the open box.
                    .map(|(&(lo, hi), &x)| lo + (hi - lo) * (1e-9 + x * (1.0 - 2e-9)))
                    .collect()
            })
            .collect()
    }
}

const PRIMES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let mut f = inv;
    let mut r = 0.0;
    while i > 0 {
        r += (i % base) as f64 * f;
        i /= base;
        f *= inv;
    }
    r
}

/// `k` points `σ(t)` with `t` quasi-uniform in `o`; deterministic per seed.
pub fn sample_patch(
    surf: &RpSurface,
    o: &PatchDomain,
    k: usize,
    seed: u64,
) -> Result<Vec<Point>, HypersurfaceError> {
    if k == 0 {
        return Err(HypersurfaceError::NoSamples);
    }
    o.sample_parameters(k, seed)
        .iter()
        .map(|t| surf.eval(t))
        .collect()
}

/// Number of singular values above `tol` times the largest.
fn numerical_rank(rows: &[Point], tol: f64) -> usize {
    let (m, n) = (rows.len(), rows.first().map_or(0, Vec::len));
    if m == 0 || n == 0 {
        return 0;
    }
    let data: Vec<f64> = rows.iter().flatten().copied().collect();
    let sv = DMatrix::from_row_slice(m, n, &data).singular_values();
    let max = sv.iter().copied().fold(0.0, f64::max);
    sv.iter().filter(|&&s| s > tol * max).count()
}

#[derive(Debug, Clone, PartialEq)]
pub struct HyperplaneReport {
    pub samples: usize,
    /// Rank of the centered sample matrix (affine hull dimension).
    pub affine_rank: usize,
    /// Rank of the raw sample matrix (linear span dimension).
    pub linear_rank: usize,
    pub dim: usize,
    /// `affine_rank == dim`: no affine hyperplane contains the samples.
    pub passed: bool,
}

/// Samples `m` points of `σ(o)` and measures the dimension of their affine
/// hull and linear span.
pub fn hyperplane_report(
    surf: &RpSurface,
    o: &PatchDomain,
    m: usize,
) -> Result<HyperplaneReport, HypersurfaceError> {
    let pts = sample_patch(surf, o, m, 0)?;
    let c = math::centroid(&pts);
    let centered: Vec<Point> = pts.iter().map(|p| math::sub(p, &c)).collect();
    let affine_rank = numerical_rank(&centered, TAU_RANK);
    Ok(HyperplaneReport {
        samples: m,
        affine_rank,
        linear_rank: numerical_rank(&pts, TAU_RANK),
        dim: surf.dim(),
        passed: affine_rank == surf.dim(),
    })
}

/// True iff the sampled patch is not contained in an affine hyperplane.
pub fn check_hyperplane_condition(surf: &RpSurface, o: &PatchDomain, m: usize) -> bool {
    hyperplane_report(surf, o, m).is_ok_and(|r| r.passed)
}

/// Central-difference Jacobian of `σ̂` at `t`, one row per output.
pub fn normalized_jacobian(surf: &RpSurface, t: &[f64]) -> Result<Vec<Point>, HypersurfaceError> {
    let d = t.len();
    let mut cols = Vec::with_capacity(d);
    for j in 0..d {
        let mut tp = t.to_vec();
        let mut tm = t.to_vec();
        tp[j] += FD_STEP;
        tm[j] -= FD_STEP;
        let fp = normalized_map(surf, &tp)?;
        let fm = normalized_map(surf, &tm)?;
        cols.push(
            fp.iter()
                .zip(&fm)
                .map(|(a, b)| (a - b) / (2.0 * FD_STEP))
                .collect::<Vec<f64>>(),
        );
    }
    Ok((0..d)
        .map(|i| cols.iter().map(|c| c[i]).collect())
        .collect())
}

/// True iff `σ̂` has a full-rank Jacobian at some sampled point of `o`, which
/// makes `σ̂(t)` an interior point of `σ̂(o)`.
pub fn check_inner_point_condition(surf: &RpSurface, o: &PatchDomain) -> bool {
    o.sample_parameters(INNER_POINT_TRIALS, 0).iter().any(|t| {
        normalized_jacobian(surf, t).is_ok_and(|j| numerical_rank(&j, TAU_RANK) == t.len())
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn planar() -> RpSurface {
        let x = Polynomial::var(2, 0);
        let y = Polynomial::var(2, 1);
        let zero = Polynomial::constant(2, 0.0);
        RpSurface::new(
            vec![
                Rational::polynomial(x),
                Rational::polynomial(y),
                Rational::polynomial(zero),
            ],
            vec![(f64::NEG_INFINITY, f64::INFINITY); 2],
        )
        .unwrap()
    }

    /// `(1, t1, t1^2)`: a curve, whatever `t2` is.
    fn curve() -> RpSurface {
        let t = Polynomial::var(2, 0);
        RpSurface::new(
            vec![
                Rational::polynomial(Polynomial::constant(2, 1.0)),
                Rational::polynomial(t.clone()),
                Rational::polynomial(t.mul(&t)),
            ],
            vec![(f64::NEG_INFINITY, f64::INFINITY); 2],
        )
        .unwrap()
    }

    /// `(t1, t1, t1)`: `σ̂ ≡ (1, 1)`.
    fn diagonal() -> RpSurface {
        let t = Rational::polynomial(Polynomial::var(2, 0));
        RpSurface::new(
            vec![t.clone(), t.clone(), t],
            vec![(0.0, f64::INFINITY), (f64::NEG_INFINITY, f64::INFINITY)],
        )
        .unwrap()
    }

    fn patch(surf: &RpSurface) -> PatchDomain {
        PatchDomain::new(surf, vec![vec![(0.5, 1.5), (-0.5, 0.5)]]).unwrap()
    }

    #[test]
    fn sphere_plug_in() {
        assert_eq!(unit_sphere_param(1.0, 0.0), [1.0, 0.0, 0.0]);
        assert_eq!(unit_sphere_param(1.0, 1.0), [0.0, 1.0, 0.0]);
        let s = unit_sphere();
        assert_eq!(s.eval(&[1.0, 0.0]).unwrap(), vec![1.0, 0.0, 0.0]);
        let e = sphere(&[0.0, 0.0, -1.0], 1.0).unwrap();
        // t1 → 0 approaches the north pole (0,0,1), i.e. the origin after the shift.
        assert!(math::norm(&e.eval(&[1e-9, 0.3]).unwrap()) < 1e-8);
        assert!(matches!(
            sphere(&[0.0; 3], 0.0),
            Err(HypersurfaceError::InvalidRadius(_))
        ));
    }

    #[test]
    fn sphere_param_agrees_with_rational_form() {
        let s = unit_sphere();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..1000 {
            let t1 = rng.random_range(1e-3..50.0);
            let t2 = rng.random_range(-50.0..50.0);
            let a = unit_sphere_param(t1, t2);
            assert!((math::norm(&a) - 1.0).abs() < 1e-12);
            let b = s.eval(&[t1, t2]).unwrap();
            assert!(math::dist(&a, &b) < 1e-12);
        }
    }

    #[test]
    fn shifted_sphere_radius() {
        let c = [0.3, -2.0, 1.5];
        let s = sphere(&c, 2.5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..200 {
            let t = [rng.random_range(0.01..10.0), rng.random_range(-10.0..10.0)];
            let x = s.eval(&t).unwrap();
            assert!((math::dist(&x, &c) - 2.5).abs() < 1e-12);
        }
    }

    #[test]
    fn normalized_map_cases() {
        let s = unit_sphere();
        assert_eq!(normalized_map(&s, &[1.0, 0.0]).unwrap(), vec![0.0, 0.0]);
        assert!(matches!(
            normalized_map(&s, &[1.0, 1.0]),
            Err(HypersurfaceError::FirstCoordinateVanishes { .. })
        ));
        // Uniform scaling of σ leaves σ̂ alone.
        let scaled = unit_sphere()
            .with_affine(
                vec![
                    vec![3.0, 0.0, 0.0],
                    vec![0.0, 3.0, 0.0],
                    vec![0.0, 0.0, 3.0],
                ],
                vec![0.0; 3],
            )
            .unwrap();
        for t in [[0.7, 0.2], [1.3, -0.4], [2.0, 0.9]] {
            let a = normalized_map(&s, &t).unwrap();
            let b = normalized_map(&scaled, &t).unwrap();
            assert!(math::dist(&a, &b) < 1e-14);
        }
    }

    #[test]
    fn patch_validation() {
        let s = unit_sphere();
        assert!(PatchDomain::new(&s, vec![vec![(0.5, 1.5), (-0.5, 0.5)]]).is_ok());
        // σ1 vanishes on t2 = 1.
        assert!(matches!(
            PatchDomain::new(&s, vec![vec![(0.5, 1.5), (0.5, 1.5)]]),
            Err(HypersurfaceError::FirstCoordinateVanishes { .. })
        ));
        // t1 must stay positive.
        assert!(PatchDomain::new(&s, vec![vec![(-0.5, 0.5), (0.0, 0.1)]]).is_err());
        assert!(PatchDomain::new(&s, vec![]).is_err());
    }

    #[test]
    fn sampling() {
        let s = sphere(&[0.0, 0.0, -1.0], 1.0).unwrap();
        let o = PatchDomain::new(
            &s,
            vec![vec![(0.5, 1.0), (-0.5, 0.0)], vec![(1.0, 1.5), (0.0, 0.5)]],
        )
        .unwrap();
        let pts = sample_patch(&s, &o, 300, 9).unwrap();
        assert_eq!(pts.len(), 300);
        for p in &pts {
            assert!((math::dist(p, &[0.0, 0.0, -1.0]) - 1.0).abs() < 1e-12);
        }
        assert_eq!(pts, sample_patch(&s, &o, 300, 9).unwrap());
        assert_ne!(pts, sample_patch(&s, &o, 300, 10).unwrap());
        assert_eq!(sample_patch(&s, &o, 1, 0).unwrap().len(), 1);
        assert_eq!(
            sample_patch(&s, &o, 0, 0),
            Err(HypersurfaceError::NoSamples)
        );
        // Both boxes get used.
        let ts = o.sample_parameters(300, 9);
        assert!(ts.iter().any(|t| t[0] < 1.0) && ts.iter().any(|t| t[0] > 1.0));
        for t in &ts {
            let inside = o
                .boxes()
                .iter()
                .any(|b| b.iter().zip(t).all(|(&(lo, hi), &x)| lo < x && x < hi));
            assert!(inside);
        }
    }

    #[test]
    fn hyperplane_condition() {
        let s = unit_sphere();
        let o = PatchDomain::new(&s, vec![vec![(0.95, 1.05), (0.15, 0.25)]]).unwrap();
        for m in [4, 6, 10, 30] {
            assert!(check_hyperplane_condition(&s, &o, m), "m = {m}");
        }
        let r = hyperplane_report(&s, &o, 10).unwrap();
        assert_eq!((r.affine_rank, r.linear_rank), (3, 3));

        let p = planar();
        let op = patch(&p);
        assert!(!check_hyperplane_condition(&p, &op, 30));
        let r = hyperplane_report(&p, &op, 30).unwrap();
        assert_eq!((r.affine_rank, r.linear_rank), (2, 2));
    }

    #[test]
    fn rank_oracle() {
        // Points of the plane z = 1: affine rank 2, linear rank 3.
        let pts = vec![
            vec![0.0, 0.0, 1.0],
            vec![1.0, 0.0, 1.0],
            vec![0.0, 1.0, 1.0],
            vec![2.0, 3.0, 1.0],
        ];
        let c = math::centroid(&pts);
        let centered: Vec<Point> = pts.iter().map(|p| math::sub(p, &c)).collect();
        assert_eq!(numerical_rank(&centered, TAU_RANK), 2);
        assert_eq!(numerical_rank(&pts, TAU_RANK), 3);
        assert_eq!(math::rank(&centered, 1e-9), 2);
        assert_eq!(numerical_rank(&[vec![0.0; 3]], TAU_RANK), 0);
    }

    #[test]
    fn inner_point_condition() {
        let s = unit_sphere();
        assert!(check_inner_point_condition(&s, &patch(&s)));
        let e = sphere(&[0.0, 0.0, -1.0], 1.0).unwrap();
        assert!(check_inner_point_condition(&e, &patch(&e)));

        let d = diagonal();
        assert!(!check_inner_point_condition(&d, &patch(&d)));
        let c = curve();
        assert!(!check_inner_point_condition(&c, &patch(&c)));
    }
}
