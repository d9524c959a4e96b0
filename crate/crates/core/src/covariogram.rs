//! Covariogram `g_P(x) = vol(P ∩ (P + x))`, lattice sampling, trapezoid
//! Fourier quadrature, and the numerical check `F[g_P] = |F_P|^2`.

use alloc::vec::Vec;

use crate::fourier::FtEvaluator;
use crate::geometry::{GeometryError, Point, Polytope, TAU_GEOM};
use crate::math::{self, ceil, cis_neg, Complex64};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CovariogramError {
    #[error("|s|·h = {product} is not below 1; refine the lattice")]
    ResolutionExceeded { product: f64 },
    #[error("lattice spacing must be positive and finite, got {0}")]
    InvalidSpacing(f64),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// `vol(P ∩ (P + x))`, zero when the intersection has no interior.
pub fn covariogram(p: &Polytope, x: &[f64]) -> Result<f64, CovariogramError> {
    if x.len() != p.dim() {
        return Err(CovariogramError::DimensionMismatch {
            expected: p.dim(),
            found: x.len(),
        });
    }
    Ok(match p.intersect(&p.translate(x))? {
        Some(r) => r.volume(),
        None => 0.0,
    })
}

/// The difference body `P + (-P)`, outside of which `g_P` vanishes.
pub fn covariogram_support(p: &Polytope) -> Polytope {
    let v = p.vertices();
    let diffs: Vec<Point> = v
        .iter()
        .flat_map(|a| v.iter().map(move |b| math::sub(a, b)))
        .collect();
    Polytope::convex_hull(&diffs).expect("difference body of a full-dimensional polytope")
}

/// Axis-aligned lattice `{k·h : -K_j <= k_j <= K_j}`, symmetric about 0.
/// Points are enumerated with the last axis fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeGrid {
    pub spacing: f64,
    pub half_counts: Vec<usize>,
}

impl LatticeGrid {
    /// Smallest symmetric lattice whose outermost layer lies on or outside
    /// the covariogram support of `p`; that layer carries the zero padding.
    pub fn covering(p: &Polytope, h: f64) -> Result<Self, CovariogramError> {
        if !(h > 0.0 && h.is_finite()) {
            return Err(CovariogramError::InvalidSpacing(h));
        }
        let (lo, hi) = p.bounding_box();
        let half_counts = lo
            .iter()
            .zip(&hi)
            .map(|(a, b)| ceil((b - a) / h - TAU_GEOM).max(1.0) as usize)
            .collect();
        Ok(Self {
            spacing: h,
            half_counts,
        })
    }

    pub fn dim(&self) -> usize {
        self.half_counts.len()
    }

    pub fn counts(&self) -> Vec<usize> {
        self.half_counts.iter().map(|k| 2 * k + 1).collect()
    }

    pub fn len(&self) -> usize {
        self.counts().iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Coordinates of the first lattice point.
    pub fn origin(&self) -> Point {
        self.half_counts
            .iter()
            .map(|&k| -(k as f64) * self.spacing)
            .collect()
    }

    /// Signed integer coordinates of the `idx`-th point.
    pub fn multi_index(&self, mut idx: usize) -> Vec<i64> {
        let counts = self.counts();
        let mut out = alloc::vec![0i64; counts.len()];
        for a in (0..counts.len()).rev() {
            out[a] = (idx % counts[a]) as i64 - self.half_counts[a] as i64;
            idx /= counts[a];
        }
        out
    }

    pub fn point(&self, idx: usize) -> Point {
        self.multi_index(idx)
            .into_iter()
            .map(|k| k as f64 * self.spacing)
            .collect()
    }

    /// Linear index of a signed multi-index, if it is on the lattice.
    pub fn index_of(&self, m: &[i64]) -> Option<usize> {
        let counts = self.counts();
        let mut idx = 0usize;
        for (a, &k) in m.iter().enumerate() {
            let h = self.half_counts[a] as i64;
            if k < -h || k > h {
                return None;
            }
            idx = idx * counts[a] + (k + h) as usize;
        }
        Some(idx)
    }

    /// Tensor trapezoid weight (without the `h^n` factor).
    pub fn trapezoid_weight(&self, idx: usize) -> f64 {
        self.multi_index(idx)
            .iter()
            .zip(&self.half_counts)
            .map(|(&k, &h)| {
                if k.unsigned_abs() as usize == h {
                    0.5
                } else {
                    1.0
                }
            })
            .product()
    }
}

/// Covariogram samples on a [`LatticeGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct CovariogramField {
    grid: LatticeGrid,
    values: Vec<f64>,
}

impl CovariogramField {
    /// Wraps precomputed values (e.g. from a parallel map over the grid).
    pub fn from_values(grid: LatticeGrid, values: Vec<f64>) -> Self {
        assert_eq!(grid.len(), values.len(), "one value per lattice point");
        Self { grid, values }
    }

    pub fn grid(&self) -> &LatticeGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value_at(&self, m: &[i64]) -> Option<f64> {
        self.grid.index_of(m).map(|i| self.values[i])
    }

    /// `h^n Σ g`, the Riemann sum of `∫ g = vol(P)^2`.
    pub fn mass(&self) -> f64 {
        let h = self.grid.spacing;
        self.values.iter().sum::<f64>() * math::powi(h, self.grid.dim() as i32)
    }
}

/// Value of the covariogram at lattice point `x`, skipping the intersection
/// when `x` is outside the support.
pub fn covariogram_on_support(p: &Polytope, support: &Polytope, x: &[f64]) -> f64 {
    if !support.contains(x) {
        return 0.0;
    }
    covariogram(p, x).expect("lattice dimension matches the polytope")
}

/// Samples `g_P` on the lattice covering its support.
pub fn sample_field(p: &Polytope, h: f64) -> Result<CovariogramField, CovariogramError> {
    let support = covariogram_support(p);
    let grid = LatticeGrid::covering(p, h)?;
    let values = (0..grid.len())
        .map(|i| covariogram_on_support(p, &support, &grid.point(i)))
        .collect();
    Ok(CovariogramField::from_values(grid, values))
}

/// Tensor trapezoid approximation of `∫ g(x) e^{-i s·x} dx`.
pub fn field_ft(f: &CovariogramField, s: &[f64]) -> Result<Complex64, CovariogramError> {
    let grid = f.grid();
    if s.len() != grid.dim() {
        return Err(CovariogramError::DimensionMismatch {
            expected: grid.dim(),
            found: s.len(),
        });
    }
    let product = math::norm(s) * grid.spacing;
    if product >= 1.0 {
        return Err(CovariogramError::ResolutionExceeded { product });
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for (i, &g) in f.values().iter().enumerate() {
        if g == 0.0 {
            continue;
        }
        let x = grid.point(i);
        acc += cis_neg(math::dot(s, &x)) * (g * grid.trapezoid_weight(i));
    }
    Ok(acc * math::powi(grid.spacing, grid.dim() as i32))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Theorem1Sample {
    pub s: Point,
    pub field_ft: Complex64,
    pub squared_modulus: f64,
    pub rel_error: f64,
}

/// Per-frequency comparison of the covariogram's quadrature transform with
/// `|F_P(s)|^2`.
#[derive(Debug, Clone, PartialEq)]
pub struct Theorem1Report {
    pub spacing: f64,
    pub tol: f64,
    pub samples: Vec<Theorem1Sample>,
    pub max_rel_error: f64,
    pub passed: bool,
}

/// Samples the field and compares `F[g_P](s)` with `|F_P(s)|^2`.
pub fn verify_theorem1(
    p: &Polytope,
    samples: &[Point],
    h: f64,
    tol: f64,
) -> Result<Theorem1Report, CovariogramError> {
    check_guard(samples, h)?;
    let field = sample_field(p, h)?;
    verify_theorem1_with_field(p, &field, samples, tol)
}

/// Like [`verify_theorem1`] with an already sampled field.
pub fn verify_theorem1_with_field(
    p: &Polytope,
    field: &CovariogramField,
    samples: &[Point],
    tol: f64,
) -> Result<Theorem1Report, CovariogramError> {
    check_guard(samples, field.grid().spacing)?;
    let ft = FtEvaluator::new(p);
    let mut out = Vec::with_capacity(samples.len());
    for s in samples {
        let q = field_ft(field, s)?;
        let sq = ft.eval(s).norm_sqr();
        out.push(Theorem1Sample {
            s: s.clone(),
            field_ft: q,
            squared_modulus: sq,
            rel_error: (q - sq).norm() / sq,
        });
    }
    let max_rel_error = out.iter().map(|r| r.rel_error).fold(0.0, f64::max);
    Ok(Theorem1Report {
        spacing: field.grid().spacing,
        tol,
        passed: out.iter().all(|r| r.rel_error <= tol),
        samples: out,
        max_rel_error,
    })
}

fn check_guard(samples: &[Point], h: f64) -> Result<(), CovariogramError> {
    for s in samples {
        let product = math::norm(s) * h;
        if product >= 1.0 {
            return Err(CovariogramError::ResolutionExceeded { product });
        }
    }
    Ok(())
}
