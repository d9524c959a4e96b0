//! Ewald-sphere scattering: an incoming unit wave vector `k_in` (`(0,1)` in
//! the plane, `(0,0,1)` in space), outgoing unit vectors on the circle or the
//! upper hemisphere, and intensities `|F_P(k_out - k_in)|`.

use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI};

use crate::fourier::FtEvaluator;
use crate::geometry::{Point, Polytope};
use crate::math::{self, cos, sin};

/// Angles closer than this to an excluded value are rejected.
pub const EXCLUSION_TOL: f64 = 1e-12;
/// Guard band around excluded angles applied to grids.
pub const GUARD_BAND: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DiffractionError {
    #[error("excluded scattering angle (phi = {phi}{})", theta.map(|t| alloc::format!(", theta = {t}")).unwrap_or_default())]
    ExcludedAngle { phi: f64, theta: Option<f64> },
    #[error("invalid grid: {0}")]
    InvalidGrid(&'static str),
    #[error("pattern is {expected}D but the polytope is {found}D")]
    DimensionMismatch { expected: usize, found: usize },
}

/// `(cos φ, sin φ - 1)` for `φ ∈ (0, π) \ {π/2}`.
pub fn scattering_vector_2d(phi: f64) -> Result<[f64; 2], DiffractionError> {
    let excluded = !(phi > 0.0 && phi < PI) || (phi - FRAC_PI_2).abs() <= EXCLUSION_TOL;
    if excluded {
        return Err(DiffractionError::ExcludedAngle { phi, theta: None });
    }
    Ok([cos(phi), sin(phi) - 1.0])
}

/// `(sin θ cos φ, sin θ sin φ, cos θ - 1)` for `θ ∈ (0, π/2]`, `φ ∈ [0, 2π)`.
pub fn scattering_vector_3d(phi: f64, theta: f64) -> Result<[f64; 3], DiffractionError> {
    let ok = (0.0..2.0 * PI).contains(&phi) && theta > EXCLUSION_TOL && theta <= FRAC_PI_2;
    if !ok {
        return Err(DiffractionError::ExcludedAngle {
            phi,
            theta: Some(theta),
        });
    }
    let st = sin(theta);
    Ok([st * cos(phi), st * sin(phi), cos(theta) - 1.0])
}

/// `|F_P(q)|`, with the proportionality constant taken as 1.
pub fn intensity(p: &Polytope, q: &[f64]) -> f64 {
    crate::fourier::polytope_ft(p, q).norm()
}

/// `count` cell midpoints of `[start, end]`.
#[derive(Debug, Clone, PartialEq)]
pub struct AngleAxis {
    pub start: f64,
    pub end: f64,
    pub count: usize,
}

impl AngleAxis {
    pub fn new(start: f64, end: f64, count: usize) -> Self {
        Self { start, end, count }
    }

    pub fn samples(&self) -> Vec<f64> {
        let step = (self.end - self.start) / self.count as f64;
        (0..self.count)
            .map(|i| self.start + (i as f64 + 0.5) * step)
            .collect()
    }

    fn validate(&self) -> Result<(), DiffractionError> {
        if self.count == 0 {
            return Err(DiffractionError::InvalidGrid(
                "axis needs at least one sample",
            ));
        }
        if !(self.start < self.end && self.start.is_finite() && self.end.is_finite()) {
            return Err(DiffractionError::InvalidGrid(
                "axis range must be increasing and finite",
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    TwoD,
    ThreeD,
}

impl Mode {
    pub fn dim(self) -> usize {
        match self {
            Mode::TwoD => 2,
            Mode::ThreeD => 3,
        }
    }
}

/// Angular sampling plan. In 3D the `φ` axis runs fastest (image rows are
/// constant `θ`).
#[derive(Debug, Clone, PartialEq)]
pub struct PatternSpec {
    pub mode: Mode,
    pub phi: AngleAxis,
    /// Ignored in 2D.
    pub theta: AngleAxis,
    /// Wavelength scale factor applied to every scattering vector.
    pub scale: f64,
    /// Extra excluded `(φ, θ)` points (3D) or `φ` values (2D, second entry
    /// ignored), each with a [`GUARD_BAND`] neighbourhood.
    pub excluded: Vec<(f64, f64)>,
}

impl PatternSpec {
    pub fn two_d(phi: AngleAxis) -> Self {
        Self {
            mode: Mode::TwoD,
            phi,
            theta: AngleAxis::new(0.0, FRAC_PI_2, 1),
            scale: 1.0,
            excluded: Vec::new(),
        }
    }

    pub fn three_d(phi: AngleAxis, theta: AngleAxis) -> Self {
        Self {
            mode: Mode::ThreeD,
            phi,
            theta,
            scale: 1.0,
            excluded: Vec::new(),
        }
    }

    /// `(width, height)` of the sample lattice.
    pub fn shape(&self) -> (usize, usize) {
        match self.mode {
            Mode::TwoD => (self.phi.count, 1),
            Mode::ThreeD => (self.phi.count, self.theta.count),
        }
    }

    /// Angles and scaled scattering vectors in pattern order, or an error if
    /// any sample falls in an excluded set or its guard band.
    pub fn sample_points(&self) -> Result<Vec<(Vec<f64>, Point)>, DiffractionError> {
        if !(self.scale > 0.0 && self.scale.is_finite()) {
            return Err(DiffractionError::InvalidGrid(
                "scale must be positive and finite",
            ));
        }
        self.phi.validate()?;
        let phis = self.phi.samples();
        let near = |a: f64, b: f64| (a - b).abs() <= GUARD_BAND;
        match self.mode {
            Mode::TwoD => phis
                .iter()
                .map(|&phi| {
                    let guarded = phi <= GUARD_BAND
                        || phi >= PI - GUARD_BAND
                        || near(phi, FRAC_PI_2)
                        || self.excluded.iter().any(|&(e, _)| near(phi, e));
                    if guarded {
                        return Err(DiffractionError::ExcludedAngle { phi, theta: None });
                    }
                    let q = scattering_vector_2d(phi)?;
                    Ok((alloc::vec![phi], math::scale(&q, self.scale)))
                })
                .collect(),
            Mode::ThreeD => {
                self.theta.validate()?;
                let thetas = self.theta.samples();
                let mut out = Vec::with_capacity(phis.len() * thetas.len());
                for &theta in &thetas {
                    for &phi in &phis {
                        let guarded = theta <= GUARD_BAND
                            || self
                                .excluded
                                .iter()
                                .any(|&(ep, et)| near(phi, ep) && near(theta, et));
                        if guarded {
                            return Err(DiffractionError::ExcludedAngle {
                                phi,
                                theta: Some(theta),
                            });
                        }
                        let q = scattering_vector_3d(phi, theta)?;
                        out.push((alloc::vec![phi, theta], math::scale(&q, self.scale)));
                    }
                }
                Ok(out)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PatternMetadata {
    pub polytope_id: String,
    pub spec: PatternSpec,
    /// Rendering is deterministic; the seed is recorded for uniformity.
    pub seed: u64,
    /// Factor in `I = c · |F_P(q)|`.
    pub intensity_constant: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiffractionPattern {
    pub metadata: PatternMetadata,
    pub angles: Vec<Vec<f64>>,
    pub vectors: Vec<Point>,
    pub intensities: Vec<f64>,
}

impl DiffractionPattern {
    /// Assembles a pattern from [`PatternSpec::sample_points`] and intensities
    /// computed in the same order (possibly in parallel).
    pub fn from_parts(
        metadata: PatternMetadata,
        points: Vec<(Vec<f64>, Point)>,
        intensities: Vec<f64>,
    ) -> Self {
        assert_eq!(points.len(), intensities.len());
        let (angles, vectors) = points.into_iter().unzip();
        Self {
            metadata,
            angles,
            vectors,
            intensities,
        }
    }

    pub fn mode(&self) -> Mode {
        self.metadata.spec.mode
    }

    pub fn shape(&self) -> (usize, usize) {
        self.metadata.spec.shape()
    }

    pub fn max_intensity(&self) -> f64 {
        self.intensities.iter().copied().fold(0.0, f64::max)
    }
}

/// Evaluates the intensity over every grid sample.
pub fn render_pattern(
    p: &Polytope,
    spec: &PatternSpec,
    polytope_id: &str,
) -> Result<DiffractionPattern, DiffractionError> {
    if p.dim() != spec.mode.dim() {
        return Err(DiffractionError::DimensionMismatch {
            expected: spec.mode.dim(),
            found: p.dim(),
        });
    }
    let points = spec.sample_points()?;
    let ft = FtEvaluator::new(p);
    let intensities = points.iter().map(|(_, q)| ft.modulus(q)).collect();
    Ok(DiffractionPattern::from_parts(
        PatternMetadata {
            polytope_id: polytope_id.into(),
            spec: spec.clone(),
            seed: 0,
            intensity_constant: 1.0,
        },
        points,
        intensities,
    ))
}
