//! Sphere-patch configuration shared by `compare`, `check-conditions` and
//! `corpus`.

use polyft_core::hypersurface::{sphere, HypersurfaceError, PatchDomain, RpSurface};
use serde::{Deserialize, Serialize};

/// A sphere and a union of boxes in its `(t1, t2)` parameter plane.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SphereConfig {
    pub center: [f64; 3],
    pub radius: f64,
    /// Each box is `[[t1_lo, t1_hi], [t2_lo, t2_hi]]`.
    pub boxes: Vec<[[f64; 2]; 2]>,
}

impl Default for SphereConfig {
    /// The Ewald sphere through the origin, `center (0,0,-1)`, `radius 1`,
    /// over `t ∈ (0.5, 1.5) × (-0.5, 0.5)`.
    fn default() -> Self {
        Self {
            center: [0.0, 0.0, -1.0],
            radius: 1.0,
            boxes: vec![[[0.5, 1.5], [-0.5, 0.5]]],
        }
    }
}

impl SphereConfig {
    pub fn build(&self) -> Result<(RpSurface, PatchDomain), HypersurfaceError> {
        let surf = sphere(&self.center, self.radius)?;
        let boxes = self
            .boxes
            .iter()
            .map(|b| b.iter().map(|&[lo, hi]| (lo, hi)).collect())
            .collect();
        let patch = PatchDomain::new(&surf, boxes)?;
        Ok((surf, patch))
    }
}
