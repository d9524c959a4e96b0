//! Named polytopes used by tests, data files and experiments.

use alloc::vec;
use alloc::vec::Vec;

use super::{Point, Polytope};
use crate::math::sqrt;

fn hull(points: Vec<Point>) -> Polytope {
    Polytope::convex_hull(&points).expect("named shape is full-dimensional")
}

/// `[0,1]^2`.
pub fn unit_square() -> Polytope {
    axis_box(&[0.0, 0.0], &[1.0, 1.0])
}

/// `[0,1]^3`.
pub fn unit_cube() -> Polytope {
    axis_box(&[0.0; 3], &[1.0; 3])
}

/// Axis-aligned box `[lo, hi]` in 2D or 3D; vertex 0 is `lo`.
pub fn axis_box(lo: &[f64], hi: &[f64]) -> Polytope {
    let dim = lo.len();
    let pts = (0..1usize << dim)
        .map(|mask| {
            (0..dim)
                .map(|k| if mask >> k & 1 == 1 { hi[k] } else { lo[k] })
                .collect()
        })
        .collect();
    hull(pts)
}

/// `{0, e_1, ..., e_n}` for `n` in {2, 3}.
pub fn standard_simplex(n: usize) -> Polytope {
    let mut pts = vec![vec![0.0; n]];
    for k in 0..n {
        let mut e = vec![0.0; n];
        e[k] = 1.0;
        pts.push(e);
    }
    hull(pts)
}

/// Regular tetrahedron with edge length `2 sqrt 2`, centered at the origin.
pub fn regular_tetrahedron() -> Polytope {
    hull(vec![
        vec![1.0, 1.0, 1.0],
        vec![1.0, -1.0, -1.0],
        vec![-1.0, 1.0, -1.0],
        vec![-1.0, -1.0, 1.0],
    ])
}

/// Regular icosahedron from the golden-ratio coordinates `(0, ±1, ±φ)` and
/// cyclic permutations.
pub fn icosahedron() -> Polytope {
    let phi = (1.0 + sqrt(5.0)) / 2.0;
    let mut pts = Vec::new();
    for a in [-1.0, 1.0] {
        for b in [-phi, phi] {
            pts.push(vec![0.0, a, b]);
            pts.push(vec![a, b, 0.0]);
            pts.push(vec![b, 0.0, a]);
        }
    }
    hull(pts)
}
