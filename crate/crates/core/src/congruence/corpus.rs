use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geometry::{Point, Polytope, Sign};
use crate::math;

/// Minimum distance between sampled vertices.
pub const MIN_VERTEX_SEPARATION: f64 = 0.1;
/// Vertex count range (inclusive).
pub const VERTEX_RANGE: (usize, usize) = (6, 20);

fn unit_vector(rng: &mut ChaCha8Rng) -> Point {
    loop {
        let x: Vec<f64> = (0..3).map(|_| rng.random_range(-1.0..1.0)).collect();
        let r = math::norm(&x);
        if r > 1e-3 && r <= 1.0 {
            return math::scale(&x, 1.0 / r);
        }
    }
}

/// Hull of 6–20 uniform points on the unit sphere, resampled until no two
/// points are closer than [`MIN_VERTEX_SEPARATION`].
pub fn random_sphere_polytope(rng: &mut ChaCha8Rng) -> Polytope {
    loop {
        let n = rng.random_range(VERTEX_RANGE.0..=VERTEX_RANGE.1);
        let pts: Vec<Point> = (0..n).map(|_| unit_vector(rng)).collect();
        let separated = (0..n)
            .all(|i| ((i + 1)..n).all(|j| math::dist(&pts[i], &pts[j]) >= MIN_VERTEX_SEPARATION));
        if !separated {
            continue;
        }
        if let Ok(p) = Polytope::convex_hull(&pts) {
            if p.vertices().len() == n {
                return p;
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusPair {
    pub index: usize,
    pub a: Polytope,
    pub b: Polytope,
    /// `(ε, v)` with `b = εa + v` for pairs congruent by construction.
    pub construction: Option<(Sign, Point)>,
}

/// The `index`-th pair of a corpus of `count` pairs: the first half are
/// congruent by construction (random `ε`, `v ∈ [-2,2]^3`, shuffled vertex
/// order), the rest are independent random polytopes. Each pair draws from
/// its own ChaCha stream, so pairs can be generated in any order.
pub fn corpus_pair(index: usize, count: usize, seed: u64) -> CorpusPair {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    let a = random_sphere_polytope(&mut rng);
    if index < count / 2 {
        let eps = if rng.random::<bool>() {
            Sign::Plus
        } else {
            Sign::Minus
        };
        let v: Point = (0..3).map(|_| rng.random_range(-2.0..2.0)).collect();
        let mut pts = a.transform(eps, &v).vertices().to_vec();
        for i in (1..pts.len()).rev() {
            pts.swap(i, rng.random_range(0..=i));
        }
        let b = Polytope::convex_hull(&pts).expect("image of a valid polytope");
        CorpusPair {
            index,
            a,
            b,
            construction: Some((eps, v)),
        }
    } else {
        let b = random_sphere_polytope(&mut rng);
        CorpusPair {
            index,
            a,
            b,
            construction: None,
        }
    }
}

pub fn corpus(count: usize, seed: u64) -> Vec<CorpusPair> {
    (0..count).map(|i| corpus_pair(i, count, seed)).collect()
}
