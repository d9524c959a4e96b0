use alloc::vec::Vec;

use super::assemble::assemble;
use super::{GeometryError, Halfspace, Point, Polytope, TAU_GEOM};
use crate::math::{self, affine_rank, cross3, dot, sub};

pub(super) fn convex_hull(points: &[Point]) -> Result<Polytope, GeometryError> {
    let dim = points.first().map_or(0, Vec::len);
    if dim != 2 && dim != 3 {
        return Err(GeometryError::UnsupportedDimension(dim));
    }
    if let Some(p) = points.iter().find(|p| p.len() != dim) {
        return Err(GeometryError::DimensionMismatch {
            expected: dim,
            found: p.len(),
        });
    }
    if points.iter().flatten().any(|x| !x.is_finite()) {
        return Err(GeometryError::NonFinite);
    }
    let r = affine_rank(points, TAU_GEOM);
    if r < dim {
        return Err(GeometryError::DegenerateInput { rank: r, dim });
    }
    // Insertion order: lexicographic, ties by input index.
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| lex_cmp(&points[a], &points[b]).then(a.cmp(&b)));
    let planes = match dim {
        2 => hull_planes_2d(points, &order),
        _ => hull_planes_3d(points, &order)?,
    };
    assemble(dim, points, &planes)
}

fn lex_cmp(a: &[f64], b: &[f64]) -> core::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.total_cmp(y) {
            core::cmp::Ordering::Equal => {}
            o => return o,
        }
    }
    core::cmp::Ordering::Equal
}

fn turn(o: &[f64], a: &[f64], b: &[f64]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Monotone chain over the lexicographically sorted points; returns the edge
/// lines of the counter-clockwise boundary.
fn hull_planes_2d(points: &[Point], order: &[usize]) -> Vec<Halfspace> {
    let mut chain: Vec<usize> = Vec::new();
    let build = |iter: &mut dyn Iterator<Item = usize>, chain: &mut Vec<usize>| {
        let base = chain.len();
        for i in iter {
            while chain.len() >= base + 2 {
                let (o, a) = (chain[chain.len() - 2], chain[chain.len() - 1]);
                if turn(&points[o], &points[a], &points[i]) <= TAU_GEOM {
                    chain.pop();
                } else {
                    break;
                }
            }
            chain.push(i);
        }
    };
    let mut lower = Vec::new();
    build(&mut order.iter().copied(), &mut lower);
    let mut upper = Vec::new();
    build(&mut order.iter().rev().copied(), &mut upper);
    lower.pop();
    upper.pop();
    chain.extend(lower);
    chain.extend(upper);

    let k = chain.len();
    (0..k)
        .map(|j| {
            let a = &points[chain[j]];
            let b = &points[chain[(j + 1) % k]];
            let d = sub(b, a);
            Halfspace::new(alloc::vec![d[1], -d[0]], d[1] * a[0] - d[0] * a[1])
        })
        .collect()
}

struct Face {
    v: [usize; 3],
    normal: [f64; 3],
    offset: f64,
}

impl Face {
    fn new(points: &[Point], v: [usize; 3]) -> Self {
        let n = cross3(
            &sub(&points[v[1]], &points[v[0]]),
            &sub(&points[v[2]], &points[v[0]]),
        );
        let len = math::norm(&n);
        let normal = if len > 0.0 {
            n.map(|x| x / len)
        } else {
            [0.0; 3]
        };
        let offset = dot(&normal, &points[v[0]]);
        Self { v, normal, offset }
    }

    fn distance(&self, p: &[f64]) -> f64 {
        dot(&self.normal, p) - self.offset
    }

    fn edges(&self) -> [(usize, usize); 3] {
        [
            (self.v[0], self.v[1]),
            (self.v[1], self.v[2]),
            (self.v[2], self.v[0]),
        ]
    }
}

/// Incremental insertion: each point outside the current hull replaces the
/// faces it sees with a cone over their horizon.
fn hull_planes_3d(points: &[Point], order: &[usize]) -> Result<Vec<Halfspace>, GeometryError> {
    let i0 = order[0];
    let far = |f: &dyn Fn(&Point) -> f64| -> usize {
        let mut best = i0;
        let mut best_d = -1.0;
        for &i in order {
            let d = f(&points[i]);
            if d > best_d {
                best_d = d;
                best = i;
            }
        }
        best
    };
    let i1 = far(&|p| math::dist(p, &points[i0]));
    let dir = sub(&points[i1], &points[i0]);
    let i2 = far(&|p| math::norm(&cross3(&dir, &sub(p, &points[i0]))));
    let base = Face::new(points, [i0, i1, i2]);
    let i3 = far(&|p| base.distance(p).abs());
    if base.distance(&points[i3]).abs() <= TAU_GEOM {
        return Err(GeometryError::DegenerateInput { rank: 2, dim: 3 });
    }

    let inner = math::centroid(&[
        points[i0].clone(),
        points[i1].clone(),
        points[i2].clone(),
        points[i3].clone(),
    ]);
    let oriented = |v: [usize; 3]| {
        let f = Face::new(points, v);
        if f.distance(&inner) > 0.0 {
            Face::new(points, [v[0], v[2], v[1]])
        } else {
            f
        }
    };
    let mut faces = alloc::vec![
        oriented([i0, i1, i2]),
        oriented([i0, i1, i3]),
        oriented([i0, i2, i3]),
        oriented([i1, i2, i3]),
    ];
    let seed = [i0, i1, i2, i3];

    for &i in order {
        if seed.contains(&i) {
            continue;
        }
        let p = &points[i];
        let visible: Vec<bool> = faces.iter().map(|f| f.distance(p) > TAU_GEOM).collect();
        if !visible.iter().any(|&v| v) {
            continue;
        }
        let seen: Vec<(usize, usize)> = faces
            .iter()
            .zip(&visible)
            .filter(|(_, &v)| v)
            .flat_map(|(f, _)| f.edges())
            .collect();
        let horizon: Vec<(usize, usize)> = seen
            .iter()
            .copied()
            .filter(|&(a, b)| !seen.contains(&(b, a)))
            .collect();
        let mut k = 0;
        faces.retain(|_| {
            k += 1;
            !visible[k - 1]
        });
        for (a, b) in horizon {
            faces.push(Face::new(points, [a, b, i]));
        }
    }

    Ok(faces
        .into_iter()
        .filter(|f| f.normal != [0.0; 3])
        .map(|f| Halfspace {
            normal: f.normal.to_vec(),
            offset: f.offset,
        })
        .collect())
}
