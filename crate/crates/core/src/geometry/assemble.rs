//! Builds a consistent [`Polytope`] from candidate points and candidate
//! supporting halfspaces. Shared by the hull and the clipper.

use alloc::vec::Vec;

use super::{Facet, GeometryError, Halfspace, Point, Polytope, TAU_GEOM};
use crate::math::{self, affine_rank, atan2, cross3, dot, rank, sub};

/// Candidate points are deduplicated (first occurrence wins), redundant or
/// invalid halfspaces are dropped, non-extreme points are removed, and each
/// facet gets its vertices in boundary order. Surviving vertices keep the
/// relative order of `candidates`.
pub(super) fn assemble(
    dim: usize,
    candidates: &[Point],
    planes: &[Halfspace],
) -> Result<Polytope, GeometryError> {
    let mut points: Vec<&Point> = Vec::with_capacity(candidates.len());
    for c in candidates {
        if !points.iter().any(|p| math::dist_inf(p, c) <= TAU_GEOM) {
            points.push(c);
        }
    }

    // Supporting planes with their incident points; duplicates merged.
    let mut facets: Vec<(Halfspace, Vec<usize>)> = Vec::new();
    for h in planes {
        if points.iter().any(|p| h.signed_distance(p) > TAU_GEOM) {
            continue;
        }
        let dup = facets.iter().any(|(g, _)| {
            math::dist_inf(&g.normal, &h.normal) <= TAU_GEOM
                && (g.offset - h.offset).abs() <= TAU_GEOM
        });
        if dup {
            continue;
        }
        let incident: Vec<usize> = (0..points.len())
            .filter(|&i| h.signed_distance(points[i]).abs() <= TAU_GEOM)
            .collect();
        let on: Vec<Point> = incident.iter().map(|&i| points[i].clone()).collect();
        if incident.len() >= dim && affine_rank(&on, TAU_GEOM) == dim - 1 {
            facets.push((h.clone(), incident));
        }
    }

    // A point is a vertex iff the normals of its facets span R^dim.
    let mut keep = alloc::vec![false; points.len()];
    for (i, k) in keep.iter_mut().enumerate() {
        let normals: Vec<Vec<f64>> = facets
            .iter()
            .filter(|(_, inc)| inc.contains(&i))
            .map(|(h, _)| h.normal.clone())
            .collect();
        *k = normals.len() >= dim && rank(&normals, TAU_GEOM) == dim;
    }
    let mut new_index = alloc::vec![usize::MAX; points.len()];
    let mut vertices = Vec::new();
    for i in 0..points.len() {
        if keep[i] {
            new_index[i] = vertices.len();
            vertices.push(points[i].clone());
        }
    }
    let rank_v = affine_rank(&vertices, TAU_GEOM);
    if rank_v < dim {
        return Err(GeometryError::DegenerateInput { rank: rank_v, dim });
    }

    let facets = facets
        .into_iter()
        .map(|(halfspace, inc)| {
            let idx: Vec<usize> = inc
                .into_iter()
                .filter(|&i| keep[i])
                .map(|i| new_index[i])
                .collect();
            let vertices = order_boundary(dim, &halfspace, &vertices, idx);
            Facet {
                vertices,
                halfspace,
            }
        })
        .collect();
    Ok(Polytope::from_parts(dim, vertices, facets))
}

/// Counter-clockwise order around the outward normal (3D) or along the
/// counter-clockwise boundary (2D).
fn order_boundary(
    dim: usize,
    h: &Halfspace,
    vertices: &[Point],
    mut idx: Vec<usize>,
) -> Vec<usize> {
    if dim == 2 {
        let t = [-h.normal[1], h.normal[0]];
        idx.sort_by(|&a, &b| dot(&t, &vertices[a]).total_cmp(&dot(&t, &vertices[b])));
        return idx;
    }
    let pts: Vec<Point> = idx.iter().map(|&i| vertices[i].clone()).collect();
    let c = math::centroid(&pts);
    let u0 = sub(&pts[0], &c);
    let u = math::scale(&u0, 1.0 / math::norm(&u0));
    let w = cross3(&h.normal, &u);
    let mut keyed: Vec<(f64, usize)> = idx
        .iter()
        .zip(&pts)
        .map(|(&i, p)| {
            let d = sub(p, &c);
            (atan2(dot(&d, &w), dot(&d, &u)), i)
        })
        .collect();
    keyed.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    // Start the cycle at the smallest index for a canonical form.
    let start = keyed
        .iter()
        .enumerate()
        .min_by_key(|(_, (_, i))| *i)
        .map(|(k, _)| k)
        .unwrap_or(0);
    keyed.rotate_left(start);
    keyed.into_iter().map(|(_, i)| i).collect()
}
