use alloc::vec::Vec;

use super::assemble::assemble;
use super::{Halfspace, Point, Polytope, TAU_GEOM};

/// Cuts `p` with `h`: kept vertices plus edge/plane crossings, re-assembled
/// against the old facets and the cutting plane.
pub(super) fn clip(p: &Polytope, h: &Halfspace) -> Option<Polytope> {
    let d: Vec<f64> = p.vertices().iter().map(|v| h.signed_distance(v)).collect();
    if d.iter().all(|&x| x <= TAU_GEOM) {
        return Some(p.clone());
    }
    // Nothing strictly inside: at most a face survives.
    if d.iter().all(|&x| x >= -TAU_GEOM) {
        return None;
    }

    let mut candidates: Vec<Point> = p
        .vertices()
        .iter()
        .zip(&d)
        .filter(|(_, &x)| x <= TAU_GEOM)
        .map(|(v, _)| v.clone())
        .collect();
    for (i, j) in p.edges() {
        let (di, dj) = (d[i], d[j]);
        let crosses = (di < -TAU_GEOM && dj > TAU_GEOM) || (dj < -TAU_GEOM && di > TAU_GEOM);
        if crosses {
            let t = di / (di - dj);
            let (a, b) = (&p.vertices()[i], &p.vertices()[j]);
            candidates.push(a.iter().zip(b).map(|(x, y)| x + t * (y - x)).collect());
        }
    }

    let mut planes: Vec<Halfspace> = p.facets().iter().map(|f| f.halfspace.clone()).collect();
    planes.push(h.clone());
    assemble(p.dim(), &candidates, &planes).ok()
}
