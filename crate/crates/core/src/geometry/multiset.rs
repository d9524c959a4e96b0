use alloc::vec::Vec;

use super::{Point, TAU_ANG, TAU_GEOM};
use crate::math::{self, wedge_norm_sq};

/// The multiset `V - V` of all ordered differences, with vectors equal within
/// [`TAU_GEOM`] merged. Entries are sorted lexicographically.
#[derive(Debug, Clone, PartialEq)]
pub struct DifferenceMultiset {
    entries: Vec<(Point, usize)>,
}

impl DifferenceMultiset {
    /// Merges `(vector, multiplicity)` pairs that agree within `tol`
    /// (max-norm, first occurrence is the representative).
    pub fn from_weighted(items: impl IntoIterator<Item = (Point, usize)>, tol: f64) -> Self {
        let mut entries: Vec<(Point, usize)> = Vec::new();
        for (w, m) in items {
            match entries
                .iter_mut()
                .find(|(e, _)| math::dist_inf(e, &w) <= tol)
            {
                Some((_, k)) => *k += m,
                None => entries.push((w, m)),
            }
        }
        entries.sort_by(|a, b| {
            a.0.iter()
                .zip(&b.0)
                .map(|(x, y)| x.total_cmp(y))
                .find(|o| o.is_ne())
                .unwrap_or(core::cmp::Ordering::Equal)
        });
        Self { entries }
    }

    pub fn entries(&self) -> &[(Point, usize)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Sum of multiplicities.
    pub fn total(&self) -> usize {
        self.entries.iter().map(|(_, m)| m).sum()
    }

    pub fn multiplicity(&self, w: &[f64], tol: f64) -> usize {
        self.entries
            .iter()
            .find(|(e, _)| math::dist_inf(e, w) <= tol)
            .map_or(0, |(_, m)| *m)
    }

    /// `w` present implies `-w` present with the same multiplicity.
    pub fn is_symmetric(&self, tol: f64) -> bool {
        self.entries.iter().all(|(w, m)| {
            let neg: Vec<f64> = w.iter().map(|x| -x).collect();
            self.multiplicity(&neg, tol) == *m
        })
    }

    /// Multiset equality with vectors compared within `tol`.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        if self.entries.len() != other.entries.len() || self.total() != other.total() {
            return false;
        }
        let mut used = alloc::vec![false; other.entries.len()];
        self.entries.iter().all(|(w, m)| {
            let hit = other
                .entries
                .iter()
                .enumerate()
                .find(|(k, (e, n))| !used[*k] && n == m && math::dist_inf(e, w) <= tol);
            match hit {
                Some((k, _)) => {
                    used[k] = true;
                    true
                }
                None => false,
            }
        })
    }
}

/// All ordered differences `v_i - v_j`, including the zero vector `|V|` times.
pub fn difference_multiset(points: &[Point]) -> DifferenceMultiset {
    let diffs = points
        .iter()
        .flat_map(|a| points.iter().map(move |b| (math::sub(a, b), 1)));
    DifferenceMultiset::from_weighted(diffs, TAU_GEOM)
}

/// True iff every line through the origin holds at most one pair `±w` of
/// nonzero differences, i.e. no two differences `v_j - v_i` (`i < j`) are
/// parallel within [`TAU_ANG`].
pub fn general_position_check(points: &[Point]) -> bool {
    let mut diffs: Vec<Point> = Vec::new();
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            let w = math::sub(&points[j], &points[i]);
            if math::norm(&w) <= TAU_GEOM {
                return false;
            }
            diffs.push(w);
        }
    }
    for a in 0..diffs.len() {
        let na = math::norm(&diffs[a]);
        for b in (a + 1)..diffs.len() {
            let nb = math::norm(&diffs[b]);
            let limit = TAU_ANG * na * nb;
            if wedge_norm_sq(&diffs[a], &diffs[b]) <= limit * limit {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn triangle_differences() {
        let m = difference_multiset(&[vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]]);
        assert_eq!(m.len(), 7);
        assert_eq!(m.multiplicity(&[0.0, 0.0], 1e-12), 3);
        for w in [[1.0, 0.0], [0.0, 1.0], [1.0, -1.0]] {
            assert_eq!(m.multiplicity(&w, 1e-12), 1);
            assert_eq!(m.multiplicity(&[-w[0], -w[1]], 1e-12), 1);
        }
        assert!(m.is_symmetric(1e-12));
    }

    #[test]
    fn single_point() {
        let m = difference_multiset(&[vec![3.0, 4.0, 5.0]]);
        assert_eq!(m.entries(), &[(vec![0.0, 0.0, 0.0], 1)]);
    }

    #[test]
    fn translation_leaves_differences_unchanged() {
        let pts = vec![vec![0.0, 0.0], vec![2.0, 0.5], vec![0.3, 1.0]];
        let moved: Vec<Point> = pts.iter().map(|p| vec![p[0] + 0.25, p[1] - 3.0]).collect();
        assert!(difference_multiset(&pts).approx_eq(&difference_multiset(&moved), 1e-12));
    }

    #[test]
    fn general_position_examples() {
        let square = [
            vec![0.0, 0.0],
            vec![1.0, 0.0],
            vec![1.0, 1.0],
            vec![0.0, 1.0],
        ];
        assert!(!general_position_check(&square));
        let tet = [
            vec![0.0, 0.0, 0.0],
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0],
        ];
        assert!(general_position_check(&tet));
        // Brute-force oracle: no two of the 12 nonzero differences are parallel
        // unless they are negatives of each other.
        let mut nonzero = Vec::new();
        for a in &tet {
            for b in &tet {
                let w = math::sub(a, b);
                if math::norm(&w) > 0.0 {
                    nonzero.push(w);
                }
            }
        }
        assert_eq!(nonzero.len(), 12);
        let mut parallel_pairs = 0;
        for i in 0..12 {
            for j in (i + 1)..12 {
                let c = math::cross3(&nonzero[i], &nonzero[j]);
                if math::norm(&c) < 1e-12 {
                    parallel_pairs += 1;
                    let sum = math::add(&nonzero[i], &nonzero[j]);
                    assert!(math::norm(&sum) < 1e-12);
                }
            }
        }
        assert_eq!(parallel_pairs, 6);
    }
}
