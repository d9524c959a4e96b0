//! Strong congruence `P' = εP + v`, comparison of Fourier moduli on surface
//! patches, and the experiments tying the two together.

mod corpus;

pub use corpus::{
    corpus, corpus_pair, random_sphere_polytope, CorpusPair, MIN_VERTEX_SEPARATION, VERTEX_RANGE,
};

use alloc::vec::Vec;

use crate::fourier::{vertex_cone_efunction, FourierError, FtEvaluator};
use crate::geometry::{
    difference_multiset, general_position_check, Point, Polytope, Sign, TAU_GEOM,
};
use crate::hypersurface::{
    check_inner_point_condition, hyperplane_report, sample_patch, HyperplaneReport,
    HypersurfaceError, PatchDomain, RpSurface,
};
use crate::math;

/// Vertex matching tolerance.
pub const TOL_CONG: f64 = 1e-8;
/// Relative tolerance on Fourier moduli.
pub const TOL_PATCH: f64 = 1e-7;
/// Lower bound on the denominator of relative modulus differences.
pub const EPS_FLOOR: f64 = 1e-300;
/// Sample count for the hyperplane check in [`uniqueness_experiment`].
pub const HYPERPLANE_SAMPLES: usize = 30;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CongruenceError {
    #[error(transparent)]
    Hypersurface(#[from] HypersurfaceError),
    #[error(transparent)]
    Fourier(#[from] FourierError),
    #[error("polytope dimension {found} does not match the surface dimension {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("point list is empty")]
    EmptyPointSet,
    #[error("internal inconsistency: equal difference multisets of points in general position, but no congruence found (residual {residual:e})")]
    InternalInconsistency { residual: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct CongruenceResult {
    pub congruent: bool,
    pub eps: Option<Sign>,
    pub shift: Option<Point>,
    /// Largest vertex mismatch of the best candidate (infinite when the
    /// vertex counts or dimensions differ).
    pub residual: f64,
}

impl CongruenceResult {
    fn no() -> Self {
        Self {
            congruent: false,
            eps: None,
            shift: None,
            residual: f64::INFINITY,
        }
    }
}

/// Largest distance in a greedy nearest-neighbour matching of `a` onto `b`
/// (each point of `b` used once).
fn matching_residual(a: &[Point], b: &[Point]) -> f64 {
    let mut used = alloc::vec![false; b.len()];
    let mut worst: f64 = 0.0;
    for x in a {
        let best = b
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, y)| (j, math::dist(x, y)))
            .min_by(|p, q| p.1.total_cmp(&q.1));
        match best {
            Some((j, d)) => {
                used[j] = true;
                worst = worst.max(d);
            }
            None => return f64::INFINITY,
        }
    }
    worst
}

/// Residual of the certificate `b = εa + v` on point sets.
pub fn certificate_residual(a: &[Point], b: &[Point], eps: Sign, shift: &[f64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let img: Vec<Point> = a
        .iter()
        .map(|x| math::add(&math::scale(x, eps.value()), shift))
        .collect();
    matching_residual(&img, b)
}

/// Decides `b = εa + v` for finite point sets. The vertex mean is
/// equivariant, so each `ε` admits the single candidate
/// `v = mean(b) - ε·mean(a)`. `ε = +1` is tried first.
pub fn point_set_congruence(a: &[Point], b: &[Point], tol: f64) -> CongruenceResult {
    let dim = a.first().map_or(0, Vec::len);
    if a.len() != b.len() || a.is_empty() || b.iter().any(|x| x.len() != dim) {
        return CongruenceResult::no();
    }
    let (ca, cb) = (math::centroid(a), math::centroid(b));
    let mut best = CongruenceResult::no();
    for eps in [Sign::Plus, Sign::Minus] {
        let shift = math::sub(&cb, &math::scale(&ca, eps.value()));
        let residual = certificate_residual(a, b, eps, &shift);
        if residual <= tol {
            return CongruenceResult {
                congruent: true,
                eps: Some(eps),
                shift: Some(shift),
                residual,
            };
        }
        best.residual = best.residual.min(residual);
    }
    best
}

/// Strong congruence of polytopes, decided on their vertex sets.
pub fn strong_congruence(p: &Polytope, q: &Polytope, tol: f64) -> CongruenceResult {
    if p.dim() != q.dim() {
        return CongruenceResult::no();
    }
    point_set_congruence(p.vertices(), q.vertices(), tol)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PatchVerdict {
    EqualOnPatch,
    Distinct,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PatchComparison {
    pub samples: Vec<Point>,
    pub moduli_a: Vec<f64>,
    pub moduli_b: Vec<f64>,
    pub max_rel_diff: f64,
    pub tol: f64,
    pub verdict: PatchVerdict,
}

impl PatchComparison {
    /// Builds the comparison from moduli evaluated elsewhere (e.g. in
    /// parallel).
    pub fn from_moduli(
        samples: Vec<Point>,
        moduli_a: Vec<f64>,
        moduli_b: Vec<f64>,
        tol: f64,
    ) -> Self {
        let max_rel_diff = moduli_a
            .iter()
            .zip(&moduli_b)
            .map(|(a, b)| (a - b).abs() / a.max(EPS_FLOOR))
            .fold(0.0, f64::max);
        Self {
            verdict: if max_rel_diff <= tol {
                PatchVerdict::EqualOnPatch
            } else {
                PatchVerdict::Distinct
            },
            samples,
            moduli_a,
            moduli_b,
            max_rel_diff,
            tol,
        }
    }
}

/// Evaluates `|F_P|` and `|F_Q|` at `k` points of the patch `σ(o)`.
pub fn compare_moduli_on_patch(
    p: &Polytope,
    q: &Polytope,
    surf: &RpSurface,
    o: &PatchDomain,
    k: usize,
    seed: u64,
    tol: f64,
) -> Result<PatchComparison, CongruenceError> {
    for x in [p, q] {
        if x.dim() != surf.dim() {
            return Err(CongruenceError::DimensionMismatch {
                expected: surf.dim(),
                found: x.dim(),
            });
        }
    }
    let samples = sample_patch(surf, o, k, seed)?;
    let (fa, fb) = (FtEvaluator::new(p), FtEvaluator::new(q));
    let moduli_a = samples.iter().map(|s| fa.modulus(s)).collect();
    let moduli_b = samples.iter().map(|s| fb.modulus(s)).collect();
    Ok(PatchComparison::from_moduli(
        samples, moduli_a, moduli_b, tol,
    ))
}

#[derive(Debug, Clone, PartialEq)]
pub enum Theorem5Verdict {
    /// Both sets in general position with equal difference multisets; the
    /// certificate is the cross-check found by [`point_set_congruence`].
    CongruentByTheorem5(CongruenceResult),
    DifferenceSetsDiffer,
    NotGeneralPosition,
}

/// Decides congruence of point sets from their difference multisets.
pub fn theorem5_decision(
    v: &[Point],
    w: &[Point],
    tol: f64,
) -> Result<Theorem5Verdict, CongruenceError> {
    if v.is_empty() || w.is_empty() {
        return Err(CongruenceError::EmptyPointSet);
    }
    if !general_position_check(v) || !general_position_check(w) {
        return Ok(Theorem5Verdict::NotGeneralPosition);
    }
    if !difference_multiset(v).approx_eq(&difference_multiset(w), tol) {
        return Ok(Theorem5Verdict::DifferenceSetsDiffer);
    }
    // Differences agree within `tol` per component, so centred points agree
    // within `tol·√n`.
    let dim = v[0].len() as f64;
    let c = point_set_congruence(v, w, 2.0 * tol * math::sqrt(dim));
    if !c.congruent {
        return Err(CongruenceError::InternalInconsistency {
            residual: c.residual,
        });
    }
    Ok(Theorem5Verdict::CongruentByTheorem5(c))
}

/// True iff the exponents of `|F_P|^2`, as an E-function, form exactly the
/// difference multiset of the vertices.
pub fn squared_modulus_support_matches(p: &Polytope) -> Result<bool, CongruenceError> {
    let f = vertex_cone_efunction(p)?;
    let support = f.squared_modulus().exponent_support();
    Ok(support.approx_eq(&difference_multiset(p.vertices()), TAU_GEOM))
}

#[derive(Debug, Clone, PartialEq)]
pub struct UniquenessReport {
    pub hyperplane: HyperplaneReport,
    pub inner_point: bool,
    pub comparison: PatchComparison,
    pub congruence: CongruenceResult,
    /// NOT (equal on the patch AND not congruent).
    pub consistent: bool,
}

impl UniquenessReport {
    pub fn conditions_hold(&self) -> bool {
        self.hyperplane.passed && self.inner_point
    }
}

/// Runs the patch comparison and the congruence decision side by side.
#[allow(clippy::too_many_arguments)]
pub fn uniqueness_experiment(
    p: &Polytope,
    q: &Polytope,
    surf: &RpSurface,
    o: &PatchDomain,
    k: usize,
    seed: u64,
    tol_patch: f64,
    tol_cong: f64,
) -> Result<UniquenessReport, CongruenceError> {
    let hyperplane = hyperplane_report(surf, o, HYPERPLANE_SAMPLES)?;
    let inner_point = check_inner_point_condition(surf, o);
    let comparison = compare_moduli_on_patch(p, q, surf, o, k, seed, tol_patch)?;
    let congruence = strong_congruence(p, q, tol_cong);
    Ok(assemble_report(
        hyperplane,
        inner_point,
        comparison,
        congruence,
    ))
}

/// Combines independently computed parts into a report.
pub fn assemble_report(
    hyperplane: HyperplaneReport,
    inner_point: bool,
    comparison: PatchComparison,
    congruence: CongruenceResult,
) -> UniquenessReport {
    let consistent = !(comparison.verdict == PatchVerdict::EqualOnPatch && !congruence.congruent);
    UniquenessReport {
        hyperplane,
        inner_point,
        comparison,
        congruence,
        consistent,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::shapes;
    use crate::hypersurface::sphere;
    use alloc::vec;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ewald() -> (RpSurface, PatchDomain) {
        let s = sphere(&[0.0, 0.0, -1.0], 1.0).unwrap();
        let o = PatchDomain::new(&s, vec![vec![(0.5, 1.5), (-0.5, 0.5)]]).unwrap();
        (s, o)
    }

    fn unit_volume_tetrahedron() -> Polytope {
        let k = libm::cbrt(6.0);
        let pts: Vec<Point> = shapes::standard_simplex(3)
            .vertices()
            .iter()
            .map(|v| math::scale(v, k))
            .collect();
        Polytope::convex_hull(&pts).unwrap()
    }

    #[test]
    fn congruence_examples() {
        let tet = shapes::regular_tetrahedron();
        let r = strong_congruence(&tet, &tet.translate(&[1.0, 2.0, 3.0]), TOL_CONG);
        assert!(r.congruent);
        assert_eq!(r.eps, Some(Sign::Plus));
        assert!(math::dist(r.shift.as_ref().unwrap(), &[1.0, 2.0, 3.0]) < 1e-12);

        let r = strong_congruence(&tet, &tet.transform(Sign::Minus, &[0.0; 3]), TOL_CONG);
        assert!(r.congruent);
        assert_eq!(r.eps, Some(Sign::Minus));
        assert!(math::norm(r.shift.as_ref().unwrap()) < 1e-12);

        let r = strong_congruence(&shapes::unit_cube(), &unit_volume_tetrahedron(), TOL_CONG);
        assert!(!r.congruent);
        assert_eq!(r.residual, f64::INFINITY);

        // A generic rotation is not a strong congruence. (A quarter turn
        // would be: it maps this tetrahedron onto its point reflection.)
        let (c, s) = (math::cos(0.3), math::sin(0.3));
        let rot: Vec<Point> = tet
            .vertices()
            .iter()
            .map(|v| vec![c * v[0] - s * v[1], s * v[0] + c * v[1], v[2]])
            .collect();
        let r = strong_congruence(&tet, &Polytope::convex_hull(&rot).unwrap(), TOL_CONG);
        assert!(!r.congruent && r.residual > 0.1);
    }

    #[test]
    fn congruence_is_an_equivalence_certificate() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..20 {
            let p = random_sphere_polytope(&mut rng);
            let r = strong_congruence(&p, &p, TOL_CONG);
            assert_eq!((r.congruent, r.eps), (true, Some(Sign::Plus)));
            assert!(math::norm(r.shift.as_ref().unwrap()) < 1e-12);

            let eps = if rng.random::<bool>() {
                Sign::Plus
            } else {
                Sign::Minus
            };
            let v: Point = (0..3).map(|_| rng.random_range(-3.0..3.0)).collect();
            let q = p.transform(eps, &v);
            let fwd = strong_congruence(&p, &q, TOL_CONG);
            assert!(fwd.congruent);
            let (e, s) = (fwd.eps.unwrap(), fwd.shift.unwrap());
            // Inverse certificate (ε, -εv).
            let inv = math::scale(&s, -e.value());
            assert!(certificate_residual(q.vertices(), p.vertices(), e, &inv) <= TOL_CONG);
            assert!(strong_congruence(&q, &p, TOL_CONG).congruent);

            let mut shuffled = q.vertices().to_vec();
            shuffled.reverse();
            shuffled.swap(0, 1);
            assert!(point_set_congruence(p.vertices(), &shuffled, TOL_CONG).congruent);
        }
    }

    #[test]
    fn symmetric_polytopes_admit_both_signs() {
        let ico = shapes::icosahedron();
        let neg = ico.transform(Sign::Minus, &[0.5, 0.0, -1.0]);
        let r = strong_congruence(&ico, &neg, TOL_CONG);
        assert!(r.congruent);
        for eps in [Sign::Plus, Sign::Minus] {
            let c = math::sub(
                &neg.vertex_centroid(),
                &math::scale(&ico.vertex_centroid(), eps.value()),
            );
            assert!(certificate_residual(ico.vertices(), neg.vertices(), eps, &c) <= TOL_CONG);
        }
    }

    #[test]
    fn patch_comparison() {
        let (s, o) = ewald();
        let tet = shapes::regular_tetrahedron();
        let moved = tet.transform(Sign::Minus, &[0.3, 0.1, -0.7]);
        let c = compare_moduli_on_patch(&tet, &moved, &s, &o, 50, 1, TOL_PATCH).unwrap();
        assert_eq!(c.verdict, PatchVerdict::EqualOnPatch);
        assert!(c.max_rel_diff <= 1e-10);

        let cube = shapes::unit_cube();
        let c =
            compare_moduli_on_patch(&cube, &unit_volume_tetrahedron(), &s, &o, 200, 1, TOL_PATCH)
                .unwrap();
        assert_eq!(c.verdict, PatchVerdict::Distinct);
        assert!(c.max_rel_diff > 1e-2);

        assert!(matches!(
            compare_moduli_on_patch(&cube, &cube, &s, &o, 0, 1, TOL_PATCH),
            Err(CongruenceError::Hypersurface(HypersurfaceError::NoSamples))
        ));
        assert!(compare_moduli_on_patch(
            &shapes::unit_square(),
            &shapes::unit_square(),
            &s,
            &o,
            5,
            1,
            TOL_PATCH
        )
        .is_err());
    }

    #[test]
    fn theorem5() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let v: Vec<Point> = (0..6)
            .map(|_| (0..3).map(|_| rng.random_range(-1.0..1.0)).collect())
            .collect();
        assert!(general_position_check(&v));
        let shifted: Vec<Point> = v.iter().map(|x| math::add(x, &[1.0, -2.0, 0.5])).collect();
        assert!(matches!(
            theorem5_decision(&v, &shifted, TAU_GEOM).unwrap(),
            Theorem5Verdict::CongruentByTheorem5(CongruenceResult {
                eps: Some(Sign::Plus),
                ..
            })
        ));
        let reflected: Vec<Point> = v.iter().map(|x| math::scale(x, -1.0)).collect();
        assert!(matches!(
            theorem5_decision(&v, &reflected, TAU_GEOM).unwrap(),
            Theorem5Verdict::CongruentByTheorem5(CongruenceResult {
                eps: Some(Sign::Minus),
                ..
            })
        ));
        let jittered: Vec<Point> = v
            .iter()
            .map(|x| {
                x.iter()
                    .map(|c| c + rng.random_range(-1e-3..1e-3))
                    .collect()
            })
            .collect();
        assert_eq!(
            theorem5_decision(&v, &jittered, TAU_GEOM).unwrap(),
            Theorem5Verdict::DifferenceSetsDiffer
        );
        let square = shapes::unit_square().vertices().to_vec();
        assert_eq!(
            theorem5_decision(&square, &square, TAU_GEOM).unwrap(),
            Theorem5Verdict::NotGeneralPosition
        );
        assert_eq!(
            theorem5_decision(&[], &square, TAU_GEOM),
            Err(CongruenceError::EmptyPointSet)
        );
    }

    #[test]
    fn squared_modulus_support() {
        for p in [
            shapes::unit_cube(),
            shapes::regular_tetrahedron(),
            shapes::icosahedron(),
            shapes::unit_square(),
        ] {
            assert!(squared_modulus_support_matches(&p).unwrap());
        }
    }

    #[test]
    fn uniqueness_examples() {
        let (s, o) = ewald();
        let cube = shapes::unit_cube();
        let run = |a: &Polytope, b: &Polytope| {
            uniqueness_experiment(a, b, &s, &o, 200, 3, TOL_PATCH, TOL_CONG).unwrap()
        };
        let r = run(&cube, &cube.translate(&[0.2, -1.0, 4.0]));
        assert!(r.conditions_hold() && r.consistent && r.congruence.congruent);
        assert_eq!(r.comparison.verdict, PatchVerdict::EqualOnPatch);

        let r = run(&cube, &unit_volume_tetrahedron());
        assert!(r.consistent && !r.congruence.congruent);
        assert_eq!(r.comparison.verdict, PatchVerdict::Distinct);

        let ico = shapes::icosahedron();
        let r = run(&ico, &ico.transform(Sign::Minus, &[0.0; 3]));
        assert!(r.consistent && r.congruence.congruent);
        assert_eq!(r.comparison.verdict, PatchVerdict::EqualOnPatch);
    }
}
