//! Rayon versions of the embarrassingly parallel maps. Results are gathered
//! in index order, so output does not depend on the worker count.

use polyft_core::congruence::{
    assemble_report, compare_moduli_on_patch, corpus_pair, squared_modulus_support_matches,
    strong_congruence, CongruenceError, PatchVerdict, HYPERPLANE_SAMPLES,
};
use polyft_core::covariogram::{
    covariogram_on_support, covariogram_support, verify_theorem1_with_field, CovariogramError,
    CovariogramField, LatticeGrid, Theorem1Report,
};
use polyft_core::diffraction::{
    DiffractionError, DiffractionPattern, PatternMetadata, PatternSpec,
};
use polyft_core::fourier::FtEvaluator;
use polyft_core::hypersurface::{check_inner_point_condition, hyperplane_report};
use polyft_core::{Point, Polytope};
use rayon::prelude::*;

use crate::config::SphereConfig;
use crate::report::{verdict_name, CorpusDocument, CorpusPairDocument};

/// Smallest modulus gap expected between independent corpus polytopes.
pub const DISTINCT_MIN_REL_DIFF: f64 = 1e-2;

/// Runs `f` on a pool of `jobs` workers (rayon's default when `None`).
pub fn with_jobs<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> T {
    match jobs {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .expect("thread pool")
            .install(f),
        None => f(),
    }
}

pub fn sample_field(p: &Polytope, h: f64) -> Result<CovariogramField, CovariogramError> {
    let grid = LatticeGrid::covering(p, h)?;
    let support = covariogram_support(p);
    let values = (0..grid.len())
        .into_par_iter()
        .map(|i| covariogram_on_support(p, &support, &grid.point(i)))
        .collect();
    Ok(CovariogramField::from_values(grid, values))
}

pub fn verify_theorem1(
    p: &Polytope,
    samples: &[Point],
    h: f64,
    tol: f64,
) -> Result<Theorem1Report, CovariogramError> {
    // Validate the guard before the expensive sampling.
    if let Some(s) = samples
        .iter()
        .find(|s| polyft_core::math::norm(s) * h >= 1.0)
    {
        return Err(CovariogramError::ResolutionExceeded {
            product: polyft_core::math::norm(s) * h,
        });
    }
    let field = sample_field(p, h)?;
    verify_theorem1_with_field(p, &field, samples, tol)
}

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
    let intensities = points.par_iter().map(|(_, q)| ft.modulus(q)).collect();
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

#[derive(Debug, Clone)]
pub struct CorpusOptions {
    pub count: usize,
    pub seed: u64,
    pub samples: usize,
    pub tol_patch: f64,
    pub tol_cong: f64,
    pub surface: SphereConfig,
}

/// Runs the uniqueness experiment on every corpus pair, plus the check that
/// `|F|^2` has the vertex difference multiset as exponent support.
pub fn run_corpus(opts: &CorpusOptions) -> Result<CorpusDocument, CongruenceError> {
    let (surf, patch) = opts.surface.build()?;
    let hyperplane = hyperplane_report(&surf, &patch, HYPERPLANE_SAMPLES)?;
    let inner_point = check_inner_point_condition(&surf, &patch);

    let pairs: Vec<CorpusPairDocument> = (0..opts.count)
        .into_par_iter()
        .map(|i| {
            let pair = corpus_pair(i, opts.count, opts.seed);
            let comparison = compare_moduli_on_patch(
                &pair.a,
                &pair.b,
                &surf,
                &patch,
                opts.samples,
                opts.seed.wrapping_add(i as u64),
                opts.tol_patch,
            )?;
            let congruence = strong_congruence(&pair.a, &pair.b, opts.tol_cong);
            let support = squared_modulus_support_matches(&pair.a)?
                && squared_modulus_support_matches(&pair.b)?;
            let r = assemble_report(hyperplane.clone(), inner_point, comparison, congruence);
            Ok(CorpusPairDocument {
                index: i,
                congruent_by_construction: pair.construction.is_some(),
                vertices_a: pair.a.vertices().len(),
                vertices_b: pair.b.vertices().len(),
                verdict: verdict_name(r.comparison.verdict),
                max_rel_diff: r.comparison.max_rel_diff,
                congruent: r.congruence.congruent,
                consistent: r.consistent,
                difference_support_matches: support,
            })
        })
        .collect::<Result<_, CongruenceError>>()?;

    let select = |f: &dyn Fn(&CorpusPairDocument) -> bool| -> Vec<usize> {
        pairs.iter().filter(|p| f(p)).map(|p| p.index).collect()
    };
    let misclassified = select(&|p| {
        if p.congruent_by_construction {
            !p.congruent || p.max_rel_diff > opts.tol_patch
        } else {
            p.congruent
                || p.max_rel_diff < DISTINCT_MIN_REL_DIFF
                || p.verdict != verdict_name(PatchVerdict::Distinct)
        }
    });
    let rel = |cong: bool| {
        pairs
            .iter()
            .filter(move |p| p.congruent_by_construction == cong)
    };
    Ok(CorpusDocument {
        count: opts.count,
        seed: opts.seed,
        samples: opts.samples,
        tol_patch: opts.tol_patch,
        tol_cong: opts.tol_cong,
        surface: opts.surface.clone(),
        hyperplane: (&hyperplane).into(),
        inner_point,
        worst_congruent_rel_diff: rel(true).map(|p| p.max_rel_diff).reduce(f64::max),
        smallest_distinct_rel_diff: rel(false).map(|p| p.max_rel_diff).reduce(f64::min),
        inconsistent_pairs: select(&|p| !p.consistent),
        misclassified_pairs: misclassified,
        support_mismatches: select(&|p| !p.difference_support_matches),
        pairs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use polyft_core::covariogram;
    use polyft_core::diffraction::{self, AngleAxis};
    use polyft_core::geometry::shapes;
    use std::f64::consts::PI;

    #[test]
    fn parallel_matches_sequential() {
        let tet = shapes::standard_simplex(3);
        let a = with_jobs(Some(3), || sample_field(&tet, 0.2).unwrap());
        let b = covariogram::sample_field(&tet, 0.2).unwrap();
        assert_eq!(a, b);

        let spec = PatternSpec::two_d(AngleAxis::new(0.0, PI, 64));
        let sq = shapes::unit_square();
        let a = with_jobs(Some(2), || render_pattern(&sq, &spec, "sq").unwrap());
        assert_eq!(a, diffraction::render_pattern(&sq, &spec, "sq").unwrap());
    }

    #[test]
    fn small_corpus() {
        let opts = CorpusOptions {
            count: 8,
            seed: 1,
            samples: 50,
            tol_patch: 1e-7,
            tol_cong: 1e-8,
            surface: SphereConfig::default(),
        };
        let doc = with_jobs(Some(4), || run_corpus(&opts).unwrap());
        assert!(doc.passed(), "{:?}", doc.misclassified_pairs);
        assert_eq!(doc.pairs.len(), 8);
        assert!(doc.worst_congruent_rel_diff.unwrap() <= 1e-7);
        let again = with_jobs(Some(1), || run_corpus(&opts).unwrap());
        assert_eq!(
            crate::formats::to_json(&doc),
            crate::formats::to_json(&again)
        );
    }
}
