//! Serializable report documents. Field order is fixed so identical runs
//! produce identical bytes; infinities are written as `null`.

use polyft_core::congruence::{CongruenceResult, PatchComparison, PatchVerdict, UniquenessReport};
use polyft_core::covariogram::Theorem1Report;
use polyft_core::fourier::EFunction;
use polyft_core::hypersurface::HyperplaneReport;
use polyft_core::Complex64;
use serde::Serialize;

use crate::config::SphereConfig;

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

#[derive(Debug, Clone, Serialize)]
pub struct ComplexValue {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for ComplexValue {
    fn from(z: Complex64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FtSample {
    pub s: Vec<f64>,
    pub value: ComplexValue,
    pub modulus: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct FtReport {
    pub polytope: String,
    pub seed: u64,
    pub samples: Vec<FtSample>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Theorem1Sample {
    pub s: Vec<f64>,
    pub field_ft: ComplexValue,
    pub squared_modulus: f64,
    pub rel_error: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Theorem1Document {
    pub polytope: String,
    pub seed: u64,
    pub spacing: f64,
    pub tol: f64,
    pub max_rel_error: f64,
    pub passed: bool,
    pub samples: Vec<Theorem1Sample>,
}

impl Theorem1Document {
    pub fn new(polytope: &str, seed: u64, r: &Theorem1Report) -> Self {
        Self {
            polytope: polytope.into(),
            seed,
            spacing: r.spacing,
            tol: r.tol,
            max_rel_error: r.max_rel_error,
            passed: r.passed,
            samples: r
                .samples
                .iter()
                .map(|s| Theorem1Sample {
                    s: s.s.clone(),
                    field_ft: s.field_ft.into(),
                    squared_modulus: s.squared_modulus,
                    rel_error: s.rel_error,
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CongruenceDocument {
    pub congruent: bool,
    pub eps: Option<i32>,
    pub shift: Option<Vec<f64>>,
    /// `null` when vertex counts differ.
    pub residual: Option<f64>,
}

impl From<&CongruenceResult> for CongruenceDocument {
    fn from(c: &CongruenceResult) -> Self {
        Self {
            congruent: c.congruent,
            eps: c.eps.map(|e| e.value() as i32),
            shift: c.shift.clone(),
            residual: finite(c.residual),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PatchDocument {
    pub verdict: &'static str,
    pub max_rel_diff: f64,
    pub tol: f64,
    pub samples: Vec<Vec<f64>>,
    pub moduli_a: Vec<f64>,
    pub moduli_b: Vec<f64>,
}

pub fn verdict_name(v: PatchVerdict) -> &'static str {
    match v {
        PatchVerdict::EqualOnPatch => "equal-on-patch",
        PatchVerdict::Distinct => "distinct",
    }
}

impl From<&PatchComparison> for PatchDocument {
    fn from(c: &PatchComparison) -> Self {
        Self {
            verdict: verdict_name(c.verdict),
            max_rel_diff: c.max_rel_diff,
            tol: c.tol,
            samples: c.samples.clone(),
            moduli_a: c.moduli_a.clone(),
            moduli_b: c.moduli_b.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct HyperplaneDocument {
    pub samples: usize,
    pub affine_rank: usize,
    pub linear_rank: usize,
    pub dim: usize,
    pub passed: bool,
}

impl From<&HyperplaneReport> for HyperplaneDocument {
    fn from(r: &HyperplaneReport) -> Self {
        Self {
            samples: r.samples,
            affine_rank: r.affine_rank,
            linear_rank: r.linear_rank,
            dim: r.dim,
            passed: r.passed,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ConditionsDocument {
    pub surface: SphereConfig,
    pub hyperplane: HyperplaneDocument,
    pub inner_point: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CompareDocument {
    pub a: String,
    pub b: String,
    pub seed: u64,
    pub samples: usize,
    pub tol_patch: f64,
    pub tol_cong: f64,
    pub surface: SphereConfig,
    pub hyperplane: HyperplaneDocument,
    pub inner_point: bool,
    pub congruence: CongruenceDocument,
    pub comparison: PatchDocument,
    pub consistent: bool,
}

#[derive(Debug, Clone)]
pub struct CompareMeta<'a> {
    pub a: &'a str,
    pub b: &'a str,
    pub seed: u64,
    pub samples: usize,
    pub tol_cong: f64,
    pub surface: &'a SphereConfig,
}

impl CompareDocument {
    pub fn new(meta: CompareMeta<'_>, r: &UniquenessReport) -> Self {
        Self {
            a: meta.a.into(),
            b: meta.b.into(),
            seed: meta.seed,
            samples: meta.samples,
            tol_patch: r.comparison.tol,
            tol_cong: meta.tol_cong,
            surface: meta.surface.clone(),
            hyperplane: (&r.hyperplane).into(),
            inner_point: r.inner_point,
            congruence: (&r.congruence).into(),
            comparison: (&r.comparison).into(),
            consistent: r.consistent,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CorpusPairDocument {
    pub index: usize,
    pub congruent_by_construction: bool,
    pub vertices_a: usize,
    pub vertices_b: usize,
    pub verdict: &'static str,
    pub max_rel_diff: f64,
    pub congruent: bool,
    pub consistent: bool,
    pub difference_support_matches: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CorpusDocument {
    pub count: usize,
    pub seed: u64,
    pub samples: usize,
    pub tol_patch: f64,
    pub tol_cong: f64,
    pub surface: SphereConfig,
    pub hyperplane: HyperplaneDocument,
    pub inner_point: bool,
    /// Largest `max_rel_diff` among pairs congruent by construction.
    pub worst_congruent_rel_diff: Option<f64>,
    /// Smallest `max_rel_diff` among independent pairs.
    pub smallest_distinct_rel_diff: Option<f64>,
    pub inconsistent_pairs: Vec<usize>,
    pub misclassified_pairs: Vec<usize>,
    pub support_mismatches: Vec<usize>,
    pub pairs: Vec<CorpusPairDocument>,
}

impl CorpusDocument {
    pub fn passed(&self) -> bool {
        self.inconsistent_pairs.is_empty()
            && self.misclassified_pairs.is_empty()
            && self.support_mismatches.is_empty()
            && self.hyperplane.passed
            && self.inner_point
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RationalTermDocument {
    pub weight: f64,
    /// Power of `-i`.
    pub phase: u8,
    pub edges: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ETermDocument {
    pub exponent: Vec<f64>,
    pub multiplicity: usize,
    pub coeff: Vec<RationalTermDocument>,
}

#[derive(Debug, Clone, Serialize)]
pub struct EFunctionDocument {
    pub dim: usize,
    pub degree: i32,
    pub terms: Vec<ETermDocument>,
}

impl From<&EFunction> for EFunctionDocument {
    fn from(f: &EFunction) -> Self {
        Self {
            dim: f.dim(),
            degree: f.degree(),
            terms: f
                .terms()
                .iter()
                .map(|t| ETermDocument {
                    exponent: t.exponent.clone(),
                    multiplicity: t.multiplicity,
                    coeff: t
                        .coeff
                        .iter()
                        .map(|r| RationalTermDocument {
                            weight: r.weight.to_f64(),
                            phase: r.phase,
                            edges: r.edges.iter().map(|e| e.vector()).collect(),
                        })
                        .collect(),
                })
                .collect(),
        }
    }
}
