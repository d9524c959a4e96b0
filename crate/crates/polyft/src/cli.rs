//! Argument parsing and subcommand dispatch.
//!
//! Exit codes: 0 success, 1 a verification did not pass, 2 usage,
//! configuration or IO error.

use std::ffi::OsString;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use polyft_core::congruence::{uniqueness_experiment, TOL_CONG, TOL_PATCH};
use polyft_core::covariogram::covariogram;
use polyft_core::diffraction::{AngleAxis, Mode, PatternSpec};
use polyft_core::fourier::{polytope_ft, random_frequencies, vertex_cone_efunction};
use polyft_core::hypersurface::{check_inner_point_condition, hyperplane_report};
use polyft_core::{Point, Polytope, Sign};

use crate::config::SphereConfig;
use crate::formats::{self, load_polytope, to_json, write_file};
use crate::parallel::{self, with_jobs, CorpusOptions};
use crate::report::{
    CompareDocument, CompareMeta, ConditionsDocument, EFunctionDocument, FtReport, FtSample,
    Theorem1Document,
};

#[derive(Debug, Parser)]
#[command(
    name = "polyft",
    version,
    about = "Exact Fourier transforms, covariograms and diffraction patterns of convex polytopes"
)]
pub struct Cli {
    /// Worker threads for parallel stages (default: all cores).
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    jobs: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate the Fourier transform F_P(s).
    Ft(FtArgs),
    /// Sample the covariogram g_P on a lattice, or evaluate it at points.
    Covariogram(CovariogramArgs),
    /// Compare the quadrature transform of g_P with |F_P|^2.
    #[command(name = "verify-theorem1")]
    VerifyTheorem1(VerifyArgs),
    /// Render an Ewald-sphere diffraction pattern.
    Diffract(DiffractArgs),
    /// Compare Fourier moduli on a sphere patch and decide strong congruence.
    Compare(CompareArgs),
    /// Check the hyperplane and inner-point conditions of a sphere patch.
    #[command(name = "check-conditions")]
    CheckConditions(ConditionsArgs),
    /// Run the uniqueness experiment over a random polytope corpus.
    Corpus(CorpusArgs),
    /// Apply x -> eps*x + shift to a polytope.
    Transform(TransformArgs),
    /// Print the vertex-cone E-function of a polytope.
    Efunction(EfunctionArgs),
}

#[derive(Debug, Args)]
struct SurfaceArgs {
    /// Sphere as `cx,cy,cz,r`.
    #[arg(long, value_parser = parse_sphere, default_value = "0,0,-1,1")]
    sphere: [f64; 4],
    /// Parameter box `t1lo,t1hi,t2lo,t2hi`; repeat for a union of boxes.
    #[arg(long = "patch", value_parser = parse_box, default_value = "0.5,1.5,-0.5,0.5")]
    patches: Vec<[[f64; 2]; 2]>,
    /// JSON sphere config (`center`, `radius`, `boxes`); overrides --sphere and --patch.
    #[arg(long)]
    surface: Option<PathBuf>,
}

impl SurfaceArgs {
    fn config(&self) -> Result<SphereConfig> {
        if let Some(path) = &self.surface {
            let bytes = formats::read_file(path)?;
            return serde_json::from_slice(&bytes)
                .with_context(|| format!("--surface {}", path.display()));
        }
        let [x, y, z, r] = self.sphere;
        Ok(SphereConfig {
            center: [x, y, z],
            radius: r,
            boxes: self.patches.clone(),
        })
    }
}

#[derive(Debug, Args)]
struct FtArgs {
    #[arg(long)]
    polytope: PathBuf,
    /// Frequency `s1,...,sn`; repeatable.
    #[arg(long = "s", value_parser = parse_vec, allow_hyphen_values = true)]
    s: Vec<Vec<f64>>,
    /// Number of random frequencies (used when no --s is given).
    #[arg(long, default_value_t = 10)]
    samples: usize,
    /// Radius of the ball random frequencies are drawn from.
    #[arg(long, default_value_t = 5.0, value_parser = parse_positive)]
    max_norm: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CovariogramArgs {
    #[arg(long)]
    polytope: PathBuf,
    /// Lattice spacing.
    #[arg(long, default_value_t = 0.05, value_parser = parse_positive)]
    h: f64,
    /// Evaluate at `x1,...,xn` instead of sampling the field; repeatable.
    #[arg(long = "x", value_parser = parse_vec, allow_hyphen_values = true)]
    x: Vec<Vec<f64>>,
    /// CSV output (`x1,...,xn,value`); stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Plain-text dump (header plus one value per line).
    #[arg(long)]
    text: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long)]
    polytope: PathBuf,
    /// Lattice spacing; every sample needs |s|*h < 1.
    #[arg(long, default_value_t = 0.05, value_parser = parse_positive)]
    h: f64,
    /// Number of random frequencies.
    #[arg(long, default_value_t = 10)]
    samples: usize,
    #[arg(long, default_value_t = 3.0, value_parser = parse_positive)]
    max_norm: f64,
    /// Relative tolerance.
    #[arg(long, default_value_t = 5e-3, value_parser = parse_positive)]
    tol: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    #[value(name = "2d")]
    TwoD,
    #[value(name = "3d")]
    ThreeD,
}

#[derive(Debug, Args)]
struct DiffractArgs {
    #[arg(long)]
    polytope: PathBuf,
    #[arg(long, value_enum)]
    mode: ModeArg,
    /// `N` (2D) or `NxM` (3D: N phi samples by M theta samples).
    #[arg(long, value_parser = parse_grid)]
    grid: (usize, usize),
    /// Azimuth range `a,b` (default 0,pi in 2D and 0,2pi in 3D). Accepts
    /// forms like `pi/2` and `2pi`.
    #[arg(long, value_parser = parse_range)]
    phi_range: Option<(f64, f64)>,
    /// Polar range `a,b` (3D).
    #[arg(long, value_parser = parse_range, default_value = "0,pi/2")]
    theta_range: (f64, f64),
    /// Wavelength scale factor applied to every scattering vector.
    #[arg(long, default_value_t = 1.0, value_parser = parse_positive)]
    scale: f64,
    /// Excluded `phi,theta` point (guard band 1e-6); repeatable.
    #[arg(long, value_parser = parse_range)]
    exclude: Vec<(f64, f64)>,
    /// CSV output.
    #[arg(long)]
    out: PathBuf,
    /// 16-bit PGM image.
    #[arg(long)]
    pgm: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CompareArgs {
    #[arg(long)]
    a: PathBuf,
    #[arg(long)]
    b: PathBuf,
    #[command(flatten)]
    surface: SurfaceArgs,
    /// Patch samples k.
    #[arg(long, default_value_t = 200, value_parser = clap::value_parser!(u64).range(1..))]
    samples: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Relative modulus tolerance.
    #[arg(long, default_value_t = TOL_PATCH, value_parser = parse_positive)]
    tol_patch: f64,
    /// Vertex matching tolerance.
    #[arg(long, default_value_t = TOL_CONG, value_parser = parse_positive)]
    tol_cong: f64,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ConditionsArgs {
    #[command(flatten)]
    surface: SurfaceArgs,
    /// Points sampled for the hyperplane check.
    #[arg(long, default_value_t = 30)]
    samples: usize,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CorpusArgs {
    /// Number of pairs; the first half are congruent by construction.
    #[arg(long, default_value_t = 1000)]
    count: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Patch samples per pair.
    #[arg(long, default_value_t = 200, value_parser = clap::value_parser!(u64).range(1..))]
    samples: u64,
    #[arg(long, default_value_t = TOL_PATCH, value_parser = parse_positive)]
    tol_patch: f64,
    #[arg(long, default_value_t = TOL_CONG, value_parser = parse_positive)]
    tol_cong: f64,
    #[command(flatten)]
    surface: SurfaceArgs,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct TransformArgs {
    #[arg(long)]
    polytope: PathBuf,
    /// +1 or -1.
    #[arg(long, default_value_t = 1, allow_hyphen_values = true, value_parser = parse_sign)]
    eps: i32,
    /// Translation `v1,...,vn` (default: zero).
    #[arg(long, value_parser = parse_vec, allow_hyphen_values = true)]
    shift: Option<Point>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct EfunctionArgs {
    #[arg(long)]
    polytope: PathBuf,
    /// Print |F_P|^2 instead of F_P.
    #[arg(long)]
    squared: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_vec(s: &str) -> Result<Vec<f64>, String> {
    s.split(',')
        .map(|t| parse_number(t.trim()))
        .collect::<Result<Vec<_>, _>>()
}

/// A float, or `[k]pi[/d]` (e.g. `pi`, `2pi`, `pi/2`, `-pi/4`).
fn parse_number(t: &str) -> Result<f64, String> {
    if let Ok(x) = t.parse::<f64>() {
        return if x.is_finite() {
            Ok(x)
        } else {
            Err(format!("`{t}` is not finite"))
        };
    }
    let (num, den) = match t.split_once('/') {
        Some((a, b)) => (
            a,
            b.parse::<f64>().map_err(|_| format!("bad number `{t}`"))?,
        ),
        None => (t, 1.0),
    };
    let k = num
        .strip_suffix("pi")
        .ok_or_else(|| format!("bad number `{t}`"))?;
    let k = match k {
        "" => 1.0,
        "-" => -1.0,
        k => k.parse::<f64>().map_err(|_| format!("bad number `{t}`"))?,
    };
    Ok(k * std::f64::consts::PI / den)
}

fn parse_positive(s: &str) -> Result<f64, String> {
    let x = parse_number(s)?;
    if x > 0.0 {
        Ok(x)
    } else {
        Err(format!("must be positive, got {s}"))
    }
}

fn parse_sign(s: &str) -> Result<i32, String> {
    match s {
        "1" | "+1" => Ok(1),
        "-1" => Ok(-1),
        _ => Err(format!("expected 1 or -1, got `{s}`")),
    }
}

fn parse_range(s: &str) -> Result<(f64, f64), String> {
    match parse_vec(s)?.as_slice() {
        &[a, b] => Ok((a, b)),
        _ => Err(format!("expected two comma-separated values, got `{s}`")),
    }
}

fn parse_sphere(s: &str) -> Result<[f64; 4], String> {
    parse_vec(s)?
        .try_into()
        .map_err(|_| format!("expected `cx,cy,cz,r`, got `{s}`"))
}

fn parse_box(s: &str) -> Result<[[f64; 2]; 2], String> {
    match parse_vec(s)?.as_slice() {
        &[a, b, c, d] => Ok([[a, b], [c, d]]),
        _ => Err(format!("expected `t1lo,t1hi,t2lo,t2hi`, got `{s}`")),
    }
}

fn parse_grid(s: &str) -> Result<(usize, usize), String> {
    let bad = || format!("expected `N` or `NxM` with positive counts, got `{s}`");
    let (n, m) = match s.split_once('x') {
        Some((n, m)) => (n.parse().map_err(|_| bad())?, m.parse().map_err(|_| bad())?),
        None => (s.parse().map_err(|_| bad())?, 1),
    };
    if n == 0 || m == 0 {
        return Err(bad());
    }
    Ok((n, m))
}

/// Writes to `path`, or to stdout when `None`.
fn emit(path: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match path {
        Some(p) => Ok(write_file(p, bytes)?),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(bytes).context("writing to stdout")?;
            Ok(out.flush()?)
        }
    }
}

fn load(path: &Path) -> Result<Polytope> {
    Ok(load_polytope(path)?)
}

/// Polytope label in reports: the file name, so output does not depend on
/// the working directory.
fn id(path: &Path) -> String {
    path.file_name().map_or_else(
        || path.display().to_string(),
        |n| n.to_string_lossy().into_owned(),
    )
}

fn check_dim(p: &Polytope, v: &[f64], flag: &str) -> Result<()> {
    if v.len() != p.dim() {
        bail!(
            "{flag} has {} components but the polytope is {}-dimensional",
            v.len(),
            p.dim()
        );
    }
    Ok(())
}

/// Whether the command's verification passed.
type Passed = bool;

fn ft(a: &FtArgs) -> Result<Passed> {
    let p = load(&a.polytope)?;
    let freqs = if a.s.is_empty() {
        random_frequencies(p.dim(), a.samples, a.max_norm, a.seed)
    } else {
        for s in &a.s {
            check_dim(&p, s, "--s")?;
        }
        a.s.clone()
    };
    let samples = freqs
        .into_iter()
        .map(|s| {
            let z = polytope_ft(&p, &s);
            FtSample {
                s,
                value: z.into(),
                modulus: z.norm(),
            }
        })
        .collect();
    let doc = FtReport {
        polytope: id(&a.polytope),
        seed: a.seed,
        samples,
    };
    emit(a.out.as_deref(), to_json(&doc).as_bytes())?;
    Ok(true)
}

fn covariogram_cmd(a: &CovariogramArgs) -> Result<Passed> {
    let p = load(&a.polytope)?;
    if !a.x.is_empty() {
        let mut rows = Vec::new();
        for x in &a.x {
            check_dim(&p, x, "--x")?;
            rows.push(serde_json::json!({ "x": x, "value": covariogram(&p, x)? }));
        }
        emit(a.out.as_deref(), to_json(&rows).as_bytes())?;
        return Ok(true);
    }
    let field = parallel::sample_field(&p, a.h)?;
    emit(a.out.as_deref(), formats::field_csv(&field).as_bytes())?;
    if let Some(t) = &a.text {
        write_file(t, formats::field_text(&field).as_bytes())?;
    }
    Ok(true)
}

fn verify(a: &VerifyArgs) -> Result<Passed> {
    let p = load(&a.polytope)?;
    let samples = random_frequencies(p.dim(), a.samples, a.max_norm, a.seed);
    let r = parallel::verify_theorem1(&p, &samples, a.h, a.tol)
        .context("--h and --max-norm must satisfy max-norm * h < 1")?;
    let doc = Theorem1Document::new(&id(&a.polytope), a.seed, &r);
    emit(a.report.as_deref(), to_json(&doc).as_bytes())?;
    if !r.passed {
        eprintln!(
            "verification failed: max relative error {:e} exceeds {:e}",
            r.max_rel_error, r.tol
        );
    }
    Ok(r.passed)
}

fn diffract(a: &DiffractArgs) -> Result<Passed> {
    use std::f64::consts::PI;
    let p = load(&a.polytope)?;
    let (n, m) = a.grid;
    let mut spec = match a.mode {
        ModeArg::TwoD => {
            if m != 1 {
                bail!("--grid for --mode 2d takes a single count, got {n}x{m}");
            }
            let (lo, hi) = a.phi_range.unwrap_or((0.0, PI));
            PatternSpec::two_d(AngleAxis::new(lo, hi, n))
        }
        ModeArg::ThreeD => {
            let (lo, hi) = a.phi_range.unwrap_or((0.0, 2.0 * PI));
            let (tlo, thi) = a.theta_range;
            PatternSpec::three_d(AngleAxis::new(lo, hi, n), AngleAxis::new(tlo, thi, m))
        }
    };
    spec.scale = a.scale;
    spec.excluded = a.exclude.clone();
    if p.dim() != spec.mode.dim() {
        bail!(
            "--mode {} needs a {}-dimensional polytope, {} is {}-dimensional",
            if spec.mode == Mode::TwoD { "2d" } else { "3d" },
            spec.mode.dim(),
            a.polytope.display(),
            p.dim()
        );
    }
    let pat = parallel::render_pattern(&p, &spec, &id(&a.polytope))
        .context("--grid/--phi-range/--theta-range/--exclude")?;
    write_file(&a.out, formats::pattern_csv(&pat).as_bytes())?;
    if let Some(pgm) = &a.pgm {
        write_file(pgm, &formats::pattern_pgm(&pat))?;
    }
    Ok(true)
}

fn compare(a: &CompareArgs) -> Result<Passed> {
    let (p, q) = (load(&a.a)?, load(&a.b)?);
    let cfg = a.surface.config()?;
    let (surf, patch) = cfg.build().context("--sphere/--patch")?;
    let k = a.samples as usize;
    let r = uniqueness_experiment(&p, &q, &surf, &patch, k, a.seed, a.tol_patch, a.tol_cong)?;
    let doc = CompareDocument::new(
        CompareMeta {
            a: &id(&a.a),
            b: &id(&a.b),
            seed: a.seed,
            samples: k,
            tol_cong: a.tol_cong,
            surface: &cfg,
        },
        &r,
    );
    emit(a.report.as_deref(), to_json(&doc).as_bytes())?;
    if !r.conditions_hold() {
        eprintln!("the patch fails the hyperplane or inner-point condition");
    }
    if !r.consistent {
        eprintln!("inconsistent: moduli agree on the patch but the polytopes are not congruent");
    }
    Ok(r.consistent && r.conditions_hold())
}

fn conditions(a: &ConditionsArgs) -> Result<Passed> {
    let cfg = a.surface.config()?;
    let (surf, patch) = cfg.build().context("--sphere/--patch")?;
    let h = hyperplane_report(&surf, &patch, a.samples.max(surf.dim() + 1))?;
    let inner = check_inner_point_condition(&surf, &patch);
    let doc = ConditionsDocument {
        surface: cfg,
        hyperplane: (&h).into(),
        inner_point: inner,
    };
    emit(a.report.as_deref(), to_json(&doc).as_bytes())?;
    Ok(h.passed && inner)
}

fn corpus(a: &CorpusArgs) -> Result<Passed> {
    let opts = CorpusOptions {
        count: a.count,
        seed: a.seed,
        samples: a.samples as usize,
        tol_patch: a.tol_patch,
        tol_cong: a.tol_cong,
        surface: a.surface.config()?,
    };
    let doc = parallel::run_corpus(&opts)?;
    emit(a.report.as_deref(), to_json(&doc).as_bytes())?;
    if !doc.passed() {
        eprintln!(
            "corpus failed: {} inconsistent, {} misclassified, {} support mismatches",
            doc.inconsistent_pairs.len(),
            doc.misclassified_pairs.len(),
            doc.support_mismatches.len()
        );
    }
    Ok(doc.passed())
}

fn transform(a: &TransformArgs) -> Result<Passed> {
    let p = load(&a.polytope)?;
    let shift = a.shift.clone().unwrap_or_else(|| vec![0.0; p.dim()]);
    check_dim(&p, &shift, "--shift")?;
    let eps = Sign::from_i32(a.eps).expect("validated by the parser");
    emit(
        a.out.as_deref(),
        formats::polytope_json(&p.transform(eps, &shift)).as_bytes(),
    )?;
    Ok(true)
}

fn efunction(a: &EfunctionArgs) -> Result<Passed> {
    let p = load(&a.polytope)?;
    let mut f = vertex_cone_efunction(&p)?;
    if a.squared {
        f = f.squared_modulus();
    }
    emit(
        a.out.as_deref(),
        to_json(&EFunctionDocument::from(&f)).as_bytes(),
    )?;
    Ok(true)
}

fn dispatch(cli: &Cli) -> Result<Passed> {
    let jobs = cli.jobs.map(|j| j as usize);
    with_jobs(jobs, || match &cli.command {
        Command::Ft(a) => ft(a),
        Command::Covariogram(a) => covariogram_cmd(a),
        Command::VerifyTheorem1(a) => verify(a),
        Command::Diffract(a) => diffract(a),
        Command::Compare(a) => compare(a),
        Command::CheckConditions(a) => conditions(a),
        Command::Corpus(a) => corpus(a),
        Command::Transform(a) => transform(a),
        Command::Efunction(a) => efunction(a),
    })
}

/// Parses `argv` (including the program name), runs the subcommand and
/// returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match dispatch(&cli) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("error: {e:#}");
            2
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn numbers() {
        assert_eq!(parse_number("1.5").unwrap(), 1.5);
        assert_eq!(parse_number("pi").unwrap(), PI);
        assert_eq!(parse_number("2pi").unwrap(), 2.0 * PI);
        assert_eq!(parse_number("pi/2").unwrap(), PI / 2.0);
        assert_eq!(parse_number("-pi/4").unwrap(), -PI / 4.0);
        assert!(parse_number("tau").is_err());
        assert!(parse_number("inf").is_err());
        assert_eq!(parse_range("0,pi").unwrap(), (0.0, PI));
        assert_eq!(parse_grid("64x32").unwrap(), (64, 32));
        assert_eq!(parse_grid("256").unwrap(), (256, 1));
        assert!(parse_grid("0x3").is_err());
        assert!(parse_positive("0").is_err());
        assert_eq!(
            parse_box("0.5,1.5,-0.5,0.5").unwrap(),
            [[0.5, 1.5], [-0.5, 0.5]]
        );
        assert!(parse_sphere("0,0,1").is_err());
        assert_eq!(parse_sign("-1").unwrap(), -1);
        assert!(parse_sign("2").is_err());
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(run(["polyft", "ft", "--bogus"]), 2);
        assert_eq!(run(["polyft", "nope"]), 2);
        assert_eq!(
            run([
                "polyft",
                "verify-theorem1",
                "--polytope",
                "x.json",
                "--tol",
                "0"
            ]),
            2
        );
        assert_eq!(
            run(["polyft", "ft", "--polytope", "/nonexistent/p.json"]),
            2
        );
        assert_eq!(run(["polyft", "--help"]), 0);
    }
}
