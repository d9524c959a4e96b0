//! On-disk formats: polytope JSON, covariogram fields (CSV and a plain text
//! dump), diffraction patterns (CSV and 16-bit PGM).

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use polyft_core::covariogram::CovariogramField;
use polyft_core::diffraction::{DiffractionPattern, Mode};
use polyft_core::{GeometryError, Polytope};
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        source: serde_json::Error,
    },
    #[error("{path}: {source}")]
    Csv { path: PathBuf, source: csv::Error },
    #[error("{path}: {source}")]
    Geometry {
        path: PathBuf,
        source: GeometryError,
    },
    #[error("{path}: {source}")]
    Number {
        path: PathBuf,
        source: std::num::ParseFloatError,
    },
    #[error("{path}: declared dimension {declared} but a vertex has {found} coordinates")]
    Dimension {
        path: PathBuf,
        declared: usize,
        found: usize,
    },
}

/// Polytopes are stored by their vertices; facets are recomputed on load.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolytopeFile {
    pub dim: usize,
    pub vertices: Vec<Vec<f64>>,
}

impl From<&Polytope> for PolytopeFile {
    fn from(p: &Polytope) -> Self {
        Self {
            dim: p.dim(),
            vertices: p.vertices().to_vec(),
        }
    }
}

pub fn read_file(path: &Path) -> Result<Vec<u8>, FormatError> {
    fs::read(path).map_err(|source| FormatError::Io {
        path: path.into(),
        source,
    })
}

pub fn write_file(path: &Path, bytes: &[u8]) -> Result<(), FormatError> {
    fs::write(path, bytes).map_err(|source| FormatError::Io {
        path: path.into(),
        source,
    })
}

pub fn load_polytope(path: &Path) -> Result<Polytope, FormatError> {
    let file: PolytopeFile =
        serde_json::from_slice(&read_file(path)?).map_err(|source| FormatError::Json {
            path: path.into(),
            source,
        })?;
    if let Some(v) = file.vertices.iter().find(|v| v.len() != file.dim) {
        return Err(FormatError::Dimension {
            path: path.into(),
            declared: file.dim,
            found: v.len(),
        });
    }
    Polytope::convex_hull(&file.vertices).map_err(|source| FormatError::Geometry {
        path: path.into(),
        source,
    })
}

pub fn polytope_json(p: &Polytope) -> String {
    to_json(&PolytopeFile::from(p))
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

/// 17 significant digits: enough to round-trip any `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn csv_string(header: &[String], rows: impl Iterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(&r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ASCII output")
}

/// Rows `x1,...,xn,value`, one per lattice point.
pub fn field_csv(f: &CovariogramField) -> String {
    let grid = f.grid();
    let mut header: Vec<String> = (1..=grid.dim()).map(|i| format!("x{i}")).collect();
    header.push("value".into());
    let rows = f.values().iter().enumerate().map(|(i, &v)| {
        let mut r: Vec<String> = grid.point(i).into_iter().map(fmt_f64).collect();
        r.push(fmt_f64(v));
        r
    });
    csv_string(&header, rows)
}

/// A short `key value` header followed by one value per line.
pub fn field_text(f: &CovariogramField) -> String {
    let grid = f.grid();
    let join = |v: Vec<String>| v.join(" ");
    let mut s = String::from("covariogram-field\n");
    writeln!(s, "dim {}", grid.dim()).unwrap();
    writeln!(s, "spacing {}", fmt_f64(grid.spacing)).unwrap();
    writeln!(
        s,
        "origin {}",
        join(grid.origin().into_iter().map(fmt_f64).collect())
    )
    .unwrap();
    writeln!(
        s,
        "counts {}",
        join(grid.counts().iter().map(|c| c.to_string()).collect())
    )
    .unwrap();
    writeln!(s, "values {}", f.values().len()).unwrap();
    for &v in f.values() {
        writeln!(s, "{}", fmt_f64(v)).unwrap();
    }
    s
}

/// Rows `phi[,theta],q1,q2[,q3],intensity`.
pub fn pattern_csv(p: &DiffractionPattern) -> String {
    let header: &[&str] = match p.mode() {
        Mode::TwoD => &["phi", "q1", "q2", "intensity"],
        Mode::ThreeD => &["phi", "theta", "q1", "q2", "q3", "intensity"],
    };
    let header: Vec<String> = header.iter().map(|s| s.to_string()).collect();
    let rows = (0..p.intensities.len()).map(|i| {
        p.angles[i]
            .iter()
            .chain(&p.vectors[i])
            .chain(std::iter::once(&p.intensities[i]))
            .map(|&x| fmt_f64(x))
            .collect()
    });
    csv_string(&header, rows)
}

/// Numeric rows of a CSV file with a header line.
pub fn parse_csv(text: &str, path: &Path) -> Result<Vec<Vec<f64>>, FormatError> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let mut out = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(|source| FormatError::Csv {
            path: path.into(),
            source,
        })?;
        let row: Result<Vec<f64>, _> = rec.iter().map(str::parse).collect();
        out.push(row.map_err(|source| FormatError::Number {
            path: path.into(),
            source,
        })?);
    }
    Ok(out)
}

/// Binary 16-bit PGM (`P5`, big-endian samples). Intensities are scaled by
/// `65535 / max`, recorded in a `# scale` comment (`0` for an all-zero
/// pattern). Rows are constant `θ`; a 2D pattern is a single row.
pub fn pattern_pgm(p: &DiffractionPattern) -> Vec<u8> {
    let (w, h) = p.shape();
    let max = p.max_intensity();
    let scale = if max > 0.0 { 65535.0 / max } else { 0.0 };
    let mut out = format!("P5\n# scale {scale}\n{w} {h}\n65535\n").into_bytes();
    out.reserve(2 * w * h);
    for &i in &p.intensities {
        let v = (i * scale).round().clamp(0.0, 65535.0) as u16;
        out.extend_from_slice(&v.to_be_bytes());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use polyft_core::covariogram::sample_field;
    use polyft_core::diffraction::{render_pattern, AngleAxis, PatternSpec};
    use polyft_core::geometry::shapes;
    use std::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn polytope_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("ico.json");
        let ico = shapes::icosahedron();
        write_file(&path, polytope_json(&ico).as_bytes()).unwrap();
        let back = load_polytope(&path).unwrap();
        assert_eq!(back.vertices(), ico.vertices());
        assert_eq!(back.facets().len(), 20);

        write_file(&path, br#"{"dim": 3, "vertices": [[0,0,0],[1,0,0],[0,1]]}"#).unwrap();
        assert!(matches!(
            load_polytope(&path),
            Err(FormatError::Dimension { .. })
        ));
        write_file(&path, br#"{"dim": 2, "vertices": [[0,0],[1,0],[2,0]]}"#).unwrap();
        assert!(matches!(
            load_polytope(&path),
            Err(FormatError::Geometry { .. })
        ));
        let missing = dir.path().join("nope.json");
        let e = load_polytope(&missing).unwrap_err().to_string();
        assert!(e.contains("nope.json"), "{e}");
    }

    #[test]
    fn field_outputs() {
        let f = sample_field(&shapes::unit_square(), 0.5).unwrap();
        let csv = field_csv(&f);
        let rows = parse_csv(&csv, Path::new("mem")).unwrap();
        assert!(csv.starts_with("x1,x2,value\n"));
        assert_eq!(rows.len(), 25);
        let center = rows.iter().find(|r| r[0] == 0.0 && r[1] == 0.0).unwrap();
        assert_eq!(center[2], 1.0);
        let text = field_text(&f);
        assert!(text.starts_with("covariogram-field\ndim 2\n"));
        assert_eq!(text.lines().count(), 6 + 25);
    }

    #[test]
    fn pattern_csv_round_trip() {
        let spec = PatternSpec::three_d(
            AngleAxis::new(0.0, 2.0 * PI, 6),
            AngleAxis::new(0.0, FRAC_PI_2, 3),
        );
        let pat = render_pattern(&shapes::regular_tetrahedron(), &spec, "tet").unwrap();
        let csv = pattern_csv(&pat);
        assert!(csv.starts_with("phi,theta,q1,q2,q3,intensity\n"));
        let rows = parse_csv(&csv, Path::new("mem")).unwrap();
        assert_eq!(rows.len(), 18);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r[5].to_bits(), pat.intensities[i].to_bits());
            assert_eq!(&r[2..5], pat.vectors[i].as_slice());
        }
    }

    #[test]
    fn pgm_layout() {
        let spec = PatternSpec::two_d(AngleAxis::new(0.0, PI, 4));
        let mut pat = render_pattern(&shapes::unit_square(), &spec, "sq").unwrap();
        let bytes = pattern_pgm(&pat);
        let header_len = bytes.len() - 8;
        let header = std::str::from_utf8(&bytes[..header_len]).unwrap();
        assert!(header.starts_with("P5\n# scale "));
        assert!(header.ends_with("\n4 1\n65535\n"));
        let px: Vec<u16> = bytes[header_len..]
            .chunks(2)
            .map(|c| u16::from_be_bytes([c[0], c[1]]))
            .collect();
        let argmax = (0..4)
            .max_by(|&a, &b| pat.intensities[a].total_cmp(&pat.intensities[b]))
            .unwrap();
        assert_eq!(px[argmax], 65535);

        pat.intensities.iter_mut().for_each(|i| *i = 0.0);
        let zero = pattern_pgm(&pat);
        assert_eq!(&zero[..], b"P5\n# scale 0\n4 1\n65535\n\0\0\0\0\0\0\0\0");
    }
}
