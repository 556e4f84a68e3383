//! Reading and writing matrices as JSON or CSV.
//!
//! JSON: `{"n": 2, "entries": [[[re, im], [re, im]], [[re, im], [re, im]]]}`,
//! row-major. CSV: one matrix row per line, cells `re`, `re+imi`, `re-imi`
//! or `imi`.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sno_core::{Complex64, DenseMatrix, SnoError};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Error)]
pub enum MatrixFileError {
    #[error("cannot read file")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("invalid JSON matrix")]
    Json(#[from] serde_json::Error),
    #[error("invalid CSV")]
    Csv(#[from] csv::Error),
    #[error("row {row}, column {col}: cannot parse `{cell}` as a complex number")]
    Cell { row: usize, col: usize, cell: String },
    #[error("row {row}, column {col}: non-finite value `{cell}`")]
    NonFinite { row: usize, col: usize, cell: String },
    #[error("declared n = {declared} but found {found} rows")]
    RowCount { declared: usize, found: usize },
    #[error("row {row} has {found} entries, expected {expected}")]
    Ragged {
        row: usize,
        found: usize,
        expected: usize,
    },
    #[error(transparent)]
    Matrix(#[from] SnoError),
}

#[derive(Debug, Clone)]
pub struct MatrixFile {
    pub path: PathBuf,
    pub format: Format,
    pub parsed: DenseMatrix,
}

#[derive(Serialize, Deserialize)]
struct JsonMatrix {
    n: usize,
    entries: Vec<Vec<[f64; 2]>>,
}

/// Picks the format from the extension, falling back to sniffing for `{`.
pub fn detect_format(path: &Path, contents: &str) -> Format {
    match path.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase).as_deref() {
        Some("json") => Format::Json,
        Some("csv") => Format::Csv,
        _ if contents.trim_start().starts_with('{') => Format::Json,
        _ => Format::Csv,
    }
}

pub fn read_matrix(path: &Path) -> Result<MatrixFile, MatrixFileError> {
    let contents = fs::read_to_string(path).map_err(|source| MatrixFileError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let format = detect_format(path, &contents);
    let parsed = match format {
        Format::Json => parse_json(&contents)?,
        Format::Csv => parse_csv(&contents)?,
    };
    Ok(MatrixFile {
        path: path.to_path_buf(),
        format,
        parsed,
    })
}

pub fn parse_json(text: &str) -> Result<DenseMatrix, MatrixFileError> {
    let m: JsonMatrix = serde_json::from_str(text)?;
    if m.entries.len() != m.n {
        return Err(MatrixFileError::RowCount {
            declared: m.n,
            found: m.entries.len(),
        });
    }
    let mut rows = Vec::with_capacity(m.n);
    for (i, row) in m.entries.iter().enumerate() {
        if row.len() != m.n {
            return Err(MatrixFileError::Ragged {
                row: i + 1,
                found: row.len(),
                expected: m.n,
            });
        }
        rows.push(row.iter().map(|[re, im]| Complex64::new(*re, *im)).collect::<Vec<_>>());
    }
    Ok(DenseMatrix::from_rows(&rows)?)
}

pub fn to_json(m: &DenseMatrix) -> String {
    let doc = JsonMatrix {
        n: m.dim(),
        entries: m
            .rows()
            .iter()
            .map(|r| r.iter().map(|z| [z.re, z.im]).collect())
            .collect(),
    };
    serde_json::to_string(&doc).expect("finite matrix entries serialize")
}

pub fn parse_csv(text: &str) -> Result<DenseMatrix, MatrixFileError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut rows: Vec<Vec<Complex64>> = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record?;
        let row = record
            .iter()
            .enumerate()
            .map(|(j, cell)| parse_cell(cell).map_err(|e| e.at(i + 1, j + 1, cell)))
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(row);
    }
    let n = rows.len();
    for (i, row) in rows.iter().enumerate() {
        if row.len() != n {
            return Err(MatrixFileError::Ragged {
                row: i + 1,
                found: row.len(),
                expected: n,
            });
        }
    }
    Ok(DenseMatrix::from_rows(&rows)?)
}

/// Renders each entry as `re+imi` with round-trip precision.
pub fn to_csv(m: &DenseMatrix) -> String {
    let mut out = String::new();
    for row in m.rows() {
        let cells: Vec<String> = row.iter().map(|z| format_cell(*z)).collect();
        writeln!(out, "{}", cells.join(",")).unwrap();
    }
    out
}

fn format_cell(z: Complex64) -> String {
    if z.im == 0.0 && z.im.is_sign_positive() {
        format!("{:?}", z.re)
    } else if z.im.is_sign_negative() {
        format!("{:?}-{:?}i", z.re, -z.im)
    } else {
        format!("{:?}+{:?}i", z.re, z.im)
    }
}

#[derive(Debug, PartialEq)]
pub enum CellError {
    Syntax,
    NonFinite,
}

impl CellError {
    fn at(self, row: usize, col: usize, cell: &str) -> MatrixFileError {
        let cell = cell.to_string();
        match self {
            CellError::Syntax => MatrixFileError::Cell { row, col, cell },
            CellError::NonFinite => MatrixFileError::NonFinite { row, col, cell },
        }
    }
}

fn parse_real(s: &str) -> Result<f64, CellError> {
    // `f64::from_str` also accepts "inf" and "nan"; the letters are screened
    // so those report as non-finite rather than as syntax errors.
    let v: f64 = s.parse().map_err(|_| CellError::Syntax)?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(CellError::NonFinite)
    }
}

fn parse_imag(s: &str) -> Result<f64, CellError> {
    match s {
        "" | "+" => Ok(1.0),
        "-" => Ok(-1.0),
        _ => parse_real(s),
    }
}

/// Parses `re`, `re+imi`, `re-imi`, `imi`, `i`, `-i` (spaces ignored).
pub fn parse_cell(cell: &str) -> Result<Complex64, CellError> {
    let s: String = cell.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(CellError::Syntax);
    }
    let Some(body) = s.strip_suffix(['i', 'j']) else {
        return Ok(Complex64::new(parse_real(&s)?, 0.0));
    };
    // split at the last sign that is not a leading sign or an exponent sign
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    match split {
        Some(k) => Ok(Complex64::new(parse_real(&body[..k])?, parse_imag(&body[k..])?)),
        None => Ok(Complex64::new(0.0, parse_imag(body)?)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn cells() {
        assert_eq!(parse_cell("1.5-2i").unwrap(), c(1.5, -2.0));
        assert_eq!(parse_cell(" 3 ").unwrap(), c(3.0, 0.0));
        assert_eq!(parse_cell("-1e-3+2.5e2i").unwrap(), c(-1e-3, 250.0));
        assert_eq!(parse_cell("2i").unwrap(), c(0.0, 2.0));
        assert_eq!(parse_cell("-i").unwrap(), c(0.0, -1.0));
        assert_eq!(parse_cell("4+i").unwrap(), c(4.0, 1.0));
        assert_eq!(parse_cell("1E+2-1E-2i").unwrap(), c(100.0, -0.01));
        assert_eq!(parse_cell("abc"), Err(CellError::Syntax));
        assert_eq!(parse_cell("1+2"), Err(CellError::Syntax));
        assert_eq!(parse_cell(""), Err(CellError::Syntax));
        assert_eq!(parse_cell("nan"), Err(CellError::NonFinite));
        assert_eq!(parse_cell("1+infi"), Err(CellError::NonFinite));
    }

    #[test]
    fn csv_matrix() {
        let m = parse_csv("0,1\n0,0\n").unwrap();
        assert_eq!(m.get(0, 1), c(1.0, 0.0));
        let m = parse_csv("# comment\n1+2i, 3\n-4i, 0.5\n").unwrap();
        assert_eq!(m.get(0, 0), c(1.0, 2.0));
        assert_eq!(m.get(1, 0), c(0.0, -4.0));
        assert!(matches!(parse_csv("1,2\n3\n"), Err(MatrixFileError::Ragged { row: 2, .. })));
        assert!(matches!(parse_csv("1,2\n3,4\n5,6\n"), Err(MatrixFileError::Ragged { row: 1, .. })));
        assert!(matches!(parse_csv("1,x\n3,4\n"), Err(MatrixFileError::Cell { row: 1, col: 2, .. })));
        assert!(matches!(parse_csv("1,NaN\n3,4\n"), Err(MatrixFileError::NonFinite { .. })));
        assert!(matches!(parse_csv(""), Err(MatrixFileError::Matrix(SnoError::EmptyMatrix))));
    }

    #[test]
    fn json_matrix() {
        let m = parse_json(r#"{"n": 2, "entries": [[[1, 0], [0, 1]], [[0, 0], [2, -1]]]}"#).unwrap();
        assert_eq!(m.get(0, 1), c(0.0, 1.0));
        assert_eq!(m.get(1, 1), c(2.0, -1.0));
        assert!(matches!(
            parse_json(r#"{"n": 2, "entries": [[[1, 0], [0, 1]]]}"#),
            Err(MatrixFileError::RowCount { declared: 2, found: 1 })
        ));
        assert!(matches!(
            parse_json(r#"{"n": 2, "entries": [[[1, 0], [0, 1]], [[0, 0]]]}"#),
            Err(MatrixFileError::Ragged { row: 2, .. })
        ));
        assert!(matches!(parse_json(r#"{"n": 1, "entries": [[[1]]]}"#), Err(MatrixFileError::Json(_))));
    }

    #[test]
    fn format_detection() {
        assert_eq!(detect_format(Path::new("a.JSON"), "1,2"), Format::Json);
        assert_eq!(detect_format(Path::new("a.csv"), "{"), Format::Csv);
        assert_eq!(detect_format(Path::new("a.txt"), "  {\"n\":1}"), Format::Json);
        assert_eq!(detect_format(Path::new("a"), "1"), Format::Csv);
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let m = DenseMatrix::from_rows(&[
            vec![c(0.1, -0.0), c(-1e-300, 2.5)],
            vec![c(1.0 / 3.0, -7.25), c(0.0, 0.0)],
        ])
        .unwrap();
        let back = parse_csv(&to_csv(&m)).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(back.get(i, j).re.to_bits(), m.get(i, j).re.to_bits());
                assert_eq!(back.get(i, j).im.to_bits(), m.get(i, j).im.to_bits());
            }
        }
    }
}
