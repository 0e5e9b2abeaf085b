//! CSV ingestion for matrices, vectors and datasets.
//!
//! The first line is a header. Cells are separated by `,` and use `.` as the
//! decimal point. In complex mode a cell is `a`, `bi`, `a+bi` or `a-bi`
//! without inner whitespace (`i` alone means `1i`).

use std::path::Path;

use gram_core::{DenseMatrix, Scalar, Vector};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellMode {
    Real,
    Complex,
}

#[derive(Debug, Error)]
pub enum CsvError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("line {line}, column {column}: cannot parse {cell:?} as a finite {kind} number")]
    Parse {
        line: u64,
        column: usize,
        cell: String,
        kind: &'static str,
    },
    #[error("line {line}: expected {expected} cells, found {found}")]
    RaggedRows {
        line: u64,
        expected: usize,
        found: usize,
    },
    #[error("no data rows")]
    EmptyFile,
    #[error("malformed csv: {0}")]
    Malformed(String),
    #[error("column {0:?} not found")]
    MissingColumn(String),
    #[error("{0}")]
    Shape(String),
}

/// Rectangular table of finite numbers under a header row.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Scalar>>,
}

fn parse_real(s: &str) -> Option<f64> {
    s.parse::<f64>().ok().filter(|v| v.is_finite())
}

/// Parses one complex cell.
pub fn parse_complex(cell: &str) -> Option<Scalar> {
    if cell.is_empty() || cell.chars().any(char::is_whitespace) {
        return None;
    }
    let Some(body) = cell.strip_suffix('i') else {
        return parse_real(cell).map(|re| Scalar::new(re, 0.0));
    };
    // Split before the last sign that is not a leading sign or an exponent sign.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (parse_real(&body[..k])?, &body[k..]),
        None => (0.0, body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        s => parse_real(s)?,
    };
    Some(Scalar::new(re, im))
}

impl CsvTable {
    pub fn parse_str(text: &str, mode: CellMode) -> Result<Self, CsvError> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .flexible(true)
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        let header: Vec<String> = reader
            .headers()
            .map_err(|e| CsvError::Malformed(e.to_string()))?
            .iter()
            .map(str::to_owned)
            .collect();
        if header.is_empty() || header.iter().all(String::is_empty) {
            return Err(CsvError::EmptyFile);
        }
        let mut rows = Vec::new();
        for record in reader.records() {
            let record = record.map_err(|e| CsvError::Malformed(e.to_string()))?;
            let line = record.position().map_or(0, |p| p.line());
            if record.len() != header.len() {
                return Err(CsvError::RaggedRows {
                    line,
                    expected: header.len(),
                    found: record.len(),
                });
            }
            let row = record
                .iter()
                .enumerate()
                .map(|(k, cell)| {
                    let parsed = match mode {
                        CellMode::Real => parse_real(cell).map(|v| Scalar::new(v, 0.0)),
                        CellMode::Complex => parse_complex(cell),
                    };
                    parsed.ok_or_else(|| CsvError::Parse {
                        line,
                        column: k + 1,
                        cell: cell.to_owned(),
                        kind: match mode {
                            CellMode::Real => "real",
                            CellMode::Complex => "complex",
                        },
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            rows.push(row);
        }
        if rows.is_empty() {
            return Err(CsvError::EmptyFile);
        }
        Ok(Self { header, rows })
    }

    pub fn read(path: &Path, mode: CellMode) -> Result<Self, CsvError> {
        let text = std::fs::read_to_string(path).map_err(|source| CsvError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse_str(&text, mode)
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn col_count(&self) -> usize {
        self.header.len()
    }

    pub fn to_matrix(&self) -> Result<DenseMatrix, CsvError> {
        DenseMatrix::from_fn(self.row_count(), self.col_count(), |i, j| self.rows[i][j])
            .map_err(|e| CsvError::Shape(e.to_string()))
    }

    /// The single column of an `m x 1` table.
    pub fn to_vector(&self) -> Result<Vector, CsvError> {
        if self.col_count() != 1 {
            return Err(CsvError::Shape(format!(
                "expected a single-column vector, found {} columns",
                self.col_count()
            )));
        }
        Vector::new(self.rows.iter().map(|r| r[0]).collect())
            .map_err(|e| CsvError::Shape(e.to_string()))
    }

    pub fn column_index(&self, label: &str) -> Result<usize, CsvError> {
        self.header
            .iter()
            .position(|h| h == label)
            .ok_or_else(|| CsvError::MissingColumn(label.to_owned()))
    }
}
