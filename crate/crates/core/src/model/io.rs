//! Matrix text formats: CSV (one row per line, 17 significant digits) and
//! Matrix Market coordinate export.

use std::fmt::Write as _;

use super::ModelError;
use crate::linalg::DenseMatrix;

/// One row per line, comma separated, each entry with 17 significant digits.
pub fn write_csv(m: &DenseMatrix) -> String {
    let mut out = String::new();
    for i in 0..m.rows() {
        let row: Vec<String> = m.row(i).iter().map(|x| format!("{x:.16e}")).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// Parse a dense CSV matrix. Blank lines are skipped; all rows must have the
/// same length.
pub fn parse_csv(text: &str) -> Result<DenseMatrix, ModelError> {
    let mut rows = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim_end_matches('\r').trim();
        if line.is_empty() {
            continue;
        }
        let row = line
            .split(',')
            .map(|f| {
                f.trim().parse::<f64>().map_err(|_| {
                    ModelError::BadFormat(format!("line {}: bad number `{}`", lineno + 1, f.trim()))
                })
            })
            .collect::<Result<Vec<f64>, _>>()?;
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(ModelError::BadFormat("empty matrix file".into()));
    }
    DenseMatrix::from_rows(&rows).map_err(|e| ModelError::BadFormat(e.to_string()))
}

/// Matrix Market `coordinate real general` listing of the nonzero entries.
pub fn write_matrix_market(m: &DenseMatrix) -> String {
    let nnz = m.as_slice().iter().filter(|&&x| x != 0.0).count();
    let mut out = String::from("%%MatrixMarket matrix coordinate real general\n");
    let _ = writeln!(out, "{} {} {}", m.rows(), m.cols(), nnz);
    for i in 0..m.rows() {
        for (j, &x) in m.row(i).iter().enumerate() {
            if x != 0.0 {
                let _ = writeln!(out, "{} {} {:.16e}", i + 1, j + 1, x);
            }
        }
    }
    out
}
