use std::io::{BufRead, Write};

use nalgebra::DMatrix;

use super::matrix::SymMatrix;
use crate::error::{input, Result};

/// Reads `n` on the first line followed by n whitespace-separated rows.
///
/// Asymmetry above `symmetry_tol` is rejected; smaller asymmetry is averaged away.
pub fn read_matrix<R: BufRead>(reader: R, symmetry_tol: f64) -> Result<SymMatrix> {
    let mut lines = reader
        .lines()
        .map(|l| l.map(|s| s.trim().to_string()))
        .filter(|l| !matches!(l, Ok(s) if s.is_empty() || s.starts_with('#')));
    let header = match lines.next() {
        Some(l) => l?,
        None => return input("empty matrix file"),
    };
    let n: usize = header
        .parse()
        .map_err(|_| crate::Error::Input(format!("bad dimension line '{header}'")))?;
    if n == 0 {
        return input("dimension must be positive");
    }
    let mut data = Vec::with_capacity(n * n);
    for row in 0..n {
        let line = match lines.next() {
            Some(l) => l?,
            None => return input(format!("expected {n} rows, found {row}")),
        };
        let vals: std::result::Result<Vec<f64>, _> =
            line.split_whitespace().map(str::parse::<f64>).collect();
        let vals = vals.map_err(|e| crate::Error::Input(format!("row {row}: {e}")))?;
        if vals.len() != n {
            return input(format!("row {row} has {} entries, expected {n}", vals.len()));
        }
        data.extend(vals);
    }
    if let Some(extra) = lines.next() {
        extra?;
        return input("trailing rows after matrix");
    }
    SymMatrix::symmetrized(DMatrix::from_row_slice(n, n, &data), symmetry_tol)
}

pub fn write_matrix<W: Write>(mut w: W, m: &SymMatrix) -> Result<()> {
    let n = m.dim();
    writeln!(w, "{n}")?;
    for i in 0..n {
        let row: Vec<String> = (0..n).map(|j| format!("{:e}", m.get(i, j))).collect();
        writeln!(w, "{}", row.join(" "))?;
    }
    Ok(())
}
