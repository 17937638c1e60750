//! Matrix CSV: one row per matrix row, columns `re₀, im₀, re₁, im₁, …`, no
//! header.

use std::path::Path;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{DenseOp, NumopError};

pub fn write_matrix_csv(path: &Path, m: &DenseOp) -> Result<(), NumopError> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_path(path)?;
    for i in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols())
            .flat_map(|j| {
                let z = m[(i, j)];
                [format!("{:e}", z.re), format!("{:e}", z.im)]
            })
            .collect();
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_matrix_csv(path: &Path) -> Result<DenseOp, NumopError> {
    let mut r = csv::ReaderBuilder::new().has_headers(false).trim(csv::Trim::All).from_path(path)?;
    let mut rows: Vec<Vec<Complex64>> = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        if rec.len() % 2 != 0 {
            return Err(NumopError::Shape(format!("row {} has an odd number of columns", rows.len())));
        }
        let vals = rec
            .iter()
            .map(|s| s.parse::<f64>().map_err(|e| NumopError::Shape(format!("bad number {s:?}: {e}"))))
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(vals.chunks(2).map(|c| Complex64::new(c[0], c[1])).collect());
    }
    let n = rows.len();
    let m = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != m) {
        return Err(NumopError::Shape("ragged matrix rows".into()));
    }
    Ok(DMatrix::from_fn(n, m, |i, j| rows[i][j]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample::{random_matrix, rng};

    #[test]
    fn csv_round_trip_is_exact() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.csv");
        let m = random_matrix(&mut rng(3), 5, 1.0);
        write_matrix_csv(&path, &m).unwrap();
        assert_eq!(read_matrix_csv(&path).unwrap(), m);
    }

    #[test]
    fn odd_columns_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.csv");
        std::fs::write(&path, "1,0,2\n").unwrap();
        assert!(read_matrix_csv(&path).is_err());
    }
}
