//! Validated containers for the design matrix and the target vector.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Observations x features, all entries finite, at least one of each.
#[derive(Debug, Clone, PartialEq)]
pub struct DataMatrix(DMatrix<f64>);

impl DataMatrix {
    pub fn new(values: DMatrix<f64>) -> Result<Self> {
        if values.nrows() == 0 || values.ncols() == 0 {
            return Err(Error::invalid(
                "X",
                format!("needs at least one row and one column, got {}x{}", values.nrows(), values.ncols()),
            ));
        }
        for j in 0..values.ncols() {
            for i in 0..values.nrows() {
                if !values[(i, j)].is_finite() {
                    return Err(Error::NonFinite { row: i, col: j });
                }
            }
        }
        Ok(DataMatrix(values))
    }

    /// Builds from row-major rows; all rows must have equal length.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let m = rows.len();
        let n = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::Dimension {
                context: "row length",
                expected: n,
                found: bad.len(),
            });
        }
        Self::new(DMatrix::from_fn(m, n, |i, j| rows[i][j]))
    }

    pub fn from_row_slice(nrows: usize, ncols: usize, values: &[f64]) -> Result<Self> {
        if values.len() != nrows * ncols {
            return Err(Error::Dimension {
                context: "row slice",
                expected: nrows * ncols,
                found: values.len(),
            });
        }
        Self::new(DMatrix::from_row_slice(nrows, ncols, values))
    }

    /// Skips validation; callers guarantee finiteness and nonzero shape.
    pub(crate) fn from_trusted(values: DMatrix<f64>) -> Self {
        debug_assert!(values.nrows() > 0 && values.ncols() > 0);
        DataMatrix(values)
    }

    pub fn nrows(&self) -> usize {
        self.0.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.0.ncols()
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn into_inner(self) -> DMatrix<f64> {
        self.0
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.0[(row, col)]
    }

    pub fn row_vec(&self, row: usize) -> Vec<f64> {
        self.0.row(row).iter().copied().collect()
    }

    pub fn select_rows(&self, rows: &[usize]) -> DataMatrix {
        DataMatrix(self.0.select_rows(rows.iter()))
    }

    pub fn select_columns(&self, cols: &[usize]) -> DataMatrix {
        DataMatrix(self.0.select_columns(cols.iter()))
    }
}

/// One real target per observation.
#[derive(Debug, Clone, PartialEq)]
pub struct TargetVector(DVector<f64>);

impl TargetVector {
    pub fn new(values: DVector<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::invalid("y", "must contain at least one value"));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { row: i, col: 0 });
        }
        Ok(TargetVector(values))
    }

    pub fn from_vec(values: Vec<f64>) -> Result<Self> {
        Self::new(DVector::from_vec(values))
    }

    pub(crate) fn from_trusted(values: DVector<f64>) -> Self {
        TargetVector(values)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_vector(&self) -> &DVector<f64> {
        &self.0
    }

    pub fn as_slice(&self) -> &[f64] {
        self.0.as_slice()
    }

    pub fn to_vec(&self) -> Vec<f64> {
        self.0.as_slice().to_vec()
    }

    pub fn select(&self, rows: &[usize]) -> TargetVector {
        TargetVector(self.0.select_rows(rows.iter()))
    }
}

pub(crate) fn check_paired(x: &DataMatrix, y: &TargetVector) -> Result<()> {
    if x.nrows() != y.len() {
        return Err(Error::Dimension {
            context: "X rows vs y length",
            expected: x.nrows(),
            found: y.len(),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_finite_entries() {
        let err = DataMatrix::from_rows(&[vec![1.0, 2.0], vec![f64::NAN, 0.0]]).unwrap_err();
        assert_eq!(err, Error::NonFinite { row: 1, col: 0 });
        assert!(TargetVector::from_vec(vec![1.0, f64::INFINITY]).is_err());
    }

    #[test]
    fn rejects_empty_and_ragged() {
        assert!(DataMatrix::from_rows(&[]).is_err());
        assert!(matches!(
            DataMatrix::from_rows(&[vec![1.0, 2.0], vec![1.0]]),
            Err(Error::Dimension { .. })
        ));
        assert!(TargetVector::from_vec(vec![]).is_err());
    }

    #[test]
    fn row_selection_keeps_order() {
        let x = DataMatrix::from_rows(&[vec![1.0], vec![2.0], vec![3.0]]).unwrap();
        let picked = x.select_rows(&[2, 0]);
        assert_eq!(picked.row_vec(0), vec![3.0]);
        assert_eq!(picked.row_vec(1), vec![1.0]);
    }
}
