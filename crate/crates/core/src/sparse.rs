//! Row-compressed sparse matrices and a small row-major dense matrix.

use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

/// Sparse matrix stored as per-row `(column, value)` lists sorted by column.
/// No row holds a duplicate column or an explicit zero.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    n_rows: usize,
    n_cols: usize,
    rows: Vec<Vec<(usize, f64)>>,
}

impl SparseMatrix {
    pub fn zeros(n_rows: usize, n_cols: usize) -> Self {
        Self {
            n_rows,
            n_cols,
            rows: vec![Vec::new(); n_rows],
        }
    }

    /// Builds from explicit rows, checking every storage invariant.
    pub fn from_rows(n_cols: usize, rows: Vec<Vec<(usize, f64)>>) -> Result<Self> {
        for row in &rows {
            let mut prev: Option<usize> = None;
            for &(c, v) in row {
                if c >= n_cols {
                    return Err(Error::InvalidArgument(alloc::format!(
                        "column {c} out of range for {n_cols} columns"
                    )));
                }
                if prev.is_some_and(|p| p >= c) {
                    return Err(Error::InvalidArgument(
                        "row entries must be strictly increasing by column".into(),
                    ));
                }
                if v == 0.0 || !v.is_finite() {
                    return Err(Error::InvalidArgument(alloc::format!(
                        "stored value must be finite and non-zero, got {v}"
                    )));
                }
                prev = Some(c);
            }
        }
        Ok(Self {
            n_rows: rows.len(),
            n_cols,
            rows,
        })
    }

    /// Appends `value` at `(row, col)`; `col` must exceed every column already
    /// stored in that row. Zeros are skipped.
    pub(crate) fn push(&mut self, row: usize, col: usize, value: f64) {
        debug_assert!(col < self.n_cols);
        debug_assert!(self.rows[row].last().is_none_or(|&(c, _)| c < col));
        if value != 0.0 {
            self.rows[row].push((col, value));
        }
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn row(&self, r: usize) -> &[(usize, f64)] {
        &self.rows[r]
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        let row = &self.rows[r];
        row.binary_search_by_key(&c, |&(col, _)| col)
            .map(|i| row[i].1)
            .unwrap_or(0.0)
    }

    /// Sum of each column, accumulated in ascending row order.
    pub fn column_sums(&self) -> Vec<f64> {
        let mut sums = vec![0.0; self.n_cols];
        for row in &self.rows {
            for &(c, v) in row {
                sums[c] += v;
            }
        }
        sums
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut d = DenseMatrix::zeros(self.n_rows, self.n_cols);
        for (r, row) in self.rows.iter().enumerate() {
            for &(c, v) in row {
                d.set(r, c, v);
            }
        }
        d
    }
}

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    n_rows: usize,
    n_cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(n_rows: usize, n_cols: usize) -> Self {
        Self {
            n_rows,
            n_cols,
            data: vec![0.0; n_rows * n_cols],
        }
    }

    pub fn from_rows(n_cols: usize, rows: &[Vec<f64>]) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * n_cols);
        for row in rows {
            if row.len() != n_cols {
                return Err(Error::DimensionMismatch {
                    expected: n_cols,
                    found: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Ok(Self {
            n_rows: rows.len(),
            n_cols,
            data,
        })
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.n_cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: f64) {
        self.data[r * self.n_cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.n_cols..(r + 1) * self.n_cols]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks(self.n_cols.max(1)).take(self.n_rows)
    }
}
