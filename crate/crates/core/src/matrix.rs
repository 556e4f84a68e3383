use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Result, SnoError};

/// A square complex matrix with finite entries.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix(DMatrix<Complex64>);

impl DenseMatrix {
    pub fn new(m: DMatrix<Complex64>) -> Result<Self> {
        if m.nrows() == 0 {
            return Err(SnoError::EmptyMatrix);
        }
        if m.nrows() != m.ncols() {
            return Err(SnoError::NotSquare {
                rows: m.nrows(),
                row: 0,
                cols: m.ncols(),
            });
        }
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(SnoError::NonFinite {
                context: "matrix entries",
            });
        }
        Ok(Self(m))
    }

    /// Builds a matrix from row vectors, rejecting ragged input.
    pub fn from_rows<R: AsRef<[Complex64]>>(rows: &[R]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(SnoError::EmptyMatrix);
        }
        for (i, row) in rows.iter().enumerate() {
            if row.as_ref().len() != n {
                return Err(SnoError::NotSquare {
                    rows: n,
                    row: i,
                    cols: row.as_ref().len(),
                });
            }
        }
        Self::new(DMatrix::from_fn(n, n, |i, j| rows[i].as_ref()[j]))
    }

    pub fn from_real_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let rows: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|r| r.as_ref().iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::new(DMatrix::identity(n, n))
    }

    pub fn zeros(n: usize) -> Result<Self> {
        Self::new(DMatrix::zeros(n, n))
    }

    pub fn diagonal(values: &[Complex64]) -> Result<Self> {
        let n = values.len();
        Self::new(DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                values[i]
            } else {
                Complex64::new(0.0, 0.0)
            }
        }))
    }

    /// Upper Jordan block of the given size: `lambda` on the diagonal, ones
    /// on the superdiagonal.
    pub fn jordan_block(lambda: Complex64, size: usize) -> Result<Self> {
        Self::new(DMatrix::from_fn(size, size, |i, j| {
            if i == j {
                lambda
            } else if j == i + 1 {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        }))
    }

    /// Block-diagonal direct sum.
    pub fn direct_sum(blocks: &[DenseMatrix]) -> Result<Self> {
        let n: usize = blocks.iter().map(DenseMatrix::dim).sum();
        let mut m = DMatrix::zeros(n, n);
        let mut offset = 0;
        for b in blocks {
            let k = b.dim();
            m.view_mut((offset, offset), (k, k)).copy_from(&b.0);
            offset += k;
        }
        Self::new(m)
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.0[(i, j)]
    }

    pub fn as_matrix(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn into_inner(self) -> DMatrix<Complex64> {
        self.0
    }

    pub fn rows(&self) -> Vec<Vec<Complex64>> {
        self.0
            .row_iter()
            .map(|r| r.iter().copied().collect())
            .collect()
    }

    pub fn diagonal_entries(&self) -> Vec<Complex64> {
        self.0.diagonal().iter().copied().collect()
    }

    /// Induced 2-norm (largest singular value).
    pub fn norm2(&self) -> f64 {
        spectral_norm(&self.0)
    }

    /// `A - lambda I`.
    pub fn shifted(&self, lambda: Complex64) -> DMatrix<Complex64> {
        let mut m = self.0.clone();
        for i in 0..m.nrows() {
            m[(i, i)] -= lambda;
        }
        m
    }
}

pub(crate) fn singular_values(m: &DMatrix<Complex64>) -> Vec<f64> {
    if m.nrows() == 0 {
        return Vec::new();
    }
    m.clone().svd(false, false).singular_values.iter().copied().collect()
}

pub(crate) fn spectral_norm(m: &DMatrix<Complex64>) -> f64 {
    singular_values(m).into_iter().fold(0.0, f64::max)
}
