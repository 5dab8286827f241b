//! Dense complex matrices and a general (non-Hermitian) eigensolver.

mod eigen;
mod hessenberg;

use std::ops::{Index, IndexMut};

use num_complex::Complex64;
use thiserror::Error;

pub use eigen::{eigen_decompose, eigenvalues, EigenDecomposition, DEFAULT_RESIDUAL_TOLERANCE};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EigenError {
    #[error("matrix entry ({row}, {col}) is not finite")]
    NonFinite { row: usize, col: usize },
    #[error("residual tolerance must be positive and finite, got {0}")]
    InvalidTolerance(f64),
    #[error("QR iteration did not converge after {sweeps} sweeps; deflation reached index {deflation_index}")]
    NoConvergence { deflation_index: usize, sweeps: usize },
    #[error("eigenpair residual {residual:e} exceeds {bound:e} (tolerance times matrix norm)")]
    ResidualExceeded { residual: f64, bound: f64 },
}

/// Square matrix of `Complex64`, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl DenseComplexMatrix {
    /// # Panics
    /// If `dim == 0`.
    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "matrix dimension must be at least 1");
        Self { dim, data: vec![Complex64::new(0.0, 0.0); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Builds a matrix from row-major entries. Returns `None` unless
    /// `entries.len()` is a nonzero perfect square.
    pub fn from_row_major(entries: Vec<Complex64>) -> Option<Self> {
        let dim = (entries.len() as f64).sqrt().round() as usize;
        if dim == 0 || dim * dim != entries.len() {
            return None;
        }
        Some(Self { dim, data: entries })
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Option<Self> {
        let dim = rows.len();
        if dim == 0 || rows.iter().any(|r| r.len() != dim) {
            return None;
        }
        Some(Self { dim, data: rows.concat() })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn conj_transpose(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn is_hermitian(&self) -> bool {
        let n = self.dim;
        (0..n).all(|i| (i..n).all(|j| self[(i, j)] == self[(j, i)].conj()))
    }

    /// Position of the first non-finite entry, if any.
    pub fn first_non_finite(&self) -> Option<(usize, usize)> {
        self.data.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())).map(|k| (k / self.dim, k % self.dim))
    }

    /// `self * v`.
    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.dim);
        (0..self.dim).map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }
}

impl Index<(usize, usize)> for DenseComplexMatrix {
    type Output = Complex64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for DenseComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.dim + j]
    }
}

/// Maximum absolute row sum.
pub fn infinity_norm(m: &DenseComplexMatrix) -> f64 {
    (0..m.dim).map(|i| m.row(i).iter().map(|z| z.norm()).sum::<f64>()).fold(0.0, f64::max)
}
