//! Small dense symmetric matrices and their full eigendecomposition.

use std::fmt;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::{Error, Result};

/// Largest dimension handled by the cyclic Jacobi solver; bigger matrices go
/// through Householder tridiagonalisation and implicit QR (`nalgebra`).
pub const JACOBI_MAX_DIM: usize = 64;

const JACOBI_OFF_TOL: f64 = 1e-13;
const JACOBI_MAX_SWEEPS: usize = 100;

/// Row-major symmetric matrix.
#[derive(Clone, PartialEq)]
pub struct DenseSymMatrix {
    dim: usize,
    entries: Vec<f64>,
}

impl DenseSymMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            entries: vec![0.0; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &x) in diag.iter().enumerate() {
            m.set(i, i, x);
        }
        m
    }

    /// Builds from rows, requiring exact symmetry.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.len();
        let mut m = Self::zeros(dim);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != dim {
                return Err(Error::InvalidParameter(format!(
                    "row {i} has {} entries, expected {dim}",
                    row.len()
                )));
            }
            for (j, &x) in row.iter().enumerate() {
                if rows[j][i] != x {
                    return Err(Error::InvalidParameter(format!(
                        "matrix is not symmetric at ({i}, {j})"
                    )));
                }
                m.entries[i * dim + j] = x;
            }
        }
        Ok(m)
    }

    /// Row-major data of a symmetric matrix, e.g. a dense graph Laplacian.
    pub fn from_row_major(dim: usize, entries: Vec<f64>) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::LengthMismatch {
                expected: dim * dim,
                got: entries.len(),
            });
        }
        let m = Self { dim, entries };
        for i in 0..dim {
            for j in 0..i {
                if m.get(i, j) != m.get(j, i) {
                    return Err(Error::InvalidParameter(format!(
                        "matrix is not symmetric at ({i}, {j})"
                    )));
                }
            }
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.dim + j]
    }

    /// Sets both `(i, j)` and `(j, i)`.
    pub fn set(&mut self, i: usize, j: usize, x: f64) {
        self.entries[i * self.dim + j] = x;
        self.entries[j * self.dim + i] = x;
    }

    pub fn add_diag(&mut self, i: usize, x: f64) {
        self.entries[i * self.dim + i] += x;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.dim..(i + 1) * self.dim]
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.dim);
        (0..self.dim).map(|i| dot(self.row(i), v)).collect()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// `‖(M − λ) v‖`.
    pub fn residual(&self, lambda: f64, v: &[f64]) -> f64 {
        let mv = self.mul_vec(v);
        mv.iter()
            .zip(v)
            .map(|(a, b)| (a - lambda * b).powi(2))
            .sum::<f64>()
            .sqrt()
    }
}

impl fmt::Debug for DenseSymMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<_> = (0..self.dim).map(|i| self.row(i)).collect();
        f.debug_list().entries(rows).finish()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumResult {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// `eigenvectors[k]` is the unit eigenvector of `eigenvalues[k]`.
    #[serde(skip)]
    pub eigenvectors: Vec<Vec<f64>>,
    /// `max_k ‖M v_k − λ_k v_k‖`.
    pub residual_bound: f64,
}

/// Full eigendecomposition of a symmetric matrix.
///
/// Cyclic Jacobi up to [`JACOBI_MAX_DIM`], `nalgebra`'s symmetric QR above.
/// Output is deterministic for identical input.
pub fn sym_eigen(m: &DenseSymMatrix) -> SpectrumResult {
    let (values, vectors) = if m.dim <= JACOBI_MAX_DIM {
        jacobi(m)
    } else {
        householder_qr(m)
    };
    let residual_bound = values
        .iter()
        .zip(&vectors)
        .map(|(&l, v)| m.residual(l, v))
        .fold(0.0, f64::max);
    SpectrumResult {
        eigenvalues: values,
        eigenvectors: vectors,
        residual_bound,
    }
}

/// Eigenvalues only, ascending.
pub fn sym_eigenvalues(m: &DenseSymMatrix) -> Vec<f64> {
    if m.dim <= JACOBI_MAX_DIM {
        return jacobi(m).0;
    }
    let a = DMatrix::from_row_slice(m.dim, m.dim, &m.entries);
    let mut values: Vec<f64> = a.symmetric_eigenvalues().iter().copied().collect();
    values.sort_by(f64::total_cmp);
    values
}

fn jacobi(m: &DenseSymMatrix) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = m.dim;
    let mut a = m.entries.clone();
    let mut v = DenseSymMatrix::identity(n).entries;
    let scale = m.frobenius_norm().max(f64::MIN_POSITIVE);

    for _ in 0..JACOBI_MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i * n + j].powi(2))
            .sum::<f64>()
            .sqrt();
        if off <= JACOBI_OFF_TOL * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + theta.hypot(1.0));
                let c = 1.0 / t.hypot(1.0);
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k * n + p], a[k * n + q]);
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p * n + k], a[q * n + k]);
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                for k in 0..n {
                    let (vkp, vkq) = (v[k * n + p], v[k * n + q]);
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].total_cmp(&a[j * n + j]).then(i.cmp(&j)));
    let values = order.iter().map(|&i| a[i * n + i]).collect();
    let vectors = order
        .iter()
        .map(|&j| (0..n).map(|k| v[k * n + j]).collect())
        .collect();
    (values, vectors)
}

fn householder_qr(m: &DenseSymMatrix) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = m.dim;
    let eig = DMatrix::from_row_slice(n, n, &m.entries).symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]).then(i.cmp(&j)));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = order
        .iter()
        .map(|&j| eig.eigenvectors.column(j).iter().copied().collect())
        .collect();
    (values, vectors)
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
