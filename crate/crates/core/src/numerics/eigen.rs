use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Sweep cap for the cyclic Jacobi iteration.
pub const MAX_JACOBI_SWEEPS: usize = 64;

/// Dense real symmetric matrix, stored row-major.
///
/// Every mutation writes both `(i, j)` and `(j, i)`, so the stored entries are
/// exactly symmetric.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymmetricMatrix {
    dim: usize,
    entries: Vec<f64>,
}

impl SymmetricMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, entries: vec![0.0; dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_diagonal(&vec![1.0; dim])
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m.entries[i * m.dim + i] = d;
        }
        m
    }

    /// Builds the matrix from the upper triangle `f(i, j)`, `i <= j`.
    pub fn from_upper(dim: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in i..dim {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// Symmetrises an arbitrary square row-major array by averaging it with
    /// its transpose.
    pub fn from_rows_symmetrized(dim: usize, rows: &[f64]) -> Result<Self> {
        if rows.len() != dim * dim {
            return Err(Error::DimensionMismatch { expected: dim * dim, found: rows.len() });
        }
        Ok(Self::from_upper(dim, |i, j| 0.5 * (rows[i * dim + j] + rows[j * dim + i])))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        self.entries[i * self.dim + j] = value;
        self.entries[j * self.dim + i] = value;
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn add(&self, other: &SymmetricMatrix) -> Result<SymmetricMatrix> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        Ok(SymmetricMatrix {
            dim: self.dim,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        self.entries
            .chunks_exact(self.dim)
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }
}

/// Eigen-decomposition `M = V diag(values) Vᵀ` with ascending eigenvalues.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymmetricEigen {
    pub values: Vec<f64>,
    /// Row-major `n × n`; column `k` is the eigenvector of `values[k]`.
    pub vectors: Vec<f64>,
}

impl SymmetricEigen {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// Component `i` of eigenvector `k`.
    pub fn component(&self, i: usize, k: usize) -> f64 {
        self.vectors[i * self.dim() + k]
    }

    pub fn vector(&self, k: usize) -> Vec<f64> {
        (0..self.dim()).map(|i| self.component(i, k)).collect()
    }
}

/// Cyclic Jacobi diagonalisation with threshold sweeps.
///
/// The first three sweeps skip rotations below `0.2 * off / n²`; afterwards
/// elements that no longer affect the diagonal in floating point are zeroed
/// outright. Fails with [`Error::NonConvergence`] after
/// [`MAX_JACOBI_SWEEPS`] sweeps.
pub fn eigensolve_symmetric(m: &SymmetricMatrix) -> Result<SymmetricEigen> {
    let n = m.dim();
    if n == 0 {
        return Err(Error::Argument("eigensolve needs dimension >= 1".into()));
    }
    if m.entries().iter().any(|v| !v.is_finite()) {
        return Err(Error::Domain("matrix has non-finite entries".into()));
    }
    let mut a = m.entries().to_vec();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let mut d: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
    let mut b = d.clone();
    let mut z = vec![0.0; n];

    let mut converged = false;
    for sweep in 1..=MAX_JACOBI_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|p| ((p + 1)..n).map(move |q| (p, q)))
            .map(|(p, q)| a[p * n + q].abs())
            .sum();
        if off == 0.0 {
            converged = true;
            break;
        }
        let threshold = if sweep < 4 { 0.2 * off / (n * n) as f64 } else { 0.0 };
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                let g = 100.0 * apq.abs();
                if sweep > 4 && d[p].abs() + g == d[p].abs() && d[q].abs() + g == d[q].abs() {
                    a[p * n + q] = 0.0;
                    continue;
                }
                if apq.abs() <= threshold {
                    continue;
                }
                let h = d[q] - d[p];
                let t = if h.abs() + g == h.abs() {
                    apq / h
                } else {
                    let theta = 0.5 * h / apq;
                    let t = 1.0 / (theta.abs() + (1.0 + theta * theta).sqrt());
                    if theta < 0.0 {
                        -t
                    } else {
                        t
                    }
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let tau = s / (1.0 + c);
                let h = t * apq;
                z[p] -= h;
                z[q] += h;
                d[p] -= h;
                d[q] += h;
                a[p * n + q] = 0.0;
                let rotate = |a: &mut Vec<f64>, i: usize, j: usize, k: usize, l: usize| {
                    let g = a[i * n + j];
                    let h = a[k * n + l];
                    a[i * n + j] = g - s * (h + g * tau);
                    a[k * n + l] = h + s * (g - h * tau);
                };
                for j in 0..p {
                    rotate(&mut a, j, p, j, q);
                }
                for j in (p + 1)..q {
                    rotate(&mut a, p, j, j, q);
                }
                for j in (q + 1)..n {
                    rotate(&mut a, p, j, q, j);
                }
                for j in 0..n {
                    rotate(&mut v, j, p, j, q);
                }
            }
        }
        for p in 0..n {
            b[p] += z[p];
            d[p] = b[p];
            z[p] = 0.0;
        }
    }
    if !converged {
        let off: f64 = (0..n)
            .flat_map(|p| ((p + 1)..n).map(move |q| (p, q)))
            .map(|(p, q)| a[p * n + q].abs())
            .sum();
        if off != 0.0 {
            return Err(Error::NonConvergence { sweeps: MAX_JACOBI_SWEEPS, off_norm: off });
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].total_cmp(&d[j]));
    let values = order.iter().map(|&k| d[k]).collect();
    let mut vectors = vec![0.0; n * n];
    for (new_k, &old_k) in order.iter().enumerate() {
        for i in 0..n {
            vectors[i * n + new_k] = v[i * n + old_k];
        }
    }
    Ok(SymmetricEigen { values, vectors })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn residual(m: &SymmetricMatrix, e: &SymmetricEigen) -> f64 {
        (0..m.dim())
            .map(|k| {
                let v = e.vector(k);
                m.mul_vec(&v)
                    .iter()
                    .zip(&v)
                    .map(|(mv, vi)| (mv - e.values[k] * vi).abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max)
    }

    #[test]
    fn identity() {
        let e = eigensolve_symmetric(&SymmetricMatrix::identity(3)).unwrap();
        assert_eq!(e.values, vec![1.0, 1.0, 1.0]);
        assert_eq!(e.vectors, SymmetricMatrix::identity(3).entries());
    }

    #[test]
    fn diagonal_oscillator_levels() {
        let m = SymmetricMatrix::from_diagonal(&[2.5, 0.5, 1.5]);
        let e = eigensolve_symmetric(&m).unwrap();
        assert_eq!(e.values, vec![0.5, 1.5, 2.5]);
        assert_eq!(e.vector(0), vec![0.0, 1.0, 0.0]);
        assert_eq!(e.vector(2), vec![1.0, 0.0, 0.0]);
    }

    #[test]
    fn two_by_two_quadratic_formula() {
        let c = 0.1;
        let mut m = SymmetricMatrix::from_diagonal(&[0.5, 1.5]);
        m.set(0, 1, c);
        let e = eigensolve_symmetric(&m).unwrap();
        // roots of λ² - 2λ + (0.75 - c²)
        let disc = (0.25f64 + c * c).sqrt();
        assert!((e.values[0] - (1.0 - disc)).abs() < 1e-15);
        assert!((e.values[1] - (1.0 + disc)).abs() < 1e-15);
        assert!(residual(&m, &e) < 1e-15);
    }

    #[test]
    fn one_by_one_and_empty() {
        let e = eigensolve_symmetric(&SymmetricMatrix::from_diagonal(&[-3.0])).unwrap();
        assert_eq!(e.values, vec![-3.0]);
        assert!(eigensolve_symmetric(&SymmetricMatrix::zeros(0)).is_err());
    }

    #[test]
    fn symmetrized_construction() {
        let m = SymmetricMatrix::from_rows_symmetrized(2, &[1.0, 2.0, 4.0, 3.0]).unwrap();
        assert_eq!(m.get(0, 1), 3.0);
        assert_eq!(m.get(1, 0), 3.0);
    }

    #[test]
    fn degenerate_block() {
        // two equal levels coupled to a third
        let mut m = SymmetricMatrix::from_diagonal(&[1.0, 1.0, 2.0]);
        m.set(0, 2, 0.3);
        m.set(1, 2, 0.3);
        let e = eigensolve_symmetric(&m).unwrap();
        assert!(residual(&m, &e) < 1e-14);
        assert!((e.values.iter().sum::<f64>() - 4.0).abs() < 1e-14);
    }
}
