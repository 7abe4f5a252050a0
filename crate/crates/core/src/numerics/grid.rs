use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Uniform grid of `n_points` nodes spanning `[x_min, x_max]` inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid1D {
    x_min: f64,
    x_max: f64,
    n_points: usize,
}

impl Grid1D {
    pub fn new(x_min: f64, x_max: f64, n_points: usize) -> Result<Self> {
        if !(x_min.is_finite() && x_max.is_finite()) || !(x_min < x_max) {
            return Err(Error::Argument(format!(
                "grid bounds must be finite with x_min < x_max, got [{x_min}, {x_max}]"
            )));
        }
        if n_points < 2 {
            return Err(Error::Argument(format!("grid needs at least 2 points, got {n_points}")));
        }
        Ok(Self { x_min, x_max, n_points })
    }

    /// Symmetric grid on `[-half_width, half_width]`.
    pub fn symmetric(half_width: f64, n_points: usize) -> Result<Self> {
        Self::new(-half_width, half_width, n_points)
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn len(&self) -> usize {
        self.n_points
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        (self.x_max - self.x_min) / (self.n_points - 1) as f64
    }

    pub fn point(&self, i: usize) -> f64 {
        if i + 1 == self.n_points {
            self.x_max
        } else {
            self.x_min + i as f64 * self.spacing()
        }
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        (0..self.n_points).map(move |i| self.point(i))
    }

    /// Trapezoid weight of node `i`.
    pub fn weight(&self, i: usize) -> f64 {
        let h = self.spacing();
        if i == 0 || i + 1 == self.n_points {
            0.5 * h
        } else {
            h
        }
    }

    pub fn sample<T>(&self, f: impl Fn(f64) -> T) -> Vec<T> {
        self.points().map(f).collect()
    }

    pub fn trapezoid(&self, values: &[f64]) -> Result<f64> {
        self.check_len(values.len())?;
        Ok(values.iter().enumerate().map(|(i, v)| self.weight(i) * v).sum())
    }

    pub fn trapezoid_complex(&self, values: &[Complex64]) -> Result<Complex64> {
        self.check_len(values.len())?;
        Ok(values.iter().enumerate().map(|(i, v)| v * self.weight(i)).sum())
    }

    fn check_len(&self, found: usize) -> Result<()> {
        if found == self.n_points {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected: self.n_points, found })
        }
    }
}

/// Brute-force propagation `ψ(x_i) = Σ_j w_j K(x_i, x_j) ψ(x_j)` by the
/// trapezoid rule.
///
/// `kernel_values` is the row-major `n × n` matrix `K(x_i, x'_j)` sampled on
/// `grid` (row = output point, column = source point).
pub fn apply_kernel_numeric(
    kernel_values: &[Complex64],
    state_samples: &[Complex64],
    grid: &Grid1D,
) -> Result<Vec<Complex64>> {
    let n = grid.len();
    if state_samples.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: state_samples.len() });
    }
    if kernel_values.len() != n * n {
        return Err(Error::DimensionMismatch { expected: n * n, found: kernel_values.len() });
    }
    let weighted: Vec<Complex64> = state_samples
        .iter()
        .enumerate()
        .map(|(j, psi)| psi * grid.weight(j))
        .collect();
    Ok(kernel_values
        .chunks_exact(n)
        .map(|row| row.iter().zip(&weighted).map(|(k, w)| k * w).sum())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_grids() {
        assert!(Grid1D::new(1.0, 1.0, 10).is_err());
        assert!(Grid1D::new(2.0, 1.0, 10).is_err());
        assert!(Grid1D::new(0.0, 1.0, 1).is_err());
        assert!(Grid1D::new(f64::NAN, 1.0, 10).is_err());
    }

    #[test]
    fn endpoints_and_spacing() {
        let g = Grid1D::new(-1.0, 1.0, 5).unwrap();
        assert_eq!(g.spacing(), 0.5);
        let xs: Vec<f64> = g.points().collect();
        assert_eq!(xs, vec![-1.0, -0.5, 0.0, 0.5, 1.0]);
    }

    #[test]
    fn trapezoid_gaussian() {
        let g = Grid1D::symmetric(10.0, 2001).unwrap();
        let v = g.sample(|x| (-x * x).exp());
        assert!((g.trapezoid(&v).unwrap() - std::f64::consts::PI.sqrt()).abs() < 1e-14);
        assert!(g.trapezoid(&v[1..]).is_err());
    }

    #[test]
    fn identity_kernel_scales_by_weight() {
        let g = Grid1D::new(0.0, 1.0, 3).unwrap();
        let mut k = vec![Complex64::new(0.0, 0.0); 9];
        for i in 0..3 {
            k[i * 3 + i] = Complex64::new(1.0, 0.0);
        }
        let psi = vec![Complex64::new(1.0, 0.0); 3];
        let out = apply_kernel_numeric(&k, &psi, &g).unwrap();
        assert_eq!(out[0].re, 0.25);
        assert_eq!(out[1].re, 0.5);
        assert!(apply_kernel_numeric(&k[1..], &psi, &g).is_err());
        assert!(apply_kernel_numeric(&k, &psi[1..], &g).is_err());
    }
}
