use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::numerics::{Grid1D, SymmetricMatrix};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum BasisKind {
    /// Eigenstates of `p²/2 + ω² x²/2`.
    Oscillator { omega: f64 },
    /// Infinite well on `[0, length]`.
    Box { length: f64 },
}

/// The first `size` eigenstates of the unperturbed Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BasisSpec {
    pub kind: BasisKind,
    pub size: usize,
}

impl BasisSpec {
    pub fn oscillator(omega: f64, size: usize) -> Result<Self> {
        if !(omega > 0.0 && omega.is_finite()) {
            return Err(Error::Domain(format!("oscillator frequency must be positive, got {omega}")));
        }
        Self::with_kind(BasisKind::Oscillator { omega }, size)
    }

    pub fn box_basis(length: f64, size: usize) -> Result<Self> {
        if !(length > 0.0 && length.is_finite()) {
            return Err(Error::Domain(format!("box length must be positive, got {length}")));
        }
        Self::with_kind(BasisKind::Box { length }, size)
    }

    fn with_kind(kind: BasisKind, size: usize) -> Result<Self> {
        if size == 0 {
            return Err(Error::Argument("basis size must be at least 1".into()));
        }
        Ok(Self { kind, size })
    }

    fn check_index(&self, n: usize) -> Result<()> {
        if n < self.size {
            Ok(())
        } else {
            Err(Error::Index { index: n, size: self.size })
        }
    }

    /// `φ_n(x)`.
    pub fn eval(&self, n: usize, x: f64) -> Result<f64> {
        self.check_index(n)?;
        Ok(match self.kind {
            BasisKind::Oscillator { .. } => self.eval_all(x)[n],
            BasisKind::Box { length } => box_function(length, n, x),
        })
    }

    /// `[φ_0(x), …, φ_{size-1}(x)]`.
    pub fn eval_all(&self, x: f64) -> Vec<f64> {
        match self.kind {
            BasisKind::Oscillator { omega } => hermite_functions(omega, self.size, x),
            BasisKind::Box { length } => (0..self.size).map(|n| box_function(length, n, x)).collect(),
        }
    }

    /// `E_n`: `(n + ½) ω` or `(n + 1)² π² / (2 L²)`.
    pub fn energy(&self, n: usize) -> Result<f64> {
        self.check_index(n)?;
        Ok(match self.kind {
            BasisKind::Oscillator { omega } => (n as f64 + 0.5) * omega,
            BasisKind::Box { length } => ((n + 1) as f64 * PI / length).powi(2) / 2.0,
        })
    }

    pub fn energies(&self) -> Vec<f64> {
        (0..self.size).map(|n| self.energy(n).expect("index in range")).collect()
    }

    /// Oscillator: uniform grid over `±(√(2N/ω) + 8/√ω)` with `8N + 1` points.
    /// Box: `[0, L]` with `max(8N + 1, 257)` points.
    pub fn default_grid(&self) -> Grid1D {
        let n = self.size;
        let built = match self.kind {
            BasisKind::Oscillator { omega } => {
                let half = (2.0 * n as f64 / omega).sqrt() + 8.0 / omega.sqrt();
                Grid1D::symmetric(half, 8 * n + 1)
            }
            BasisKind::Box { length } => Grid1D::new(0.0, length, (8 * n + 1).max(257)),
        };
        built.expect("default grid parameters are valid")
    }

    /// Refuses grids that cut off part of the basis: for the oscillator the
    /// highest function must keep all but 1e-10 of its norm on the grid, for
    /// the box the grid must contain `[0, L]`.
    pub fn check_coverage(&self, grid: &Grid1D) -> Result<()> {
        match self.kind {
            BasisKind::Oscillator { .. } => {
                let top = self.size - 1;
                let dens: Vec<f64> = grid.sample(|x| self.eval_all(x)[top].powi(2));
                let captured = grid.trapezoid(&dens)?;
                if 1.0 - captured > 1e-10 {
                    return Err(Error::Coverage(format!(
                        "grid [{}, {}] keeps only {captured:.12} of the norm of basis function {top}",
                        grid.x_min(),
                        grid.x_max()
                    )));
                }
            }
            BasisKind::Box { length } => {
                if grid.x_min() > 0.0 || grid.x_max() < length {
                    return Err(Error::Coverage(format!(
                        "grid [{}, {}] does not contain the box [0, {length}]",
                        grid.x_min(),
                        grid.x_max()
                    )));
                }
            }
        }
        Ok(())
    }

    /// Matrix of `x` in the basis: exact ladder-operator elements
    /// `√((n+1)/(2ω))` for the oscillator, quadrature on the default grid for
    /// the box.
    pub fn position_matrix(&self) -> SymmetricMatrix {
        match self.kind {
            BasisKind::Oscillator { omega } => SymmetricMatrix::from_upper(self.size, |i, j| {
                if j == i + 1 {
                    (j as f64 / (2.0 * omega)).sqrt()
                } else {
                    0.0
                }
            }),
            BasisKind::Box { .. } => {
                let grid = self.default_grid();
                quadrature_matrix(self, &grid, |x| x).expect("default grid matches the basis")
            }
        }
    }
}

/// Normalised Hermite functions by the stable three-term recurrence
/// `φ_{n+1} = √(2/(n+1)) ξ φ_n - √(n/(n+1)) φ_{n-1}`, `ξ = √ω x`.
fn hermite_functions(omega: f64, size: usize, x: f64) -> Vec<f64> {
    let xi = omega.sqrt() * x;
    let mut out = Vec::with_capacity(size);
    let phi0 = (omega / PI).powf(0.25) * (-0.5 * xi * xi).exp();
    out.push(phi0);
    if size > 1 {
        out.push(2f64.sqrt() * xi * phi0);
    }
    for n in 1..size.saturating_sub(1) {
        let nf = n as f64;
        let next = (2.0 / (nf + 1.0)).sqrt() * xi * out[n] - (nf / (nf + 1.0)).sqrt() * out[n - 1];
        out.push(next);
    }
    out
}

fn box_function(length: f64, n: usize, x: f64) -> f64 {
    if !(0.0..=length).contains(&x) {
        return 0.0;
    }
    (2.0 / length).sqrt() * ((n + 1) as f64 * PI * x / length).sin()
}

/// `∫ φ_i(x) w(x) φ_j(x) dx` by the trapezoid rule, symmetrised by averaging
/// with the transpose.
pub(crate) fn quadrature_matrix(
    basis: &BasisSpec,
    grid: &Grid1D,
    weight: impl Fn(f64) -> f64,
) -> Result<SymmetricMatrix> {
    let n = basis.size;
    let mut rows = vec![0.0; n * n];
    for (idx, x) in grid.points().enumerate() {
        let w = weight(x);
        if !w.is_finite() {
            return Err(Error::Domain(format!("perturbation is not finite at x = {x}")));
        }
        let phi = basis.eval_all(x);
        let scale = grid.weight(idx);
        for i in 0..n {
            let left = scale * phi[i] * w;
            if left == 0.0 {
                continue;
            }
            for j in 0..n {
                rows[i * n + j] += left * phi[j];
            }
        }
    }
    SymmetricMatrix::from_rows_symmetrized(n, &rows)
}

/// `ΔV(x) = V₊(x) - V₋(x)` and the grid its matrix elements are integrated on.
#[derive(Clone)]
pub struct PerturbationSpec {
    potential: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    pub grid: Grid1D,
}

impl fmt::Debug for PerturbationSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PerturbationSpec").field("grid", &self.grid).finish_non_exhaustive()
    }
}

impl PerturbationSpec {
    pub fn new(potential: impl Fn(f64) -> f64 + Send + Sync + 'static, grid: Grid1D) -> Self {
        Self { potential: Arc::new(potential), grid }
    }

    pub fn zero(grid: Grid1D) -> Self {
        Self::new(|_| 0.0, grid)
    }

    /// `ΔV(x) = slope · x`.
    pub fn linear(slope: f64, grid: Grid1D) -> Self {
        Self::new(move |x| slope * x, grid)
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.potential)(x)
    }
}

/// `⟨n'|ΔV|n⟩` by quadrature on the perturbation's grid.
pub fn perturbation_matrix(b: &BasisSpec, p: &PerturbationSpec) -> Result<SymmetricMatrix> {
    b.check_coverage(&p.grid)?;
    quadrature_matrix(b, &p.grid, |x| p.eval(x))
}

/// Truncated `⟨n'|H₊|n⟩ = E_n δ_{n'n} + ⟨n'|ΔV|n⟩`.
pub fn hplus_matrix(b: &BasisSpec, p: &PerturbationSpec) -> Result<SymmetricMatrix> {
    perturbation_matrix(b, p)?.add(&SymmetricMatrix::from_diagonal(&b.energies()))
}

pub fn basis_eval(b: &BasisSpec, n: usize, x: f64) -> Result<f64> {
    b.eval(n, x)
}

pub fn basis_energy(b: &BasisSpec, n: usize) -> Result<f64> {
    b.energy(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oscillator_values() {
        let b = BasisSpec::oscillator(1.0, 4).unwrap();
        assert!((b.eval(0, 0.0).unwrap() - PI.powf(-0.25)).abs() < 1e-15);
        assert!((PI.powf(-0.25) - 0.7511).abs() < 1e-4);
        assert_eq!(b.eval(1, 0.0).unwrap(), 0.0);
        assert!(matches!(b.eval(4, 0.0), Err(Error::Index { index: 4, size: 4 })));
        // φ_2 = (ω/π)^{1/4} (2ξ² - 1)/√2 e^{-ξ²/2}
        let x = 0.7f64;
        let expected = PI.powf(-0.25) * (2.0 * x * x - 1.0) / 2f64.sqrt() * (-0.5 * x * x).exp();
        assert!((b.eval(2, x).unwrap() - expected).abs() < 1e-15);
    }

    #[test]
    fn box_values() {
        let l = 2.5;
        let b = BasisSpec::box_basis(l, 3).unwrap();
        assert!((b.eval(0, l / 2.0).unwrap() - (2.0 / l).sqrt()).abs() < 1e-15);
        assert_eq!(b.eval(1, -0.1).unwrap(), 0.0);
        assert_eq!(b.eval(1, l + 0.1).unwrap(), 0.0);
    }

    #[test]
    fn energies() {
        let b = BasisSpec::oscillator(1.0, 5).unwrap();
        assert_eq!(b.energy(0).unwrap(), 0.5);
        assert_eq!(b.energy(3).unwrap(), 3.5);
        assert!(b.energy(5).is_err());
        let b = BasisSpec::box_basis(PI, 2).unwrap();
        assert!((b.energy(0).unwrap() - 0.5).abs() < 1e-15);
        assert!((b.energy(1).unwrap() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn invalid_specs() {
        assert!(BasisSpec::oscillator(0.0, 3).is_err());
        assert!(BasisSpec::oscillator(1.0, 0).is_err());
        assert!(BasisSpec::box_basis(-1.0, 3).is_err());
    }

    #[test]
    fn zero_perturbation() {
        let b = BasisSpec::oscillator(1.0, 3).unwrap();
        let m = perturbation_matrix(&b, &PerturbationSpec::zero(b.default_grid())).unwrap();
        assert_eq!(m.max_abs(), 0.0);
        let h = hplus_matrix(&b, &PerturbationSpec::zero(b.default_grid())).unwrap();
        assert_eq!(h, SymmetricMatrix::from_diagonal(&[0.5, 1.5, 2.5]));
    }

    #[test]
    fn narrow_grid_is_refused() {
        let b = BasisSpec::oscillator(1.0, 20).unwrap();
        let g = Grid1D::symmetric(4.0, 401).unwrap();
        assert!(matches!(perturbation_matrix(&b, &PerturbationSpec::zero(g)), Err(Error::Coverage(_))));
        let bx = BasisSpec::box_basis(3.0, 4).unwrap();
        let g = Grid1D::new(0.5, 3.0, 101).unwrap();
        assert!(matches!(perturbation_matrix(&bx, &PerturbationSpec::zero(g)), Err(Error::Coverage(_))));
    }

    #[test]
    fn non_finite_perturbation_is_refused() {
        let b = BasisSpec::oscillator(1.0, 3).unwrap();
        let p = PerturbationSpec::new(|x| 1.0 / x, Grid1D::symmetric(12.0, 201).unwrap());
        assert!(matches!(perturbation_matrix(&b, &p), Err(Error::Domain(_))));
    }
}
