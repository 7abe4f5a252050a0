//! Truncated-eigenbasis evolution after a sudden change `H₋ -> H₊`.
//!
//! The initial state is an eigenstate `φ_ν` of `H₋`. Expanding in the first
//! `N` eigenstates of `H₋` turns the Laplace-transformed Schrödinger equation
//! into a finite linear system whose poles are the eigenvalues of the
//! truncated `⟨n'|H₊|n⟩`; closing the inversion contour picks up their
//! residues. That residue sum is evaluated directly here:
//! diagonalise `H₊ = V diag(E) Vᵀ`, then
//! `b_n(t) = Σ_k V_{nk} exp(-i E_k t) V_{νk}`.

mod basis;

pub use basis::{
    basis_energy, basis_eval, hplus_matrix, perturbation_matrix, BasisKind, BasisSpec,
    PerturbationSpec,
};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::numerics::{eigensolve_symmetric, Grid1D, SymmetricEigen, SymmetricMatrix};
use crate::{Error, Result};

/// Default truncation for oscillator problems.
pub const DEFAULT_BASIS_SIZE: usize = 60;

/// Eigen-decomposition of the truncated `H₊` together with the coordinates of
/// the initial state in its eigenbasis. Immutable; answers any time query.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralSolution {
    pub eigen: SymmetricEigen,
    pub hamiltonian: SymmetricMatrix,
    pub initial_index: usize,
    /// `c_k = V_{νk}`.
    pub initial_coeffs: Vec<f64>,
}

impl SpectralSolution {
    pub fn size(&self) -> usize {
        self.initial_coeffs.len()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigen.values
    }
}

pub fn solve_quench(b: &BasisSpec, p: &PerturbationSpec, nu: usize) -> Result<SpectralSolution> {
    if nu >= b.size {
        return Err(Error::Index { index: nu, size: b.size });
    }
    let hamiltonian = hplus_matrix(b, p)?;
    let eigen = eigensolve_symmetric(&hamiltonian)?;
    let initial_coeffs = (0..b.size).map(|k| eigen.component(nu, k)).collect();
    Ok(SpectralSolution { eigen, hamiltonian, initial_index: nu, initial_coeffs })
}

/// State at time `t` in the `H₋` basis, `b_n(t)`.
pub fn coefficients_at(sol: &SpectralSolution, t: f64) -> Vec<Complex64> {
    let n = sol.size();
    let evolved: Vec<Complex64> = sol
        .eigen
        .values
        .iter()
        .zip(&sol.initial_coeffs)
        .map(|(&e, &c)| Complex64::from_polar(c, -e * t))
        .collect();
    (0..n)
        .map(|row| (0..n).map(|k| evolved[k] * sol.eigen.component(row, k)).sum())
        .collect()
}

/// `|b_ν(t)|²`, the probability of still finding the initial eigenstate.
pub fn survival_probability(sol: &SpectralSolution, t: f64) -> f64 {
    let amp: Complex64 = sol
        .eigen
        .values
        .iter()
        .zip(&sol.initial_coeffs)
        .map(|(&e, &c)| Complex64::from_polar(c * c, -e * t))
        .sum();
    amp.norm_sqr().min(1.0)
}

fn quadratic_form(m: &SymmetricMatrix, v: &[Complex64]) -> Complex64 {
    let n = m.dim();
    (0..n)
        .map(|i| {
            let row: Complex64 = (0..n).map(|j| v[j] * m.get(i, j)).sum();
            v[i].conj() * row
        })
        .sum()
}

/// `⟨ψ(t)|x|ψ(t)⟩` through the basis position matrix.
pub fn expectation_position(sol: &SpectralSolution, b: &BasisSpec, t: f64) -> Result<f64> {
    if b.size != sol.size() {
        return Err(Error::DimensionMismatch { expected: sol.size(), found: b.size });
    }
    Ok(quadratic_form(&b.position_matrix(), &coefficients_at(sol, t)).re)
}

/// `⟨ψ(t)|H₊|ψ(t)⟩` with the truncated matrix.
pub fn energy_expectation(sol: &SpectralSolution, t: f64) -> f64 {
    quadratic_form(&sol.hamiltonian, &coefficients_at(sol, t)).re
}

pub fn norm_at(sol: &SpectralSolution, t: f64) -> f64 {
    coefficients_at(sol, t).iter().map(|c| c.norm_sqr()).sum()
}

/// `ψ(x, t) = Σ_n b_n(t) φ_n(x)` sampled on `g`.
///
/// Fails with a coverage error when the grid holds less than `1 - 1e-8` of
/// the state's probability.
pub fn wavefunction_on_grid(
    sol: &SpectralSolution,
    b: &BasisSpec,
    t: f64,
    g: &Grid1D,
) -> Result<Vec<Complex64>> {
    if b.size != sol.size() {
        return Err(Error::DimensionMismatch { expected: sol.size(), found: b.size });
    }
    let coeffs = coefficients_at(sol, t);
    let samples: Vec<Complex64> = g
        .points()
        .map(|x| b.eval_all(x).iter().zip(&coeffs).map(|(phi, c)| c * *phi).sum())
        .collect();
    let mass = g.trapezoid(&samples.iter().map(|z| z.norm_sqr()).collect::<Vec<_>>())?;
    let total: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum();
    if total - mass > 1e-8 {
        return Err(Error::Coverage(format!(
            "grid [{}, {}] holds {mass:.10} of the state's probability {total:.10}",
            g.x_min(),
            g.x_max()
        )));
    }
    Ok(samples)
}

/// Exact levels of `p²/2 + ω² x²/2 + slope · x`: `(n + ½) ω - slope²/(2ω²)`.
pub fn linear_field_level(omega: f64, slope: f64, n: usize) -> f64 {
    (n as f64 + 0.5) * omega - slope * slope / (2.0 * omega * omega)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub size: usize,
    pub max_error: f64,
}

/// Maximum over `times` of `|⟨x⟩_N(t) - reference(t)|` for each basis size,
/// with `setup(N)` supplying basis and perturbation.
pub fn convergence_study(
    sizes: &[usize],
    times: &[f64],
    nu: usize,
    setup: impl Fn(usize) -> Result<(BasisSpec, PerturbationSpec)>,
    reference: impl Fn(f64) -> f64,
) -> Result<Vec<ConvergenceRow>> {
    sizes
        .iter()
        .map(|&size| {
            let (basis, perturbation) = setup(size)?;
            let sol = solve_quench(&basis, &perturbation, nu)?;
            let mut max_error: f64 = 0.0;
            for &t in times {
                max_error = max_error.max((expectation_position(&sol, &basis, t)? - reference(t)).abs());
            }
            Ok(ConvergenceRow { size, max_error })
        })
        .collect()
}

/// True when every error is at most its predecessor, treating anything below
/// `floor` as converged (round-off is not ordered).
pub fn is_non_increasing(rows: &[ConvergenceRow], floor: f64) -> bool {
    rows.windows(2).all(|w| w[1].max_error <= w[0].max_error.max(floor))
}
