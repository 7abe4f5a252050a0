//! Self-contained invariant suite behind the `kernels-check` CLI mode.
//!
//! Each check measures a worst-case error over a fixed deterministic sample
//! and compares it against its tolerance.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::kernels::{
    apply_kernel_to_gaussian, compose_kernels, driven_oscillator_kernel, free_kernel,
    linear_kernel, oscillator_kernel, GaussianKernel, GaussianState,
};
use crate::numerics::{apply_kernel_numeric, eigensolve_symmetric, fresnel, Grid1D, SymmetricMatrix};
use crate::Result;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl CheckOutcome {
    fn new(name: &str, value: f64, tolerance: f64) -> Self {
        Self { name: name.to_string(), value, tolerance, passed: value <= tolerance }
    }
}

/// Deterministic points in `[lo, hi)` from the golden-ratio sequence.
fn spread(count: usize, lo: f64, hi: f64) -> impl DoubleEndedIterator<Item = f64> {
    const PHI: f64 = 0.618_033_988_749_894_9;
    (1..=count).map(move |i| lo + (hi - lo) * (i as f64 * PHI).fract())
}

fn non_caustic(omega: f64, t: f64) -> bool {
    (omega * t).sin().abs() > 0.05
}

fn stationary_phase() -> Result<f64> {
    let mut worst: f64 = 0.0;
    for (omega, t) in spread(10, 0.5, 2.5).zip(spread(10, 0.05, 6.0).rev()) {
        if !non_caustic(omega, t) {
            continue;
        }
        let g = GaussianState::ground_state(omega)?;
        let out = apply_kernel_to_gaussian(&oscillator_kernel(omega, t)?, &g)?;
        let expected = g.amplitude * Complex64::from_polar(1.0, -0.5 * omega * t);
        worst = worst
            .max((out.amplitude - expected).norm())
            .max((out.gamma - g.gamma).norm())
            .max((out.mu - g.mu).norm());
    }
    Ok(worst)
}

fn semigroup() -> Result<f64> {
    type Builder = Box<dyn Fn(f64) -> Result<GaussianKernel>>;
    let families: Vec<(f64, Builder)> = vec![
        (0.0, Box::new(free_kernel)),
        (0.0, Box::new(|t| linear_kernel(0.3, t))),
        (1.0, Box::new(|t| oscillator_kernel(1.0, t))),
        (1.3, Box::new(|t| driven_oscillator_kernel(1.3, 0.4, t))),
    ];
    let mut worst: f64 = 0.0;
    for (omega, build) in &families {
        for (t1, t2) in spread(6, 0.1, 2.0).zip(spread(6, 0.2, 2.5).map(|u| 2.7 - u)) {
            if *omega > 0.0 && !(non_caustic(*omega, t1) && non_caustic(*omega, t2) && non_caustic(*omega, t1 + t2)) {
                continue;
            }
            let composed = compose_kernels(&build(t1)?, &build(t2)?)?;
            worst = worst.max(composed.coefficient_distance(&build(t1 + t2)?));
        }
    }
    Ok(worst)
}

fn test_states() -> Result<Vec<GaussianState>> {
    spread(6, 0.2, 2.0)
        .zip(spread(6, -1.0, 1.0))
        .map(|(w, m)| {
            let s = GaussianState::new(Complex64::new(1.0, 0.2), Complex64::new(w, 0.3 * m), Complex64::new(m, -0.5 * w))?;
            Ok(s.scaled(Complex64::from(s.norm_sqr().sqrt().recip())))
        })
        .collect()
}

fn unitarity() -> Result<f64> {
    let kernels = [
        free_kernel(1.7)?,
        linear_kernel(0.5, 0.9)?,
        oscillator_kernel(1.0, 2.2)?,
        driven_oscillator_kernel(0.8, 0.3, 4.4)?,
    ];
    let mut worst: f64 = 0.0;
    for s in test_states()? {
        for k in &kernels {
            worst = worst.max((apply_kernel_to_gaussian(k, &s)?.norm_sqr() - 1.0).abs());
        }
    }
    Ok(worst)
}

fn delta_limit() -> Result<f64> {
    let t = 1e-6;
    let kernels = [
        free_kernel(t)?,
        linear_kernel(0.5, t)?,
        oscillator_kernel(1.0, t)?,
        driven_oscillator_kernel(1.0, 0.5, t)?,
    ];
    let s = GaussianState::new(Complex64::from(1.0), Complex64::from(0.5), Complex64::from(0.0))?;
    let grid = Grid1D::symmetric(5.0, 101)?;
    let mut worst: f64 = 0.0;
    for k in &kernels {
        let out = apply_kernel_to_gaussian(k, &s)?;
        for x in grid.points() {
            worst = worst.max((out.eval(x) - s.eval(x)).norm());
        }
    }
    Ok(worst)
}

fn small_omega_limit() -> Result<f64> {
    let (omega, t) = (1e-4, 1.0);
    let osc = oscillator_kernel(omega, t)?.coefficient_distance(&free_kernel(t)?);
    let driven = driven_oscillator_kernel(omega, 0.3, t)?.coefficient_distance(&linear_kernel(0.3, t)?);
    Ok(osc.max(driven))
}

fn quadrature_equivalence() -> Result<f64> {
    let grid = Grid1D::symmetric(10.0, 2001)?;
    let g = GaussianState::ground_state(1.0)?;
    let samples: Vec<Complex64> = grid.sample(|x| g.eval(x));
    let k = oscillator_kernel(1.0, 0.7)?;
    let numeric = apply_kernel_numeric(&k.sample_on_grid(&grid), &samples, &grid)?;
    let exact = apply_kernel_to_gaussian(&k, &g)?;
    Ok(grid.points().zip(&numeric).map(|(x, v)| (v - exact.eval(x)).norm()).fold(0.0, f64::max))
}

fn fresnel_derivative() -> f64 {
    let h = 1e-5;
    spread(40, -4.0, 4.0)
        .map(|u| {
            let (cp, sp) = fresnel(u + h);
            let (cm, sm) = fresnel(u - h);
            let arg = 0.5 * PI * u * u;
            ((cp - cm) / (2.0 * h) - arg.cos()).abs().max(((sp - sm) / (2.0 * h) - arg.sin()).abs())
        })
        .fold(0.0, f64::max)
}

fn eigen_reconstruction() -> Result<f64> {
    let mut worst: f64 = 0.0;
    for dim in [1usize, 2, 7, 32, 64] {
        let mut vals = spread(dim * dim, -1.0, 1.0);
        let m = SymmetricMatrix::from_upper(dim, |_, _| vals.next().unwrap_or(0.0));
        let e = eigensolve_symmetric(&m)?;
        let scale = m.max_abs().max(f64::MIN_POSITIVE);
        for i in 0..dim {
            for j in 0..dim {
                let r: f64 = (0..dim).map(|k| e.component(i, k) * e.values[k] * e.component(j, k)).sum();
                worst = worst.max((r - m.get(i, j)).abs() / scale);
            }
        }
    }
    Ok(worst)
}

/// Runs every invariant; numerical failures inside a check propagate.
pub fn run_property_suite() -> Result<Vec<CheckOutcome>> {
    Ok(vec![
        CheckOutcome::new("stationary_phase", stationary_phase()?, 1e-10),
        CheckOutcome::new("semigroup", semigroup()?, 1e-10),
        CheckOutcome::new("unitarity", unitarity()?, 1e-9),
        CheckOutcome::new("delta_limit", delta_limit()?, 1e-4),
        CheckOutcome::new("small_omega_limit", small_omega_limit()?, 1e-6),
        CheckOutcome::new("quadrature_equivalence", quadrature_equivalence()?, 1e-6),
        CheckOutcome::new("fresnel_derivative", fresnel_derivative(), 1e-8),
        CheckOutcome::new("eigen_reconstruction", eigen_reconstruction()?, 1e-10),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_is_green() {
        for c in run_property_suite().unwrap() {
            assert!(c.passed, "{} = {:e} > {:e}", c.name, c.value, c.tolerance);
        }
    }
}
