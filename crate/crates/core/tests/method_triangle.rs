//! Spectral, closed-form kernel and brute-force quadrature evolutions of the
//! oscillator ground state after a linear potential is switched on.

use std::f64::consts::{PI, SQRT_2};

use transient_core::kernels::{apply_kernel_to_gaussian, driven_oscillator_kernel, propagate_gaussian, GaussianState};
use transient_core::numerics::{apply_kernel_numeric, Grid1D};
use transient_core::spectral::{
    expectation_position, solve_quench, survival_probability, wavefunction_on_grid, BasisSpec,
    PerturbationSpec,
};
use transient_core::Complex64;

const OMEGA: f64 = 1.0;
const FIELD: f64 = 0.1;

fn slope() -> f64 {
    FIELD / SQRT_2
}

fn exact_state(t: f64) -> GaussianState {
    let g = GaussianState::ground_state(OMEGA).unwrap();
    propagate_gaussian(&g, t, OMEGA, |dt| driven_oscillator_kernel(OMEGA, slope(), dt)).unwrap()
}

fn times() -> Vec<f64> {
    (0..=40).map(|j| 4.0 * PI / OMEGA * j as f64 / 40.0).collect()
}

#[test]
fn spectral_matches_kernel_evolution() {
    let basis = BasisSpec::oscillator(OMEGA, 60).unwrap();
    let sol = solve_quench(&basis, &PerturbationSpec::linear(slope(), basis.default_grid()), 0).unwrap();
    let ground = GaussianState::ground_state(OMEGA).unwrap();
    let grid = Grid1D::symmetric(10.0, 2001).unwrap();
    let (mut e_center, mut e_surv, mut e_wave) = (0.0f64, 0.0f64, 0.0f64);
    for t in times() {
        let exact = exact_state(t);
        e_center = e_center.max((expectation_position(&sol, &basis, t).unwrap() - exact.center()).abs());
        e_surv = e_surv.max((survival_probability(&sol, t) - ground.overlap(&exact).norm_sqr()).abs());
        let psi = wavefunction_on_grid(&sol, &basis, t, &grid).unwrap();
        for (x, v) in grid.points().zip(&psi) {
            e_wave = e_wave.max((v - exact.eval(x)).norm());
        }
    }
    println!("center {e_center:.3e} survival {e_surv:.3e} wave {e_wave:.3e}");
    assert!(e_center < 1e-6);
    assert!(e_surv < 1e-6);
    assert!(e_wave < 1e-5);
}

#[test]
fn quadrature_matches_kernel_evolution() {
    let grid = Grid1D::symmetric(10.0, 2001).unwrap();
    let ground = GaussianState::ground_state(OMEGA).unwrap();
    let samples: Vec<Complex64> = grid.sample(|x| ground.eval(x));
    let mut worst = 0.0f64;
    for j in 0..8 {
        // keep |sin ωt| away from zero so the sampled kernel is resolved
        let t = 4.0 * PI / OMEGA * (j as f64 + 0.5) / 8.0;
        let k = driven_oscillator_kernel(OMEGA, slope(), t).unwrap();
        let numeric = apply_kernel_numeric(&k.sample_on_grid(&grid), &samples, &grid).unwrap();
        let exact = apply_kernel_to_gaussian(&k, &ground).unwrap();
        for (x, v) in grid.points().zip(&numeric) {
            worst = worst.max((v - exact.eval(x)).norm());
        }
    }
    println!("quadrature {worst:.3e}");
    assert!(worst < 1e-6);
}
