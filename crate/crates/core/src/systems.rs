//! The deuteron (proton and neutron bound by an oscillator potential) in an
//! electrostatic field along `z` switched on at `t = 0`.
//!
//! With `r = (r₁ - r₂)/√2` and `R = (r₁ + r₂)/√2` the Lagrangian separates
//! into six one-dimensional pieces: oscillators in `x` and `y`, an oscillator
//! with linear potential `(𝓔/√2) z` in `z`, free motion in `X` and `Y`, and a
//! constant force `-𝓔/√2` in `Z`. The evolved state is produced by applying
//! the matching kernels to the ground state
//! `(ω/π)^{3/4} exp(-ω r²/2) exp(i K·R)`.

use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::kernels::{
    apply_kernel_to_gaussian, apply_kernel_to_plane_wave, driven_oscillator_kernel, free_kernel,
    linear_kernel, oscillator_kernel, propagate_gaussian, GaussianState, PlaneWaveState,
};
use crate::{Error, Result};

pub type Vec3 = [f64; 3];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeuteronParams {
    /// Oscillator frequency of the proton–neutron binding.
    pub omega: f64,
    /// Field strength times proton charge, `𝓔`.
    pub field: f64,
    /// Centre-of-mass wave vector `K`.
    pub k_com: Vec3,
}

impl DeuteronParams {
    pub fn new(omega: f64, field: f64, k_com: Vec3) -> Result<Self> {
        if !(omega > 0.0 && omega.is_finite()) {
            return Err(Error::Domain(format!("omega must be positive and finite, got {omega}")));
        }
        if !field.is_finite() || k_com.iter().any(|k| !k.is_finite()) {
            return Err(Error::Domain("field and K must be finite".into()));
        }
        Ok(Self { omega, field, k_com })
    }

    /// Coefficient `g = 𝓔/√2` of the linear potential in `z` and in `Z`.
    pub fn linear_coeff(&self) -> f64 {
        self.field / SQRT_2
    }

    /// Normalisation `A = (ω/π)^{3/4}` of the initial relative wave function.
    pub fn normalization(&self) -> f64 {
        (self.omega / PI).powf(0.75)
    }

    /// Oscillation amplitude `√2 𝓔 / ω²` of the density centre.
    pub fn amplitude(&self) -> f64 {
        SQRT_2 * self.field / (self.omega * self.omega)
    }
}

/// `ψ(r, R, t)` as a product of one-dimensional closed-form factors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvolvedDeuteronState {
    pub relative_x: GaussianState,
    pub relative_y: GaussianState,
    pub relative_z: GaussianState,
    pub com_phases: [PlaneWaveState; 3],
    pub time: f64,
}

impl EvolvedDeuteronState {
    /// Unperturbed ground state; the relative factors are each
    /// `(ω/π)^{1/4} exp(-ω q²/2)`.
    pub fn initial(p: &DeuteronParams) -> Result<Self> {
        let g = GaussianState::ground_state(p.omega)?;
        Ok(Self {
            relative_x: g,
            relative_y: g,
            relative_z: g,
            com_phases: p.k_com.map(PlaneWaveState::new),
            time: 0.0,
        })
    }

    pub fn amplitude(&self, r: Vec3, big_r: Vec3) -> Complex64 {
        let rel = self.relative_x.eval(r[0]) * self.relative_y.eval(r[1]) * self.relative_z.eval(r[2]);
        let com: Complex64 = self.com_phases.iter().zip(big_r).map(|(w, q)| w.eval(q)).product();
        rel * com
    }

    /// `|ψ|²` in the relative coordinates (the plane-wave factors have unit
    /// modulus).
    pub fn relative_density(&self, x: f64, y: f64, z: f64) -> f64 {
        (self.relative_x.eval(x) * self.relative_y.eval(y) * self.relative_z.eval(z)).norm_sqr()
    }

    /// Closed-form `∫ |ψ_rel|² d³r`.
    pub fn norm(&self) -> f64 {
        self.relative_x.norm_sqr() * self.relative_y.norm_sqr() * self.relative_z.norm_sqr()
    }

    /// Location and value of the maximum of the relative density (on the `z`
    /// axis, where the `x` and `y` factors peak).
    pub fn density_peak(&self) -> (f64, f64) {
        let z = self.relative_z.center();
        let x = self.relative_x.center();
        let y = self.relative_y.center();
        (z, self.relative_density(x, y, z))
    }
}

/// `r = (r₁ - r₂)/√2`, `R = (r₁ + r₂)/√2`.
pub fn lab_to_jacobi(r1: Vec3, r2: Vec3) -> (Vec3, Vec3) {
    let r = std::array::from_fn(|i| (r1[i] - r2[i]) / SQRT_2);
    let big_r = std::array::from_fn(|i| (r1[i] + r2[i]) / SQRT_2);
    (r, big_r)
}

/// Inverse of [`lab_to_jacobi`]; the transform is its own inverse.
pub fn jacobi_to_lab(r: Vec3, big_r: Vec3) -> (Vec3, Vec3) {
    let r1 = std::array::from_fn(|i| (big_r[i] + r[i]) / SQRT_2);
    let r2 = std::array::from_fn(|i| (big_r[i] - r[i]) / SQRT_2);
    (r1, r2)
}

/// Proton and neutron `z` coordinates from relative `z` and centre-of-mass `Z`.
pub fn nucleon_positions(z_rel: f64, z_com: f64) -> (f64, f64) {
    ((z_com + z_rel) / SQRT_2, (z_com - z_rel) / SQRT_2)
}

/// Applies the single-step kernels for time `t`. `t = 0` returns the
/// initial state; caustic times are refused.
pub fn evolve_ground_state(p: &DeuteronParams, t: f64) -> Result<EvolvedDeuteronState> {
    let init = EvolvedDeuteronState::initial(p)?;
    if t == 0.0 {
        return Ok(init);
    }
    let osc = oscillator_kernel(p.omega, t)?;
    let driven = driven_oscillator_kernel(p.omega, p.linear_coeff(), t)?;
    let free = free_kernel(t)?;
    let lin = linear_kernel(p.linear_coeff(), t)?;
    Ok(EvolvedDeuteronState {
        relative_x: apply_kernel_to_gaussian(&osc, &init.relative_x)?,
        relative_y: apply_kernel_to_gaussian(&osc, &init.relative_y)?,
        relative_z: apply_kernel_to_gaussian(&driven, &init.relative_z)?,
        com_phases: [
            apply_kernel_to_plane_wave(&free, &init.com_phases[0])?,
            apply_kernel_to_plane_wave(&free, &init.com_phases[1])?,
            apply_kernel_to_plane_wave(&lin, &init.com_phases[2])?,
        ],
        time: t,
    })
}

/// Like [`evolve_ground_state`] but valid at every `t >= 0`: the relative
/// factors are propagated in caustic-free sub-steps. The centre-of-mass
/// factors never have caustics.
pub fn evolve_ground_state_stepped(p: &DeuteronParams, t: f64) -> Result<EvolvedDeuteronState> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::Domain(format!("time must be non-negative, got {t}")));
    }
    let init = EvolvedDeuteronState::initial(p)?;
    if t == 0.0 {
        return Ok(init);
    }
    let osc = |dt| oscillator_kernel(p.omega, dt);
    let driven = |dt| driven_oscillator_kernel(p.omega, p.linear_coeff(), dt);
    let free = free_kernel(t)?;
    let lin = linear_kernel(p.linear_coeff(), t)?;
    Ok(EvolvedDeuteronState {
        relative_x: propagate_gaussian(&init.relative_x, t, p.omega, osc)?,
        relative_y: propagate_gaussian(&init.relative_y, t, p.omega, osc)?,
        relative_z: propagate_gaussian(&init.relative_z, t, p.omega, driven)?,
        com_phases: [
            apply_kernel_to_plane_wave(&free, &init.com_phases[0])?,
            apply_kernel_to_plane_wave(&free, &init.com_phases[1])?,
            apply_kernel_to_plane_wave(&lin, &init.com_phases[2])?,
        ],
        time: t,
    })
}

/// Closed-form relative density
/// `A² exp[-ω(x² + y²)] exp{-ω [z + (√2𝓔/ω²) sin²(ωt/2)]²}`.
pub fn relative_density(p: &DeuteronParams, x: f64, y: f64, z: f64, t: f64) -> f64 {
    let a2 = (p.omega / PI).powf(1.5);
    let dz = z - density_center(p, t);
    a2 * (-p.omega * (x * x + y * y)).exp() * (-p.omega * dz * dz).exp()
}

/// `-(√2𝓔/ω²) sin²(ωt/2)`.
pub fn density_center(p: &DeuteronParams, t: f64) -> f64 {
    -p.amplitude() * (0.5 * p.omega * t).sin().powi(2)
}

/// `2π/ω`.
pub fn oscillation_period(p: &DeuteronParams) -> f64 {
    2.0 * PI / p.omega
}
