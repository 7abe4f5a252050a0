use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::GaussianKernel;
use crate::numerics::{gaussian_integral, oscillatory_gaussian_integral};
use crate::{Error, Result};

/// `ψ(x) = amplitude · exp(-gamma x² + mu x)` with `Re(gamma) > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianState {
    pub amplitude: Complex64,
    pub gamma: Complex64,
    pub mu: Complex64,
}

impl GaussianState {
    pub fn new(amplitude: Complex64, gamma: Complex64, mu: Complex64) -> Result<Self> {
        if !(gamma.re > 0.0) {
            return Err(Error::Domain(format!("gaussian state needs Re(gamma) > 0, got {gamma}")));
        }
        for (z, name) in [(amplitude, "amplitude"), (gamma, "gamma"), (mu, "mu")] {
            crate::numerics::ensure_finite(z, name)?;
        }
        Ok(Self { amplitude, gamma, mu })
    }

    /// Normalised oscillator ground state `(ω/π)^{1/4} exp(-ω x²/2)`.
    pub fn ground_state(omega: f64) -> Result<Self> {
        Self::displaced_ground_state(omega, 0.0)
    }

    /// Normalised ground state centred at `z0`, i.e. `mu = ω z0`.
    pub fn displaced_ground_state(omega: f64, z0: f64) -> Result<Self> {
        if !(omega > 0.0) {
            return Err(Error::Domain(format!("oscillator frequency must be positive, got {omega}")));
        }
        Self::new(
            Complex64::from((omega / PI).powf(0.25) * (-0.5 * omega * z0 * z0).exp()),
            Complex64::from(0.5 * omega),
            Complex64::from(omega * z0),
        )
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        self.amplitude * (-self.gamma * x * x + self.mu * x).exp()
    }

    /// `∫ |ψ|² dx` in closed form.
    pub fn norm_sqr(&self) -> f64 {
        let width = 2.0 * self.gamma.re;
        let shift = 2.0 * self.mu.re;
        // `Re(gamma) > 0` is an invariant, so the integral always converges
        self.amplitude.norm_sqr()
            * gaussian_integral(Complex64::from(width), Complex64::from(shift))
                .map(|v| v.re)
                .unwrap_or(f64::NAN)
    }

    /// Mean position `⟨x⟩`.
    pub fn center(&self) -> f64 {
        self.mu.re / (2.0 * self.gamma.re)
    }

    /// `⟨self|other⟩ = ∫ conj(ψ_self) ψ_other dx`.
    pub fn overlap(&self, other: &GaussianState) -> Complex64 {
        let beta = self.gamma.conj() + other.gamma;
        let alpha = self.mu.conj() + other.mu;
        self.amplitude.conj()
            * other.amplitude
            * gaussian_integral(beta, alpha).unwrap_or(Complex64::new(f64::NAN, f64::NAN))
    }

    pub fn scaled(&self, factor: Complex64) -> GaussianState {
        GaussianState { amplitude: self.amplitude * factor, ..*self }
    }
}

/// `phase · exp(i k x)` with `|phase| = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlaneWaveState {
    pub k: f64,
    pub phase: Complex64,
}

impl PlaneWaveState {
    pub fn new(k: f64) -> Self {
        Self { k, phase: Complex64::new(1.0, 0.0) }
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        self.phase * Complex64::from_polar(1.0, self.k * x)
    }
}

/// Exact `∫ K(x, t; x') ψ(x') dx'` for a Gaussian `ψ`.
///
/// Completing the square in `x'` leaves `beta = gamma - c` and
/// `alpha = b x + e + mu`; expanding `alpha²/(4 beta)` in `x` gives the new
/// coefficients.
pub fn apply_kernel_to_gaussian(k: &GaussianKernel, s: &GaussianState) -> Result<GaussianState> {
    let beta = s.gamma - k.c;
    let alpha0 = k.e + s.mu;
    let constant = gaussian_integral(beta, alpha0)?;
    let gamma = -(k.a + k.b * k.b / (4.0 * beta));
    let mu = k.d + k.b * alpha0 / (2.0 * beta);
    GaussianState::new(s.amplitude * k.prefactor * constant * k.f.exp(), gamma, mu)
}

/// Exact application to a plane wave.
///
/// Only kernels whose result is again a plane wave are accepted (free and
/// constant-force kernels); the oscillator family maps a plane wave to a
/// chirped wave and is rejected as unsupported.
pub fn apply_kernel_to_plane_wave(k: &GaussianKernel, s: &PlaneWaveState) -> Result<PlaneWaveState> {
    let unsupported = |why: &str| Error::UnsupportedKernel(format!("plane-wave closure fails: {why}"));
    let beta = -k.c;
    let alpha0 = k.e + Complex64::new(0.0, s.k);
    let constant = oscillatory_gaussian_integral(beta, alpha0)
        .map_err(|_| unsupported("x' integral is not oscillatory-convergent"))?;
    let scale = k.a.norm().max(k.b.norm()).max(k.c.norm());
    let quadratic = k.a + k.b * k.b / (4.0 * beta);
    if quadratic.norm() > 1e-12 * scale {
        return Err(unsupported("output carries an x² term"));
    }
    let linear = k.d + k.b * alpha0 / (2.0 * beta);
    if linear.re.abs() > 1e-12 * linear.norm().max(1.0) {
        return Err(unsupported("output wave number is not real"));
    }
    let factor = k.prefactor * constant * k.f.exp();
    if (factor.norm() - 1.0).abs() > 1e-10 {
        return Err(unsupported("output amplitude is not unimodular"));
    }
    Ok(PlaneWaveState { k: linear.im, phase: s.phase * factor })
}

/// Propagates a Gaussian over `t` with kernels from `build`, splitting the
/// interval into equal sub-steps whenever a single step would land near a
/// caustic of frequency `omega`.
///
/// State-level composition is exact, so this reaches caustic times (and
/// `t = 0`) that the single-step kernel cannot.
pub fn propagate_gaussian(
    s: &GaussianState,
    t: f64,
    omega: f64,
    build: impl Fn(f64) -> Result<GaussianKernel>,
) -> Result<GaussianState> {
    if t == 0.0 {
        return Ok(*s);
    }
    // only ωτ near a nonzero multiple of π is singular; short steps are fine
    let steps = (1..=64)
        .find(|&m| {
            let phase = omega * t / m as f64;
            phase.abs() <= std::f64::consts::FRAC_PI_2 || phase.sin().abs() >= 1e-3
        })
        .ok_or_else(|| Error::Domain(format!("no caustic-free split found for t = {t}")))?;
    let kernel = build(t / steps as f64)?;
    let mut state = *s;
    for _ in 0..steps {
        state = apply_kernel_to_gaussian(&kernel, &state)?;
    }
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::{
        driven_oscillator_kernel, free_kernel, linear_kernel, oscillator_kernel,
    };

    #[test]
    fn ground_state_picks_up_half_quantum_phase() {
        let g = GaussianState::ground_state(1.0).unwrap();
        for t in [0.3, 0.7, 1.9] {
            let out = apply_kernel_to_gaussian(&oscillator_kernel(1.0, t).unwrap(), &g).unwrap();
            let expected = g.amplitude * Complex64::from_polar(1.0, -t / 2.0);
            assert!((out.gamma - g.gamma).norm() < 1e-14, "t = {t}");
            assert!(out.mu.norm() < 1e-14);
            assert!((out.amplitude - expected).norm() < 1e-14);
        }
    }

    #[test]
    fn short_times_propagate_in_one_step() {
        let g = GaussianState::displaced_ground_state(1.0, 0.4).unwrap();
        for t in [1e-6, 1e-3, 0.5] {
            let stepped = propagate_gaussian(&g, t, 1.0, |dt| oscillator_kernel(1.0, dt)).unwrap();
            let direct = apply_kernel_to_gaussian(&oscillator_kernel(1.0, t).unwrap(), &g).unwrap();
            assert_eq!(stepped, direct, "t = {t}");
        }
    }

    #[test]
    fn ground_state_phase_beyond_first_caustic() {
        let g = GaussianState::ground_state(2.0).unwrap();
        for t in [2.0, 4.0, 5.5] {
            let out = apply_kernel_to_gaussian(&oscillator_kernel(2.0, t).unwrap(), &g).unwrap();
            let expected = g.amplitude * Complex64::from_polar(1.0, -t);
            assert!((out.amplitude - expected).norm() < 1e-12, "t = {t}");
        }
    }

    #[test]
    fn free_evolution_keeps_norm() {
        let g = GaussianState::new(Complex64::new(0.3, 0.4), Complex64::new(0.7, 0.2), Complex64::new(0.1, -0.5))
            .unwrap();
        let g = g.scaled(Complex64::from(g.norm_sqr().sqrt().recip()));
        assert!((g.norm_sqr() - 1.0).abs() < 1e-14);
        let out = apply_kernel_to_gaussian(&free_kernel(2.3).unwrap(), &g).unwrap();
        assert!((out.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn displaced_state_follows_classical_orbit() {
        let g = GaussianState::displaced_ground_state(1.0, 0.5).unwrap();
        let out = apply_kernel_to_gaussian(&oscillator_kernel(1.0, 1.0).unwrap(), &g).unwrap();
        assert!((out.center() - 0.5 * 1f64.cos()).abs() < 1e-14);
        assert!((0.5 * 1f64.cos() - 0.2702).abs() < 1e-4);
    }

    #[test]
    fn driven_ground_state_center() {
        let e_field: f64 = 0.1;
        let g = GaussianState::ground_state(1.0).unwrap();
        for t in [0.5, 1.7, 2.9] {
            let k = driven_oscillator_kernel(1.0, e_field / 2f64.sqrt(), t).unwrap();
            let out = apply_kernel_to_gaussian(&k, &g).unwrap();
            let expected = -2f64.sqrt() * e_field * (t / 2.0).sin().powi(2);
            assert!((out.center() - expected).abs() < 1e-14);
            // unit-width density: Re(gamma) stays ω/2
            assert!((out.gamma.re - 0.5).abs() < 1e-14);
        }
    }

    #[test]
    fn plane_wave_free_phase() {
        let kx = 1.3;
        let t = 0.8;
        let out = apply_kernel_to_plane_wave(&free_kernel(t).unwrap(), &PlaneWaveState::new(kx)).unwrap();
        assert!((out.k - kx).abs() < 1e-14);
        assert!((out.phase - Complex64::from_polar(1.0, -kx * kx * t / 2.0)).norm() < 1e-14);
    }

    #[test]
    fn plane_wave_linear_reduces_to_free() {
        let s = PlaneWaveState::new(0.9);
        let a = apply_kernel_to_plane_wave(&linear_kernel(0.0, 1.1).unwrap(), &s).unwrap();
        let b = apply_kernel_to_plane_wave(&free_kernel(1.1).unwrap(), &s).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn plane_wave_linear_shifts_momentum() {
        let (k, g, t) = (1.0, 0.5, 1.0);
        let out = apply_kernel_to_plane_wave(&linear_kernel(g, t).unwrap(), &PlaneWaveState::new(k)).unwrap();
        assert!((out.k - (k - g * t)).abs() < 1e-14);
        assert!(((out.phase.norm()) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn plane_wave_rejects_oscillator() {
        let s = PlaneWaveState::new(1.0);
        for t in [0.5, std::f64::consts::FRAC_PI_2] {
            assert!(matches!(
                apply_kernel_to_plane_wave(&oscillator_kernel(1.0, t).unwrap(), &s),
                Err(Error::UnsupportedKernel(_))
            ));
        }
    }

    #[test]
    fn state_validation() {
        let z = Complex64::new(0.0, 0.0);
        assert!(GaussianState::new(z, Complex64::new(0.0, 1.0), z).is_err());
        assert!(GaussianState::ground_state(-1.0).is_err());
    }

    #[test]
    fn split_propagation_reaches_caustic() {
        let g = GaussianState::ground_state(1.0).unwrap();
        let out = propagate_gaussian(&g, PI, 1.0, |dt| oscillator_kernel(1.0, dt)).unwrap();
        assert!((out.amplitude - g.amplitude * Complex64::from_polar(1.0, -PI / 2.0)).norm() < 1e-13);
        assert_eq!(propagate_gaussian(&g, 0.0, 1.0, |dt| oscillator_kernel(1.0, dt)).unwrap(), g);
    }
}
