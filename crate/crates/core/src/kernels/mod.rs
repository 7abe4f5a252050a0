//! Exact one-dimensional Gaussian propagators.
//!
//! A kernel is kept as the coefficients of
//! `K(x, t; x') = prefactor · exp(a x² + b x x' + c x'² + d x + e x' + f)`,
//! which makes composition and application to Gaussian or plane-wave states
//! exact closed-form operations.
//!
//! The driven-oscillator kernel (oscillator plus constant force `g`) is the
//! oscillator kernel in the shifted coordinate `z + g/ω²` times the phase
//! `exp(+i g² t / (2ω²))` of the constant `g²/(2ω²)` left over in the
//! Lagrangian after completing the square. The `+` sign is the one for which
//! the kernel reduces to the constant-force kernel as `ω -> 0` and agrees with
//! the truncated-eigenbasis evolution.

mod states;

pub use states::{
    apply_kernel_to_gaussian, apply_kernel_to_plane_wave, propagate_gaussian, GaussianState,
    PlaneWaveState,
};

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::numerics::{oscillatory_gaussian_integral, Grid1D};
use crate::{Error, Result};

/// Oscillator kernels are refused when `|sin(ω t)|` falls below this.
pub const CAUSTIC_EPSILON: f64 = 1e-9;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// `K(x, t; x') = prefactor · exp(a x² + b x x' + c x'² + d x + e x' + f)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianKernel {
    pub prefactor: Complex64,
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
    pub e: Complex64,
    pub f: Complex64,
    /// Elapsed time the kernel propagates over.
    pub time: f64,
}

impl GaussianKernel {
    pub fn eval(&self, x: f64, xp: f64) -> Complex64 {
        self.prefactor
            * (self.a * x * x + self.b * x * xp + self.c * xp * xp + self.d * x + self.e * xp + self.f)
                .exp()
    }

    /// Row-major `n × n` samples `K(x_i, x_j)` for [`crate::numerics::apply_kernel_numeric`].
    pub fn sample_on_grid(&self, grid: &Grid1D) -> Vec<Complex64> {
        let xs: Vec<f64> = grid.points().collect();
        let mut out = Vec::with_capacity(xs.len() * xs.len());
        for &x in &xs {
            for &xp in &xs {
                out.push(self.eval(x, xp));
            }
        }
        out
    }

    /// Folds the constant exponent into the prefactor.
    pub fn normalized(&self) -> GaussianKernel {
        GaussianKernel {
            prefactor: self.prefactor * self.f.exp(),
            f: Complex64::new(0.0, 0.0),
            ..*self
        }
    }

    /// Largest coefficient difference, each measured relative to
    /// `max(1, |coefficient|)`, after folding the constants into the
    /// prefactors.
    pub fn coefficient_distance(&self, other: &GaussianKernel) -> f64 {
        let (p, q) = (self.normalized(), other.normalized());
        [
            (p.prefactor, q.prefactor),
            (p.a, q.a),
            (p.b, q.b),
            (p.c, q.c),
            (p.d, q.d),
            (p.e, q.e),
        ]
        .iter()
        .map(|(u, v)| (u - v).norm() / u.norm().max(v.norm()).max(1.0))
        .fold(0.0, f64::max)
    }
}

fn check_time(t: f64) -> Result<()> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("propagation time must be positive and finite, got {t}")))
    }
}

/// `(2π i t)^{-1/2}` on the principal branch.
fn free_prefactor(t: f64) -> Complex64 {
    Complex64::from_polar((2.0 * PI * t).powf(-0.5), -FRAC_PI_4)
}

/// Free particle, `(2πit)^{-1/2} exp[i (x - x')² / 2t]`.
pub fn free_kernel(t: f64) -> Result<GaussianKernel> {
    check_time(t)?;
    let half = I / (2.0 * t);
    Ok(GaussianKernel {
        prefactor: free_prefactor(t),
        a: half,
        b: -I / t,
        c: half,
        d: Complex64::new(0.0, 0.0),
        e: Complex64::new(0.0, 0.0),
        f: Complex64::new(0.0, 0.0),
        time: t,
    })
}

/// Particle in the potential `force_coeff · x` (constant force `-force_coeff`):
/// `(2πit)^{-1/2} exp{i[(x-x')²/2t - (g t/2)(x + x') - g² t³/24]}`.
pub fn linear_kernel(force_coeff: f64, t: f64) -> Result<GaussianKernel> {
    if !force_coeff.is_finite() {
        return Err(Error::Domain(format!("force coefficient must be finite, got {force_coeff}")));
    }
    let mut k = free_kernel(t)?;
    let lin = -I * (force_coeff * t / 2.0);
    k.d = lin;
    k.e = lin;
    k.f = -I * (force_coeff * force_coeff * t.powi(3) / 24.0);
    Ok(k)
}

fn check_oscillator(omega: f64, t: f64) -> Result<f64> {
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(Error::Domain(format!("oscillator frequency must be positive, got {omega}")));
    }
    check_time(t)?;
    let sin = (omega * t).sin();
    if sin.abs() < CAUSTIC_EPSILON {
        return Err(Error::Caustic { omega, t, sin_abs: sin.abs(), threshold: CAUSTIC_EPSILON });
    }
    Ok(sin)
}

/// Harmonic oscillator (Mehler kernel),
/// `[ω/(2πi sin ωt)]^{1/2} exp{(iω/2)[(x² + x'²) cot ωt - 2 x x'/sin ωt]}`.
///
/// The square root carries the Maslov phase `exp(-iπ/2)` for every caustic
/// passed, so the kernel is the true propagator on each interval between
/// caustics, not just on `0 < ωt < π`.
pub fn oscillator_kernel(omega: f64, t: f64) -> Result<GaussianKernel> {
    let sin = check_oscillator(omega, t)?;
    let cos = (omega * t).cos();
    let caustics_passed = (omega * t / PI).floor();
    let prefactor = Complex64::from_polar(
        (omega / (2.0 * PI * sin.abs())).sqrt(),
        -FRAC_PI_4 - FRAC_PI_2 * caustics_passed,
    );
    let diag = I * (omega * cos / (2.0 * sin));
    Ok(GaussianKernel {
        prefactor,
        a: diag,
        b: -I * (omega / sin),
        c: diag,
        d: Complex64::new(0.0, 0.0),
        e: Complex64::new(0.0, 0.0),
        f: Complex64::new(0.0, 0.0),
        time: t,
    })
}

/// `x - tan x`, with a series near zero where the difference cancels.
fn x_minus_tan(x: f64) -> f64 {
    if x.abs() < 0.05 {
        let x2 = x * x;
        -x * x2 * (1.0 / 3.0 + x2 * (2.0 / 15.0 + x2 * (17.0 / 315.0 + x2 * 62.0 / 2835.0)))
    } else {
        x - x.tan()
    }
}

/// Oscillator with an added linear potential `linear_coeff · z`:
/// Lagrangian `½(ż² - ω² z²) - g z`.
///
/// Built as the oscillator kernel in `z̄ = z + g/ω²` times
/// `exp(i g² t / (2ω²))`. The cross terms are written through
/// `tan(ωt/2)` so the `ω -> 0` limit stays accurate.
pub fn driven_oscillator_kernel(omega: f64, linear_coeff: f64, t: f64) -> Result<GaussianKernel> {
    if !linear_coeff.is_finite() {
        return Err(Error::Domain(format!("linear coefficient must be finite, got {linear_coeff}")));
    }
    let mut k = oscillator_kernel(omega, t)?;
    if linear_coeff == 0.0 {
        return Ok(k);
    }
    let g = linear_coeff;
    let half_angle = 0.5 * omega * t;
    // 2a + b = a + b + c = -iω tan(ωt/2); shift s = g/ω²
    let lin = -I * (g * half_angle.tan() / omega);
    k.d = lin;
    k.e = lin;
    k.f = I * (g * g / omega.powi(3) * x_minus_tan(half_angle));
    Ok(k)
}

/// `∫ K₂(x, t₂; y) K₁(y, t₁; x') dy`: propagate with `first`, then `second`.
pub fn compose_kernels(first: &GaussianKernel, second: &GaussianKernel) -> Result<GaussianKernel> {
    let beta = -(second.c + first.a);
    let s = second.e + first.d;
    // prefactor · exp(s² / 4β) from the y integral
    let integral = oscillatory_gaussian_integral(beta, s)?;
    let two_beta = 2.0 * beta;
    let four_beta = 4.0 * beta;
    Ok(GaussianKernel {
        prefactor: second.prefactor * first.prefactor * integral,
        a: second.a + second.b * second.b / four_beta,
        b: second.b * first.b / two_beta,
        c: first.c + first.b * first.b / four_beta,
        d: second.d + second.b * s / two_beta,
        e: first.e + first.b * s / two_beta,
        f: second.f + first.f,
        time: first.time + second.time,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_kernel_at_origin() {
        let k = free_kernel(1.0).unwrap();
        let v = k.eval(0.0, 0.0);
        assert!((v.norm() - (2.0 * PI).powf(-0.5)).abs() < 1e-15);
        assert!((v.arg() + FRAC_PI_4).abs() < 1e-15);
        let v = k.eval(1.0, 0.0);
        assert!((v.norm() - (2.0 * PI).powf(-0.5)).abs() < 1e-15);
        assert!((v.arg() - (0.5 - FRAC_PI_4)).abs() < 1e-15);
        // principal branch of (2πi)^{-1/2}
        let principal = Complex64::new(0.0, 2.0 * PI).sqrt().inv();
        assert!((k.prefactor - principal).norm() < 1e-15);
    }

    #[test]
    fn rejects_bad_times() {
        assert!(matches!(free_kernel(0.0), Err(Error::Domain(_))));
        assert!(matches!(free_kernel(-1.0), Err(Error::Domain(_))));
        assert!(matches!(linear_kernel(1.0, 0.0), Err(Error::Domain(_))));
        assert!(matches!(oscillator_kernel(0.0, 1.0), Err(Error::Domain(_))));
        assert!(matches!(oscillator_kernel(1.0, -1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn caustics_are_refused() {
        assert!(matches!(oscillator_kernel(1.0, PI), Err(Error::Caustic { .. })));
        assert!(matches!(oscillator_kernel(2.0, PI), Err(Error::Caustic { .. })));
        assert!(matches!(driven_oscillator_kernel(1.0, 0.1, 2.0 * PI), Err(Error::Caustic { .. })));
        assert!(oscillator_kernel(1.0, PI + 1e-6).is_ok());
    }

    #[test]
    fn oscillator_quarter_period() {
        let k = oscillator_kernel(1.0, FRAC_PI_2).unwrap();
        assert!(k.a.norm() < 1e-16 && k.c.norm() < 1e-16);
        // exponent -(ω/2i)(-2 x x'/sin ωt) = -i ω x x'
        assert!((k.b - Complex64::new(0.0, -1.0)).norm() < 1e-15);
        let principal = Complex64::new(0.0, 2.0 * PI).sqrt().inv();
        assert!((k.prefactor - principal).norm() < 1e-15);
    }

    #[test]
    fn principal_branch_before_first_caustic() {
        for t in [0.1, 1.0, 2.5, 3.0] {
            let k = oscillator_kernel(1.0, t).unwrap();
            let principal = (Complex64::from(1.0) / (Complex64::new(0.0, 2.0 * PI * t.sin()))).sqrt();
            assert!((k.prefactor - principal).norm() < 1e-14, "t = {t}");
        }
    }

    #[test]
    fn linear_kernel_constant_phase() {
        let e_field = 1.0;
        let k = linear_kernel(e_field / 2f64.sqrt(), 1.0).unwrap();
        let free = free_kernel(1.0).unwrap();
        let ratio = k.eval(0.0, 0.0) / free.eval(0.0, 0.0);
        assert!((ratio.arg() + 1.0 / 48.0).abs() < 1e-15);
        assert!((ratio.norm() - 1.0).abs() < 1e-15);
        assert_eq!(linear_kernel(0.0, 0.7).unwrap(), free_kernel(0.7).unwrap());
    }

    #[test]
    fn driven_reduces_to_oscillator() {
        assert_eq!(driven_oscillator_kernel(1.3, 0.0, 0.8).unwrap(), oscillator_kernel(1.3, 0.8).unwrap());
    }

    #[test]
    fn driven_matches_shifted_oscillator() {
        // direct evaluation of the defining construction at moderate ω
        let (omega, g, t) = (1.2, 0.35, 0.9);
        let k = driven_oscillator_kernel(omega, g, t).unwrap();
        let osc = oscillator_kernel(omega, t).unwrap();
        let shift = g / (omega * omega);
        let phase = Complex64::from_polar(1.0, g * g * t / (2.0 * omega * omega));
        for (x, xp) in [(0.0, 0.0), (0.7, -1.1), (-2.0, 0.4)] {
            let expected = phase * osc.eval(x + shift, xp + shift);
            assert!((k.eval(x, xp) - expected).norm() < 1e-13);
        }
    }

    #[test]
    fn x_minus_tan_branches_agree() {
        for x in [0.0499, 0.05, 0.0501] {
            let series = {
                let x2 = x * x;
                -x * x2 * (1.0 / 3.0 + x2 * (2.0 / 15.0 + x2 * (17.0 / 315.0 + x2 * 62.0 / 2835.0)))
            };
            assert!(((x - f64::tan(x)) - series).abs() < 1e-15);
        }
        assert_eq!(x_minus_tan(0.0), 0.0);
    }

    #[test]
    fn free_semigroup() {
        let k = compose_kernels(&free_kernel(0.4).unwrap(), &free_kernel(0.6).unwrap()).unwrap();
        assert!(k.coefficient_distance(&free_kernel(1.0).unwrap()) < 1e-12);
        assert_eq!(k.time, 1.0);
        let k = compose_kernels(&free_kernel(0.3).unwrap(), &free_kernel(0.7).unwrap()).unwrap();
        assert!(k.coefficient_distance(&free_kernel(1.0).unwrap()) < 1e-12);
    }

    #[test]
    fn oscillator_semigroup_across_caustic() {
        let k = compose_kernels(&oscillator_kernel(1.0, 2.0).unwrap(), &oscillator_kernel(1.0, 2.5).unwrap())
            .unwrap();
        assert!(k.coefficient_distance(&oscillator_kernel(1.0, 4.5).unwrap()) < 1e-11);
    }
}
