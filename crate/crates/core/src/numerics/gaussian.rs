use std::f64::consts::PI;

use num_complex::Complex64;

use super::ensure_finite;
use crate::{Error, Result};

/// Closed form of `∫ exp(-beta x² + alpha x) dx` over the real line,
/// `sqrt(pi/beta) * exp(alpha²/(4 beta))` on the principal branch.
///
/// The integral converges absolutely only for `Re(beta) > 0`; anything else is
/// a domain error.
pub fn gaussian_integral(beta: Complex64, alpha: Complex64) -> Result<Complex64> {
    if !(beta.re > 0.0) || !beta.im.is_finite() {
        return Err(Error::Domain(format!(
            "gaussian integral needs Re(beta) > 0, got beta = {beta}"
        )));
    }
    ensure_finite(alpha, "alpha")?;
    closed_form(beta, alpha)
}

/// Same closed form, also admitting the oscillatory boundary `Re(beta) = 0`
/// (`beta != 0`), where the integral exists as the Fresnel-type limit
/// `Re(beta) -> 0+`.
///
/// Kernel composition and plane-wave application land exactly on that
/// boundary. A real part that is negative only by rounding
/// (`|Re beta| <= 1e-13 |beta|`) is clamped to zero.
pub fn oscillatory_gaussian_integral(beta: Complex64, alpha: Complex64) -> Result<Complex64> {
    let scale = beta.norm();
    if !(scale > 0.0) || !scale.is_finite() {
        return Err(Error::Domain(format!(
            "oscillatory gaussian integral needs finite nonzero beta, got {beta}"
        )));
    }
    if beta.re < -1e-13 * scale {
        return Err(Error::Domain(format!(
            "oscillatory gaussian integral needs Re(beta) >= 0, got beta = {beta}"
        )));
    }
    ensure_finite(alpha, "alpha")?;
    closed_form(Complex64::new(beta.re.max(0.0), beta.im), alpha)
}

fn closed_form(beta: Complex64, alpha: Complex64) -> Result<Complex64> {
    let value = (Complex64::from(PI) / beta).sqrt() * (alpha * alpha / (4.0 * beta)).exp();
    ensure_finite(value, "gaussian integral")
}
