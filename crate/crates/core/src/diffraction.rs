//! Diffraction in time: a plane wave `exp(ikx)` confined to `x < 0` by a
//! shutter at the origin that opens at `t = 0`.
//!
//! The transient amplitude is
//! `M(x, k, t) = ∫_{-∞}^0 K_free(x, t; x') exp(ikx') dx'`, which reduces to
//! Fresnel integrals of `u0 = (kt - x)/√(πt)`.
//!
//! Normalisation: substituting `x' + kt - x = √(πt) u` turns the free-particle
//! prefactor `(2πit)^{-1/2}` into `e^{-iπ/4}/√2`, so
//! `|M|² = ½ {[½ + C(u0)]² + [½ + S(u0)]²}`, which tends to the classical
//! density 1 far behind the wavefront. The same brace without the `½`
//! ([`unnormalized_brace`]) tends to 2.

use std::f64::consts::{FRAC_PI_4, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::numerics::fresnel;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShutterQuery {
    pub x: f64,
    pub k: f64,
    pub t: f64,
}

impl ShutterQuery {
    pub fn new(x: f64, k: f64, t: f64) -> Result<Self> {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::Domain(format!("shutter time must be positive, got {t}")));
        }
        if !(x.is_finite() && k.is_finite()) {
            return Err(Error::Domain("shutter position and wave number must be finite".into()));
        }
        Ok(Self { x, k, t })
    }
}

/// `(πt)^{-1/2} (kt - x)`: positive behind the classical wavefront `x = kt`.
pub fn u0(q: &ShutterQuery) -> f64 {
    (q.k * q.t - q.x) / (PI * q.t).sqrt()
}

/// `M(x, k, t) = (e^{-iπ/4}/√2) exp[i(kx - k²t/2)] {[½ + C(u0)] + i[½ + S(u0)]}`.
pub fn shutter_amplitude(q: &ShutterQuery) -> Complex64 {
    let (c, s) = fresnel(u0(q));
    let carrier = Complex64::from_polar(std::f64::consts::FRAC_1_SQRT_2, q.k * q.x - 0.5 * q.k * q.k * q.t - FRAC_PI_4);
    carrier * Complex64::new(0.5 + c, 0.5 + s)
}

/// `|M|²`, depending on `(x, k, t)` only through `u0`.
pub fn shutter_density(q: &ShutterQuery) -> f64 {
    density_at_u0(u0(q))
}

/// `½ {[½ + C(u)]² + [½ + S(u)]²}`.
pub fn density_at_u0(u: f64) -> f64 {
    0.5 * unnormalized_brace(u)
}

/// `[½ + C(u)]² + [½ + S(u)]²` without the `½` prefactor; twice the density.
pub fn unnormalized_brace(u: f64) -> f64 {
    let (c, s) = fresnel(u);
    (0.5 + c).powi(2) + (0.5 + s).powi(2)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CornuPoint {
    pub u: f64,
    pub c: f64,
    pub s: f64,
}

/// `n` uniformly spaced points of the Cornu spiral `(C(u), S(u))` on
/// `[u_min, u_max]`.
pub fn cornu_spiral(u_min: f64, u_max: f64, n: usize) -> Result<Vec<CornuPoint>> {
    if !(u_min.is_finite() && u_max.is_finite() && u_min < u_max) || n < 2 {
        return Err(Error::Argument(format!(
            "cornu spiral needs finite u_min < u_max and n >= 2, got [{u_min}, {u_max}], n = {n}"
        )));
    }
    let step = (u_max - u_min) / (n - 1) as f64;
    Ok((0..n)
        .map(|i| {
            let u = if i + 1 == n { u_max } else { u_min + i as f64 * step };
            let (c, s) = fresnel(u);
            CornuPoint { u, c, s }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn u0_examples() {
        let q = ShutterQuery::new(4.0, 1.0, 4.0).unwrap();
        assert_eq!(u0(&q), 0.0);
        let q = ShutterQuery::new(0.0, 1.0, PI).unwrap();
        assert!((u0(&q) - 1.0).abs() < 1e-15);
        let far = ShutterQuery::new(0.0, 1.0, 1e6).unwrap();
        assert!(u0(&far) > 500.0);
    }

    #[test]
    fn quarter_density_at_wavefront() {
        let q = ShutterQuery::new(2.0, 0.5, 4.0).unwrap();
        assert!((shutter_density(&q) - 0.25).abs() < 1e-15);
        assert!((shutter_amplitude(&q).norm_sqr() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn classical_limits() {
        // C, S = ½ + O(1/(πu)), so the deviation from 1 is bounded by the
        // envelope √2/(πu) + 1/(πu)² and is not yet below 1e-2 at u = 20
        for u in [5.0, 20.0, 50.0, 200.0] {
            let envelope = 2f64.sqrt() / (PI * u) + (PI * u).powi(-2);
            assert!((density_at_u0(u) - 1.0).abs() <= envelope, "u = {u}");
        }
        assert!((density_at_u0(20.0) - 0.984_198_521_976_845_9).abs() < 1e-12);
        assert!((density_at_u0(50.0) - 1.0).abs() < 1e-2);
        assert!(density_at_u0(-20.0) <= 1e-3);
        assert!((unnormalized_brace(1e6) - 2.0).abs() < 1e-5);
    }

    #[test]
    fn domain_errors() {
        assert!(ShutterQuery::new(0.0, 1.0, 0.0).is_err());
        assert!(ShutterQuery::new(0.0, 1.0, -1.0).is_err());
        assert!(ShutterQuery::new(f64::NAN, 1.0, 1.0).is_err());
    }

    #[test]
    fn cornu_examples() {
        let pts = cornu_spiral(-1.0, 1.0, 3).unwrap();
        assert_eq!((pts[1].c, pts[1].s), (0.0, 0.0));
        assert!((pts[2].c - 0.7798934).abs() < 1e-7 && (pts[2].s - 0.4382591).abs() < 1e-7);
        assert!(cornu_spiral(1.0, 1.0, 3).is_err());
        assert!(cornu_spiral(0.0, 1.0, 1).is_err());
    }
}
