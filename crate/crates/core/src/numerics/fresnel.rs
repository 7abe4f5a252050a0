use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

/// Below this |u| the Maclaurin series is used; above it the continued
/// fraction for the complementary error function.
pub const FRESNEL_SERIES_LIMIT: f64 = 1.6;

const CF_TOLERANCE: f64 = 1e-16;
const CF_MAX_ITER: usize = 10_000;
const TINY: f64 = 1e-300;
/// Past this |u| only the leading asymptotic term survives in double precision.
const ASYMPTOTIC_LIMIT: f64 = 1e8;

/// Fresnel integrals `C(u) = ∫₀ᵘ cos(πv²/2) dv` and `S(u) = ∫₀ᵘ sin(πv²/2) dv`.
///
/// Both are odd in `u` and tend to `±1/2` as `u -> ±∞`.
pub fn fresnel(u: f64) -> (f64, f64) {
    if u.is_nan() {
        return (f64::NAN, f64::NAN);
    }
    let x = u.abs();
    let (c, s) = if x <= FRESNEL_SERIES_LIMIT {
        fresnel_series(x)
    } else if x < ASYMPTOTIC_LIMIT {
        fresnel_continued_fraction(x)
    } else if x.is_finite() {
        let phase = FRAC_PI_2 * x * x;
        (0.5 + phase.sin() / (PI * x), 0.5 - phase.cos() / (PI * x))
    } else {
        (0.5, 0.5)
    };
    if u < 0.0 {
        (-c, -s)
    } else {
        (c, s)
    }
}

/// Maclaurin series, summed until the increment drops below 1e-17.
///
/// Accurate for moderate |u|; cancellation grows like `exp(πu²/2)` so it is
/// only used below [`FRESNEL_SERIES_LIMIT`] by [`fresnel`].
pub fn fresnel_series(u: f64) -> (f64, f64) {
    let x2 = FRAC_PI_2 * u * u;
    // term_k = (π u² / 2)^k u / k!
    let mut term = u;
    let mut c = u;
    let mut s = 0.0;
    let mut k = 0usize;
    loop {
        k += 1;
        term *= x2 / k as f64;
        let increment = term / (2 * k + 1) as f64;
        let sign = if (k / 2).is_multiple_of(2) { 1.0 } else { -1.0 };
        if k.is_multiple_of(2) {
            c += sign * increment;
        } else {
            s += sign * increment;
        }
        if increment.abs() < 1e-17 && k > 2 {
            break;
        }
    }
    (c, s)
}

/// Modified Lentz evaluation of the continued fraction for
/// `erfc((1 - i) √π x / 2)`, valid for x > 0 and fast once x ≳ 1.5.
fn fresnel_continued_fraction(x: f64) -> (f64, f64) {
    let pix2 = PI * x * x;
    let one = Complex64::new(1.0, 0.0);
    let mut b = Complex64::new(1.0, -pix2);
    let mut cc = Complex64::new(1.0 / TINY, 0.0);
    let mut d = one / b;
    let mut h = d;
    let mut n = -1.0f64;
    for _ in 0..CF_MAX_ITER {
        n += 2.0;
        let a = -n * (n + 1.0);
        b += 4.0;
        d = one / (a * d + b);
        cc = b + a / cc;
        let del = cc * d;
        h *= del;
        if (del.re - 1.0).abs() + del.im.abs() < CF_TOLERANCE {
            break;
        }
    }
    h *= Complex64::new(x, -x);
    let phase = Complex64::from_polar(1.0, 0.5 * pix2);
    let cs = Complex64::new(0.5, 0.5) * (one - phase * h);
    (cs.re, cs.im)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn origin() {
        assert_eq!(fresnel(0.0), (0.0, 0.0));
    }

    #[test]
    fn known_value_at_one() {
        let (c, s) = fresnel(1.0);
        assert!((c - 0.779_893_400_376_822_8).abs() < 1e-14);
        assert!((s - 0.438_259_147_390_354_8).abs() < 1e-14);
    }

    #[test]
    fn branches_agree_at_switch_point() {
        for x in [1.4, 1.5, FRESNEL_SERIES_LIMIT, 1.7, 1.8] {
            let (cs, ss) = fresnel_series(x);
            let (cf, sf) = fresnel_continued_fraction(x);
            assert!((cs - cf).abs() <= 1e-11, "C at {x}: {cs} vs {cf}");
            assert!((ss - sf).abs() <= 1e-11, "S at {x}: {ss} vs {sf}");
        }
    }

    #[test]
    fn limits() {
        assert_eq!(fresnel(f64::INFINITY), (0.5, 0.5));
        assert_eq!(fresnel(f64::NEG_INFINITY), (-0.5, -0.5));
        let (c, s) = fresnel(1e9);
        assert!((c - 0.5).abs() < 1e-9 && (s - 0.5).abs() < 1e-9);
        let (c, s) = fresnel(1e4);
        assert!((c - 0.5).abs() < 1e-4 && (s - 0.5).abs() < 1e-4);
    }

    #[test]
    fn odd_parity() {
        for u in [0.1, 0.9, 1.6, 2.3, 7.7, 49.0] {
            let (c, s) = fresnel(u);
            let (cm, sm) = fresnel(-u);
            assert_eq!((c, s), (-cm, -sm));
        }
    }
}
