//! Numerical building blocks: complex Gaussian integrals, Fresnel integrals,
//! uniform-grid quadrature and a dense symmetric eigensolver.

mod eigen;
mod fresnel;
mod gaussian;
mod grid;

pub use eigen::{eigensolve_symmetric, SymmetricEigen, SymmetricMatrix, MAX_JACOBI_SWEEPS};
pub use fresnel::{fresnel, fresnel_series, FRESNEL_SERIES_LIMIT};
pub use gaussian::{gaussian_integral, oscillatory_gaussian_integral};
pub use grid::{apply_kernel_numeric, Grid1D};

use num_complex::Complex64;

use crate::{Error, Result};

/// Rejects NaN or infinite components.
pub(crate) fn ensure_finite(z: Complex64, what: &str) -> Result<Complex64> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(Error::Domain(format!("{what} is not finite: {z}")))
    }
}
