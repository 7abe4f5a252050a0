use thiserror::Error;

/// Failure modes shared by every numerical routine in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain where the operation is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// Oscillator propagator requested at (or too close to) a focal time.
    #[error("caustic: |sin(omega*t)| = {sin_abs:.3e} is below {threshold:.0e} (omega = {omega}, t = {t})")]
    Caustic {
        omega: f64,
        t: f64,
        sin_abs: f64,
        threshold: f64,
    },

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:.3e})")]
    NonConvergence { sweeps: usize, off_norm: f64 },

    #[error("index {index} out of range for size {size}")]
    Index { index: usize, size: usize },

    /// The quadrature grid does not contain the basis functions.
    #[error("grid coverage: {0}")]
    Coverage(String),

    #[error("unsupported kernel: {0}")]
    UnsupportedKernel(String),

    #[error("invalid argument: {0}")]
    Argument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
