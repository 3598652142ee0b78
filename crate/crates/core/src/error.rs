use thiserror::Error;

/// Errors raised by model construction and the numerical kernels.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("factor index {index} out of range for a space with {factors} factors")]
    InvalidFactor { index: usize, factors: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid Hilbert space: {0}")]
    InvalidSpace(String),

    #[error("negative rate {0}")]
    NegativeRate(f64),

    #[error("not a valid density matrix: {0}")]
    InvalidState(String),

    #[error("operator is not Hermitian (deviation {0:.3e})")]
    NotHermitian(f64),

    #[error("no stationary state found: residual {residual:.3e} exceeds {tolerance:.3e}")]
    NoNullVector { residual: f64, tolerance: f64 },

    #[error("superoperator too large for a dense solve ({0} unknowns)")]
    TooLarge(usize),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("reference state is not strictly positive (min eigenvalue {0:.3e})")]
    SingularReference(f64),

    #[error("infinite-temperature contact has no logarithmic heat current; use the energy form")]
    InfiniteTemperature,

    #[error("truncation guard failed: top-level population {population:.3e} at N = {levels}")]
    TruncationGuard { population: f64, levels: usize },

    #[error("stationary state is not unique (null space dimension {0})")]
    NonErgodic(usize),

    #[error("integration failed: {0}")]
    Integration(String),

    #[error("quadrature did not converge (estimated error {0:.3e})")]
    Quadrature(f64),

    #[error("root finding failed: {0}")]
    Root(String),

    #[error("cooling window empty: J_c = {0:.3e} at the start temperature")]
    NoCooling(f64),

    #[error("fit window holds {found} samples, at least {required} are required")]
    FitWindow { found: usize, required: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
