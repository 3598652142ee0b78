//! Scalar and vector numerical kernels used by the physics modules.

pub mod bessel;
pub mod ode;
pub mod quad;
pub mod roots;
