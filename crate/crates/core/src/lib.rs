//! Numerics for Cartan–Hartogs domains: Bergman-kernel coefficients and
//! evaluation, zero-freeness (Lu Qi-Keng) decisions, canonical metric
//! tensors, Bergman representative coordinates, and the radial
//! Monge-Ampère ODE whose solution induces the Kähler–Einstein metric.

pub mod domains;
pub mod error;
pub mod kernel;
pub mod linalg;
pub mod luqikeng;
pub mod metrics;
pub mod monge_ampere;
pub mod representative;
pub mod sample;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Real;

/// Complex number in the default (double) precision.
pub type C64 = num_complex::Complex<f64>;
/// Complex number in single precision.
pub type C32 = num_complex::Complex<f32>;
/// Default real scalar used by the CLI and the reports.
pub type Scalar = f64;
