//! Semi-discrete models of a string clamped at one end and damped through a
//! velocity feedback at the other, with two matching spatial schemes
//! (second-order differences and piecewise-linear elements on a uniform
//! mesh).
//!
//! The crate is organized around cross-validation: every quantity of
//! interest is computed by at least two independent routes that the test
//! suite compares.
//!
//! - [`model`] assembles the mesh, matrices, and first-order operator.
//! - [`spectral`] produces eigenvalues four ways: closed forms for the
//!   control-free schemes, a dense general-purpose eigensolver, a
//!   characteristic-equation route through sector-wise fixed-point
//!   iteration, and the continuum family they all approach.
//! - [`filter`] projects states onto the slow part of the eigenbasis,
//!   dropping mode pairs whose normalized modulus exceeds a cutoff.
//! - [`dynamics`] integrates in time, evaluates discrete energies and
//!   Lyapunov functionals, predicts exponential decay rates, and fits
//!   observed ones.
//! - [`export`] renders CSV tables and SVG plots deterministically.
//!
//! Numerics are generic over the floating-point scalar through
//! [`scalar::Scalar`]; `f64` aliases for the main types live at the crate
//! root.

pub mod dynamics;
pub mod error;
pub mod export;
pub mod filter;
pub mod linalg;
pub mod model;
pub mod scalar;
pub mod spectral;
pub mod tridiag;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Default scalar for applications; tests exercising the generic interface
/// also instantiate `f32`.
pub type Real = f64;

pub type RealParams = model::PhysicalParams<Real>;
pub type RealModel = model::SemiDiscreteModel<Real>;
pub type RealState = model::State<Real>;
pub type RealSpectrum = spectral::Spectrum<Real>;
pub type RealBasis = filter::EigenBasis<Real>;
pub type RealTrajectory = dynamics::Trajectory<Real>;
