//! Quaternion, dual-quaternion and Gaussian kernel mathematics.
//!
//! Everything here is a pure function of immutable inputs. Rotation fields are
//! kept unit-norm by explicit renormalization at the call sites that mutate
//! them (the optimizer), not by construction.

mod dualquat;
mod gaussian;
mod quat;

pub use dualquat::{DualQuat, ScrewParams};
pub use gaussian::{build_covariance, gaussian_opacity_at, Gaussian, GaussianSet, StateTag};
pub use quat::Quat;
