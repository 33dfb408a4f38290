//! Reconstruction of part-level geometry and joint articulation for unknown
//! articulated objects observed at two joint states.
//!
//! The pipeline fits per-state Gaussian sets to the input point clouds, builds
//! a canonical mid-state Gaussian set by matching the two states, discovers
//! rigid parts with learnable ellipsoidal centers, and optimizes one dual
//! quaternion per part so the deformed canonical set reproduces both observed
//! states. Joint type (revolute/prismatic), axis, pivot and motion magnitude
//! are read off the converged part transforms.
//!
//! Module map:
//!
//! - [`geom`] — quaternion, dual-quaternion and Gaussian kernel math
//! - [`spatial`] — k-d tree nearest-neighbor queries
//! - [`ingest`] — synthetic scene generation, depth back-projection, PLY I/O
//! - [`init`] — canonical-set and part-center initialization
//! - [`parts`] — center-based part assignment (Mahalanobis + residual + Gumbel softmax)
//! - [`articulation`] — per-part dual-quaternion blending, deformation, joint extraction
//! - [`optim`] — losses, analytic gradients, Adam, the training schedule
//! - [`rendermesh`] — forward splat rendering and opacity-field mesh extraction
//! - [`metrics`] — axis/motion/Chamfer evaluation suite

pub mod articulation;
pub mod error;
pub mod geom;
pub mod ingest;
pub mod init;
pub mod metrics;
pub mod optim;
pub mod parts;
pub mod rendermesh;
pub mod spatial;

pub use error::{Error, Result};
pub use geom::{DualQuat, Gaussian, GaussianSet, Quat, StateTag};

/// 3-vectors and points share one representation throughout the crate.
pub type Vec3 = nalgebra::Vector3<f64>;
/// 3x3 matrices (rotations, covariances).
pub type Mat3 = nalgebra::Matrix3<f64>;

#[cfg(test)]
pub(crate) mod test_support;
