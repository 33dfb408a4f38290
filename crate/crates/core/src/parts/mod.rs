//! Center-based part discovery: Mahalanobis distances to learnable part
//! centers, a residual correction network, and Gumbel-softmax assignment.

mod assign;
mod distance;
mod matrix;
mod residual;

pub use assign::{assign_parts, gumbel_noise, mode_for_tau, AssignMode, AssignmentMask};
pub use distance::{part_distance_matrix, PartDistances, MIN_CENTER_SCALE};
pub use matrix::MatNk;
pub use residual::{ResidualField, ResidualTrace};
