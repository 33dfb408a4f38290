//! Per-part dual-quaternion articulation: blending assignments into
//! per-Gaussian transforms, deforming the canonical set into either observed
//! state, joint-type classification after warm-up, and extraction of
//! evaluation-facing joint descriptors.
//!
//! The canonical set sits at the motion mid-state, so the stored per-part
//! transform `q_k` maps canonical -> state 1 and its inverse maps canonical
//! -> state 0. State-to-state motion is therefore `q_k²`, which is where the
//! factor of two in the extracted magnitudes comes from.

mod blend;
mod joints;
mod pose;

use serde::{Deserialize, Serialize};

pub use blend::{blend_part_transforms, deform_to_state};
pub use joints::{
    apply_prismatic_constraint, classify_joint_types, extract_joint_descriptor, JointDescriptor,
    JointKind,
};
pub use pose::articulate_pose;

use crate::geom::DualQuat;

/// Articulation state of one part during/after training.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum JointType {
    /// Warm-up: no constraint applied yet.
    Unconstrained,
    Revolute,
    Prismatic,
    /// Pinned to the identity transform.
    Static,
}

/// One dual quaternion (canonical -> state 1) per part, plus the declared
/// joint type driving per-step constraint projection.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ArticulationSet {
    pub transforms: Vec<DualQuat>,
    pub types: Vec<JointType>,
}

impl ArticulationSet {
    pub fn identity(k: usize) -> Self {
        ArticulationSet {
            transforms: vec![DualQuat::IDENTITY; k],
            types: vec![JointType::Unconstrained; k],
        }
    }

    pub fn len(&self) -> usize {
        self.transforms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.transforms.is_empty()
    }

    /// Renormalizes every transform and projects onto the declared type:
    /// static parts to the identity, prismatic parts to pure translations.
    pub fn enforce_constraints(&mut self) {
        for (q, ty) in self.transforms.iter_mut().zip(&self.types) {
            match ty {
                JointType::Static => *q = DualQuat::IDENTITY,
                JointType::Prismatic => {
                    let mut dual = q.dual;
                    dual.w = 0.0;
                    *q = DualQuat { real: crate::Quat::IDENTITY, dual };
                }
                _ => *q = q.normalized(),
            }
        }
    }
}
