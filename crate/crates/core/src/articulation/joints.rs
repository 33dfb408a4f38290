use serde::{Deserialize, Serialize};

use super::{ArticulationSet, JointType};
use crate::geom::DualQuat;
use crate::{Error, Quat, Result, Vec3};

/// Joint category exposed to evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum JointKind {
    Revolute,
    Prismatic,
}

/// Evaluation-facing joint parameters, measured state 0 -> state 1.
///
/// Revolute magnitudes are degrees, prismatic magnitudes scene units. The
/// axis is canonicalized so the magnitude is non-negative.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct JointDescriptor {
    #[serde(rename = "type")]
    pub kind: JointKind,
    pub axis: Vec3,
    pub pivot: Option<Vec3>,
    pub magnitude: f64,
    pub unit: String,
}

impl JointDescriptor {
    pub fn revolute(axis: Vec3, pivot: Vec3, magnitude_deg: f64) -> Self {
        let (axis, magnitude) = canonicalize(axis, magnitude_deg);
        JointDescriptor { kind: JointKind::Revolute, axis, pivot: Some(pivot), magnitude, unit: "deg".into() }
    }

    pub fn prismatic(axis: Vec3, travel: f64) -> Self {
        let (axis, magnitude) = canonicalize(axis, travel);
        JointDescriptor { kind: JointKind::Prismatic, axis, pivot: None, magnitude, unit: "m".into() }
    }

    /// The state0 -> state1 rigid transform this descriptor encodes.
    pub fn to_transform(&self) -> DualQuat {
        match self.kind {
            JointKind::Revolute => DualQuat::from_screw(
                self.axis,
                self.pivot.unwrap_or_else(Vec3::zeros),
                self.magnitude.to_radians(),
                0.0,
            )
            .expect("descriptor axis is unit"),
            JointKind::Prismatic => {
                DualQuat::from_rotation_translation(Quat::IDENTITY, self.axis * self.magnitude)
            }
        }
    }
}

fn canonicalize(axis: Vec3, magnitude: f64) -> (Vec3, f64) {
    let axis = axis.normalize();
    if magnitude < 0.0 {
        (-axis, -magnitude)
    } else {
        (axis, magnitude)
    }
}

/// Rotation angle of the real part, in degrees, in [0, 180].
fn rotation_degrees(q: &DualQuat) -> f64 {
    q.real.rotation_angle().to_degrees()
}

/// Classifies each part from its warmed-up transform: revolute when the
/// rotation exceeds `eps_revolute_deg`, static when rotation and translation
/// are both tiny, prismatic otherwise.
pub fn classify_joint_types(
    psi: &ArticulationSet,
    eps_revolute_deg: f64,
    eps_motion: f64,
) -> Vec<JointType> {
    psi.transforms
        .iter()
        .map(|q| {
            let rot = rotation_degrees(q);
            let trans = q.translation().norm();
            if rot > eps_revolute_deg {
                JointType::Revolute
            } else if trans < eps_motion {
                JointType::Static
            } else {
                JointType::Prismatic
            }
        })
        .collect()
}

/// Projects transforms onto their classified types: prismatic parts become
/// the pure translation along their screw axis, static parts the identity.
pub fn apply_prismatic_constraint(psi: &ArticulationSet) -> ArticulationSet {
    let transforms = psi
        .transforms
        .iter()
        .zip(&psi.types)
        .map(|(q, ty)| match ty {
            JointType::Prismatic => {
                let screw = q.to_screw();
                DualQuat::from_rotation_translation(Quat::IDENTITY, screw.axis * screw.slide)
            }
            JointType::Static => DualQuat::IDENTITY,
            _ => *q,
        })
        .collect();
    ArticulationSet { transforms, types: psi.types.clone() }
}

/// Extracts the state0 -> state1 joint parameters from a canonical -> state1
/// transform. The canonical sits at the mid-state, so magnitudes double.
pub fn extract_joint_descriptor(q: &DualQuat, kind: JointKind) -> Result<JointDescriptor> {
    match kind {
        JointKind::Revolute => {
            let screw = q.to_screw();
            if screw.angle < 1e-6 {
                return Err(Error::DegenerateRevolute);
            }
            Ok(JointDescriptor::revolute(
                screw.axis,
                screw.pivot,
                (2.0 * screw.angle).to_degrees(),
            ))
        }
        JointKind::Prismatic => {
            let t = q.canonicalized().translation();
            let norm = t.norm();
            if norm < 1e-9 {
                return Err(Error::DegeneratePrismatic);
            }
            Ok(JointDescriptor::prismatic(t / norm, 2.0 * norm))
        }
    }
}
