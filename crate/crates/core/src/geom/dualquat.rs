use serde::{Deserialize, Serialize};

use super::quat::Quat;
use crate::{Mat3, Vec3};

/// Rigid transform as a dual quaternion `real + ε·dual`.
///
/// Valid values keep the real part unit-norm and the dual part orthogonal to
/// it (Plücker condition); [`DualQuat::normalized`] restores both.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DualQuat {
    pub real: Quat,
    pub dual: Quat,
}

/// Screw decomposition of a rigid transform: rotation by `angle` about the
/// line through `pivot` with direction `axis`, plus translation `slide` along
/// that axis. `pivot` is the axis point nearest the origin.
#[derive(Debug, Clone, Copy)]
pub struct ScrewParams {
    pub axis: Vec3,
    pub pivot: Vec3,
    pub angle: f64,
    pub slide: f64,
}

impl DualQuat {
    pub const IDENTITY: DualQuat = DualQuat { real: Quat::IDENTITY, dual: Quat::ZERO };

    pub fn from_rotation_translation(rotation: Quat, translation: Vec3) -> Self {
        let real = rotation.normalized();
        // dual = 0.5 * (0, t) ⊗ real
        let dual = Quat::from_vec(translation).mul(&real).scaled(0.5);
        DualQuat { real, dual }
    }

    pub fn from_rigid(rotation: &Mat3, translation: Vec3) -> Self {
        Self::from_rotation_translation(Quat::from_rotation_matrix(rotation), translation)
    }

    /// Rotation by `angle` about the line (`pivot`, `axis`), then `slide`
    /// along the axis. `axis` must be unit within 1e-9.
    pub fn from_screw(axis: Vec3, pivot: Vec3, angle: f64, slide: f64) -> crate::Result<Self> {
        if (axis.norm() - 1.0).abs() > 1e-9 {
            return Err(crate::Error::InvalidInput(format!(
                "screw axis must be unit (norm = {})",
                axis.norm()
            )));
        }
        let rotation = Quat::from_axis_angle(axis, angle);
        // x' = R(x - p) + p + slide·a  =>  t = (I - R)p + slide·a
        let translation = pivot - rotation.rotate(pivot) + slide * axis;
        Ok(Self::from_rotation_translation(rotation, translation))
    }

    pub fn translation(&self) -> Vec3 {
        // t = 2 · (dual ⊗ real*)
        self.dual.mul(&self.real.conjugate()).scaled(2.0).vec()
    }

    pub fn to_rotation_translation(&self) -> (Quat, Vec3) {
        (self.real, self.translation())
    }

    pub fn to_rigid(&self) -> (Mat3, Vec3) {
        (self.real.to_rotation_matrix(), self.translation())
    }

    /// Composition: applying `self` after `other` as point maps.
    pub fn mul(&self, other: &DualQuat) -> DualQuat {
        DualQuat {
            real: self.real.mul(&other.real),
            dual: self.real.mul(&other.dual).add(&self.dual.mul(&other.real)),
        }
    }

    /// Inverse of a valid (unit, Plücker-orthogonal) dual quaternion.
    pub fn inverse(&self) -> DualQuat {
        DualQuat { real: self.real.conjugate(), dual: self.dual.conjugate() }
    }

    /// Unit real part plus Plücker orthogonalization.
    pub fn normalized(&self) -> DualQuat {
        let n = self.real.norm();
        let real = self.real.scaled(1.0 / n);
        let s = self.real.dot(&self.dual);
        let dual = self.dual.scaled(1.0 / n).add(&self.real.scaled(-s / (n * n * n)));
        DualQuat { real, dual }
    }

    /// Flips overall sign so the real part has w >= 0.
    pub fn canonicalized(&self) -> DualQuat {
        if self.real.w < 0.0 {
            DualQuat { real: self.real.scaled(-1.0), dual: self.dual.scaled(-1.0) }
        } else {
            *self
        }
    }

    pub fn apply_point(&self, x: Vec3) -> Vec3 {
        // Exact-identity fast path keeps mid-state outputs bit-identical to
        // their inputs, which downstream file-level determinism relies on.
        if *self == DualQuat::IDENTITY {
            return x;
        }
        self.real.rotate(x) + self.translation()
    }

    /// Screw decomposition; pure translations report angle 0 with the axis
    /// along the translation (or +z when the transform is the identity).
    pub fn to_screw(&self) -> ScrewParams {
        let q = self.canonicalized();
        let t = q.translation();
        let angle = q.real.rotation_angle();
        if angle < 1e-9 {
            let norm = t.norm();
            let axis = if norm < 1e-12 { Vec3::new(0.0, 0.0, 1.0) } else { t / norm };
            return ScrewParams { axis, pivot: Vec3::zeros(), angle: 0.0, slide: norm };
        }
        let axis = q.real.vec().normalize();
        let slide = t.dot(&axis);
        let t_perp = t - slide * axis;
        let half = 0.5 * angle;
        let pivot = 0.5 * (t_perp + axis.cross(&t_perp) / half.tan());
        ScrewParams { axis, pivot, angle, slide }
    }

    /// Screw interpolation: same axis, angle and slide scaled by `s`.
    /// `sclerp(0)` is the identity and `sclerp(1)` reproduces `self`.
    pub fn sclerp(&self, s: f64) -> DualQuat {
        let screw = self.to_screw();
        if screw.angle < 1e-9 {
            let t = self.canonicalized().translation();
            return DualQuat::from_rotation_translation(Quat::IDENTITY, s * t);
        }
        DualQuat::from_screw(screw.axis, screw.pivot, s * screw.angle, s * screw.slide)
            .expect("screw axis is unit by construction")
    }

    /// Max Plücker / unit-norm violation; diagnostic for invariant checks.
    pub fn constraint_violation(&self) -> f64 {
        let unit = (self.real.norm() - 1.0).abs();
        let pluecker = self.real.dot(&self.dual).abs();
        unit.max(pluecker)
    }
}
