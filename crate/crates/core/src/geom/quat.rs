use serde::{Deserialize, Serialize};

use crate::{Mat3, Vec3};

/// Quaternion in (w, x, y, z) order.
///
/// Used both for rotations (kept unit-norm by the owner) and as the dual part
/// of a dual quaternion (not unit). Rotation application uses the polynomial
/// form so it stays a smooth function of all four components, which the
/// analytic gradients in `optim` rely on.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Quat {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Quat {
    pub const IDENTITY: Quat = Quat { w: 1.0, x: 0.0, y: 0.0, z: 0.0 };
    pub const ZERO: Quat = Quat { w: 0.0, x: 0.0, y: 0.0, z: 0.0 };

    pub fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Quat { w, x, y, z }
    }

    /// Pure quaternion (0, v).
    pub fn from_vec(v: Vec3) -> Self {
        Quat { w: 0.0, x: v.x, y: v.y, z: v.z }
    }

    pub fn vec(&self) -> Vec3 {
        Vec3::new(self.x, self.y, self.z)
    }

    pub fn from_axis_angle(axis: Vec3, angle: f64) -> Self {
        let half = 0.5 * angle;
        let s = half.sin();
        Quat { w: half.cos(), x: axis.x * s, y: axis.y * s, z: axis.z * s }
    }

    /// Axis and angle with angle in [0, pi], assuming unit norm.
    /// Degenerate (near-identity) rotations return the +z axis.
    pub fn to_axis_angle(&self) -> (Vec3, f64) {
        let q = self.canonicalized();
        let vn = q.vec().norm();
        let angle = 2.0 * vn.atan2(q.w);
        if vn < 1e-12 {
            (Vec3::new(0.0, 0.0, 1.0), angle)
        } else {
            (q.vec() / vn, angle)
        }
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn dot(&self, other: &Quat) -> f64 {
        self.w * other.w + self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn normalized(&self) -> Quat {
        let n = self.norm();
        Quat { w: self.w / n, x: self.x / n, y: self.y / n, z: self.z / n }
    }

    pub fn conjugate(&self) -> Quat {
        Quat { w: self.w, x: -self.x, y: -self.y, z: -self.z }
    }

    /// Flips sign so w >= 0, resolving the double cover.
    pub fn canonicalized(&self) -> Quat {
        if self.w < 0.0 {
            self.scaled(-1.0)
        } else {
            *self
        }
    }

    pub fn scaled(&self, s: f64) -> Quat {
        Quat { w: self.w * s, x: self.x * s, y: self.y * s, z: self.z * s }
    }

    pub fn add(&self, other: &Quat) -> Quat {
        Quat {
            w: self.w + other.w,
            x: self.x + other.x,
            y: self.y + other.y,
            z: self.z + other.z,
        }
    }

    /// Hamilton product self ⊗ other.
    pub fn mul(&self, o: &Quat) -> Quat {
        Quat {
            w: self.w * o.w - self.x * o.x - self.y * o.y - self.z * o.z,
            x: self.w * o.x + self.x * o.w + self.y * o.z - self.z * o.y,
            y: self.w * o.y - self.x * o.z + self.y * o.w + self.z * o.x,
            z: self.w * o.z + self.x * o.y - self.y * o.x + self.z * o.w,
        }
    }

    /// Rotates `v`, evaluated as v + 2w(q_v × v) + 2 q_v × (q_v × v).
    ///
    /// Equals R(q)·v for unit q; for non-unit q it is the same polynomial,
    /// kept as-is so its Jacobian is well defined everywhere.
    pub fn rotate(&self, v: Vec3) -> Vec3 {
        let qv = self.vec();
        let u = qv.cross(&v);
        v + 2.0 * self.w * u + 2.0 * qv.cross(&u)
    }

    /// Rotation matrix (unit-assuming polynomial form).
    pub fn to_rotation_matrix(&self) -> Mat3 {
        let (w, x, y, z) = (self.w, self.x, self.y, self.z);
        Mat3::new(
            1.0 - 2.0 * (y * y + z * z),
            2.0 * (x * y - w * z),
            2.0 * (x * z + w * y),
            2.0 * (x * y + w * z),
            1.0 - 2.0 * (x * x + z * z),
            2.0 * (y * z - w * x),
            2.0 * (x * z - w * y),
            2.0 * (y * z + w * x),
            1.0 - 2.0 * (x * x + y * y),
        )
    }

    /// Quaternion from a rotation matrix (Shepperd's method).
    pub fn from_rotation_matrix(m: &Mat3) -> Quat {
        let trace = m[(0, 0)] + m[(1, 1)] + m[(2, 2)];
        let q = if trace > 0.0 {
            let s = (trace + 1.0).sqrt() * 2.0;
            Quat {
                w: 0.25 * s,
                x: (m[(2, 1)] - m[(1, 2)]) / s,
                y: (m[(0, 2)] - m[(2, 0)]) / s,
                z: (m[(1, 0)] - m[(0, 1)]) / s,
            }
        } else if m[(0, 0)] > m[(1, 1)] && m[(0, 0)] > m[(2, 2)] {
            let s = (1.0 + m[(0, 0)] - m[(1, 1)] - m[(2, 2)]).sqrt() * 2.0;
            Quat {
                w: (m[(2, 1)] - m[(1, 2)]) / s,
                x: 0.25 * s,
                y: (m[(0, 1)] + m[(1, 0)]) / s,
                z: (m[(0, 2)] + m[(2, 0)]) / s,
            }
        } else if m[(1, 1)] > m[(2, 2)] {
            let s = (1.0 + m[(1, 1)] - m[(0, 0)] - m[(2, 2)]).sqrt() * 2.0;
            Quat {
                w: (m[(0, 2)] - m[(2, 0)]) / s,
                x: (m[(0, 1)] + m[(1, 0)]) / s,
                y: 0.25 * s,
                z: (m[(1, 2)] + m[(2, 1)]) / s,
            }
        } else {
            let s = (1.0 + m[(2, 2)] - m[(0, 0)] - m[(1, 1)]).sqrt() * 2.0;
            Quat {
                w: (m[(1, 0)] - m[(0, 1)]) / s,
                x: (m[(0, 2)] + m[(2, 0)]) / s,
                y: (m[(1, 2)] + m[(2, 1)]) / s,
                z: 0.25 * s,
            }
        };
        q.normalized().canonicalized()
    }

    /// Rotation angle in radians in [0, pi], assuming unit norm.
    pub fn rotation_angle(&self) -> f64 {
        2.0 * self.vec().norm().atan2(self.w.abs())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::Rng;

    fn random_unit_quat(rng: &mut impl Rng) -> Quat {
        loop {
            let q = Quat::new(
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            );
            if q.norm() > 1e-3 {
                return q.normalized();
            }
        }
    }

    #[test]
    fn normalize_produces_unit_norm() {
        let q = Quat::new(3.0, -1.0, 2.0, 0.5).normalized();
        assert!((q.norm() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn multiplication_is_associative_on_unit_inputs() {
        let mut rng = crate::test_support::rng(11);
        for _ in 0..100 {
            let a = random_unit_quat(&mut rng);
            let b = random_unit_quat(&mut rng);
            let c = random_unit_quat(&mut rng);
            let ab_c = a.mul(&b).mul(&c);
            let a_bc = a.mul(&b.mul(&c));
            assert!((ab_c.dot(&ab_c) - 2.0 * ab_c.dot(&a_bc) + a_bc.dot(&a_bc)).abs() < 1e-12);
        }
    }

    #[test]
    fn rotate_matches_rotation_matrix() {
        let mut rng = crate::test_support::rng(5);
        for _ in 0..50 {
            let q = random_unit_quat(&mut rng);
            let v = Vec3::new(
                rng.gen_range(-2.0..2.0),
                rng.gen_range(-2.0..2.0),
                rng.gen_range(-2.0..2.0),
            );
            let by_quat = q.rotate(v);
            let by_mat = q.to_rotation_matrix() * v;
            assert_relative_eq!(by_quat, by_mat, epsilon = 1e-12);
        }
    }

    #[test]
    fn axis_angle_round_trip() {
        let axis = Vec3::new(1.0, 2.0, -0.5).normalize();
        let angle = 1.1;
        let q = Quat::from_axis_angle(axis, angle);
        let (a, th) = q.to_axis_angle();
        assert_relative_eq!(a, axis, epsilon = 1e-12);
        assert_relative_eq!(th, angle, epsilon = 1e-12);
    }

    #[test]
    fn matrix_round_trip() {
        let mut rng = crate::test_support::rng(17);
        for _ in 0..50 {
            let q = random_unit_quat(&mut rng).canonicalized();
            let back = Quat::from_rotation_matrix(&q.to_rotation_matrix());
            assert!((q.dot(&back).abs() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn canonicalize_flips_negative_w() {
        let q = Quat::new(-0.5, 0.5, 0.5, 0.5);
        let c = q.canonicalized();
        assert!(c.w >= 0.0);
        // same rotation
        let v = Vec3::new(0.3, -0.2, 0.9);
        assert_relative_eq!(q.rotate(v), c.rotate(v), epsilon = 1e-12);
    }
}
