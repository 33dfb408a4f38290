use serde::{Deserialize, Serialize};

use super::quat::Quat;
use crate::{Mat3, Vec3};

/// Smallest scale used when inverting a covariance; anything below is clamped.
pub const MIN_SCALE: f64 = 1e-8;

/// One anisotropic splat.
///
/// Scales are stored in log space so optimization over them is unconstrained;
/// exponentiate on read. `rotation` is kept unit-norm by its owners.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Gaussian {
    pub center: Vec3,
    pub rotation: Quat,
    pub log_scale: Vec3,
    /// Peak opacity in [0, 1].
    pub opacity: f64,
    /// Degree-0 RGB appearance in [0, 1].
    pub color: [f64; 3],
}

impl Gaussian {
    pub fn isotropic(center: Vec3, scale: f64, opacity: f64, color: [f64; 3]) -> Self {
        Gaussian {
            center,
            rotation: Quat::IDENTITY,
            log_scale: Vec3::from_element(scale.ln()),
            opacity,
            color,
        }
    }

    pub fn scales(&self) -> Vec3 {
        self.log_scale.map(f64::exp)
    }
}

/// Which observation (or the canonical mid-state) a Gaussian set describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StateTag {
    State0,
    State1,
    Canonical,
}

/// Ordered list of Gaussians. Index order is stable across operations; masks
/// and pairings refer to indices.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianSet {
    pub gaussians: Vec<Gaussian>,
    pub state: StateTag,
}

impl GaussianSet {
    pub fn new(gaussians: Vec<Gaussian>, state: StateTag) -> Self {
        GaussianSet { gaussians, state }
    }

    pub fn len(&self) -> usize {
        self.gaussians.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gaussians.is_empty()
    }

    pub fn centers(&self) -> Vec<Vec3> {
        self.gaussians.iter().map(|g| g.center).collect()
    }

    /// Axis-aligned bounds of the centers; `None` when empty.
    pub fn center_bounds(&self) -> Option<(Vec3, Vec3)> {
        let first = self.gaussians.first()?.center;
        let mut lo = first;
        let mut hi = first;
        for g in &self.gaussians {
            lo = lo.inf(&g.center);
            hi = hi.sup(&g.center);
        }
        Some((lo, hi))
    }
}

/// Covariance Σ = R S Sᵀ Rᵀ with S = diag(exp(log_scale)).
pub fn build_covariance(g: &Gaussian) -> Mat3 {
    let r = g.rotation.to_rotation_matrix();
    let s = g.scales();
    let rs = Mat3::from_columns(&[r.column(0) * s.x, r.column(1) * s.y, r.column(2) * s.z]);
    rs * rs.transpose()
}

/// Opacity contribution of `g` at point `x`: σ·exp(−½ (x−μ)ᵀ Σ⁻¹ (x−μ)).
///
/// Evaluated through the factorization (no explicit inverse): rotate into the
/// Gaussian frame, divide by the (clamped) scales, take the squared norm.
pub fn gaussian_opacity_at(g: &Gaussian, x: Vec3) -> f64 {
    let local = g.rotation.conjugate().rotate(x - g.center);
    let s = g.scales().map(|v| v.max(MIN_SCALE));
    let u = local.component_div(&s);
    g.opacity * (-0.5 * u.norm_squared()).exp()
}
