use super::matrix::MatNk;
use crate::geom::GaussianSet;
use crate::init::PartCenterSet;
use crate::Vec3;

/// Scale components below this are clamped before division.
pub const MIN_CENTER_SCALE: f64 = 1e-6;

/// Per-Gaussian, per-center normalized offsets and squared Mahalanobis
/// distances. `x` is row-major N×K of 3-vectors.
#[derive(Debug, Clone)]
pub struct PartDistances {
    pub x: Vec<Vec3>,
    pub d: MatNk,
}

/// X_i^k = V_k(μ_i − p_k) / λ_k (componentwise), D_ik = |X_i^k|².
pub fn part_distance_matrix(canonical: &GaussianSet, centers: &PartCenterSet) -> PartDistances {
    let n = canonical.len();
    let k = centers.len();
    let mut x = Vec::with_capacity(n * k);
    let mut d = MatNk::zeros(n, k);
    let mut clamped = 0usize;
    let scales: Vec<Vec3> = centers
        .centers
        .iter()
        .map(|c| {
            c.scale.map(|v| {
                if v < MIN_CENTER_SCALE {
                    v.max(MIN_CENTER_SCALE)
                } else {
                    v
                }
            })
        })
        .collect();
    for c in &centers.centers {
        if c.scale.iter().any(|&v| v < MIN_CENTER_SCALE) {
            clamped += 1;
        }
    }
    if clamped > 0 {
        log::warn!("part_distance_matrix: clamped scales on {clamped} center(s) to {MIN_CENTER_SCALE}");
    }
    for g in &canonical.gaussians {
        for (c, scale) in centers.centers.iter().zip(&scales) {
            let local = c.orientation.rotate(g.center - c.position);
            let xi = local.component_div(scale);
            x.push(xi);
        }
    }
    for i in 0..n {
        for j in 0..k {
            d.set(i, j, x[i * k + j].norm_squared());
        }
    }
    PartDistances { x, d }
}
