use rayon::prelude::*;

use super::ArticulationSet;
use crate::geom::{DualQuat, GaussianSet, StateTag};
use crate::parts::MatNk;
use crate::Quat;

/// Blends per-part transforms into one dual quaternion per Gaussian.
///
/// The mask rows weight the raw dual-quaternion components (state 0 uses the
/// per-part inverses), and the weighted sum is renormalized. With a hard
/// (one-hot) mask the result equals the assigned part's transform.
///
/// If any blended real part collapses below 1e-8 (antipodal part rotations),
/// the part quaternions are sign-aligned to part 0 and the blend is redone.
pub fn blend_part_transforms(mask: &MatNk, psi: &ArticulationSet, state: usize) -> Vec<DualQuat> {
    assert!(state < 2);
    assert_eq!(mask.k, psi.len());
    let per_part = state_transforms(psi, state);
    let blended = blend_raw(mask, &per_part);
    if blended.iter().any(|q| q.real.norm() < 1e-8) {
        let aligned = sign_align_to_first(&per_part);
        return blend_raw(mask, &aligned).iter().map(|q| q.normalized()).collect();
    }
    blended.into_iter().map(|q| q.normalized()).collect()
}

/// Per-part transforms for a state: `q_k` for state 1, `q_k⁻¹` for state 0.
pub(crate) fn state_transforms(psi: &ArticulationSet, state: usize) -> Vec<DualQuat> {
    psi.transforms
        .iter()
        .map(|q| if state == 1 { *q } else { q.inverse() })
        .collect()
}

pub(crate) fn sign_align_to_first(parts: &[DualQuat]) -> Vec<DualQuat> {
    let first = parts[0].real;
    parts
        .iter()
        .map(|q| {
            if q.real.dot(&first) < 0.0 {
                DualQuat { real: q.real.scaled(-1.0), dual: q.dual.scaled(-1.0) }
            } else {
                *q
            }
        })
        .collect()
}

fn blend_raw(mask: &MatNk, per_part: &[DualQuat]) -> Vec<DualQuat> {
    (0..mask.n)
        .map(|i| {
            let row = mask.row(i);
            let mut real = Quat::ZERO;
            let mut dual = Quat::ZERO;
            for (w, q) in row.iter().zip(per_part.iter()) {
                real = real.add(&q.real.scaled(*w));
                dual = dual.add(&q.dual.scaled(*w));
            }
            DualQuat { real, dual }
        })
        .collect()
}

/// Applies one transform per Gaussian: centers are mapped as points,
/// rotations are left-composed; scale, opacity and color pass through.
pub fn deform_to_state(
    canonical: &GaussianSet,
    per_gaussian: &[DualQuat],
    tag: StateTag,
) -> GaussianSet {
    assert_eq!(canonical.len(), per_gaussian.len());
    let gaussians = canonical
        .gaussians
        .par_iter()
        .zip(per_gaussian.par_iter())
        .map(|(g, q)| {
            let mut out = *g;
            out.center = q.apply_point(g.center);
            if *q != DualQuat::IDENTITY {
                out.rotation = q.real.mul(&g.rotation);
            }
            out
        })
        .collect();
    GaussianSet::new(gaussians, tag)
}
