use rand::Rng;

use super::matrix::MatNk;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AssignMode {
    Soft,
    Hard,
}

/// Soft assignment above this temperature, hard at or below it.
pub fn mode_for_tau(tau: f64) -> AssignMode {
    if tau > 0.1 {
        AssignMode::Soft
    } else {
        AssignMode::Hard
    }
}

/// Row-stochastic part assignment.
///
/// `m` holds the forward values (softmax rows in soft mode, one-hot rows in
/// hard mode). `soft` always holds the softmax probabilities; hard mode
/// backpropagates through them (straight-through convention).
#[derive(Debug, Clone)]
pub struct AssignmentMask {
    pub m: MatNk,
    pub soft: MatNk,
    pub mode: AssignMode,
    pub tau: f64,
}

/// Standard Gumbel(0,1) noise, one sample per logit.
pub fn gumbel_noise(n: usize, k: usize, rng: &mut impl Rng) -> MatNk {
    MatNk::from_fn(n, k, |_, _| {
        let u: f64 = rng.gen_range(f64::EPSILON..1.0);
        -(-u.ln()).ln()
    })
}

/// logits = (−D + W_Δ)/τ, plus optional pre-sampled Gumbel noise.
pub fn assign_parts(
    d: &MatNk,
    w_delta: &MatNk,
    tau: f64,
    mode: AssignMode,
    noise: Option<&MatNk>,
) -> AssignmentMask {
    assert!(tau > 0.0, "temperature must be positive");
    assert_eq!(d.n, w_delta.n);
    assert_eq!(d.k, w_delta.k);
    let (n, k) = (d.n, d.k);
    let mut logits = MatNk::zeros(n, k);
    for i in 0..n * k {
        logits.data[i] = (-d.data[i] + w_delta.data[i]) / tau;
    }
    if let Some(g) = noise {
        for i in 0..n * k {
            logits.data[i] += g.data[i];
        }
    }
    let mut soft = MatNk::zeros(n, k);
    for i in 0..n {
        softmax_row(logits.row(i), soft.row_mut(i));
    }
    let m = match mode {
        AssignMode::Soft => soft.clone(),
        AssignMode::Hard => {
            let mut hard = MatNk::zeros(n, k);
            for i in 0..n {
                let j = logits.argmax_row(i);
                hard.set(i, j, 1.0);
            }
            hard
        }
    };
    AssignmentMask { m, soft, mode, tau }
}

pub(crate) fn softmax_row(logits: &[f64], out: &mut [f64]) {
    let max = logits.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut sum = 0.0;
    for (o, &l) in out.iter_mut().zip(logits.iter()) {
        let e = (l - max).exp();
        *o = e;
        sum += e;
    }
    for o in out.iter_mut() {
        *o /= sum;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn mat(n: usize, k: usize, vals: &[f64]) -> MatNk {
        MatNk { n, k, data: vals.to_vec() }
    }

    #[test]
    fn saturated_softmax() {
        // logits (10, -10) at tau=1 with zero residual => D = (-10, 10)
        let d = mat(1, 2, &[-10.0, 10.0]);
        let w = MatNk::zeros(1, 2);
        let mask = assign_parts(&d, &w, 1.0, AssignMode::Soft, None);
        assert_relative_eq!(mask.m.get(0, 0), 1.0, epsilon = 1e-8);
        assert!(mask.m.get(0, 1) < 5e-9);

        let hard = assign_parts(&d, &w, 1.0, AssignMode::Hard, None);
        assert_eq!(hard.m.row(0), &[1.0, 0.0]);
    }

    #[test]
    fn equal_logits_give_uniform_row() {
        let d = mat(2, 4, &[3.0; 8]);
        let w = MatNk::zeros(2, 4);
        let mask = assign_parts(&d, &w, 1.0, AssignMode::Soft, None);
        for i in 0..2 {
            for j in 0..4 {
                assert_relative_eq!(mask.m.get(i, j), 0.25, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn low_temperature_approaches_hard() {
        let d = mat(1, 3, &[0.5, 0.1, 0.9]);
        let w = MatNk::zeros(1, 3);
        let soft = assign_parts(&d, &w, 0.01, AssignMode::Soft, None);
        let hard = assign_parts(&d, &w, 0.01, AssignMode::Hard, None);
        for j in 0..3 {
            assert!((soft.m.get(0, j) - hard.m.get(0, j)).abs() < 1e-6);
        }
    }

    #[test]
    fn mode_switch_at_tau_threshold() {
        assert_eq!(mode_for_tau(0.11), AssignMode::Soft);
        assert_eq!(mode_for_tau(0.1), AssignMode::Hard);
        assert_eq!(mode_for_tau(0.05), AssignMode::Hard);
    }

    #[test]
    fn noise_is_seeded_and_reproducible() {
        let mut a = gumbel_noise(4, 3, &mut crate::test_support::rng(7));
        let b = gumbel_noise(4, 3, &mut crate::test_support::rng(7));
        assert_eq!(a.data, b.data);
        a.data[0] += 1.0;
        assert_ne!(a.data, b.data);
    }

    proptest! {
        #[test]
        fn rows_sum_to_one_and_hard_rows_are_one_hot(
            vals in proptest::collection::vec(-20.0f64..20.0, 12),
            tau in 0.05f64..2.0,
        ) {
            let d = mat(3, 4, &vals);
            let w = MatNk::zeros(3, 4);
            for mode in [AssignMode::Soft, AssignMode::Hard] {
                let mask = assign_parts(&d, &w, tau, mode, None);
                for i in 0..3 {
                    let s: f64 = mask.m.row(i).iter().sum();
                    prop_assert!((s - 1.0).abs() < 1e-6);
                    if mode == AssignMode::Hard {
                        let ones = mask.m.row(i).iter().filter(|&&v| v == 1.0).count();
                        let zeros = mask.m.row(i).iter().filter(|&&v| v == 0.0).count();
                        prop_assert_eq!(ones, 1);
                        prop_assert_eq!(zeros, 3);
                    }
                }
            }
        }

        #[test]
        fn softmax_shift_invariance(
            vals in proptest::collection::vec(-5.0f64..5.0, 8),
            shift in -3.0f64..3.0,
        ) {
            let d = mat(2, 4, &vals);
            let w = MatNk::zeros(2, 4);
            // adding a per-row constant to logits means subtracting it from D
            let mut d_shifted = d.clone();
            for v in d_shifted.data.iter_mut() {
                *v -= shift;
            }
            let a = assign_parts(&d, &w, 1.0, AssignMode::Soft, None);
            let b = assign_parts(&d_shifted, &w, 1.0, AssignMode::Soft, None);
            for (x, y) in a.m.data.iter().zip(&b.m.data) {
                prop_assert!((x - y).abs() < 1e-9);
            }
        }

        #[test]
        fn argmax_invariant_under_temperature(
            vals in proptest::collection::vec(-5.0f64..5.0, 8),
        ) {
            let d = mat(2, 4, &vals);
            let w = MatNk::zeros(2, 4);
            let hi = assign_parts(&d, &w, 1.0, AssignMode::Soft, None);
            let lo = assign_parts(&d, &w, 0.02, AssignMode::Soft, None);
            for i in 0..2 {
                prop_assert_eq!(hi.m.argmax_row(i), lo.m.argmax_row(i));
            }
        }
    }
}
