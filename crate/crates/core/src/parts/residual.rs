use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::matrix::MatNk;
use crate::Vec3;

/// Shallow network predicting a per-Gaussian, per-part assignment correction.
///
/// Inputs per Gaussian: its canonical position, a sinusoidal positional
/// encoding of that position, the K normalized offsets X_i^k and the K
/// squared distances D_ik. Two tanh hidden layers; the output layer starts at
/// zero so assignments are purely Mahalanobis-based before training.
///
/// Parameters live in one flat vector laid out as
/// `[w1 (h×in), b1 (h), w2 (h×h), b2 (h), w3 (k×h), b3 (k)]`, row-major,
/// which is what the optimizer and gradient code index into.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ResidualField {
    pub k: usize,
    pub freqs: usize,
    pub hidden: usize,
    pub params: Vec<f64>,
}

/// Cached forward activations for the backward pass.
pub struct ResidualTrace {
    pub input: Vec<f64>,
    pub h1: Vec<f64>,
    pub h2: Vec<f64>,
}

impl ResidualField {
    pub fn new(k: usize, freqs: usize, hidden: usize, rng: &mut impl Rng) -> Self {
        let input_dim = Self::input_dim_for(k, freqs);
        let mut params = Vec::with_capacity(Self::param_count_for(k, freqs, hidden));
        let xavier = |fan_in: usize, fan_out: usize, rng: &mut dyn rand::RngCore| {
            let bound = (6.0 / (fan_in + fan_out) as f64).sqrt();
            rand::Rng::gen_range(rng, -bound..bound)
        };
        for _ in 0..hidden * input_dim {
            params.push(xavier(input_dim, hidden, rng));
        }
        params.extend(std::iter::repeat(0.0).take(hidden));
        for _ in 0..hidden * hidden {
            params.push(xavier(hidden, hidden, rng));
        }
        params.extend(std::iter::repeat(0.0).take(hidden));
        // zero-initialized output layer
        params.extend(std::iter::repeat(0.0).take(k * hidden + k));
        ResidualField { k, freqs, hidden, params }
    }

    pub fn input_dim(&self) -> usize {
        Self::input_dim_for(self.k, self.freqs)
    }

    pub fn input_dim_for(k: usize, freqs: usize) -> usize {
        3 + 6 * freqs + 4 * k
    }

    pub fn param_count(&self) -> usize {
        Self::param_count_for(self.k, self.freqs, self.hidden)
    }

    pub fn param_count_for(k: usize, freqs: usize, hidden: usize) -> usize {
        let input = Self::input_dim_for(k, freqs);
        hidden * input + hidden + hidden * hidden + hidden + k * hidden + k
    }

    fn offsets(&self) -> (usize, usize, usize, usize, usize) {
        let input = self.input_dim();
        let h = self.hidden;
        let b1 = h * input;
        let w2 = b1 + h;
        let b2 = w2 + h * h;
        let w3 = b2 + h;
        let b3 = w3 + self.k * h;
        (b1, w2, b2, w3, b3)
    }

    /// Encodes one Gaussian's inputs into `out` (length `input_dim`).
    pub fn encode_input(&self, mu: Vec3, x_row: &[Vec3], d_row: &[f64], out: &mut [f64]) {
        out[0] = mu.x;
        out[1] = mu.y;
        out[2] = mu.z;
        let mut o = 3;
        for f in 0..self.freqs {
            let w = (1u64 << f) as f64 * std::f64::consts::PI;
            for c in 0..3 {
                out[o + c] = (w * mu[c]).sin();
                out[o + 3 + c] = (w * mu[c]).cos();
            }
            o += 6;
        }
        for x in x_row {
            out[o] = x.x;
            out[o + 1] = x.y;
            out[o + 2] = x.z;
            o += 3;
        }
        out[o..o + self.k].copy_from_slice(d_row);
    }

    /// Forward pass over all Gaussians; returns W_Δ (N×K) plus the trace.
    pub fn forward(&self, mu: &[Vec3], x: &[Vec3], d: &MatNk) -> (MatNk, ResidualTrace) {
        let n = mu.len();
        let input_dim = self.input_dim();
        let h = self.hidden;
        let (b1o, w2o, b2o, w3o, b3o) = self.offsets();
        let w1 = &self.params[..b1o];
        let b1 = &self.params[b1o..w2o];
        let w2 = &self.params[w2o..b2o];
        let b2 = &self.params[b2o..w3o];
        let w3 = &self.params[w3o..b3o];
        let b3 = &self.params[b3o..];

        let mut input = vec![0.0; n * input_dim];
        let mut h1 = vec![0.0; n * h];
        let mut h2 = vec![0.0; n * h];
        let mut out = MatNk::zeros(n, self.k);

        input
            .par_chunks_mut(input_dim)
            .zip(h1.par_chunks_mut(h))
            .zip(h2.par_chunks_mut(h))
            .zip(out.data.par_chunks_mut(self.k))
            .enumerate()
            .for_each(|(i, (((inp, h1r), h2r), outr))| {
                self.encode_input(mu[i], &x[i * self.k..(i + 1) * self.k], d.row(i), inp);
                for r in 0..h {
                    let row = &w1[r * input_dim..(r + 1) * input_dim];
                    let mut acc = b1[r];
                    for (wv, iv) in row.iter().zip(inp.iter()) {
                        acc += wv * iv;
                    }
                    h1r[r] = acc.tanh();
                }
                for r in 0..h {
                    let row = &w2[r * h..(r + 1) * h];
                    let mut acc = b2[r];
                    for (wv, hv) in row.iter().zip(h1r.iter()) {
                        acc += wv * hv;
                    }
                    h2r[r] = acc.tanh();
                }
                for r in 0..self.k {
                    let row = &w3[r * h..(r + 1) * h];
                    let mut acc = b3[r];
                    for (wv, hv) in row.iter().zip(h2r.iter()) {
                        acc += wv * hv;
                    }
                    outr[r] = acc;
                }
            });

        (out, ResidualTrace { input, h1, h2 })
    }

    /// Backward pass. Returns (gradient wrt params, gradient wrt inputs).
    pub fn backward(&self, trace: &ResidualTrace, grad_out: &MatNk) -> (Vec<f64>, Vec<f64>) {
        let n = grad_out.n;
        let input_dim = self.input_dim();
        let h = self.hidden;
        let (b1o, w2o, b2o, w3o, b3o) = self.offsets();
        let w1 = &self.params[..b1o];
        let w2 = &self.params[w2o..b2o];
        let w3 = &self.params[w3o..b3o];

        // per-row contributions collected in parallel, summed serially so the
        // reduction order (and thus the bits) never depends on thread count
        struct RowGrad {
            g_a2: Vec<f64>,
            g_a1: Vec<f64>,
            g_input: Vec<f64>,
        }
        let rows: Vec<RowGrad> = (0..n)
            .into_par_iter()
            .map(|i| {
                let h1r = &trace.h1[i * h..(i + 1) * h];
                let h2r = &trace.h2[i * h..(i + 1) * h];
                let go = grad_out.row(i);
                // through output layer
                let mut g_h2 = vec![0.0; h];
                for r in 0..self.k {
                    let row = &w3[r * h..(r + 1) * h];
                    let g = go[r];
                    for (gh, wv) in g_h2.iter_mut().zip(row.iter()) {
                        *gh += g * wv;
                    }
                }
                // through tanh 2
                let mut g_a2 = vec![0.0; h];
                for r in 0..h {
                    g_a2[r] = g_h2[r] * (1.0 - h2r[r] * h2r[r]);
                }
                // through layer 2
                let mut g_h1 = vec![0.0; h];
                for r in 0..h {
                    let row = &w2[r * h..(r + 1) * h];
                    let g = g_a2[r];
                    for (gh, wv) in g_h1.iter_mut().zip(row.iter()) {
                        *gh += g * wv;
                    }
                }
                let mut g_a1 = vec![0.0; h];
                for r in 0..h {
                    g_a1[r] = g_h1[r] * (1.0 - h1r[r] * h1r[r]);
                }
                let mut g_input = vec![0.0; input_dim];
                for r in 0..h {
                    let row = &w1[r * input_dim..(r + 1) * input_dim];
                    let g = g_a1[r];
                    for (gi, wv) in g_input.iter_mut().zip(row.iter()) {
                        *gi += g * wv;
                    }
                }
                RowGrad { g_a2, g_a1, g_input }
            })
            .collect();

        let mut g_params = vec![0.0; self.params.len()];
        let mut g_inputs = vec![0.0; n * input_dim];
        for (i, rg) in rows.iter().enumerate() {
            let inp = &trace.input[i * input_dim..(i + 1) * input_dim];
            let h1r = &trace.h1[i * h..(i + 1) * h];
            let h2r = &trace.h2[i * h..(i + 1) * h];
            let go = grad_out.row(i);
            // w3 / b3
            for r in 0..self.k {
                let g = go[r];
                if g != 0.0 {
                    let base = w3o + r * h;
                    for (c, hv) in h2r.iter().enumerate() {
                        g_params[base + c] += g * hv;
                    }
                    g_params[b3o + r] += g;
                }
            }
            // w2 / b2
            for r in 0..h {
                let g = rg.g_a2[r];
                if g != 0.0 {
                    let base = w2o + r * h;
                    for (c, hv) in h1r.iter().enumerate() {
                        g_params[base + c] += g * hv;
                    }
                    g_params[b2o + r] += g;
                }
            }
            // w1 / b1
            for r in 0..h {
                let g = rg.g_a1[r];
                if g != 0.0 {
                    let base = r * input_dim;
                    for (c, iv) in inp.iter().enumerate() {
                        g_params[base + c] += g * iv;
                    }
                    g_params[b1o + r] += g;
                }
            }
            g_inputs[i * input_dim..(i + 1) * input_dim].copy_from_slice(&rg.g_input);
        }
        (g_params, g_inputs)
    }

    /// Splits an input-space gradient row back into (μ direct + positional
    /// encoding chain, X, D) pieces. Returns gradient wrt μ for this row and
    /// writes gradients wrt X and D into the provided slices.
    pub fn input_grad_to_parts(
        &self,
        mu: Vec3,
        g_input: &[f64],
        g_x: &mut [Vec3],
        g_d: &mut [f64],
    ) -> Vec3 {
        let mut g_mu = Vec3::new(g_input[0], g_input[1], g_input[2]);
        let mut o = 3;
        for f in 0..self.freqs {
            let w = (1u64 << f) as f64 * std::f64::consts::PI;
            for c in 0..3 {
                g_mu[c] += g_input[o + c] * w * (w * mu[c]).cos();
                g_mu[c] -= g_input[o + 3 + c] * w * (w * mu[c]).sin();
            }
            o += 6;
        }
        for gx in g_x.iter_mut().take(self.k) {
            *gx += Vec3::new(g_input[o], g_input[o + 1], g_input[o + 2]);
            o += 3;
        }
        for gd in g_d.iter_mut().take(self.k) {
            *gd += g_input[o];
            o += 1;
        }
        g_mu
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn random_inputs(
        rng: &mut impl Rng,
        n: usize,
        k: usize,
    ) -> (Vec<Vec3>, Vec<Vec3>, MatNk) {
        let mu: Vec<Vec3> = (0..n)
            .map(|_| {
                Vec3::new(
                    rng.gen_range(-1.0..1.0),
                    rng.gen_range(-1.0..1.0),
                    rng.gen_range(-1.0..1.0),
                )
            })
            .collect();
        let x: Vec<Vec3> = (0..n * k)
            .map(|_| {
                Vec3::new(
                    rng.gen_range(-1.0..1.0),
                    rng.gen_range(-1.0..1.0),
                    rng.gen_range(-1.0..1.0),
                )
            })
            .collect();
        let d = MatNk::from_fn(n, k, |i, j| x[i * k + j].norm_squared());
        (mu, x, d)
    }

    #[test]
    fn zero_output_layer_means_zero_residual() {
        let mut rng = crate::test_support::rng(41);
        let field = ResidualField::new(3, 4, 16, &mut rng);
        let (mu, x, d) = random_inputs(&mut rng, 10, 3);
        let (out, _) = field.forward(&mu, &x, &d);
        assert!(out.data.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn forward_is_deterministic() {
        let mut rng = crate::test_support::rng(42);
        let mut field = ResidualField::new(2, 4, 16, &mut rng);
        for p in field.params.iter_mut() {
            *p += rng.gen_range(-0.1..0.1);
        }
        let (mu, x, d) = random_inputs(&mut rng, 25, 2);
        let (a, _) = field.forward(&mu, &x, &d);
        let (b, _) = field.forward(&mu, &x, &d);
        assert_eq!(a.data, b.data);
    }

    #[test]
    fn output_change_bounded_by_lipschitz_probe() {
        let mut rng = crate::test_support::rng(43);
        let mut field = ResidualField::new(2, 4, 16, &mut rng);
        for p in field.params.iter_mut() {
            *p += rng.gen_range(-0.2..0.2);
        }
        let (mu, x, d) = random_inputs(&mut rng, 20, 2);
        let (base, _) = field.forward(&mu, &x, &d);

        // numeric Lipschitz estimate from unit-norm probes
        let mut lipschitz: f64 = 0.0;
        let p0 = field.params.clone();
        for trial in 0..8 {
            let mut probe = field.clone();
            let mut delta = vec![0.0; p0.len()];
            let mut rng2 = crate::test_support::rng(100 + trial);
            let mut norm = 0.0;
            for v in delta.iter_mut() {
                *v = rng2.gen_range(-1.0..1.0);
                norm += *v * *v;
            }
            let norm = norm.sqrt();
            let eps = 1e-4;
            for (p, dv) in probe.params.iter_mut().zip(&delta) {
                *p += eps * dv / norm;
            }
            let (out, _) = probe.forward(&mu, &x, &d);
            let diff: f64 = out
                .data
                .iter()
                .zip(&base.data)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            lipschitz = lipschitz.max(diff / eps);
        }

        // a larger perturbation along a fresh direction stays within the
        // estimate times a safety factor
        let mut rng3 = crate::test_support::rng(999);
        let mut delta = vec![0.0; p0.len()];
        let mut norm = 0.0;
        for v in delta.iter_mut() {
            *v = rng3.gen_range(-1.0..1.0);
            norm += *v * *v;
        }
        let norm = norm.sqrt();
        let step = 1e-3;
        let mut probe = field.clone();
        for (p, dv) in probe.params.iter_mut().zip(&delta) {
            *p += step * dv / norm;
        }
        let (out, _) = probe.forward(&mu, &x, &d);
        let diff: f64 = out
            .data
            .iter()
            .zip(&base.data)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        assert!(diff <= lipschitz * step * 3.0 + 1e-9);
    }

    #[test]
    fn backward_matches_finite_differences() {
        let mut rng = crate::test_support::rng(44);
        let mut field = ResidualField::new(2, 2, 8, &mut rng);
        for p in field.params.iter_mut() {
            *p += rng.gen_range(-0.3..0.3);
        }
        let (mu, x, d) = random_inputs(&mut rng, 5, 2);
        // scalar objective: weighted sum of outputs
        let weights: Vec<f64> = (0..5 * 2).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let loss = |f: &ResidualField| -> f64 {
            let (out, _) = f.forward(&mu, &x, &d);
            out.data.iter().zip(&weights).map(|(o, w)| o * w).sum()
        };
        let (out, trace) = field.forward(&mu, &x, &d);
        let grad_out = MatNk { n: 5, k: 2, data: weights.clone() };
        let (g_params, _) = field.backward(&trace, &grad_out);
        assert_eq!(out.n, 5);

        let p0 = field.params.clone();
        let fd = crate::test_support::finite_diff(
            |p| {
                let mut f = field.clone();
                f.params.copy_from_slice(p);
                loss(&f)
            },
            &p0,
            1e-5,
        );
        for (a, b) in g_params.iter().zip(&fd) {
            assert!(
                crate::test_support::grad_rel_err(*a, *b) < 1e-4,
                "param grad mismatch: {a} vs {b}"
            );
        }
    }
}
