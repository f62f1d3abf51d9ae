//! LSTM cell and bidirectional LSTM with backpropagation through time.
//!
//! Standard gate equations with sigmoid input/forget/output gates and a
//! tanh candidate:
//!
//! ```text
//! z = W x_t + U h_{t-1} + b          (gates stacked i, f, g, o)
//! c_t = f . c_{t-1} + i . g
//! h_t = o . tanh(c_t)
//! ```
//!
//! Initial hidden and cell states are zero. BPTT is full (untruncated).

use crate::error::{Error, Result};
use crate::numeric::{RngStream, Tensor};

use super::init::lstm_uniform;
use super::SequenceTensor;

/// One direction's parameters. Gate rows are stacked i, f, g, o.
#[derive(Debug, Clone, PartialEq)]
pub struct LstmParams {
    /// [4*hidden, input]
    pub w: Tensor,
    /// [4*hidden, hidden]
    pub u: Tensor,
    /// [4*hidden]
    pub b: Tensor,
    pub input: usize,
    pub hidden: usize,
}

#[derive(Debug, Clone)]
pub struct LstmGrads {
    pub w: Tensor,
    pub u: Tensor,
    pub b: Tensor,
}

/// Per-step activations cached for the backward pass.
#[derive(Debug, Clone)]
struct StepCache {
    h_prev: Vec<f64>,
    c_prev: Vec<f64>,
    i: Vec<f64>,
    f: Vec<f64>,
    g: Vec<f64>,
    o: Vec<f64>,
    tanh_c: Vec<f64>,
}

/// Forward-pass record over a whole sequence.
#[derive(Debug, Clone)]
pub struct LstmSequenceCache {
    steps: Vec<StepCache>,
    /// Hidden state after each step.
    pub hs: Vec<Vec<f64>>,
    inputs: Vec<Vec<f64>>,
}

#[inline]
fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

impl LstmParams {
    /// Uniform init in [-1/sqrt(hidden), 1/sqrt(hidden)] with the forget
    /// gate bias raised to +1.
    pub fn new(input: usize, hidden: usize, rng: &mut RngStream) -> Self {
        let w = lstm_uniform(vec![4 * hidden, input], hidden, rng);
        let u = lstm_uniform(vec![4 * hidden, hidden], hidden, rng);
        let mut b = Tensor::zeros(vec![4 * hidden]);
        for j in hidden..2 * hidden {
            b.data_mut()[j] = 1.0;
        }
        Self {
            w,
            u,
            b,
            input,
            hidden,
        }
    }

    pub fn zero_grads(&self) -> LstmGrads {
        LstmGrads {
            w: Tensor::zeros(vec![4 * self.hidden, self.input]),
            u: Tensor::zeros(vec![4 * self.hidden, self.hidden]),
            b: Tensor::zeros(vec![4 * self.hidden]),
        }
    }

    /// One cell update. Returns (h, c) and the cache for BPTT.
    fn step(&self, x: &[f64], h_prev: &[f64], c_prev: &[f64]) -> (Vec<f64>, Vec<f64>, StepCache) {
        let h = self.hidden;
        let mut z = self.b.data().to_vec();
        let w = self.w.data();
        let u = self.u.data();
        for r in 0..4 * h {
            let wrow = &w[r * self.input..(r + 1) * self.input];
            let urow = &u[r * h..(r + 1) * h];
            let mut acc = 0.0;
            for (wv, xv) in wrow.iter().zip(x) {
                acc += wv * xv;
            }
            for (uv, hv) in urow.iter().zip(h_prev) {
                acc += uv * hv;
            }
            z[r] += acc;
        }
        let mut i = vec![0.0; h];
        let mut f = vec![0.0; h];
        let mut g = vec![0.0; h];
        let mut o = vec![0.0; h];
        for j in 0..h {
            i[j] = sigmoid(z[j]);
            f[j] = sigmoid(z[h + j]);
            g[j] = z[2 * h + j].tanh();
            o[j] = sigmoid(z[3 * h + j]);
        }
        let mut c = vec![0.0; h];
        let mut tanh_c = vec![0.0; h];
        let mut h_new = vec![0.0; h];
        for j in 0..h {
            c[j] = f[j] * c_prev[j] + i[j] * g[j];
            tanh_c[j] = c[j].tanh();
            h_new[j] = o[j] * tanh_c[j];
        }
        let cache = StepCache {
            h_prev: h_prev.to_vec(),
            c_prev: c_prev.to_vec(),
            i,
            f,
            g,
            o,
            tanh_c,
        };
        (h_new, c, cache)
    }

    /// Run the cell over a sequence from zero initial state.
    pub fn run_sequence<'a, I>(&self, inputs: I) -> LstmSequenceCache
    where
        I: Iterator<Item = &'a [f64]>,
    {
        let h = self.hidden;
        let mut hs = Vec::new();
        let mut steps = Vec::new();
        let mut xs = Vec::new();
        let mut h_state = vec![0.0; h];
        let mut c_state = vec![0.0; h];
        for x in inputs {
            debug_assert_eq!(x.len(), self.input);
            let (h_new, c_new, cache) = self.step(x, &h_state, &c_state);
            hs.push(h_new.clone());
            steps.push(cache);
            xs.push(x.to_vec());
            h_state = h_new;
            c_state = c_new;
        }
        LstmSequenceCache {
            steps,
            hs,
            inputs: xs,
        }
    }

    /// BPTT over a cached forward run. `dhs[t]` is the external gradient
    /// on the hidden state at step t. Returns per-step input gradients and
    /// accumulated parameter gradients.
    pub fn backward_sequence(
        &self,
        cache: &LstmSequenceCache,
        dhs: &[Vec<f64>],
    ) -> (Vec<Vec<f64>>, LstmGrads) {
        let h = self.hidden;
        let t_len = cache.steps.len();
        debug_assert_eq!(dhs.len(), t_len);

        // Transposed weights, computed once per sequence, make the
        // per-step dx / dh_prev products cache-friendly.
        let w_t = transpose(self.w.data(), 4 * h, self.input);
        let u_t = transpose(self.u.data(), 4 * h, h);

        let mut grads = self.zero_grads();
        let mut dxs = vec![vec![0.0; self.input]; t_len];
        let mut dh_rec = vec![0.0; h];
        let mut dc_rec = vec![0.0; h];
        let mut dz = vec![0.0; 4 * h];

        for t in (0..t_len).rev() {
            let sc = &cache.steps[t];
            for j in 0..h {
                let dh = dhs[t][j] + dh_rec[j];
                let tc = sc.tanh_c[j];
                let d_o = dh * tc;
                let dc = dc_rec[j] + dh * sc.o[j] * (1.0 - tc * tc);
                let d_i = dc * sc.g[j];
                let d_g = dc * sc.i[j];
                let d_f = dc * sc.c_prev[j];
                dc_rec[j] = dc * sc.f[j];
                dz[j] = d_i * sc.i[j] * (1.0 - sc.i[j]);
                dz[h + j] = d_f * sc.f[j] * (1.0 - sc.f[j]);
                dz[2 * h + j] = d_g * (1.0 - sc.g[j] * sc.g[j]);
                dz[3 * h + j] = d_o * sc.o[j] * (1.0 - sc.o[j]);
            }

            let x = &cache.inputs[t];
            let gw = grads.w.data_mut();
            let gu = grads.u.data_mut();
            let gb = grads.b.data_mut();
            for r in 0..4 * h {
                let dzr = dz[r];
                if dzr != 0.0 {
                    let wrow = &mut gw[r * self.input..(r + 1) * self.input];
                    for (wg, xv) in wrow.iter_mut().zip(x) {
                        *wg += dzr * xv;
                    }
                    let urow = &mut gu[r * h..(r + 1) * h];
                    for (ug, hv) in urow.iter_mut().zip(&sc.h_prev) {
                        *ug += dzr * hv;
                    }
                    gb[r] += dzr;
                }
            }

            let dx = &mut dxs[t];
            for j in 0..self.input {
                let col = &w_t[j * 4 * h..(j + 1) * 4 * h];
                let mut acc = 0.0;
                for (cv, dzv) in col.iter().zip(&dz) {
                    acc += cv * dzv;
                }
                dx[j] = acc;
            }
            for j in 0..h {
                let col = &u_t[j * 4 * h..(j + 1) * 4 * h];
                let mut acc = 0.0;
                for (cv, dzv) in col.iter().zip(&dz) {
                    acc += cv * dzv;
                }
                dh_rec[j] = acc;
            }
        }
        (dxs, grads)
    }

    pub fn param_count(&self) -> usize {
        self.w.len() + self.u.len() + self.b.len()
    }
}

fn transpose(data: &[f64], rows: usize, cols: usize) -> Vec<f64> {
    let mut out = vec![0.0; rows * cols];
    for r in 0..rows {
        for c in 0..cols {
            out[c * rows + r] = data[r * cols + c];
        }
    }
    out
}

/// Two independent LSTM passes, forward and backward over the sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct BiLstm {
    pub fwd: LstmParams,
    pub bwd: LstmParams,
}

#[derive(Debug, Clone)]
pub struct BiLstmGrads {
    pub fwd: LstmGrads,
    pub bwd: LstmGrads,
}

/// Forward output: per-step concatenation [h_fwd[t], h_bwd[t]] and the
/// summary vector [h_fwd[T-1], h_bwd[0]] (each direction's final state).
#[derive(Debug, Clone)]
pub struct BiLstmOutput {
    pub per_step: SequenceTensor,
    pub summary: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct BiLstmCache {
    fwd: LstmSequenceCache,
    bwd: LstmSequenceCache,
    steps: usize,
}

impl BiLstm {
    pub fn new(input: usize, hidden: usize, rng: &mut RngStream) -> Self {
        Self {
            fwd: LstmParams::new(input, hidden, rng),
            bwd: LstmParams::new(input, hidden, rng),
        }
    }

    pub fn hidden(&self) -> usize {
        self.fwd.hidden
    }

    /// Output width 2*hidden regardless of sequence length.
    pub fn out_dim(&self) -> usize {
        2 * self.fwd.hidden
    }

    pub fn forward(&self, seq: &SequenceTensor) -> Result<(BiLstmOutput, BiLstmCache)> {
        if seq.features != self.fwd.input {
            return Err(Error::ShapeMismatch(format!(
                "bilstm expects {} features per step, got {}",
                self.fwd.input, seq.features
            )));
        }
        let t_len = seq.steps;
        let h = self.hidden();
        let fwd = self.fwd.run_sequence((0..t_len).map(|t| seq.step(t)));
        let bwd = self.bwd.run_sequence((0..t_len).rev().map(|t| seq.step(t)));

        let mut per_step = SequenceTensor::zeros(t_len, 2 * h);
        for t in 0..t_len {
            per_step.step_mut(t)[..h].copy_from_slice(&fwd.hs[t]);
            per_step.step_mut(t)[h..].copy_from_slice(&bwd.hs[t_len - 1 - t]);
        }
        let mut summary = vec![0.0; 2 * h];
        summary[..h].copy_from_slice(&fwd.hs[t_len - 1]);
        summary[h..].copy_from_slice(&bwd.hs[t_len - 1]);
        Ok((
            BiLstmOutput { per_step, summary },
            BiLstmCache {
                fwd,
                bwd,
                steps: t_len,
            },
        ))
    }

    /// BPTT through both directions. Either gradient may be absent.
    pub fn backward(
        &self,
        cache: &BiLstmCache,
        d_per_step: Option<&SequenceTensor>,
        d_summary: Option<&[f64]>,
    ) -> (SequenceTensor, BiLstmGrads) {
        let t_len = cache.steps;
        let h = self.hidden();

        let mut dhs_fwd = vec![vec![0.0; h]; t_len];
        let mut dhs_bwd = vec![vec![0.0; h]; t_len];
        if let Some(ps) = d_per_step {
            for t in 0..t_len {
                let row = ps.step(t);
                for j in 0..h {
                    dhs_fwd[t][j] += row[j];
                    // bwd step s processed original index T-1-s.
                    dhs_bwd[t_len - 1 - t][j] += row[h + j];
                }
            }
        }
        if let Some(s) = d_summary {
            for j in 0..h {
                dhs_fwd[t_len - 1][j] += s[j];
                dhs_bwd[t_len - 1][j] += s[h + j];
            }
        }

        let (dxs_fwd, grads_fwd) = self.fwd.backward_sequence(&cache.fwd, &dhs_fwd);
        let (dxs_bwd, grads_bwd) = self.bwd.backward_sequence(&cache.bwd, &dhs_bwd);

        let features = self.fwd.input;
        let mut d_input = SequenceTensor::zeros(t_len, features);
        for t in 0..t_len {
            let row = d_input.step_mut(t);
            for j in 0..features {
                row[j] = dxs_fwd[t][j] + dxs_bwd[t_len - 1 - t][j];
            }
        }
        (
            d_input,
            BiLstmGrads {
                fwd: grads_fwd,
                bwd: grads_bwd,
            },
        )
    }
}
