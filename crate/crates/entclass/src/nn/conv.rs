//! 1-D valid convolution (cross-correlation, no kernel flip, no padding).

use crate::error::{Error, Result};
use crate::numeric::{RngStream, Tensor};

use super::init::kaiming_uniform;
use super::ConvFeatureMap;

#[derive(Debug, Clone, PartialEq)]
pub struct Conv1d {
    /// [c_out, c_in, k]
    pub w: Tensor,
    /// [c_out]
    pub b: Tensor,
    pub stride: usize,
}

#[derive(Debug, Clone)]
pub struct Conv1dGrads {
    pub w: Tensor,
    pub b: Tensor,
}

impl Conv1d {
    pub fn new(c_in: usize, c_out: usize, kernel: usize, stride: usize, rng: &mut RngStream) -> Self {
        Self {
            w: kaiming_uniform(vec![c_out, c_in, kernel], c_in * kernel, rng),
            b: Tensor::zeros(vec![c_out]),
            stride,
        }
    }

    pub fn c_in(&self) -> usize {
        self.w.shape()[1]
    }

    pub fn c_out(&self) -> usize {
        self.w.shape()[0]
    }

    pub fn kernel(&self) -> usize {
        self.w.shape()[2]
    }

    /// Output length floor((n - k)/stride) + 1; the kernel must fit.
    pub fn out_len(&self, in_len: usize) -> Result<usize> {
        if self.kernel() > in_len {
            return Err(Error::ShapeMismatch(format!(
                "kernel {} longer than input {in_len}",
                self.kernel()
            )));
        }
        Ok((in_len - self.kernel()) / self.stride + 1)
    }

    pub fn forward(&self, input: &ConvFeatureMap) -> Result<ConvFeatureMap> {
        if input.channels != self.c_in() {
            return Err(Error::ShapeMismatch(format!(
                "conv expects {} input channels, got {}",
                self.c_in(),
                input.channels
            )));
        }
        let (c_in, c_out, k) = (self.c_in(), self.c_out(), self.kernel());
        let n_out = self.out_len(input.len)?;
        let w = self.w.data();
        let mut out = ConvFeatureMap::zeros(c_out, n_out);
        let out_data = out.values.data_mut();
        for co in 0..c_out {
            let bias = self.b.data()[co];
            for ci in 0..c_in {
                let kernel = &w[(co * c_in + ci) * k..(co * c_in + ci + 1) * k];
                let in_ch = input.channel(ci);
                for p in 0..n_out {
                    let start = p * self.stride;
                    let window = &in_ch[start..start + k];
                    let mut acc = 0.0;
                    for (kv, xv) in kernel.iter().zip(window) {
                        acc += kv * xv;
                    }
                    out_data[co * n_out + p] += acc;
                }
            }
            for p in 0..n_out {
                out_data[co * n_out + p] += bias;
            }
        }
        Ok(out)
    }

    /// Returns (grad wrt input, grads wrt parameters).
    pub fn backward(
        &self,
        input: &ConvFeatureMap,
        grad_out: &ConvFeatureMap,
    ) -> (ConvFeatureMap, Conv1dGrads) {
        let (c_in, c_out, k) = (self.c_in(), self.c_out(), self.kernel());
        let n_out = grad_out.len;
        debug_assert_eq!(grad_out.channels, c_out);
        let w = self.w.data();

        let mut grad_in = ConvFeatureMap::zeros(c_in, input.len);
        let mut grad_w = Tensor::zeros(vec![c_out, c_in, k]);
        let mut grad_b = Tensor::zeros(vec![c_out]);

        for co in 0..c_out {
            let go_ch = grad_out.channel(co);
            grad_b.data_mut()[co] = go_ch.iter().sum();
            for ci in 0..c_in {
                let kernel = &w[(co * c_in + ci) * k..(co * c_in + ci + 1) * k];
                let in_ch = input.channel(ci);
                let gw = &mut grad_w.data_mut()[(co * c_in + ci) * k..(co * c_in + ci + 1) * k];
                let gi_base = ci * input.len;
                for p in 0..n_out {
                    let go = go_ch[p];
                    if go == 0.0 {
                        continue;
                    }
                    let start = p * self.stride;
                    for j in 0..k {
                        gw[j] += in_ch[start + j] * go;
                        grad_in.values.data_mut()[gi_base + start + j] += kernel[j] * go;
                    }
                }
            }
        }
        (grad_in, Conv1dGrads { w: grad_w, b: grad_b })
    }
}
