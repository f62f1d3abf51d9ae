//! Fully connected layer y = Wx + b.

use crate::error::{Error, Result};
use crate::numeric::{RngStream, Tensor};

use super::init::kaiming_uniform;

#[derive(Debug, Clone, PartialEq)]
pub struct Dense {
    /// [out, in]
    pub w: Tensor,
    /// [out]
    pub b: Tensor,
}

#[derive(Debug, Clone)]
pub struct DenseGrads {
    pub w: Tensor,
    pub b: Tensor,
}

impl Dense {
    pub fn new(in_dim: usize, out_dim: usize, rng: &mut RngStream) -> Self {
        Self {
            w: kaiming_uniform(vec![out_dim, in_dim], in_dim, rng),
            b: Tensor::zeros(vec![out_dim]),
        }
    }

    pub fn in_dim(&self) -> usize {
        self.w.shape()[1]
    }

    pub fn out_dim(&self) -> usize {
        self.w.shape()[0]
    }

    pub fn forward(&self, x: &[f64]) -> Result<Vec<f64>> {
        let (out_dim, in_dim) = (self.out_dim(), self.in_dim());
        if x.len() != in_dim {
            return Err(Error::ShapeMismatch(format!(
                "dense expects input of {in_dim}, got {}",
                x.len()
            )));
        }
        let w = self.w.data();
        let mut y = self.b.data().to_vec();
        for o in 0..out_dim {
            let row = &w[o * in_dim..(o + 1) * in_dim];
            let mut acc = 0.0;
            for (wi, xi) in row.iter().zip(x) {
                acc += wi * xi;
            }
            y[o] += acc;
        }
        Ok(y)
    }

    /// Returns (grad wrt input, grads wrt parameters).
    pub fn backward(&self, x: &[f64], grad_out: &[f64]) -> (Vec<f64>, DenseGrads) {
        let (out_dim, in_dim) = (self.out_dim(), self.in_dim());
        debug_assert_eq!(x.len(), in_dim);
        debug_assert_eq!(grad_out.len(), out_dim);
        let w = self.w.data();
        let mut grad_in = vec![0.0; in_dim];
        let mut grad_w = Tensor::zeros(vec![out_dim, in_dim]);
        let gw = grad_w.data_mut();
        for o in 0..out_dim {
            let go = grad_out[o];
            let row = &w[o * in_dim..(o + 1) * in_dim];
            let grow = &mut gw[o * in_dim..(o + 1) * in_dim];
            for i in 0..in_dim {
                grad_in[i] += row[i] * go;
                grow[i] = x[i] * go;
            }
        }
        let grad_b = Tensor::new(vec![out_dim], grad_out.to_vec()).expect("shape");
        (grad_in, DenseGrads { w: grad_w, b: grad_b })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn identity_dense(dim: usize) -> Dense {
        let mut w = Tensor::zeros(vec![dim, dim]);
        for i in 0..dim {
            w.data_mut()[i * dim + i] = 1.0;
        }
        Dense {
            w,
            b: Tensor::zeros(vec![dim]),
        }
    }

    #[test]
    fn identity_weights_pass_input_through() {
        let layer = identity_dense(3);
        let x = [1.5, -2.0, 0.25];
        assert_eq!(layer.forward(&x).unwrap(), x.to_vec());
    }

    #[test]
    fn zero_weights_yield_bias() {
        let layer = Dense {
            w: Tensor::zeros(vec![2, 3]),
            b: Tensor::new(vec![2], vec![0.7, -0.3]).unwrap(),
        };
        assert_eq!(layer.forward(&[1.0, 2.0, 3.0]).unwrap(), vec![0.7, -0.3]);
    }

    #[test]
    fn rejects_wrong_input_length() {
        let layer = identity_dense(3);
        assert!(layer.forward(&[1.0, 2.0]).is_err());
    }
}
