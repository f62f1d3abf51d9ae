//! From-scratch differentiable layers with hand-derived gradients.
//!
//! Every layer exposes a pure forward pass and an exact analytic backward
//! pass; `gradcheck` verifies each against central finite differences.
//! All arithmetic is 64-bit.

pub mod activation;
pub mod checkpoint;
pub mod conv;
pub mod dense;
pub mod gradcheck;
pub mod init;
pub mod loss;
pub mod lstm;
pub mod pool;

pub use activation::{leaky_relu, leaky_relu_backward};
pub use conv::Conv1d;
pub use dense::Dense;
pub use gradcheck::{run_battery, GradCheckReport};
pub use loss::{softmax, softmax_cross_entropy};
pub use lstm::{BiLstm, LstmParams};
pub use pool::MaxPool1d;

use crate::error::{Error, Result};
use crate::numeric::Tensor;

/// F channels of spatial length N, stored channel-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvFeatureMap {
    pub channels: usize,
    pub len: usize,
    pub values: Tensor,
}

impl ConvFeatureMap {
    pub fn new(channels: usize, len: usize, values: Tensor) -> Result<Self> {
        if values.len() != channels * len {
            return Err(Error::ShapeMismatch(format!(
                "feature map {channels}x{len} needs {} values, got {}",
                channels * len,
                values.len()
            )));
        }
        Ok(Self {
            channels,
            len,
            values,
        })
    }

    pub fn zeros(channels: usize, len: usize) -> Self {
        Self {
            channels,
            len,
            values: Tensor::zeros(vec![channels, len]),
        }
    }

    /// A single-channel map over a raw feature vector.
    pub fn from_vector(data: Vec<f64>) -> Self {
        let len = data.len();
        Self {
            channels: 1,
            len,
            values: Tensor::new(vec![1, len], data).expect("consistent"),
        }
    }

    #[inline]
    pub fn channel(&self, ch: usize) -> &[f64] {
        &self.values.data()[ch * self.len..(ch + 1) * self.len]
    }
}

/// T timesteps of fixed-width feature vectors, stored step-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SequenceTensor {
    pub steps: usize,
    pub features: usize,
    pub values: Tensor,
}

impl SequenceTensor {
    pub fn new(steps: usize, features: usize, values: Tensor) -> Result<Self> {
        if steps == 0 {
            return Err(Error::ShapeMismatch("sequence needs at least 1 step".into()));
        }
        if values.len() != steps * features {
            return Err(Error::ShapeMismatch(format!(
                "sequence {steps}x{features} needs {} values, got {}",
                steps * features,
                values.len()
            )));
        }
        Ok(Self {
            steps,
            features,
            values,
        })
    }

    pub fn zeros(steps: usize, features: usize) -> Self {
        Self {
            steps,
            features,
            values: Tensor::zeros(vec![steps, features]),
        }
    }

    #[inline]
    pub fn step(&self, t: usize) -> &[f64] {
        &self.values.data()[t * self.features..(t + 1) * self.features]
    }

    #[inline]
    pub fn step_mut(&mut self, t: usize) -> &mut [f64] {
        &mut self.values.data_mut()[t * self.features..(t + 1) * self.features]
    }
}
