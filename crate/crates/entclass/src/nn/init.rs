//! Seeded parameter initialization.

use crate::numeric::{RngStream, Tensor};

/// Kaiming-uniform fan-in initialization: U[-sqrt(6/fan_in), sqrt(6/fan_in)].
pub fn kaiming_uniform(shape: Vec<usize>, fan_in: usize, rng: &mut RngStream) -> Tensor {
    let bound = (6.0 / fan_in as f64).sqrt();
    let numel: usize = shape.iter().product();
    let data = (0..numel).map(|_| rng.uniform(-bound, bound)).collect();
    Tensor::new(shape, data).expect("consistent shape")
}

/// LSTM initialization: U[-1/sqrt(hidden), 1/sqrt(hidden)].
pub fn lstm_uniform(shape: Vec<usize>, hidden: usize, rng: &mut RngStream) -> Tensor {
    let bound = 1.0 / (hidden as f64).sqrt();
    let numel: usize = shape.iter().product();
    let data = (0..numel).map(|_| rng.uniform(-bound, bound)).collect();
    Tensor::new(shape, data).expect("consistent shape")
}
