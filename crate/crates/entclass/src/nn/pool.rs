//! 1-D max pooling with deterministic tie-breaking.

use crate::error::{Error, Result};

use super::ConvFeatureMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MaxPool1d {
    pub window: usize,
    pub stride: usize,
}

/// Forward cache: the argmax position (within the input channel) chosen
/// for each output element.
#[derive(Debug, Clone)]
pub struct PoolCache {
    pub argmax: Vec<usize>,
    pub in_channels: usize,
    pub in_len: usize,
}

impl MaxPool1d {
    pub fn new(window: usize, stride: usize) -> Self {
        Self { window, stride }
    }

    pub fn out_len(&self, in_len: usize) -> Result<usize> {
        if self.window > in_len {
            return Err(Error::ShapeMismatch(format!(
                "pool window {} longer than input {in_len}",
                self.window
            )));
        }
        Ok((in_len - self.window) / self.stride + 1)
    }

    /// Per-channel window max; ties break toward the lowest index.
    pub fn forward(&self, input: &ConvFeatureMap) -> Result<(ConvFeatureMap, PoolCache)> {
        let n_out = self.out_len(input.len)?;
        let mut out = ConvFeatureMap::zeros(input.channels, n_out);
        let mut argmax = vec![0usize; input.channels * n_out];
        for ch in 0..input.channels {
            let in_ch = input.channel(ch);
            for p in 0..n_out {
                let start = p * self.stride;
                let mut best_idx = start;
                let mut best = in_ch[start];
                for j in start + 1..start + self.window {
                    if in_ch[j] > best {
                        best = in_ch[j];
                        best_idx = j;
                    }
                }
                out.values.data_mut()[ch * n_out + p] = best;
                argmax[ch * n_out + p] = best_idx;
            }
        }
        Ok((
            out,
            PoolCache {
                argmax,
                in_channels: input.channels,
                in_len: input.len,
            },
        ))
    }

    /// Routes each output gradient to its argmax input position.
    pub fn backward(&self, cache: &PoolCache, grad_out: &ConvFeatureMap) -> ConvFeatureMap {
        let mut grad_in = ConvFeatureMap::zeros(cache.in_channels, cache.in_len);
        let n_out = grad_out.len;
        for ch in 0..cache.in_channels {
            for p in 0..n_out {
                let src = cache.argmax[ch * n_out + p];
                grad_in.values.data_mut()[ch * cache.in_len + src] +=
                    grad_out.values.data()[ch * n_out + p];
            }
        }
        grad_in
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn window_maxima() {
        let pool = MaxPool1d::new(2, 2);
        let input = ConvFeatureMap::from_vector(vec![1.0, 3.0, 2.0, 4.0]);
        let (out, _) = pool.forward(&input).unwrap();
        assert_eq!(out.values.data(), &[3.0, 4.0]);
    }

    #[test]
    fn ties_route_to_first_index() {
        let pool = MaxPool1d::new(2, 2);
        let input = ConvFeatureMap::from_vector(vec![5.0, 5.0, 5.0, 5.0]);
        let (out, cache) = pool.forward(&input).unwrap();
        assert_eq!(out.values.data(), &[5.0, 5.0]);
        assert_eq!(cache.argmax, vec![0, 2]);
        let grad_out = ConvFeatureMap::from_vector(vec![1.0, 2.0]);
        let grad_in = pool.backward(&cache, &grad_out);
        assert_eq!(grad_in.values.data(), &[1.0, 0.0, 2.0, 0.0]);
    }

    #[test]
    fn oversized_window_is_an_error() {
        let pool = MaxPool1d::new(5, 1);
        let input = ConvFeatureMap::from_vector(vec![1.0, 2.0]);
        assert!(pool.forward(&input).is_err());
    }
}
