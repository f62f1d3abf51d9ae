//! Numerically stable softmax and cross-entropy loss.

use crate::error::{Error, Result};

/// Softmax with max-subtraction; output entries are in (0,1) and sum to 1.
pub fn softmax(logits: &[f64]) -> Vec<f64> {
    let max = logits.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = logits.iter().map(|&l| (l - max).exp()).collect();
    let total: f64 = exps.iter().sum();
    exps.into_iter().map(|e| e / total).collect()
}

/// Cross-entropy loss -log p_label and its gradient p - onehot(label).
pub fn softmax_cross_entropy(logits: &[f64], label: usize) -> Result<(f64, Vec<f64>)> {
    if label >= logits.len() {
        return Err(Error::InvalidArgument(format!(
            "label {label} out of range for {} classes",
            logits.len()
        )));
    }
    let max = logits.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = logits.iter().map(|&l| (l - max).exp()).collect();
    let total: f64 = exps.iter().sum();
    // -log p = log(sum exp(l - max)) - (l_label - max)
    let loss = total.ln() - (logits[label] - max);
    let mut grad: Vec<f64> = exps.into_iter().map(|e| e / total).collect();
    grad[label] -= 1.0;
    Ok((loss, grad))
}
