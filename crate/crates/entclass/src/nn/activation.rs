//! LeakyReLU activation.

/// y = x for x > 0, slope * x otherwise.
pub fn leaky_relu(x: &[f64], slope: f64) -> Vec<f64> {
    x.iter()
        .map(|&v| if v > 0.0 { v } else { slope * v })
        .collect()
}

/// Derivative is 1 for x > 0, slope for x < 0; the subgradient at exactly
/// 0 is taken as 1.
pub fn leaky_relu_backward(x: &[f64], grad_out: &[f64], slope: f64) -> Vec<f64> {
    debug_assert_eq!(x.len(), grad_out.len());
    x.iter()
        .zip(grad_out)
        .map(|(&v, &g)| if v >= 0.0 { g } else { slope * g })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn positive_passes_through() {
        assert_eq!(leaky_relu(&[2.0], 0.01), vec![2.0]);
    }

    #[test]
    fn negative_is_scaled() {
        let y = leaky_relu(&[-2.0], 0.01);
        assert!((y[0] + 0.02).abs() < 1e-15);
    }

    #[test]
    fn zero_uses_unit_subgradient() {
        let g = leaky_relu_backward(&[0.0], &[3.0], 0.01);
        assert_eq!(g, vec![3.0]);
    }
}
