//! Noise channels: dephasing and finite-shot measurement statistics.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::RngStream;
use crate::qsim::state::DensityMatrix;

/// Shot budget per measurement setting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Shots {
    /// Return exact Born probabilities.
    Exact,
    /// Multinomial sampling with this many trials.
    Count(u64),
}

impl Shots {
    /// Metadata encoding: -1 means exact.
    pub fn to_i64(self) -> i64 {
        match self {
            Shots::Exact => -1,
            Shots::Count(n) => n as i64,
        }
    }

    pub fn from_i64(v: i64) -> Result<Self> {
        match v {
            -1 => Ok(Shots::Exact),
            n if n >= 1 => Ok(Shots::Count(n as u64)),
            other => Err(Error::InvalidArgument(format!(
                "shots must be -1 (exact) or >= 1, got {other}"
            ))),
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        if text.eq_ignore_ascii_case("exact") {
            return Ok(Shots::Exact);
        }
        let n: i64 = text
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("bad shots value: {text}")))?;
        Self::from_i64(n)
    }
}

/// Noise applied during feature encoding.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseConfig {
    pub dephasing_epsilon: f64,
    pub shots: Shots,
}

impl NoiseConfig {
    pub const NOISELESS: NoiseConfig = NoiseConfig {
        dephasing_epsilon: 0.0,
        shots: Shots::Exact,
    };

    pub fn new(dephasing_epsilon: f64, shots: Shots) -> Result<Self> {
        if !(0.0..=1.0).contains(&dephasing_epsilon) {
            return Err(Error::Domain(format!(
                "dephasing epsilon must be in [0,1], got {dephasing_epsilon}"
            )));
        }
        Ok(Self {
            dephasing_epsilon,
            shots,
        })
    }
}

impl Default for NoiseConfig {
    fn default() -> Self {
        Self::NOISELESS
    }
}

/// Phase damping: every off-diagonal element (computational basis) is
/// scaled by (1 - epsilon); populations are untouched.
pub fn apply_dephasing(rho: &DensityMatrix, epsilon: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&epsilon) {
        return Err(Error::Domain(format!(
            "dephasing epsilon must be in [0,1], got {epsilon}"
        )));
    }
    let mut out = rho.clone();
    let dim = out.dim();
    let scale = 1.0 - epsilon;
    let m = out.matrix_mut();
    for i in 0..dim {
        for j in 0..dim {
            if i != j {
                m[(i, j)] *= scale;
            }
        }
    }
    Ok(out)
}

/// Finite-shot measurement statistics.
///
/// `Exact` returns the probabilities unchanged; otherwise draws a
/// multinomial sample of the given size and returns counts/shots, which
/// sums to exactly 1.
pub fn sample_frequencies(probs: &[f64], shots: Shots, rng: &mut RngStream) -> Vec<f64> {
    let n = match shots {
        Shots::Exact => return probs.to_vec(),
        Shots::Count(n) => n,
    };
    let mut cumulative = Vec::with_capacity(probs.len());
    let mut acc = 0.0;
    for &p in probs {
        acc += p;
        cumulative.push(acc);
    }
    let total = acc;

    let mut counts = vec![0u64; probs.len()];
    for _ in 0..n {
        let u = rng.next_f64() * total;
        // First index with cumulative > u.
        let k = cumulative.partition_point(|&c| c <= u).min(probs.len() - 1);
        counts[k] += 1;
    }
    counts.iter().map(|&c| c as f64 / n as f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::derive_stream;
    use crate::qsim::slocc::canonical;
    use crate::qsim::state::to_density;
    use std::f64::consts::PI;

    #[test]
    fn zero_epsilon_is_identity() {
        let rho = to_density(&canonical::ghz(3, PI / 4.0, 0.0));
        let out = apply_dephasing(&rho, 0.0).unwrap();
        assert_eq!(rho.matrix().max_abs_diff(out.matrix()), 0.0);
    }

    #[test]
    fn full_dephasing_kills_ghz_coherence() {
        let rho = to_density(&canonical::ghz(3, PI / 4.0, 0.0));
        let out = apply_dephasing(&rho, 1.0).unwrap();
        let m = out.matrix();
        assert!((m[(0, 0)].re - 0.5).abs() < 1e-12);
        assert!((m[(7, 7)].re - 0.5).abs() < 1e-12);
        for i in 0..8 {
            for j in 0..8 {
                if i != j {
                    assert!(m[(i, j)].norm() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn partial_dephasing_scales_the_off_diagonal() {
        // GHZ corner entry is 0.5; after eps = 0.1 it becomes 0.45.
        let rho = to_density(&canonical::ghz(3, PI / 4.0, 0.0));
        let out = apply_dephasing(&rho, 0.1).unwrap();
        assert!((out.matrix()[(0, 7)].re - 0.45).abs() < 1e-12);
        assert!((out.matrix()[(0, 0)].re - 0.5).abs() < 1e-12);
    }

    #[test]
    fn dephasing_rejects_out_of_range_epsilon() {
        let rho = to_density(&canonical::ghz(3, PI / 4.0, 0.0));
        assert!(apply_dephasing(&rho, -0.1).is_err());
        assert!(apply_dephasing(&rho, 1.1).is_err());
        assert!(NoiseConfig::new(2.0, Shots::Exact).is_err());
    }

    #[test]
    fn dephasing_preserves_trace_and_hermiticity_and_is_idempotent_at_one() {
        let rho = to_density(&canonical::ghz(3, 0.7, 0.3));
        let out = apply_dephasing(&rho, 1.0).unwrap();
        let twice = apply_dephasing(&out, 1.0).unwrap();
        assert_eq!(out.matrix().max_abs_diff(twice.matrix()), 0.0);
        assert!((out.matrix().trace().re - 1.0).abs() < 1e-12);
        let adj = out.matrix().adjoint();
        assert!(out.matrix().max_abs_diff(&adj) < 1e-12);
    }

    #[test]
    fn dephased_state_stays_positive_semidefinite() {
        use crate::qsim::verify::hermitian_eigenvalues;
        let rho = to_density(&canonical::ghz(3, 0.9, 2.1));
        for eps in [0.05, 0.5, 1.0] {
            let out = apply_dephasing(&rho, eps).unwrap();
            let eigs = hermitian_eigenvalues(out.matrix());
            assert!(eigs[0] > -1e-10, "eps {eps}: min eigenvalue {}", eigs[0]);
        }
    }

    #[test]
    fn exact_mode_returns_input() {
        let probs = vec![0.25, 0.75];
        let mut rng = derive_stream(0, 0);
        assert_eq!(sample_frequencies(&probs, Shots::Exact, &mut rng), probs);
    }

    #[test]
    fn degenerate_distribution_is_fixed_point() {
        let mut probs = vec![0.0; 8];
        probs[0] = 1.0;
        let mut rng = derive_stream(0, 1);
        let out = sample_frequencies(&probs, Shots::Count(100), &mut rng);
        assert_eq!(out, probs);
    }

    #[test]
    fn frequencies_sum_to_exactly_one() {
        let probs = vec![0.1, 0.2, 0.3, 0.4];
        let mut rng = derive_stream(0, 2);
        for shots in [1, 7, 100] {
            let out = sample_frequencies(&probs, Shots::Count(shots), &mut rng);
            let total: f64 = out.iter().sum();
            assert!((total - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn law_of_large_numbers_on_fair_coin() {
        let probs = vec![0.5, 0.5];
        let mut rng = derive_stream(0, 3);
        let reps = 1000;
        let mean: f64 = (0..reps)
            .map(|_| sample_frequencies(&probs, Shots::Count(10_000), &mut rng)[0])
            .sum::<f64>()
            / reps as f64;
        assert!((mean - 0.5).abs() < 0.005, "mean = {mean}");
    }

    #[test]
    fn shots_metadata_roundtrip() {
        assert_eq!(Shots::from_i64(-1).unwrap(), Shots::Exact);
        assert_eq!(Shots::from_i64(100).unwrap(), Shots::Count(100));
        assert!(Shots::from_i64(0).is_err());
        assert_eq!(Shots::parse("exact").unwrap(), Shots::Exact);
        assert_eq!(Shots::parse("64").unwrap(), Shots::Count(64));
    }
}
