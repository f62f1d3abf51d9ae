//! Born-rule measurement probabilities and feature-vector encoding.

use crate::error::{Error, Result};
use crate::numeric::RngStream;
use crate::qsim::basis::{BasisSet, Setting};
use crate::qsim::noise::{apply_dephasing, sample_frequencies, NoiseConfig};
use crate::qsim::state::DensityMatrix;

/// Probabilities smaller than this in magnitude are treated as round-off
/// and clamped to zero; anything more negative is a logic error.
const NEGATIVE_PROB_TOL: f64 = -1e-10;

/// Born-rule outcome probabilities p_k = <phi_k| rho |phi_k> for one
/// measurement setting.
pub fn born_probabilities(rho: &DensityMatrix, setting: &Setting) -> Result<Vec<f64>> {
    let dim = rho.dim();
    if setting.projectors.iter().any(|p| p.len() != dim) {
        return Err(Error::ShapeMismatch(format!(
            "projector dimension does not match density matrix dim {dim}"
        )));
    }
    let mut probs = Vec::with_capacity(setting.projectors.len());
    for phi in &setting.projectors {
        let rho_phi = rho.matrix().matvec(phi)?;
        let p: f64 = phi
            .iter()
            .zip(&rho_phi)
            .map(|(a, b)| (a.conj() * b).re)
            .sum();
        if p < NEGATIVE_PROB_TOL {
            return Err(Error::NumericDivergence(format!(
                "Born probability {p} below the round-off floor"
            )));
        }
        probs.push(p.max(0.0));
    }
    let total: f64 = probs.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::NumericDivergence(format!(
            "setting probabilities sum to {total}, expected 1"
        )));
    }
    Ok(probs)
}

/// Encode a state as a length-M feature vector: dephase, then for every
/// setting in order compute Born probabilities and apply shot sampling,
/// concatenating the per-setting blocks.
pub fn encode_features(
    rho: &DensityMatrix,
    bases: &BasisSet,
    noise: &NoiseConfig,
    rng: &mut RngStream,
) -> Result<Vec<f64>> {
    if bases.n_qubits() != rho.n_qubits() {
        return Err(Error::ShapeMismatch(format!(
            "basis set is for {} qubits, state has {}",
            bases.n_qubits(),
            rho.n_qubits()
        )));
    }
    let noisy = apply_dephasing(rho, noise.dephasing_epsilon)?;
    let mut features = Vec::with_capacity(bases.feature_len());
    for setting in bases.settings() {
        let probs = born_probabilities(&noisy, setting)?;
        features.extend(sample_frequencies(&probs, noise.shots, rng));
    }
    Ok(features)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::derive_stream;
    use crate::qsim::basis::{build_basis_set, MeasurementScheme};
    use crate::qsim::noise::Shots;
    use crate::qsim::slocc::{canonical, sample_state, Roster};
    use crate::qsim::state::to_density;
    use std::f64::consts::PI;

    fn bases3() -> BasisSet {
        build_basis_set(3, MeasurementScheme::LocalPauli)
    }

    #[test]
    fn ghz_in_zzz_has_two_equal_peaks() {
        let rho = to_density(&canonical::ghz(3, PI / 4.0, 0.0));
        let bases = bases3();
        let probs = born_probabilities(&rho, &bases.settings()[26]).unwrap();
        assert!((probs[0] - 0.5).abs() < 1e-10);
        assert!((probs[7] - 0.5).abs() < 1e-10);
        for p in &probs[1..7] {
            assert!(p.abs() < 1e-10);
        }
    }

    #[test]
    fn w_in_zzz_spreads_over_weight_one_outcomes() {
        let rho = to_density(&canonical::w3([1.0 / 3.0; 3]));
        let bases = bases3();
        let probs = born_probabilities(&rho, &bases.settings()[26]).unwrap();
        for idx in [0b001, 0b010, 0b100] {
            assert!((probs[idx] - 1.0 / 3.0).abs() < 1e-10);
        }
        for idx in [0b000, 0b011, 0b101, 0b110, 0b111] {
            assert!(probs[idx].abs() < 1e-10);
        }
    }

    #[test]
    fn ghz_in_xxx_concentrates_on_even_parity() {
        let rho = to_density(&canonical::ghz(3, PI / 4.0, 0.0));
        let bases = bases3();
        // Setting 0 is X on every qubit.
        let probs = born_probabilities(&rho, &bases.settings()[0]).unwrap();
        for outcome in 0..8usize {
            let expected = if outcome.count_ones() % 2 == 0 { 0.25 } else { 0.0 };
            assert!(
                (probs[outcome] - expected).abs() < 1e-10,
                "outcome {outcome:03b}: {}",
                probs[outcome]
            );
        }
    }

    #[test]
    fn noiseless_features_reproduce_born_blocks() {
        let rho = to_density(&canonical::ghz(3, PI / 4.0, 0.0));
        let bases = bases3();
        let mut rng = derive_stream(0, 0);
        let feats = encode_features(&rho, &bases, &NoiseConfig::NOISELESS, &mut rng).unwrap();
        assert_eq!(feats.len(), 216);
        // ZZZ block is the last one.
        let zzz = &feats[26 * 8..27 * 8];
        assert!((zzz[0] - 0.5).abs() < 1e-10);
        assert!((zzz[7] - 0.5).abs() < 1e-10);
    }

    #[test]
    fn feature_blocks_are_probability_vectors() {
        let roster = Roster::three_qubit();
        let bases = bases3();
        let mut rng = derive_stream(31, 0);
        for fam in &roster.families {
            let s = sample_state(fam, &mut rng);
            let feats =
                encode_features(&to_density(&s), &bases, &NoiseConfig::NOISELESS, &mut rng)
                    .unwrap();
            for block in feats.chunks(8) {
                let total: f64 = block.iter().sum();
                assert!((total - 1.0).abs() < 1e-9);
                assert!(block.iter().all(|&p| (0.0..=1.0 + 1e-12).contains(&p)));
            }
        }
    }

    #[test]
    fn fully_dephased_ghz_is_uniform_in_xxx() {
        // diag(1/2, 0, ..., 0, 1/2) has probability 1/8 on every |+/-> string.
        let rho = to_density(&canonical::ghz(3, PI / 4.0, 0.0));
        let bases = bases3();
        let noise = NoiseConfig::new(1.0, Shots::Exact).unwrap();
        let mut rng = derive_stream(32, 0);
        let feats = encode_features(&rho, &bases, &noise, &mut rng).unwrap();
        let xxx = &feats[0..8];
        for p in xxx {
            assert!((p - 0.125).abs() < 1e-10);
        }
    }

    #[test]
    fn product_state_probabilities_factorize() {
        let roster = Roster::three_qubit();
        let fam = roster.by_name("fully-separable").unwrap();
        let bases = bases3();
        let mut rng = derive_stream(33, 0);
        let s = sample_state(fam, &mut rng);
        let rho = to_density(&s);
        for setting in bases.settings() {
            let joint = born_probabilities(&rho, setting).unwrap();
            // Single-qubit marginals.
            let mut marg = [[0.0f64; 2]; 3];
            for (outcome, &p) in joint.iter().enumerate() {
                for q in 0..3 {
                    marg[q][(outcome >> (2 - q)) & 1] += p;
                }
            }
            for (outcome, &p) in joint.iter().enumerate() {
                let product: f64 = (0..3).map(|q| marg[q][(outcome >> (2 - q)) & 1]).product();
                assert!((p - product).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let rho = to_density(&canonical::ghz(3, PI / 4.0, 0.0));
        let bases4 = build_basis_set(4, MeasurementScheme::LocalPauli);
        let mut rng = derive_stream(0, 0);
        assert!(born_probabilities(&rho, &bases4.settings()[0]).is_err());
        assert!(encode_features(&rho, &bases4, &NoiseConfig::NOISELESS, &mut rng).is_err());
    }
}
