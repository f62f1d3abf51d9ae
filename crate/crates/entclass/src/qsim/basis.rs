//! Measurement basis sets.
//!
//! The default LOCAL_PAULI scheme measures every tensor product of
//! per-qubit X, Y, Z eigenbases (the single-qubit mutually unbiased
//! bases). Setting order: setting index written in base 3 with qubit 0 as
//! the most significant digit, digit 0 -> X, 1 -> Y, 2 -> Z. Outcome
//! order within a setting: outcome index in base 2, qubit 0 most
//! significant, bit 0 -> the +1 eigenvector.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::CMatrix;

/// Identifier for a measurement scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MeasurementScheme {
    LocalPauli,
}

impl MeasurementScheme {
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "LOCAL_PAULI" => Ok(Self::LocalPauli),
            other => Err(Error::UnknownScheme(other.to_string())),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::LocalPauli => "LOCAL_PAULI",
        }
    }
}

/// One measurement setting: a complete set of 2^n orthonormal rank-1
/// projector vectors.
#[derive(Debug, Clone)]
pub struct Setting {
    /// Projector vectors, one per outcome, each of length 2^n.
    pub projectors: Vec<Vec<Complex64>>,
}

/// An ordered collection of measurement settings defining the
/// feature-vector layout: feature index = setting * 2^n + outcome.
#[derive(Debug, Clone)]
pub struct BasisSet {
    n_qubits: usize,
    scheme: MeasurementScheme,
    settings: Vec<Setting>,
}

impl BasisSet {
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn scheme(&self) -> MeasurementScheme {
        self.scheme
    }

    pub fn settings(&self) -> &[Setting] {
        &self.settings
    }

    pub fn n_settings(&self) -> usize {
        self.settings.len()
    }

    pub fn outcomes_per_setting(&self) -> usize {
        1 << self.n_qubits
    }

    /// Total feature-vector length M = settings * 2^n.
    pub fn feature_len(&self) -> usize {
        self.settings.len() * self.outcomes_per_setting()
    }
}

/// Per-qubit eigenbases: index 0 -> X, 1 -> Y, 2 -> Z; within each basis,
/// outcome 0 is the +1 eigenvector.
fn single_qubit_basis(axis: usize) -> [[Complex64; 2]; 2] {
    let inv = 1.0 / 2f64.sqrt();
    let r = |x: f64| Complex64::new(x, 0.0);
    let i = |x: f64| Complex64::new(0.0, x);
    match axis {
        0 => [[r(inv), r(inv)], [r(inv), r(-inv)]],
        1 => [[r(inv), i(inv)], [r(inv), i(-inv)]],
        2 => [[r(1.0), r(0.0)], [r(0.0), r(1.0)]],
        _ => unreachable!(),
    }
}

/// Build the basis set for the given scheme.
pub fn build_basis_set(n_qubits: usize, scheme: MeasurementScheme) -> BasisSet {
    match scheme {
        MeasurementScheme::LocalPauli => build_local_pauli(n_qubits),
    }
}

fn build_local_pauli(n_qubits: usize) -> BasisSet {
    let n_settings = 3usize.pow(n_qubits as u32);
    let dim = 1 << n_qubits;
    let mut settings = Vec::with_capacity(n_settings);
    for s in 0..n_settings {
        // Base-3 digits, qubit 0 most significant.
        let mut axes = vec![0usize; n_qubits];
        let mut rem = s;
        for q in (0..n_qubits).rev() {
            axes[q] = rem % 3;
            rem /= 3;
        }
        let mut projectors = Vec::with_capacity(dim);
        for outcome in 0..dim {
            let mut vector = vec![Complex64::ONE];
            for (q, &axis) in axes.iter().enumerate() {
                let bit = (outcome >> (n_qubits - 1 - q)) & 1;
                let eig = single_qubit_basis(axis)[bit];
                let mut next = vec![Complex64::ZERO; vector.len() * 2];
                for (i, v) in vector.iter().enumerate() {
                    next[i * 2] = v * eig[0];
                    next[i * 2 + 1] = v * eig[1];
                }
                vector = next;
            }
            projectors.push(vector);
        }
        settings.push(Setting { projectors });
    }
    BasisSet {
        n_qubits,
        scheme: MeasurementScheme::LocalPauli,
        settings,
    }
}

/// max |sum_k P_k - I| over a setting's projectors; the completeness defect.
pub fn completeness_defect(setting: &Setting) -> f64 {
    let dim = setting.projectors[0].len();
    let mut sum = CMatrix::zeros(dim, dim);
    for phi in &setting.projectors {
        for i in 0..dim {
            for j in 0..dim {
                sum[(i, j)] += phi[i] * phi[j].conj();
            }
        }
    }
    sum.max_abs_diff(&CMatrix::identity(dim))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn feature_lengths_match_scheme_arithmetic() {
        assert_eq!(build_basis_set(3, MeasurementScheme::LocalPauli).feature_len(), 216);
        assert_eq!(build_basis_set(4, MeasurementScheme::LocalPauli).feature_len(), 1296);
    }

    #[test]
    fn every_setting_is_complete() {
        let bases = build_basis_set(3, MeasurementScheme::LocalPauli);
        for (s, setting) in bases.settings().iter().enumerate() {
            let defect = completeness_defect(setting);
            assert!(defect < 1e-12, "setting {s}: defect {defect}");
        }
    }

    #[test]
    fn projectors_are_orthonormal() {
        let bases = build_basis_set(3, MeasurementScheme::LocalPauli);
        for setting in bases.settings() {
            for (a, pa) in setting.projectors.iter().enumerate() {
                for (b, pb) in setting.projectors.iter().enumerate() {
                    let ip: Complex64 = pa.iter().zip(pb).map(|(x, y)| x.conj() * y).sum();
                    let expected = if a == b { 1.0 } else { 0.0 };
                    assert!((ip.norm() - expected).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn last_setting_is_all_z() {
        // Base-3 digits of the last index are all 2 -> Z on every qubit;
        // its projectors are the computational basis states.
        let bases = build_basis_set(3, MeasurementScheme::LocalPauli);
        let zzz = &bases.settings()[26];
        for (outcome, phi) in zzz.projectors.iter().enumerate() {
            for (i, amp) in phi.iter().enumerate() {
                let expected = if i == outcome { 1.0 } else { 0.0 };
                assert!((amp.norm() - expected).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn unknown_scheme_name_rejected() {
        assert!(MeasurementScheme::parse("LOCAL_PAULI").is_ok());
        assert!(MeasurementScheme::parse("FULL_MUB").is_err());
    }
}
