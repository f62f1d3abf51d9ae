//! Independent verification oracles for state classification.
//!
//! These are used by tests to cross-check sampled states and are never
//! consulted during dataset generation: Schmidt coefficients across
//! bipartitions, the 3-tangle, and Hermitian eigenvalues via a Jacobi
//! solver on the real embedding.

use num_complex::Complex64;

use crate::numeric::CMatrix;
use crate::qsim::state::QuantumState;

/// Second-largest singular value of the one-qubit-vs-rest amplitude
/// reshaping. Zero (up to round-off) means the qubit is in a product with
/// the rest.
pub fn second_singular_value(state: &QuantumState, qubit: usize) -> f64 {
    let n = state.n_qubits();
    assert!(qubit < n);
    let half = 1 << (n - 1);
    // Rows indexed by the chosen qubit's bit, columns by the remaining bits.
    let mut rows = [vec![Complex64::ZERO; half], vec![Complex64::ZERO; half]];
    for (idx, amp) in state.amplitudes().iter().enumerate() {
        let bit = (idx >> (n - 1 - qubit)) & 1;
        let hi_mask = ((1 << qubit) - 1) << (n - 1 - qubit + 1);
        let lo_mask = (1 << (n - 1 - qubit)) - 1;
        let col = ((idx & hi_mask) >> 1) | (idx & lo_mask);
        rows[bit][col] = *amp;
    }
    // Smaller eigenvalue of the 2x2 Gram matrix A A^dagger. The
    // determinant is accumulated as the sum of squared 2x2 minors, which
    // has no cancellation, and lambda_min = det / lambda_max keeps full
    // precision for near-rank-1 inputs.
    let g00: f64 = rows[0].iter().map(|z| z.norm_sqr()).sum();
    let g11: f64 = rows[1].iter().map(|z| z.norm_sqr()).sum();
    let mut det = 0.0f64;
    for i in 0..half {
        for j in (i + 1)..half {
            det += (rows[0][i] * rows[1][j] - rows[0][j] * rows[1][i]).norm_sqr();
        }
    }
    let tr = g00 + g11;
    let disc = (tr * tr - 4.0 * det).max(0.0).sqrt();
    let lambda_max = (tr + disc) / 2.0;
    if lambda_max == 0.0 {
        return 0.0;
    }
    (det / lambda_max).max(0.0).sqrt()
}

/// The 3-tangle of a 3-qubit pure state: 4|d1 - 2 d2 + 4 d3| built from the
/// degree-4 hyperdeterminant invariants. Nonzero exactly on the GHZ class.
pub fn three_tangle(state: &QuantumState) -> f64 {
    assert_eq!(state.n_qubits(), 3);
    let a = |q0: usize, q1: usize, q2: usize| state.amplitudes()[(q0 << 2) | (q1 << 1) | q2];

    let d1 = a(0, 0, 0).powi(2) * a(1, 1, 1).powi(2)
        + a(0, 0, 1).powi(2) * a(1, 1, 0).powi(2)
        + a(0, 1, 0).powi(2) * a(1, 0, 1).powi(2)
        + a(1, 0, 0).powi(2) * a(0, 1, 1).powi(2);
    let d2 = a(0, 0, 0) * a(1, 1, 1) * a(0, 1, 1) * a(1, 0, 0)
        + a(0, 0, 0) * a(1, 1, 1) * a(1, 0, 1) * a(0, 1, 0)
        + a(0, 0, 0) * a(1, 1, 1) * a(1, 1, 0) * a(0, 0, 1)
        + a(0, 1, 1) * a(1, 0, 0) * a(1, 0, 1) * a(0, 1, 0)
        + a(0, 1, 1) * a(1, 0, 0) * a(1, 1, 0) * a(0, 0, 1)
        + a(1, 0, 1) * a(0, 1, 0) * a(1, 1, 0) * a(0, 0, 1);
    let d3 = a(0, 0, 0) * a(1, 1, 0) * a(1, 0, 1) * a(0, 1, 1)
        + a(1, 1, 1) * a(0, 0, 1) * a(0, 1, 0) * a(1, 0, 0);

    4.0 * (d1 - 2.0 * d2 + 4.0 * d3).norm()
}

const RANK_TOL: f64 = 1e-8;
const TANGLE_TOL: f64 = 1e-6;

/// Classify a 3-qubit pure state into the default roster's label ids using
/// bipartition Schmidt ranks and the 3-tangle.
pub fn classify_three_qubit(state: &QuantumState) -> usize {
    let separable: Vec<bool> = (0..3)
        .map(|q| second_singular_value(state, q) < RANK_TOL)
        .collect();
    match separable.iter().filter(|&&s| s).count() {
        3 => 0,
        // A product single qubit with an entangled remainder.
        1 => 1 + separable.iter().position(|&s| s).unwrap(),
        0 => {
            if three_tangle(state) > TANGLE_TOL {
                5
            } else {
                4
            }
        }
        // Two separable cuts on a pure 3-qubit state force the third.
        _ => 0,
    }
}

/// Eigenvalues of a Hermitian matrix, ascending.
///
/// Uses cyclic Jacobi on the real symmetric embedding [[Re, -Im], [Im, Re]],
/// whose spectrum is the Hermitian spectrum with doubled multiplicity.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let n = m.rows();
    assert_eq!(n, m.cols());
    let dim = 2 * n;
    let mut a = vec![0.0f64; dim * dim];
    for i in 0..n {
        for j in 0..n {
            let z = m[(i, j)];
            a[i * dim + j] = z.re;
            a[i * dim + (n + j)] = -z.im;
            a[(n + i) * dim + j] = z.im;
            a[(n + i) * dim + (n + j)] = z.re;
        }
    }

    // Cyclic Jacobi sweeps.
    for _sweep in 0..100 {
        let mut off = 0.0f64;
        for p in 0..dim {
            for q in (p + 1)..dim {
                off += a[p * dim + q] * a[p * dim + q];
            }
        }
        if off.sqrt() < 1e-13 {
            break;
        }
        for p in 0..dim {
            for q in (p + 1)..dim {
                let apq = a[p * dim + q];
                if apq.abs() < 1e-300 {
                    continue;
                }
                let app = a[p * dim + p];
                let aqq = a[q * dim + q];
                let tau = (aqq - app) / (2.0 * apq);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let cos = 1.0 / (1.0 + t * t).sqrt();
                let sin = t * cos;
                for k in 0..dim {
                    let akp = a[k * dim + p];
                    let akq = a[k * dim + q];
                    a[k * dim + p] = cos * akp - sin * akq;
                    a[k * dim + q] = sin * akp + cos * akq;
                }
                for k in 0..dim {
                    let apk = a[p * dim + k];
                    let aqk = a[q * dim + k];
                    a[p * dim + k] = cos * apk - sin * aqk;
                    a[q * dim + k] = sin * apk + cos * aqk;
                }
            }
        }
    }

    let mut eigs: Vec<f64> = (0..dim).map(|i| a[i * dim + i]).collect();
    eigs.sort_by(|x, y| x.partial_cmp(y).unwrap());
    // Doubled multiplicities: take every other one.
    eigs.into_iter().step_by(2).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qsim::slocc::canonical;
    use std::f64::consts::PI;

    #[test]
    fn ghz_has_maximal_tangle() {
        let ghz = canonical::ghz(3, PI / 4.0, 0.0);
        assert!((three_tangle(&ghz) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn w_has_zero_tangle() {
        let w = canonical::w3([1.0 / 3.0; 3]);
        assert!(three_tangle(&w) < 1e-12);
    }

    #[test]
    fn basis_state_is_fully_separable() {
        let s = QuantumState::basis_state(3, 0b101);
        for q in 0..3 {
            assert!(second_singular_value(&s, q) < 1e-15);
        }
        assert_eq!(classify_three_qubit(&s), 0);
    }

    #[test]
    fn ghz_bipartitions_are_maximally_mixed() {
        let ghz = canonical::ghz(3, PI / 4.0, 0.0);
        for q in 0..3 {
            let sv2 = second_singular_value(&ghz, q);
            assert!((sv2 - 1.0 / 2f64.sqrt()).abs() < 1e-12);
        }
        assert_eq!(classify_three_qubit(&ghz), 5);
    }

    #[test]
    fn bisep_classifies_to_its_label() {
        assert_eq!(classify_three_qubit(&canonical::bisep3(0, 0.5)), 1);
        assert_eq!(classify_three_qubit(&canonical::bisep3(1, 0.5)), 2);
        assert_eq!(classify_three_qubit(&canonical::bisep3(2, 0.5)), 3);
        assert_eq!(classify_three_qubit(&canonical::w3([1. / 3.; 3])), 4);
    }

    #[test]
    fn jacobi_eigenvalues_of_known_matrix() {
        // Pauli Y has eigenvalues -1, +1.
        let y = CMatrix::new(
            2,
            2,
            vec![
                Complex64::ZERO,
                Complex64::new(0.0, -1.0),
                Complex64::new(0.0, 1.0),
                Complex64::ZERO,
            ],
        )
        .unwrap();
        let eigs = hermitian_eigenvalues(&y);
        assert_eq!(eigs.len(), 2);
        assert!((eigs[0] + 1.0).abs() < 1e-10);
        assert!((eigs[1] - 1.0).abs() < 1e-10);
    }

    #[test]
    fn jacobi_matches_trace_and_purity() {
        use crate::qsim::state::to_density;
        let ghz = canonical::ghz(3, 0.9, 1.3);
        let rho = to_density(&ghz);
        let eigs = hermitian_eigenvalues(rho.matrix());
        let total: f64 = eigs.iter().sum();
        assert!((total - 1.0).abs() < 1e-9);
        // Pure state: one eigenvalue 1, rest 0.
        assert!((eigs.last().unwrap() - 1.0).abs() < 1e-9);
        assert!(eigs.iter().rev().skip(1).all(|&e| e.abs() < 1e-9));
    }
}
