//! Pure quantum states and density matrices.
//!
//! Amplitude indexing puts qubit 0 in the most significant bit position:
//! for n qubits, basis state |q0 q1 ... q(n-1)> sits at index
//! q0*2^(n-1) + q1*2^(n-2) + ... + q(n-1).

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numeric::CMatrix;

const NORM_TOL: f64 = 1e-10;

/// A pure n-qubit state vector with unit norm.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumState {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl QuantumState {
    /// Build from amplitudes, which must have length 2^n and unit norm
    /// within 1e-10.
    pub fn new(n_qubits: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != 1 << n_qubits {
            return Err(Error::ShapeMismatch(format!(
                "{n_qubits}-qubit state needs {} amplitudes, got {}",
                1 << n_qubits,
                amplitudes.len()
            )));
        }
        let norm_sq: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > NORM_TOL {
            return Err(Error::Domain(format!(
                "state norm^2 = {norm_sq}, expected 1 within {NORM_TOL}"
            )));
        }
        Ok(Self {
            n_qubits,
            amplitudes,
        })
    }

    /// Build from unnormalized amplitudes, rescaling to unit norm.
    pub fn normalized(n_qubits: usize, mut amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm: f64 = amplitudes
            .iter()
            .map(|a| a.norm_sqr())
            .sum::<f64>()
            .sqrt();
        if norm == 0.0 {
            return Err(Error::Domain("cannot normalize the zero vector".into()));
        }
        for a in &mut amplitudes {
            *a /= norm;
        }
        Self::new(n_qubits, amplitudes)
    }

    /// Computational basis state |index> in the qubit-0-most-significant
    /// convention.
    pub fn basis_state(n_qubits: usize, index: usize) -> Self {
        let mut amplitudes = vec![Complex64::ZERO; 1 << n_qubits];
        amplitudes[index] = Complex64::ONE;
        Self {
            n_qubits,
            amplitudes,
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Apply a single-qubit unitary to the given qubit.
    pub fn apply_single_qubit(&mut self, qubit: usize, u: &CMatrix) {
        assert!(qubit < self.n_qubits);
        assert_eq!((u.rows(), u.cols()), (2, 2));
        let stride = 1 << (self.n_qubits - 1 - qubit);
        let dim = self.amplitudes.len();
        let mut idx = 0;
        while idx < dim {
            if idx & stride == 0 {
                let a = self.amplitudes[idx];
                let b = self.amplitudes[idx | stride];
                self.amplitudes[idx] = u[(0, 0)] * a + u[(0, 1)] * b;
                self.amplitudes[idx | stride] = u[(1, 0)] * a + u[(1, 1)] * b;
            }
            idx += 1;
        }
    }

    /// Inner product <self|other>.
    pub fn inner(&self, other: &QuantumState) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }
}

/// Assemble a product state from disjoint qubit groups.
///
/// Each group lists its qubit indices (ascending significance in the
/// group's own amplitude vector) and the amplitudes over those qubits.
/// Groups must exactly cover 0..n_qubits.
pub fn product_state(n_qubits: usize, groups: &[(Vec<usize>, Vec<Complex64>)]) -> Result<QuantumState> {
    let mut covered = vec![false; n_qubits];
    for (qubits, amps) in groups {
        if amps.len() != 1 << qubits.len() {
            return Err(Error::ShapeMismatch(format!(
                "group over {:?} needs {} amplitudes, got {}",
                qubits,
                1 << qubits.len(),
                amps.len()
            )));
        }
        for &q in qubits {
            if q >= n_qubits || covered[q] {
                return Err(Error::InvalidArgument(format!(
                    "qubit {q} out of range or covered twice"
                )));
            }
            covered[q] = true;
        }
    }
    if !covered.iter().all(|&c| c) {
        return Err(Error::InvalidArgument("groups do not cover all qubits".into()));
    }

    let dim = 1 << n_qubits;
    let mut amplitudes = vec![Complex64::ONE; dim];
    for idx in 0..dim {
        let mut amp = Complex64::ONE;
        for (qubits, amps) in groups {
            let mut sub = 0usize;
            for &q in qubits {
                sub = (sub << 1) | ((idx >> (n_qubits - 1 - q)) & 1);
            }
            amp *= amps[sub];
        }
        amplitudes[idx] = amp;
    }
    QuantumState::new(n_qubits, amplitudes)
}

/// A density matrix: Hermitian, positive semidefinite, unit trace.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    n_qubits: usize,
    rho: CMatrix,
}

impl DensityMatrix {
    pub fn new(n_qubits: usize, rho: CMatrix) -> Result<Self> {
        let dim = 1 << n_qubits;
        if rho.rows() != dim || rho.cols() != dim {
            return Err(Error::ShapeMismatch(format!(
                "{n_qubits}-qubit density matrix must be {dim}x{dim}, got {}x{}",
                rho.rows(),
                rho.cols()
            )));
        }
        let dm = Self { n_qubits, rho };
        dm.check_valid()?;
        Ok(dm)
    }

    fn check_valid(&self) -> Result<()> {
        let dim = self.rho.rows();
        let mut herm_defect = 0.0f64;
        for i in 0..dim {
            for j in i..dim {
                let d = (self.rho[(i, j)] - self.rho[(j, i)].conj()).norm();
                herm_defect = herm_defect.max(d);
            }
        }
        if herm_defect > NORM_TOL {
            return Err(Error::Domain(format!(
                "density matrix not Hermitian: defect {herm_defect}"
            )));
        }
        let tr = self.rho.trace();
        if (tr.re - 1.0).abs() > NORM_TOL || tr.im.abs() > NORM_TOL {
            return Err(Error::Domain(format!("density matrix trace {tr}, expected 1")));
        }
        Ok(())
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.rho.rows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.rho
    }

    pub(crate) fn matrix_mut(&mut self) -> &mut CMatrix {
        &mut self.rho
    }

    /// Tr(rho^2); equals 1 exactly on pure states.
    pub fn purity(&self) -> f64 {
        self.rho
            .matmul(&self.rho)
            .expect("square")
            .trace()
            .re
    }
}

/// Form the pure-state density matrix rho = |psi><psi|.
pub fn to_density(state: &QuantumState) -> DensityMatrix {
    let dim = state.dim();
    let mut rho = CMatrix::zeros(dim, dim);
    for i in 0..dim {
        for j in 0..dim {
            rho[(i, j)] = state.amplitudes()[i] * state.amplitudes()[j].conj();
        }
    }
    DensityMatrix {
        n_qubits: state.n_qubits(),
        rho,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn rejects_unnormalized() {
        assert!(QuantumState::new(1, vec![c(1., 0.), c(1., 0.)]).is_err());
        assert!(QuantumState::normalized(1, vec![c(1., 0.), c(1., 0.)]).is_ok());
    }

    #[test]
    fn to_density_of_ket0() {
        let rho = to_density(&QuantumState::basis_state(1, 0));
        assert_eq!(rho.matrix()[(0, 0)], c(1., 0.));
        assert_eq!(rho.matrix()[(0, 1)], c(0., 0.));
        assert_eq!(rho.matrix()[(1, 0)], c(0., 0.));
        assert_eq!(rho.matrix()[(1, 1)], c(0., 0.));
    }

    #[test]
    fn to_density_of_plus() {
        let s = QuantumState::normalized(1, vec![c(1., 0.), c(1., 0.)]).unwrap();
        let rho = to_density(&s);
        for i in 0..2 {
            for j in 0..2 {
                assert!((rho.matrix()[(i, j)] - c(0.5, 0.)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn pure_states_have_unit_purity() {
        let mut rng = crate::numeric::derive_stream(7, 0);
        for _ in 0..5 {
            let amps: Vec<Complex64> = (0..8).map(|_| c(rng.normal(), rng.normal())).collect();
            let s = QuantumState::normalized(3, amps).unwrap();
            let rho = to_density(&s);
            assert!((rho.purity() - 1.0).abs() < 1e-10);
            assert!((rho.matrix().trace().re - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn product_state_interleaves_groups() {
        // qubit 1 in |1>, qubits (0,2) in (|00>+|11>)/sqrt2:
        // amplitude at |a b c> = pair[(a,c)] * single[b]
        let inv = 1.0 / 2f64.sqrt();
        let pair = vec![c(inv, 0.), c(0., 0.), c(0., 0.), c(inv, 0.)];
        let single = vec![c(0., 0.), c(1., 0.)];
        let s = product_state(3, &[(vec![0, 2], pair), (vec![1], single)]).unwrap();
        // expect amplitude inv at |010> (idx 2) and |111> (idx 7)
        assert!((s.amplitudes()[2] - c(inv, 0.)).norm() < 1e-12);
        assert!((s.amplitudes()[7] - c(inv, 0.)).norm() < 1e-12);
        let other: f64 = [0, 1, 3, 4, 5, 6]
            .iter()
            .map(|&i| s.amplitudes()[i].norm())
            .sum();
        assert!(other < 1e-12);
    }

    #[test]
    fn apply_single_qubit_x_flips_target() {
        let x = CMatrix::new(
            2,
            2,
            vec![c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)],
        )
        .unwrap();
        let mut s = QuantumState::basis_state(3, 0b000);
        s.apply_single_qubit(1, &x);
        // |000> -> |010>
        assert!((s.amplitudes()[0b010] - c(1., 0.)).norm() < 1e-15);
    }
}
