//! SLOCC equivalence families and random state sampling.
//!
//! A sample is drawn by filling in the family's canonical form with random
//! parameters, then applying an independent Haar-random single-qubit
//! unitary to every qubit. Local unitaries never leave a SLOCC class, so
//! the label stays well-defined.
//!
//! 3-qubit roster (6 classes): fully separable; biseparable A-BC, B-AC,
//! C-AB; W; GHZ.
//!
//! 4-qubit roster (10 classes): the nine canonical four-qubit normal forms
//! G_abcd, L_abc2, L_a2b2, L_ab3, L_a4, L_a2_03+1, L_05+3, L_07+1,
//! L_03+1_03+1 with parameters drawn from bounded ranges, plus fully
//! separable as the tenth class.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numeric::{haar_unitary, RngStream};
use crate::qsim::state::{product_state, QuantumState};

/// Canonical-form parameter margins. Parameters are kept away from values
/// where a draw would degenerate into a different (boundary) class.
const ANGLE_MARGIN: f64 = 0.2;
const W_WEIGHT_MIN: f64 = 0.05;
const PARAM_MOD_MIN: f64 = 0.3;
const PARAM_MOD_MAX: f64 = 1.0;

/// The canonical construction behind a SLOCC class.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyKind {
    /// Product of n single-qubit states.
    FullySeparable,
    /// One qubit in a product with an entangled pair (3-qubit rosters).
    Biseparable { lone_qubit: usize },
    /// 3-qubit W class.
    W3,
    /// 3-qubit GHZ class.
    Ghz3,
    /// One of the nine 4-qubit normal forms.
    FourQubit(FourQubitForm),
}

/// The nine 4-qubit SLOCC normal forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FourQubitForm {
    Gabcd,
    Labc2,
    La2b2,
    Lab3,
    La4,
    La2O31,
    LO53,
    LO71,
    LO31O31,
}

/// A labeled SLOCC equivalence class within a roster.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SloccFamily {
    pub label_id: usize,
    pub name: &'static str,
    pub n_qubits: usize,
    pub kind: FamilyKind,
}

/// The ordered list of classes for one system size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Roster {
    pub n_qubits: usize,
    pub families: Vec<SloccFamily>,
}

impl Roster {
    /// Default roster for the given qubit count (3 or 4).
    pub fn default_for(n_qubits: usize) -> Result<Self> {
        match n_qubits {
            3 => Ok(Self::three_qubit()),
            4 => Ok(Self::four_qubit()),
            _ => Err(Error::Domain(format!(
                "no default roster for {n_qubits} qubits (supported: 3, 4)"
            ))),
        }
    }

    pub fn three_qubit() -> Self {
        let kinds: [(&'static str, FamilyKind); 6] = [
            ("fully-separable", FamilyKind::FullySeparable),
            ("bisep-A-BC", FamilyKind::Biseparable { lone_qubit: 0 }),
            ("bisep-B-AC", FamilyKind::Biseparable { lone_qubit: 1 }),
            ("bisep-C-AB", FamilyKind::Biseparable { lone_qubit: 2 }),
            ("W", FamilyKind::W3),
            ("GHZ", FamilyKind::Ghz3),
        ];
        Self::from_kinds(3, &kinds)
    }

    pub fn four_qubit() -> Self {
        use FourQubitForm::*;
        let kinds: [(&'static str, FamilyKind); 10] = [
            ("G-abcd", FamilyKind::FourQubit(Gabcd)),
            ("L-abc2", FamilyKind::FourQubit(Labc2)),
            ("L-a2b2", FamilyKind::FourQubit(La2b2)),
            ("L-ab3", FamilyKind::FourQubit(Lab3)),
            ("L-a4", FamilyKind::FourQubit(La4)),
            ("L-a2-03+1", FamilyKind::FourQubit(La2O31)),
            ("L-05+3", FamilyKind::FourQubit(LO53)),
            ("L-07+1", FamilyKind::FourQubit(LO71)),
            ("L-03+1-03+1", FamilyKind::FourQubit(LO31O31)),
            ("fully-separable", FamilyKind::FullySeparable),
        ];
        Self::from_kinds(4, &kinds)
    }

    fn from_kinds(n_qubits: usize, kinds: &[(&'static str, FamilyKind)]) -> Self {
        let families = kinds
            .iter()
            .enumerate()
            .map(|(label_id, &(name, kind))| SloccFamily {
                label_id,
                name,
                n_qubits,
                kind,
            })
            .collect();
        Self { n_qubits, families }
    }

    pub fn n_classes(&self) -> usize {
        self.families.len()
    }

    pub fn family(&self, label_id: usize) -> Result<&SloccFamily> {
        self.families
            .get(label_id)
            .ok_or_else(|| Error::UnknownFamily(format!("label id {label_id}")))
    }

    pub fn by_name(&self, name: &str) -> Result<&SloccFamily> {
        self.families
            .iter()
            .find(|f| f.name == name)
            .ok_or_else(|| Error::UnknownFamily(name.to_string()))
    }

    pub fn names(&self) -> Vec<String> {
        self.families.iter().map(|f| f.name.to_string()).collect()
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Canonical representatives with explicit parameters. Used directly by
/// tests; `sample_state` draws the parameters at random.
pub mod canonical {
    use super::*;

    /// cos(theta)|00..0> + e^{i phi} sin(theta)|11..1>.
    pub fn ghz(n_qubits: usize, theta: f64, phi: f64) -> QuantumState {
        let dim = 1 << n_qubits;
        let mut amps = vec![Complex64::ZERO; dim];
        amps[0] = c(theta.cos(), 0.0);
        amps[dim - 1] = Complex64::from_polar(theta.sin(), phi);
        QuantumState::new(n_qubits, amps).expect("unit norm by construction")
    }

    /// a|001> + b|010> + c|100> with amplitudes sqrt(weights).
    pub fn w3(weights: [f64; 3]) -> QuantumState {
        let mut amps = vec![Complex64::ZERO; 8];
        amps[0b001] = c(weights[0].sqrt(), 0.0);
        amps[0b010] = c(weights[1].sqrt(), 0.0);
        amps[0b100] = c(weights[2].sqrt(), 0.0);
        QuantumState::normalized(3, amps).expect("nonzero")
    }

    /// Lone qubit in |0>, remaining pair in cos(theta)|00> + sin(theta)|11>.
    pub fn bisep3(lone_qubit: usize, theta: f64) -> QuantumState {
        let pair: Vec<usize> = (0..3).filter(|&q| q != lone_qubit).collect();
        let pair_amps = vec![c(theta.cos(), 0.), Complex64::ZERO, Complex64::ZERO, c(theta.sin(), 0.)];
        let single = vec![Complex64::ONE, Complex64::ZERO];
        product_state(3, &[(vec![lone_qubit], single), (pair, pair_amps)])
            .expect("disjoint groups")
    }

    /// The nine 4-qubit normal forms with explicit parameters
    /// (unused parameters ignored). Output is normalized.
    pub fn four_qubit(
        form: FourQubitForm,
        a: Complex64,
        b: Complex64,
        cc: Complex64,
        d: Complex64,
    ) -> QuantumState {
        use FourQubitForm::*;
        let mut amps = vec![Complex64::ZERO; 16];
        let half = c(0.5, 0.0);
        let i_sqrt2 = c(0.0, 1.0 / 2f64.sqrt());
        match form {
            Gabcd => {
                amps[0b0000] = (a + d) * half;
                amps[0b1111] = (a + d) * half;
                amps[0b0011] = (a - d) * half;
                amps[0b1100] = (a - d) * half;
                amps[0b0101] = (b + cc) * half;
                amps[0b1010] = (b + cc) * half;
                amps[0b0110] = (b - cc) * half;
                amps[0b1001] = (b - cc) * half;
            }
            Labc2 => {
                amps[0b0000] = (a + b) * half;
                amps[0b1111] = (a + b) * half;
                amps[0b0011] = (a - b) * half;
                amps[0b1100] = (a - b) * half;
                amps[0b0101] = cc;
                amps[0b1010] = cc;
                amps[0b0110] = Complex64::ONE;
            }
            La2b2 => {
                amps[0b0000] = a;
                amps[0b1111] = a;
                amps[0b0101] = b;
                amps[0b1010] = b;
                amps[0b0110] = Complex64::ONE;
                amps[0b0011] = Complex64::ONE;
            }
            Lab3 => {
                amps[0b0000] = a;
                amps[0b1111] = a;
                amps[0b0101] = (a + b) * half;
                amps[0b1010] = (a + b) * half;
                amps[0b0110] = (a - b) * half;
                amps[0b1001] = (a - b) * half;
                amps[0b0001] = i_sqrt2;
                amps[0b0010] = i_sqrt2;
                amps[0b0111] = i_sqrt2;
                amps[0b1011] = i_sqrt2;
            }
            La4 => {
                amps[0b0000] = a;
                amps[0b0101] = a;
                amps[0b1010] = a;
                amps[0b1111] = a;
                amps[0b0001] = c(0.0, 1.0);
                amps[0b0110] = Complex64::ONE;
                amps[0b1011] = c(0.0, -1.0);
            }
            La2O31 => {
                amps[0b0000] = a;
                amps[0b1111] = a;
                amps[0b0011] = Complex64::ONE;
                amps[0b0101] = Complex64::ONE;
                amps[0b0110] = Complex64::ONE;
            }
            LO53 => {
                amps[0b0000] = Complex64::ONE;
                amps[0b0101] = Complex64::ONE;
                amps[0b1000] = Complex64::ONE;
                amps[0b1110] = Complex64::ONE;
            }
            LO71 => {
                amps[0b0000] = Complex64::ONE;
                amps[0b1011] = Complex64::ONE;
                amps[0b1101] = Complex64::ONE;
                amps[0b1110] = Complex64::ONE;
            }
            LO31O31 => {
                amps[0b0000] = Complex64::ONE;
                amps[0b0111] = Complex64::ONE;
            }
        }
        QuantumState::normalized(4, amps).expect("nonzero canonical form")
    }
}

/// Draw a random pure state belonging to `family`.
pub fn sample_state(family: &SloccFamily, rng: &mut RngStream) -> QuantumState {
    let mut state = canonical_draw(family, rng);
    for q in 0..family.n_qubits {
        let u = haar_unitary(2, rng);
        state.apply_single_qubit(q, &u);
    }
    state
}

/// Random draw of the canonical form only (no local unitary layer).
fn canonical_draw(family: &SloccFamily, rng: &mut RngStream) -> QuantumState {
    match family.kind {
        // Local unitaries turn |0..0> into an arbitrary product state.
        FamilyKind::FullySeparable => QuantumState::basis_state(family.n_qubits, 0),
        FamilyKind::Biseparable { lone_qubit } => {
            let theta = rng.uniform(ANGLE_MARGIN, PI / 4.0);
            canonical::bisep3(lone_qubit, theta)
        }
        FamilyKind::W3 => canonical::w3(dirichlet3_with_floor(rng)),
        FamilyKind::Ghz3 => {
            let theta = rng.uniform(ANGLE_MARGIN, PI / 2.0 - ANGLE_MARGIN);
            let phi = rng.uniform(0.0, 2.0 * PI);
            canonical::ghz(3, theta, phi)
        }
        FamilyKind::FourQubit(form) => {
            let param = |rng: &mut RngStream| {
                Complex64::from_polar(
                    rng.uniform(PARAM_MOD_MIN, PARAM_MOD_MAX),
                    rng.uniform(0.0, 2.0 * PI),
                )
            };
            let (a, b, cc, d) = (param(rng), param(rng), param(rng), param(rng));
            canonical::four_qubit(form, a, b, cc, d)
        }
    }
}

/// Uniform on the 3-simplex, rejected until every weight >= the floor.
fn dirichlet3_with_floor(rng: &mut RngStream) -> [f64; 3] {
    loop {
        let draws: [f64; 3] = std::array::from_fn(|_| {
            let u = rng.next_f64().max(f64::MIN_POSITIVE);
            -u.ln()
        });
        let total: f64 = draws.iter().sum();
        let weights = [draws[0] / total, draws[1] / total, draws[2] / total];
        if weights.iter().all(|&w| w >= W_WEIGHT_MIN) {
            return weights;
        }
    }
}
