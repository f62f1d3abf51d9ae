//! Quantum state simulation: SLOCC family sampling, noise channels, and
//! Born-rule measurement encoding.

pub mod basis;
pub mod features;
pub mod noise;
pub mod slocc;
pub mod state;
pub mod verify;

pub use basis::{build_basis_set, BasisSet, MeasurementScheme, Setting};
pub use features::{born_probabilities, encode_features};
pub use noise::{apply_dephasing, sample_frequencies, NoiseConfig, Shots};
pub use slocc::{sample_state, FamilyKind, Roster, SloccFamily};
pub use state::{product_state, to_density, DensityMatrix, QuantumState};
