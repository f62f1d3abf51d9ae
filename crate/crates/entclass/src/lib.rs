//! Entanglement classification toolkit for 3- and 4-qubit systems.
//!
//! The pipeline: sample pure states from SLOCC equivalence families
//! ([`qsim`]), encode them as Born-rule measurement feature vectors under
//! optional dephasing and finite-shot noise, assemble balanced labeled
//! datasets ([`dataset`]), and train CNN-BiLSTM fusion classifiers built
//! from scratch with hand-derived gradients ([`nn`], [`models`],
//! [`traineval`]).

pub mod dataset;
pub mod error;
pub mod models;
pub mod nn;
pub mod numeric;
pub mod qsim;
pub mod traineval;

pub use error::{Error, Result};
