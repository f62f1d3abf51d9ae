//! Numeric foundation: real tensors, complex matrices, and deterministic
//! splittable random-number streams.
//!
//! Everything here computes in 64-bit floats. Layout is row-major
//! throughout, which makes downstream reshapes well-defined permutations.

pub mod cmatrix;
pub mod rng;
pub mod tensor;

pub use cmatrix::{haar_unitary, kron, CMatrix};
pub use rng::{derive_stream, RngStream};
pub use tensor::Tensor;
