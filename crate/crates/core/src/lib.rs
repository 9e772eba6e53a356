//! Quantum error correction against fully correlated Pauli noise.
//!
//! The channel applies `I`, `X_n = X^(x)n`, `Y_n = Y^(x)n` or `Z_n = Z^(x)n`
//! with fixed probabilities. For odd `n` the even-weight subspace protects
//! `n - 1` qubits with a permutation encoder; for even `n` a
//! decoherence-free subspace protects `n - 2` qubits. The crate builds both
//! codes and their circuits, simulates the encode-noise-decode pipeline on
//! density matrices, checks the Knill-Laflamme condition, and computes
//! rank-k numerical ranges of normal matrices.

pub mod circuit;
pub mod cli;
pub mod codes;
pub mod error;
pub mod geometry;
pub mod json;
pub mod nrange;
pub mod pauli;
pub mod state;

pub use error::{Error, Result};
