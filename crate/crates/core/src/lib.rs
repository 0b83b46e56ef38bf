//! Szegedy-coined quantum walks on Hamming graphs H(d, n) whose coin depends
//! only on Hamming distance.
//!
//! Wave vectors come from direct evolution, from the decoupled Fourier-mode
//! recursion, or from the closed Krawtchouk-polynomial representation when
//! its hypotheses hold. The classical walks behind each coin and the
//! time-averaged limits live alongside.

#![allow(clippy::needless_range_loop)]

pub mod classical_walk;
pub mod cli_runner;
pub mod error;
pub mod hamming_scheme;
pub mod limit_distributions;
pub mod par;
pub mod quantum_walk_engine;
pub mod unit_circle_spectrum;

pub use error::{QwError, Result};
pub use hamming_scheme::{HammingParams, HammingSpace, KrawtchoukTable, Vertex};
