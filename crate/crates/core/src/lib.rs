//! Statevector toolkit for analysing parametric quantum circuits and
//! mitigating readout errors.
//!
//! The crate is organised bottom-up:
//!
//! - [`circuit`], [`state`], [`pauli`], [`sampling`] and [`simulate`] form the
//!   exact statevector core: circuit evaluation, analytic tangent vectors,
//!   Pauli expectations and shot sampling.
//! - [`expressivity`] builds the tangent-space Gram matrix of a circuit and
//!   classifies parameters as independent or redundant.
//! - [`mitigation`] simulates uncorrelated per-qubit bit-flip readout noise and
//!   inverts it term by term with polynomial cost.
//! - [`experiments`] reproduces the simulated studies (Ising energy
//!   histograms, error-vs-shots scaling, shot-noise eigenvalues).
//!
//! Qubit ordering is little-endian everywhere: qubit 0 is the least
//! significant bit of a basis-state index, and the rightmost character of a
//! bitstring.

pub mod circuit;
pub mod error;
pub mod experiments;
pub mod expressivity;
pub mod mitigation;
pub mod optimize;
pub mod pauli;
pub mod rng;
pub mod sampling;
pub mod simulate;
pub mod state;

pub use circuit::{Angle, Gate, GateKind, ParametricCircuit};
pub use error::{Error, Result};
pub use pauli::{Pauli, PauliString, PauliSum};
pub use sampling::{sample_measurements, ShotCounts};
pub use simulate::{evaluate_circuit, expectation, tangent_vector};
pub use state::QuantumState;
