//! Dimensional expressivity analysis.
//!
//! The tangent vectors of a circuit span the tangent space of the manifold
//! of reachable states. A parameter is redundant at a point when its tangent
//! is a real-linear combination of the others, which shows up as a vanishing
//! eigenvalue of the Gram matrix `S = J^T J` of the real partial Jacobian.
//! Redundant parameters can be frozen to constants without shrinking the
//! reachable set locally; a circuit whose independent count equals the
//! dimension of the target state space is maximally expressive.

mod ansatz;
mod bounds;
mod classify;
mod gram;
mod symmetry;

pub use ansatz::inductive_ansatz;
pub use bounds::{best_approximation_bounds, bounds_for_targets, lower_bound_search, phase_distance, ApproximationBounds};
pub use classify::{
    classify_parameters, classify_with, independent_point, remove_redundant, ClassifyOptions, ExpressivityReport,
    Mode, Verdict,
};
pub use gram::{
    estimate_gram_entry, gram_from_tangents, gram_matrix, real_jacobian, EntrySample, GramMatrix, HadamardSampler,
    HadamardTest, SampledGram,
};
pub use symmetry::{remove_phase_symmetry, remove_symmetry, Placement};

use rand::Rng;

use crate::rng;

/// Real dimension of the pure-state space of `q` qubits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StateSpaceDim {
    pub qubits: usize,
    /// Unit sphere in `C^{2^q}`: `2^{q+1} - 1`.
    pub with_phase: usize,
    /// Projective space, global phase removed: `2^{q+1} - 2`.
    pub mod_phase: usize,
}

impl StateSpaceDim {
    pub fn new(qubits: usize) -> Self {
        let full = 1usize << (qubits + 1);
        Self { qubits, with_phase: full - 1, mod_phase: full - 2 }
    }
}

/// Generic evaluation point: each angle uniform in `[0, 2 pi)`.
pub fn random_point(num_params: usize, seed: u64) -> Vec<f64> {
    let mut rng = rng::stream(seed, 0);
    (0..num_params).map(|_| rng.random::<f64>() * std::f64::consts::TAU).collect()
}
