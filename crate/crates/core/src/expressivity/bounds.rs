//! Sampling estimates of the best-approximation error.
//!
//! Sites are circuit states at random parameter draws. For each target state
//! the distance to the nearest site is an upper estimate of how well the
//! circuit can approximate it; a local coordinate search started from that
//! site gives the lower estimate. The reported bounds are the maxima over
//! targets, so they estimate the worst-case (best-approximation) error.

use serde::{Deserialize, Serialize};

use super::random_point;
use crate::circuit::ParametricCircuit;
use crate::error::{Error, Result};
use crate::experiments::haar_random_state;
use crate::optimize::CoordinateSearch;
use crate::rng;
use crate::simulate::evaluate_circuit;
use crate::state::QuantumState;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ApproximationBounds {
    pub lower: f64,
    pub upper: f64,
}

/// `min_phi || a - e^{i phi} b ||` for unit vectors: `sqrt(2 - 2 |<a|b>|)`.
pub fn phase_distance(a: &QuantumState, b: &QuantumState) -> f64 {
    (2.0 - 2.0 * a.inner(b).norm()).max(0.0).sqrt()
}

/// Bounds over `n_targets` Haar-random targets and `n_sites` random sites.
pub fn best_approximation_bounds(
    circuit: &ParametricCircuit,
    n_sites: usize,
    n_targets: usize,
    seed: u64,
) -> Result<ApproximationBounds> {
    if n_targets == 0 {
        return Err(Error::InvalidArgument("n_targets must be at least 1".into()));
    }
    let targets: Vec<QuantumState> = (0..n_targets)
        .map(|t| haar_random_state(circuit.num_qubits(), rng::sub_seed(seed, t as u64 + 1)))
        .collect::<Result<_>>()?;
    bounds_for_targets(circuit, &targets, n_sites, seed, &lower_bound_search())
}

/// Derivative-free refinement used for the lower estimate.
pub fn lower_bound_search() -> CoordinateSearch {
    CoordinateSearch { max_iterations: 200, initial_step: 0.5, tolerance: 1e-10, target: Some(0.0) }
}

/// Bounds for an explicit list of target states.
pub fn bounds_for_targets(
    circuit: &ParametricCircuit,
    targets: &[QuantumState],
    n_sites: usize,
    seed: u64,
    search: &CoordinateSearch,
) -> Result<ApproximationBounds> {
    if n_sites == 0 || targets.is_empty() {
        return Err(Error::InvalidArgument("need at least one site and one target".into()));
    }
    let dim = 1usize << circuit.num_qubits();
    if let Some(t) = targets.iter().find(|t| t.dim() != dim) {
        return Err(Error::DimensionMismatch { expected: dim, actual: t.dim() });
    }
    let sites: Vec<(Vec<f64>, QuantumState)> = (0..n_sites)
        .map(|i| {
            let p = random_point(circuit.num_params(), rng::sub_seed(seed, i as u64) ^ 0xB0_0B5);
            let s = evaluate_circuit(circuit, &p)?;
            Ok((p, s))
        })
        .collect::<Result<_>>()?;

    let mut bounds = ApproximationBounds { lower: 0.0, upper: 0.0 };
    for target in targets {
        let (start, nearest) = sites
            .iter()
            .map(|(p, s)| (p, phase_distance(target, s)))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("at least one site");
        // 1 - |<t|C>| is smooth at the optimum, unlike the distance itself.
        let objective = |x: &[f64]| match evaluate_circuit(circuit, x) {
            Ok(s) => 1.0 - target.inner(&s).norm(),
            Err(_) => f64::INFINITY,
        };
        let refined = if circuit.num_params() == 0 {
            nearest
        } else {
            let m = search.minimize(objective, start.clone());
            (2.0 * m.value).max(0.0).sqrt().min(nearest)
        };
        bounds.upper = bounds.upper.max(nearest);
        bounds.lower = bounds.lower.max(refined);
    }
    Ok(bounds)
}
