//! Derivative-free energy minimization over circuit parameters.

use serde::{Deserialize, Serialize};

use crate::circuit::ParametricCircuit;
use crate::error::{Error, Result};
use crate::expressivity::random_point;
use crate::mitigation::{split_settings, Executor, MeasurementSetting, MitigatedOperator, ReadoutNoiseModel, SimulatedExecutor};
use crate::optimize::CoordinateSearch;
use crate::pauli::PauliSum;
use crate::rng;
use crate::simulate::{evaluate_circuit, expectation};

/// How the energy is evaluated inside the optimizer.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "objective")]
pub enum Objective {
    #[default]
    Exact,
    /// Sampled energy with `shots` per measurement setting, optionally
    /// under readout noise that is then mitigated with the true model.
    Shots { shots: u64, noise: Option<ReadoutNoiseModel> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VqeOptions {
    pub search: CoordinateSearch,
    /// Independent random starts; the best result is kept.
    pub restarts: usize,
    #[serde(default)]
    pub objective: Objective,
}

impl Default for VqeOptions {
    fn default() -> Self {
        Self {
            search: CoordinateSearch { max_iterations: 2000, ..CoordinateSearch::default() },
            restarts: 4,
            objective: Objective::Exact,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VqeResult {
    pub params: Vec<f64>,
    /// Objective value at `params`.
    pub energy: f64,
    /// Exact energy at `params`, regardless of the objective.
    pub exact_energy: f64,
    pub evaluations: usize,
}

/// Local minimization of `<C(theta)|H|C(theta)>` from `restarts` random
/// starts. No global optimality is claimed.
pub fn vqe_minimize(circuit: &ParametricCircuit, h: &PauliSum, opts: &VqeOptions, seed: u64) -> Result<VqeResult> {
    if opts.restarts == 0 {
        return Err(Error::InvalidArgument("at least one start is required".into()));
    }
    if h.min_qubits() > circuit.num_qubits() {
        return Err(Error::QubitOutOfRange { qubit: h.min_qubits() - 1, num_qubits: circuit.num_qubits() });
    }
    let exact = |x: &[f64]| -> Result<f64> { expectation(&evaluate_circuit(circuit, x)?, h) };
    let sampled = match &opts.objective {
        Objective::Exact => None,
        Objective::Shots { shots, noise } => {
            let model = noise.clone().unwrap_or_else(|| ReadoutNoiseModel::noiseless(circuit.num_qubits()));
            let ops: Vec<(MeasurementSetting, MitigatedOperator)> = split_settings(h)?
                .into_iter()
                .map(|(s, op)| Ok((s, MitigatedOperator::new(op, &model)?)))
                .collect::<Result<_>>()?;
            Some((*shots, SimulatedExecutor::with_noise(model), ops))
        }
    };

    let mut best: Option<VqeResult> = None;
    for start in 0..opts.restarts {
        let task = rng::sub_seed(seed, start as u64);
        let x0 = random_point(circuit.num_params(), task);
        let mut failure = None;
        let mut calls = 0u64;
        let mut objective = |x: &[f64]| -> f64 {
            calls += 1;
            let value = match &sampled {
                None => exact(x),
                Some((shots, executor, ops)) => sampled_energy(circuit, x, *shots, executor, ops, rng::sub_seed(task, calls)),
            };
            value.unwrap_or_else(|e| {
                failure.get_or_insert(e);
                f64::INFINITY
            })
        };
        let min = opts.search.minimize(&mut objective, x0);
        if let Some(e) = failure {
            return Err(e);
        }
        let result = VqeResult {
            exact_energy: exact(&min.x)?,
            params: min.x,
            energy: min.value,
            evaluations: min.evaluations,
        };
        if best.as_ref().is_none_or(|b| result.energy < b.energy) {
            best = Some(result);
        }
    }
    Ok(best.expect("at least one start"))
}

fn sampled_energy(
    circuit: &ParametricCircuit,
    x: &[f64],
    shots: u64,
    executor: &SimulatedExecutor,
    ops: &[(MeasurementSetting, MitigatedOperator)],
    seed: u64,
) -> Result<f64> {
    let psi = evaluate_circuit(circuit, x)?;
    let mut total = 0.0;
    for (i, (setting, op)) in ops.iter().enumerate() {
        let counts = executor.run(&setting.rotate(&psi), shots, rng::sub_seed(seed, i as u64))?;
        total += op.evaluate(&counts)?;
    }
    Ok(total)
}
