//! Removing parameters that only generate a symmetry.
//!
//! The symmetry is added to the circuit artificially through extra
//! parameters that are classified first, so they are accepted as
//! independent. Any original parameter whose independent contribution is
//! the symmetry direction then tests as redundant. Finally the artificial
//! gates and the redundant parameters are stripped.

use std::collections::BTreeMap;

use super::classify::{classify_with, remove_redundant, ClassifyOptions, ExpressivityReport};
use super::StateSpaceDim;
use crate::circuit::ParametricCircuit;
use crate::error::{Error, Result};

/// Where the symmetry-generating gates are inserted.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Placement {
    /// Before the circuit, acting on `|0...0>`.
    Prepend,
    /// After the circuit, acting on its output state.
    Append,
}

/// General hook: `symmetry` carries the symmetry generators with its own
/// parameter names (evaluated at `symmetry_point`); `dim_target` is the
/// dimension of the state space with the symmetry quotiented out.
pub fn remove_symmetry(
    circuit: &ParametricCircuit,
    params: &[f64],
    symmetry: &ParametricCircuit,
    symmetry_point: &[f64],
    placement: Placement,
    dim_target: usize,
    options: &ClassifyOptions,
) -> Result<(ParametricCircuit, ExpressivityReport)> {
    circuit.check_params(params)?;
    symmetry.check_params(symmetry_point)?;
    if let Some(name) = symmetry.parameters().iter().find(|n| circuit.param_index(n).is_some()) {
        return Err(Error::InvalidArgument(format!("symmetry parameter `{name}` clashes with the circuit")));
    }
    let augmented = match placement {
        Placement::Prepend => symmetry.concat(circuit)?,
        Placement::Append => circuit.concat(symmetry)?,
    };
    let order: Vec<String> = symmetry.parameters().iter().chain(circuit.parameters()).cloned().collect();
    let augmented = augmented.reorder_parameters(&order)?;
    let point: Vec<f64> = symmetry_point.iter().chain(params).copied().collect();

    let d = symmetry.num_params();
    let opts = ClassifyOptions { dim_target: Some(dim_target + d), early_stop: false, ..options.clone() };
    let full = classify_with(&augmented, &point, &opts)?;

    let verdicts = full.verdicts[d..].to_vec();
    let independent_count = verdicts.iter().filter(|v| v.independent).count();
    let report = ExpressivityReport {
        point: params.to_vec(),
        epsilon: full.epsilon,
        verdicts,
        independent_count,
        dim_target,
        maximally_expressive: independent_count == dim_target,
        timestamp: None,
    };
    let reduced = remove_redundant(circuit, &report, &BTreeMap::new())?;
    Ok((reduced, report))
}

/// Strips parameters whose only independent contribution is a global phase.
/// An artificial `rz(phi)` on qubit 0 acting on `|0...0>` supplies the phase
/// direction; the target dimension of the result is `2^{Q+1} - 2`.
pub fn remove_phase_symmetry(
    circuit: &ParametricCircuit,
    params: &[f64],
) -> Result<(ParametricCircuit, ExpressivityReport)> {
    let mut name = String::from("phi");
    while circuit.param_index(&name).is_some() {
        name.push('_');
    }
    let mut phase = ParametricCircuit::new(circuit.num_qubits());
    let phi = phase.param(&name);
    phase.rz(0, phi);
    let dim = StateSpaceDim::new(circuit.num_qubits()).mod_phase;
    remove_symmetry(circuit, params, &phase, &[0.0], Placement::Prepend, dim, &ClassifyOptions::exact())
}
