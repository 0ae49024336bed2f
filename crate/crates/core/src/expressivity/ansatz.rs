//! Inductive construction of minimal, maximally expressive candidates.
//!
//! Q = 1 uses `R_Y(t3) R_Z(t2) R_X(t1)|0>`. For Q + 1 qubits the Q-qubit
//! candidate acts on the lower qubits, the new qubit gets its own Euler
//! block, and the new qubit then controls rotation blocks on every lower
//! qubit, followed by a fresh copy of the Q-qubit candidate. The controlled
//! blocks plus the second copy let the two branches of the new qubit carry
//! different lower-qubit states. Extra controlled layers are appended until
//! classification reaches the target dimension, after which redundant
//! parameters are frozen and the result is re-classified at an independent
//! point.

use std::collections::BTreeMap;

use super::classify::{classify_with, remove_redundant, ClassifyOptions};
use super::symmetry::remove_phase_symmetry;
use super::{random_point, StateSpaceDim};
use crate::circuit::{Angle, Gate, ParametricCircuit};
use crate::error::{Error, Result};

const CONSTRUCTION_SEED: u64 = 0x5EED_A75A;
const VALIDATION_SEED: u64 = 0x0C0F_FEE5;
const MAX_EXTRA_LAYERS: usize = 4;

/// Candidate circuit on `qubits` qubits with `2^{Q+1} - 1` independent
/// parameters (`2^{Q+1} - 2` without the global phase).
pub fn inductive_ansatz(qubits: usize, include_phase: bool) -> Result<ParametricCircuit> {
    if qubits == 0 {
        return Err(Error::InvalidArgument("the ansatz needs at least one qubit".into()));
    }
    let mut circuit = ParametricCircuit::new(1);
    let mut names = Namer::default();
    euler_block(&mut circuit, 0, &mut names);
    for q in 1..qubits {
        circuit = extend(&circuit, q + 1, &mut names)?;
    }
    let circuit = renumbered(&circuit);
    let dims = StateSpaceDim::new(qubits);
    validate(&circuit, dims.with_phase)?;
    if include_phase {
        return Ok(circuit);
    }
    let point = random_point(circuit.num_params(), CONSTRUCTION_SEED);
    let (reduced, report) = remove_phase_symmetry(&circuit, &point)?;
    if !report.maximally_expressive {
        return Err(Error::InvalidCircuit(format!(
            "phase removal left {} of {} parameters",
            report.independent_count, dims.mod_phase
        )));
    }
    Ok(renumbered(&reduced))
}

#[derive(Default)]
struct Namer(usize);

impl Namer {
    fn next(&mut self, c: &mut ParametricCircuit) -> Angle {
        self.0 += 1;
        c.param(&format!("t{}", self.0))
    }
}

fn euler_block(c: &mut ParametricCircuit, q: usize, names: &mut Namer) {
    let a = names.next(c);
    c.rx(q, a);
    let b = names.next(c);
    c.rz(q, b);
    let d = names.next(c);
    c.ry(q, d);
}

/// Copies the gates of `inner` into `outer` with fresh parameter names.
fn copy_fresh(outer: &mut ParametricCircuit, inner: &ParametricCircuit, names: &mut Namer) {
    let mut fresh: BTreeMap<usize, Angle> = BTreeMap::new();
    for gate in inner.gates() {
        let angle = match gate.angle {
            Some(Angle::Param(j)) => Some(*fresh.entry(j).or_insert_with(|| names.next(outer))),
            a => a,
        };
        outer.push(Gate { kind: gate.kind, qubits: gate.qubits.clone(), angle }).expect("lower qubits in range");
    }
}

fn controlled_layer(c: &mut ParametricCircuit, control: usize, names: &mut Namer, with_x: bool) {
    for t in 0..control {
        let a = names.next(c);
        c.cry(control, t, a);
        let b = names.next(c);
        c.crz(control, t, b);
        if with_x {
            let d = names.next(c);
            c.crx(control, t, d);
        }
    }
}

fn extend(lower: &ParametricCircuit, qubits: usize, names: &mut Namer) -> Result<ParametricCircuit> {
    let new = qubits - 1;
    let target = StateSpaceDim::new(qubits).with_phase;
    let mut c = ParametricCircuit::new(qubits);
    // The lower candidate keeps its parameters; everything after is fresh.
    for gate in lower.gates() {
        let angle = match gate.angle {
            Some(Angle::Param(j)) => Some(c.param(&lower.parameters()[j])),
            a => a,
        };
        c.push(Gate { kind: gate.kind, qubits: gate.qubits.clone(), angle })?;
    }
    euler_block(&mut c, new, names);
    controlled_layer(&mut c, new, names, false);
    copy_fresh(&mut c, lower, names);

    for extra in 0..=MAX_EXTRA_LAYERS {
        let point = random_point(c.num_params(), CONSTRUCTION_SEED ^ qubits as u64);
        let opts = ClassifyOptions { dim_target: Some(target), ..ClassifyOptions::exact() };
        let report = classify_with(&c, &point, &opts)?;
        if report.independent_count == target {
            return remove_redundant(&c, &report, &BTreeMap::new());
        }
        if extra == MAX_EXTRA_LAYERS {
            return Err(Error::InvalidCircuit(format!(
                "inductive candidate on {qubits} qubits reached {} of {target} independent parameters",
                report.independent_count
            )));
        }
        controlled_layer(&mut c, new, names, true);
        for q in 0..new {
            let a = names.next(&mut c);
            c.ry(q, a);
            let b = names.next(&mut c);
            c.rz(q, b);
        }
    }
    unreachable!("loop returns on its last iteration")
}

fn validate(c: &ParametricCircuit, target: usize) -> Result<()> {
    let point = random_point(c.num_params(), VALIDATION_SEED);
    let opts = ClassifyOptions { dim_target: Some(target), ..ClassifyOptions::exact() };
    let report = classify_with(c, &point, &opts)?;
    if report.independent_count != target || report.redundant_count() != 0 {
        return Err(Error::InvalidCircuit(format!(
            "candidate has {} independent and {} redundant parameters, expected {target} and 0",
            report.independent_count,
            report.redundant_count()
        )));
    }
    Ok(())
}

/// Renames parameters to `t1..tN` in their current order.
fn renumbered(c: &ParametricCircuit) -> ParametricCircuit {
    let mut out = ParametricCircuit::new(c.num_qubits());
    let names: Vec<Angle> = (1..=c.num_params()).map(|k| out.param(&format!("t{k}"))).collect();
    for gate in c.gates() {
        let angle = match gate.angle {
            Some(Angle::Param(j)) => Some(names[j]),
            a => a,
        };
        out.push(Gate { kind: gate.kind, qubits: gate.qubits.clone(), angle }).expect("same qubit count");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_qubit_base_case() {
        let c = inductive_ansatz(1, true).unwrap();
        assert_eq!(c.num_params(), 3);
        let kinds: Vec<_> = c.gates().iter().map(|g| g.kind.name()).collect();
        assert_eq!(kinds, ["rx", "rz", "ry"]);
    }

    #[test]
    fn two_qubits_has_seven_parameters() {
        let c = inductive_ansatz(2, true).unwrap();
        assert_eq!(c.num_params(), 7);
        let c = inductive_ansatz(2, false).unwrap();
        assert_eq!(c.num_params(), 6);
    }

    #[test]
    fn zero_qubits_rejected() {
        assert!(inductive_ansatz(0, true).is_err());
    }
}
