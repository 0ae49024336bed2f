//! Circuit evaluation, analytic tangent vectors and Pauli expectations.

use crate::circuit::ParametricCircuit;
use crate::error::{Error, Result};
use crate::pauli::{PauliString, PauliSum};
use crate::state::QuantumState;

/// `C(theta)|0...0>`.
pub fn evaluate_circuit(circuit: &ParametricCircuit, params: &[f64]) -> Result<QuantumState> {
    circuit.check_params(params)?;
    let mut state = QuantumState::zero(circuit.num_qubits());
    apply_circuit(circuit, params, &mut state);
    Ok(state)
}

/// Applies all gates of `circuit` to `state` in list order.
pub fn apply_circuit(circuit: &ParametricCircuit, params: &[f64], state: &mut QuantumState) {
    apply_range(circuit, params, state, 0, circuit.gates().len());
}

fn apply_range(circuit: &ParametricCircuit, params: &[f64], state: &mut QuantumState, from: usize, to: usize) {
    for gate in &circuit.gates()[from..to] {
        state.apply_gate(gate, gate.angle_value(params));
    }
}

/// Unit-norm insertion states for parameter `j`: one per gate occurrence,
/// the circuit with the gate's Pauli inserted after it. For a plain rotation
/// the tangent is `-i/2` times the sum of these.
pub(crate) fn insertion_states(circuit: &ParametricCircuit, params: &[f64], j: usize) -> Vec<QuantumState> {
    circuit
        .occurrences(j)
        .into_iter()
        .map(|k| {
            let gate = &circuit.gates()[k];
            let mut state = QuantumState::zero(circuit.num_qubits());
            apply_range(circuit, params, &mut state, 0, k + 1);
            // -i P/2 scaled back to P
            state.apply_generator(gate);
            state.scale(crate::state::C64::new(0.0, 2.0));
            apply_range(circuit, params, &mut state, k + 1, circuit.gates().len());
            state
        })
        .collect()
}

/// Analytic derivative `d C(theta)|0...0> / d theta_j`, summed over every
/// gate that uses parameter `j`.
pub fn tangent_vector(circuit: &ParametricCircuit, params: &[f64], j: usize) -> Result<QuantumState> {
    circuit.check_params(params)?;
    circuit.check_index(j)?;
    let dim_q = circuit.num_qubits();
    let mut total = QuantumState::from_amplitudes(vec![Default::default(); 1 << dim_q])?;
    for k in circuit.occurrences(j) {
        let gate = &circuit.gates()[k];
        let mut state = QuantumState::zero(dim_q);
        apply_range(circuit, params, &mut state, 0, k + 1);
        state.apply_generator(gate);
        apply_range(circuit, params, &mut state, k + 1, circuit.gates().len());
        total.add_assign(&state);
    }
    Ok(total)
}

/// Tangent vectors for every parameter, in parameter order.
pub fn tangent_vectors(circuit: &ParametricCircuit, params: &[f64]) -> Result<Vec<QuantumState>> {
    (0..circuit.num_params()).map(|j| tangent_vector(circuit, params, j)).collect()
}

/// `<psi|P|psi>` for a single Pauli string.
pub fn pauli_expectation(state: &QuantumState, string: &PauliString) -> Result<f64> {
    if let Some(q) = string.max_qubit() {
        if q >= state.num_qubits() {
            return Err(Error::QubitOutOfRange { qubit: q, num_qubits: state.num_qubits() });
        }
    }
    let value = state.inner(&string.apply(state));
    debug_assert!(value.im.abs() <= 1e-10 * (1.0 + state.norm_sqr()), "imaginary residue {}", value.im);
    Ok(value.re)
}

/// `<psi|O|psi>` for a Pauli sum.
pub fn expectation(state: &QuantumState, observable: &PauliSum) -> Result<f64> {
    observable
        .terms()
        .iter()
        .map(|t| Ok(t.coefficient * pauli_expectation(state, &t.string)?))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Angle;
    use crate::state::C64;
    use std::f64::consts::PI;

    fn close(a: C64, b: C64, tol: f64) -> bool {
        (a - b).norm() < tol
    }

    #[test]
    fn empty_circuit_is_zero_state() {
        let c = ParametricCircuit::new(1);
        let s = evaluate_circuit(&c, &[]).unwrap();
        assert_eq!(s.amplitudes(), &[C64::new(1.0, 0.0), C64::new(0.0, 0.0)]);
    }

    #[test]
    fn rx_pi() {
        let mut c = ParametricCircuit::new(1);
        c.rx(0, Angle::Fixed(PI));
        let s = evaluate_circuit(&c, &[]).unwrap();
        assert!(close(s.amplitudes()[0], C64::new(0.0, 0.0), 1e-15));
        assert!(close(s.amplitudes()[1], C64::new(0.0, -1.0), 1e-15));
    }

    #[test]
    fn params_length_checked() {
        let mut c = ParametricCircuit::new(1);
        let t = c.param("t");
        c.rx(0, t);
        assert!(matches!(evaluate_circuit(&c, &[]), Err(Error::DimensionMismatch { .. })));
        assert!(matches!(tangent_vector(&c, &[0.1], 1), Err(Error::InvalidParameter { .. })));
    }

    #[test]
    fn tangent_at_identity() {
        let mut c = ParametricCircuit::new(1);
        let t = c.param("t");
        c.rx(0, t);
        let d = tangent_vector(&c, &[0.0], 0).unwrap();
        assert!(close(d.amplitudes()[0], C64::new(0.0, 0.0), 1e-15));
        assert!(close(d.amplitudes()[1], C64::new(0.0, -0.5), 1e-15));
    }

    #[test]
    fn single_occurrence_tangent_has_norm_half() {
        let mut c = ParametricCircuit::new(2);
        let (a, b, t) = (c.param("a"), c.param("b"), c.param("t"));
        c.ry(0, a).cnot(0, 1).rz(1, t).rx(0, b);
        let d = tangent_vector(&c, &[0.3, 1.2, -0.7], 2).unwrap();
        assert!((d.norm() - 0.5).abs() < 1e-14);
    }

    #[test]
    fn z_expectations() {
        let z = PauliSum::from_terms([(1.0, PauliString::z(&[0]))]).unwrap();
        assert_eq!(expectation(&QuantumState::zero(1), &z).unwrap(), 1.0);
        let mut c = ParametricCircuit::new(1);
        c.h(0);
        let plus = evaluate_circuit(&c, &[]).unwrap();
        assert!(expectation(&plus, &z).unwrap().abs() < 1e-15);
        let wide = PauliSum::from_terms([(1.0, PauliString::z(&[3]))]).unwrap();
        assert!(expectation(&plus, &wide).is_err());
    }

    #[test]
    fn z_expectation_is_population_difference() {
        let c1 = C64::new(0.6, 0.0);
        let c2 = C64::new(0.0, 0.8);
        let psi = QuantumState::from_amplitudes(vec![c1, c2]).unwrap();
        let z = PauliSum::from_terms([(1.0, PauliString::z(&[0]))]).unwrap();
        let e = expectation(&psi, &z).unwrap();
        assert!((e - (c1.norm_sqr() - c2.norm_sqr())).abs() < 1e-15);
    }
}
