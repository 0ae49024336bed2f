//! Independent reference implementations shared by the integration tests.
//!
//! Nothing here calls the code under test for the quantity being checked:
//! derivatives come from finite differences, ranks from an SVD of the
//! numerical Jacobian, noisy expectations from explicit enumeration of flip
//! patterns, and ground energies from power iteration.

#![allow(dead_code)]

use nalgebra::DMatrix;
use nisq_core::circuit::{Angle, Gate, GateKind, ParametricCircuit};
use nisq_core::mitigation::ReadoutNoiseModel;
use nisq_core::pauli::{Pauli, PauliSum};
use nisq_core::state::{QuantumState, C64};
use nisq_core::{evaluate_circuit, PauliString};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random circuit on `qubits` qubits with exactly `num_params` parameters,
/// mixing plain and controlled rotations, fixed gates and shared
/// parameters.
pub fn random_circuit(r: &mut impl Rng, qubits: usize, num_params: usize) -> ParametricCircuit {
    let mut c = ParametricCircuit::new(qubits);
    let names: Vec<Angle> = (0..num_params).map(|k| c.param(&format!("p{k}"))).collect();
    let mut unused: Vec<usize> = (0..num_params).collect();
    let extra = r.random_range(0..=num_params / 2);
    for step in 0..num_params + extra {
        if r.random_bool(0.25) {
            let q = r.random_range(0..qubits);
            match r.random_range(0..4) {
                0 => c.h(q),
                1 => c.x(q),
                2 => c.z(q),
                _ if qubits > 1 => {
                    let (a, b) = two_distinct(r, qubits);
                    c.cnot(a, b)
                }
                _ => c.h(q),
            };
        }
        let j = if step < num_params { unused.remove(r.random_range(0..unused.len())) } else { r.random_range(0..num_params) };
        let controlled = qubits > 1 && r.random_bool(0.3);
        let kinds = if controlled { [GateKind::Crx, GateKind::Cry, GateKind::Crz] } else { [GateKind::Rx, GateKind::Ry, GateKind::Rz] };
        let kind = kinds[r.random_range(0..3)];
        let qs = if controlled {
            let (a, b) = two_distinct(r, qubits);
            vec![a, b]
        } else {
            vec![r.random_range(0..qubits)]
        };
        c.push(Gate { kind, qubits: qs, angle: Some(names[j]) }).unwrap();
    }
    c
}

fn two_distinct(r: &mut impl Rng, n: usize) -> (usize, usize) {
    let a = r.random_range(0..n);
    let mut b = r.random_range(0..n - 1);
    if b >= a {
        b += 1;
    }
    (a, b)
}

pub fn random_params(r: &mut impl Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| r.random_range(0.0..std::f64::consts::TAU)).collect()
}

/// Central finite-difference derivative of the circuit state.
pub fn fd_tangent(c: &ParametricCircuit, x: &[f64], j: usize, h: f64) -> Vec<C64> {
    let mut xp = x.to_vec();
    let mut xm = x.to_vec();
    xp[j] += h;
    xm[j] -= h;
    let p = evaluate_circuit(c, &xp).unwrap();
    let m = evaluate_circuit(c, &xm).unwrap();
    p.amplitudes().iter().zip(m.amplitudes()).map(|(a, b)| (a - b) / (2.0 * h)).collect()
}

/// Real Jacobian (Re rows over Im rows) from finite differences.
pub fn fd_jacobian(c: &ParametricCircuit, x: &[f64]) -> DMatrix<f64> {
    let dim = 1usize << c.num_qubits();
    let cols: Vec<Vec<C64>> = (0..c.num_params()).map(|j| fd_tangent(c, x, j, 1e-5)).collect();
    DMatrix::from_fn(2 * dim, c.num_params(), |r, j| if r < dim { cols[j][r].re } else { cols[j][r - dim].im })
}

/// Number of singular values above `tol`.
pub fn numerical_rank(m: &DMatrix<f64>, tol: f64) -> usize {
    if m.ncols() == 0 {
        return 0;
    }
    m.clone().svd(false, false).singular_values.iter().filter(|&&s| s > tol).count()
}

/// Value of a diagonal Pauli sum on one measured bitstring.
pub fn diagonal_value(op: &PauliSum, outcome: usize) -> f64 {
    op.terms()
        .iter()
        .map(|t| {
            let mask: usize = t.string.ops().iter().map(|(&q, &p)| {
                assert_eq!(p, Pauli::Z);
                1usize << q
            }).sum();
            if (outcome & mask).count_ones().is_multiple_of(2) { t.coefficient } else { -t.coefficient }
        })
        .sum()
}

/// Exact expectation, over measurement outcomes and all readout flip
/// patterns, of the estimator `op` evaluated on the flipped bitstring.
pub fn brute_force_noisy_expectation(
    probs: &[f64],
    model: &ReadoutNoiseModel,
    qubits: usize,
    op: &PauliSum,
) -> f64 {
    let mut total = 0.0;
    for (x, &px) in probs.iter().enumerate() {
        if px == 0.0 {
            continue;
        }
        for flips in 0..1usize << qubits {
            let mut w = px;
            for q in 0..qubits {
                let f = model.flips()[q];
                let p = if x >> q & 1 == 0 { f.p0 } else { f.p1 };
                w *= if flips >> q & 1 == 1 { p } else { 1.0 - p };
            }
            total += w * diagonal_value(op, x ^ flips);
        }
    }
    total
}

/// Exact expectation of a diagonal operator from outcome probabilities.
pub fn diagonal_expectation(probs: &[f64], op: &PauliSum) -> f64 {
    probs.iter().enumerate().map(|(x, p)| p * diagonal_value(op, x)).sum()
}

/// All Z-strings on `qubits` qubits (including identity) with random
/// coefficients.
pub fn random_diagonal_operator(r: &mut impl Rng, qubits: usize) -> PauliSum {
    let mut op = PauliSum::new();
    for mask in 0..1usize << qubits {
        let support: Vec<usize> = (0..qubits).filter(|q| mask >> q & 1 == 1).collect();
        op.add_term(r.random_range(-1.0..1.0), PauliString::z(&support));
    }
    op
}

/// Haar-like random state from a seeded Gaussian draw, built without the
/// crate's own sampler.
pub fn random_state(r: &mut impl Rng, qubits: usize) -> QuantumState {
    let amps: Vec<C64> = (0..1usize << qubits)
        .map(|_| C64::new(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0)))
        .collect();
    let mut s = QuantumState::from_amplitudes(amps).unwrap();
    s.normalize();
    s
}

/// Lowest eigenvalue of a Pauli sum by power iteration on `c - H`.
pub fn power_iteration_ground_energy(h: &PauliSum, qubits: usize, iterations: usize) -> f64 {
    let dim = 1usize << qubits;
    let shift: f64 = h.terms().iter().map(|t| t.coefficient.abs()).sum();
    let apply = |v: &[C64]| -> Vec<C64> {
        let mut out = vec![C64::new(0.0, 0.0); dim];
        for t in h.terms() {
            for (i, &a) in v.iter().enumerate() {
                let (mut j, mut phase) = (i, C64::new(t.coefficient, 0.0));
                for (&q, &p) in t.string.ops() {
                    let bit = i >> q & 1;
                    match p {
                        Pauli::X => j ^= 1 << q,
                        Pauli::Y => {
                            j ^= 1 << q;
                            phase *= if bit == 0 { C64::new(0.0, 1.0) } else { C64::new(0.0, -1.0) };
                        }
                        Pauli::Z => {
                            if bit == 1 {
                                phase = -phase;
                            }
                        }
                    }
                }
                out[j] += phase * a;
            }
        }
        out
    };
    let mut v: Vec<C64> = (0..dim).map(|i| C64::new(1.0 + 0.1 * i as f64, 0.05 * i as f64)).collect();
    let mut energy = 0.0;
    for _ in 0..iterations {
        let hv = apply(&v);
        let norm: f64 = v.iter().map(|a| a.norm_sqr()).sum::<f64>();
        energy = v.iter().zip(&hv).map(|(a, b)| (a.conj() * b).re).sum::<f64>() / norm;
        let w: Vec<C64> = v.iter().zip(&hv).map(|(a, b)| a * shift - b).collect();
        let n = w.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        v = w.into_iter().map(|a| a / n).collect();
    }
    energy
}
