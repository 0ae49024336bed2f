//! Dense statevectors and in-place gate application.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::circuit::{Gate, GateKind};
use crate::error::{Error, Result};

pub type C64 = Complex64;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);
const I: C64 = C64::new(0.0, 1.0);

/// 2x2 complex matrix in row-major order.
pub type Mat2 = [[C64; 2]; 2];

/// Amplitude vector of length `2^num_qubits`, little-endian qubit order.
///
/// Circuit outputs are normalized; tangent vectors reuse the type without
/// any norm constraint.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuantumState {
    num_qubits: usize,
    amplitudes: Vec<C64>,
}

impl QuantumState {
    /// `|0...0>`.
    pub fn zero(num_qubits: usize) -> Self {
        Self::basis(num_qubits, 0)
    }

    pub fn basis(num_qubits: usize, index: usize) -> Self {
        let mut amplitudes = vec![ZERO; 1 << num_qubits];
        amplitudes[index] = ONE;
        Self { num_qubits, amplitudes }
    }

    pub fn from_amplitudes(amplitudes: Vec<C64>) -> Result<Self> {
        let len = amplitudes.len();
        if len == 0 || !len.is_power_of_two() {
            return Err(Error::InvalidArgument(format!("amplitude count {len} is not a power of two")));
        }
        Ok(Self { num_qubits: len.trailing_zeros() as usize, amplitudes })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn amplitudes_mut(&mut self) -> &mut [C64] {
        &mut self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn normalize(&mut self) {
        let n = self.norm();
        if n > 0.0 {
            self.scale(C64::new(1.0 / n, 0.0));
        }
    }

    pub fn scale(&mut self, factor: C64) {
        for a in &mut self.amplitudes {
            *a *= factor;
        }
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &QuantumState) -> C64 {
        debug_assert_eq!(self.dim(), other.dim());
        self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn add_assign(&mut self, other: &QuantumState) {
        for (a, b) in self.amplitudes.iter_mut().zip(&other.amplitudes) {
            *a += b;
        }
    }

    pub fn sub(&self, other: &QuantumState) -> QuantumState {
        let amplitudes = self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| a - b).collect();
        QuantumState { num_qubits: self.num_qubits, amplitudes }
    }

    /// Applies `m` to qubit `q`.
    pub fn apply_single(&mut self, q: usize, m: &Mat2) {
        let bit = 1usize << q;
        for i in 0..self.amplitudes.len() {
            if i & bit == 0 {
                let a0 = self.amplitudes[i];
                let a1 = self.amplitudes[i | bit];
                self.amplitudes[i] = m[0][0] * a0 + m[0][1] * a1;
                self.amplitudes[i | bit] = m[1][0] * a0 + m[1][1] * a1;
            }
        }
    }

    /// Applies `m` to `target` on the subspace where `control` is 1.
    pub fn apply_controlled(&mut self, control: usize, target: usize, m: &Mat2) {
        let cbit = 1usize << control;
        let tbit = 1usize << target;
        for i in 0..self.amplitudes.len() {
            if i & cbit != 0 && i & tbit == 0 {
                let a0 = self.amplitudes[i];
                let a1 = self.amplitudes[i | tbit];
                self.amplitudes[i] = m[0][0] * a0 + m[0][1] * a1;
                self.amplitudes[i | tbit] = m[1][0] * a0 + m[1][1] * a1;
            }
        }
    }

    /// Applies `gate` with rotation angle `theta` (ignored for fixed gates).
    pub fn apply_gate(&mut self, gate: &Gate, theta: f64) {
        let q = &gate.qubits;
        match gate.kind {
            GateKind::Rx => self.apply_single(q[0], &rx(theta)),
            GateKind::Ry => self.apply_single(q[0], &ry(theta)),
            GateKind::Rz => self.apply_single(q[0], &rz(theta)),
            GateKind::Crx => self.apply_controlled(q[0], q[1], &rx(theta)),
            GateKind::Cry => self.apply_controlled(q[0], q[1], &ry(theta)),
            GateKind::Crz => self.apply_controlled(q[0], q[1], &rz(theta)),
            GateKind::Cnot => self.apply_controlled(q[0], q[1], &PAULI_X),
            GateKind::H => self.apply_single(q[0], &HADAMARD),
            GateKind::X => self.apply_single(q[0], &PAULI_X),
            GateKind::Z => self.apply_single(q[0], &PAULI_Z),
        }
    }

    /// Multiplies by `-i G` where `G` is the generator of a rotation gate:
    /// `P/2` for a plain rotation and `|1><1| (x) P/2` for a controlled one.
    /// Since `G` commutes with its own rotation, inserting it before or after
    /// the gate is equivalent.
    pub fn apply_generator(&mut self, gate: &Gate) {
        let q = &gate.qubits;
        let half = C64::new(0.0, -0.5);
        match gate.kind {
            GateKind::Rx => self.apply_single(q[0], &scaled(&PAULI_X, half)),
            GateKind::Ry => self.apply_single(q[0], &scaled(&PAULI_Y, half)),
            GateKind::Rz => self.apply_single(q[0], &scaled(&PAULI_Z, half)),
            GateKind::Crx | GateKind::Cry | GateKind::Crz => {
                let p = match gate.kind {
                    GateKind::Crx => PAULI_X,
                    GateKind::Cry => PAULI_Y,
                    _ => PAULI_Z,
                };
                let cbit = 1usize << q[0];
                for (i, a) in self.amplitudes.iter_mut().enumerate() {
                    if i & cbit == 0 {
                        *a = ZERO;
                    }
                }
                self.apply_controlled(q[0], q[1], &scaled(&p, half));
            }
            kind => panic!("fixed gate {kind} has no generator"),
        }
    }
}

pub const PAULI_X: Mat2 = [[ZERO, ONE], [ONE, ZERO]];
pub const PAULI_Y: Mat2 = [[ZERO, C64::new(0.0, -1.0)], [I, ZERO]];
pub const PAULI_Z: Mat2 = [[ONE, ZERO], [ZERO, C64::new(-1.0, 0.0)]];
pub const HADAMARD: Mat2 = [
    [C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0), C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0)],
    [C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0), C64::new(-std::f64::consts::FRAC_1_SQRT_2, 0.0)],
];

fn scaled(m: &Mat2, s: C64) -> Mat2 {
    [[m[0][0] * s, m[0][1] * s], [m[1][0] * s, m[1][1] * s]]
}

/// `exp(-i theta X / 2)`.
pub fn rx(theta: f64) -> Mat2 {
    let (s, c) = (theta / 2.0).sin_cos();
    [[C64::new(c, 0.0), C64::new(0.0, -s)], [C64::new(0.0, -s), C64::new(c, 0.0)]]
}

/// `exp(-i theta Y / 2)`.
pub fn ry(theta: f64) -> Mat2 {
    let (s, c) = (theta / 2.0).sin_cos();
    [[C64::new(c, 0.0), C64::new(-s, 0.0)], [C64::new(s, 0.0), C64::new(c, 0.0)]]
}

/// `exp(-i theta Z / 2)`.
pub fn rz(theta: f64) -> Mat2 {
    let (s, c) = (theta / 2.0).sin_cos();
    [[C64::new(c, -s), ZERO], [ZERO, C64::new(c, s)]]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: C64, b: C64) -> bool {
        (a - b).norm() < 1e-12
    }

    #[test]
    fn rx_pi_flips_with_phase() {
        let mut s = QuantumState::zero(1);
        s.apply_single(0, &rx(std::f64::consts::PI));
        assert!(close(s.amplitudes()[0], ZERO));
        assert!(close(s.amplitudes()[1], C64::new(0.0, -1.0)));
    }

    #[test]
    fn controlled_gate_is_identity_on_control_zero() {
        let mut s = QuantumState::zero(2);
        s.apply_controlled(0, 1, &PAULI_X);
        assert_eq!(s, QuantumState::zero(2));
        let mut s = QuantumState::basis(2, 0b01);
        s.apply_controlled(0, 1, &PAULI_X);
        assert!(close(s.amplitudes()[0b11], ONE));
    }

    #[test]
    fn from_amplitudes_checks_length() {
        assert!(QuantumState::from_amplitudes(vec![ONE; 3]).is_err());
        assert_eq!(QuantumState::from_amplitudes(vec![ONE; 8]).unwrap().num_qubits(), 3);
    }
}
