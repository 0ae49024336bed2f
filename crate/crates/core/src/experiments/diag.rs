//! Exact ground states of Pauli-sum Hamiltonians.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::pauli::PauliSum;
use crate::state::{QuantumState, C64};

/// Largest system accepted by [`exact_ground_state`].
pub const MAX_EXACT_QUBITS: usize = 14;
/// Up to this size the Hamiltonian is diagonalized as a dense matrix;
/// beyond it a matrix-free Lanczos iteration is used.
const DENSE_QUBITS: usize = 10;
const RESIDUAL_TOL: f64 = 1e-10;

/// `H|psi>` for a Pauli sum.
pub fn apply_hamiltonian(h: &PauliSum, state: &QuantumState) -> QuantumState {
    let mut out = QuantumState::from_amplitudes(vec![C64::new(0.0, 0.0); state.dim()]).expect("power of two");
    for t in h.terms() {
        let mut p = t.string.apply(state);
        p.scale(C64::new(t.coefficient, 0.0));
        out.add_assign(&p);
    }
    out
}

/// Dense matrix of `h` on `num_qubits` qubits.
pub fn hamiltonian_matrix(h: &PauliSum, num_qubits: usize) -> DMatrix<C64> {
    let dim = 1usize << num_qubits;
    let mut m = DMatrix::zeros(dim, dim);
    for i in 0..dim {
        let column = apply_hamiltonian(h, &QuantumState::basis(num_qubits, i));
        for (r, &a) in column.amplitudes().iter().enumerate() {
            m[(r, i)] = a;
        }
    }
    m
}

/// `||H psi - E psi||`.
pub fn residual(h: &PauliSum, energy: f64, state: &QuantumState) -> f64 {
    let mut e_psi = state.clone();
    e_psi.scale(C64::new(energy, 0.0));
    apply_hamiltonian(h, state).sub(&e_psi).norm()
}

/// Lowest eigenvalue of `h` and a normalized eigenvector, on the smallest
/// register covering its support (at least one qubit).
pub fn exact_ground_state(h: &PauliSum) -> Result<(f64, QuantumState)> {
    exact_ground_state_on(h, h.min_qubits().max(1))
}

pub fn exact_ground_state_on(h: &PauliSum, num_qubits: usize) -> Result<(f64, QuantumState)> {
    if num_qubits > MAX_EXACT_QUBITS {
        return Err(Error::TooLarge { num_qubits, limit: MAX_EXACT_QUBITS });
    }
    if h.min_qubits() > num_qubits {
        return Err(Error::QubitOutOfRange { qubit: h.min_qubits() - 1, num_qubits });
    }
    if num_qubits <= DENSE_QUBITS {
        Ok(dense(h, num_qubits))
    } else {
        lanczos(h, num_qubits)
    }
}

fn dense(h: &PauliSum, num_qubits: usize) -> (f64, QuantumState) {
    let eig = SymmetricEigen::new(hamiltonian_matrix(h, num_qubits));
    let (k, &energy) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("nonempty spectrum");
    let mut state = QuantumState::from_amplitudes(eig.eigenvectors.column(k).iter().copied().collect())
        .expect("power of two");
    state.normalize();
    (energy, state)
}

/// Restarted Lanczos with full reorthogonalization.
fn lanczos(h: &PauliSum, num_qubits: usize) -> Result<(f64, QuantumState)> {
    const KRYLOV: usize = 120;
    const RESTARTS: usize = 200;
    let dim = 1usize << num_qubits;
    // Deterministic start with weight on every basis state.
    let mut start = QuantumState::from_amplitudes(
        (0..dim).map(|i| C64::new(1.0 + (i as f64 * 0.618_033_988_75).fract(), 0.0)).collect(),
    )
    .expect("power of two");
    start.normalize();
    let mut best = (f64::INFINITY, start.clone());
    for _ in 0..RESTARTS {
        let mut basis: Vec<QuantumState> = vec![start.clone()];
        let mut alpha = Vec::new();
        let mut beta: Vec<f64> = Vec::new();
        for k in 0..KRYLOV.min(dim) {
            let mut w = apply_hamiltonian(h, &basis[k]);
            alpha.push(basis[k].inner(&w).re);
            for v in &basis {
                let overlap = v.inner(&w);
                let mut proj = v.clone();
                proj.scale(overlap);
                w = w.sub(&proj);
            }
            let b = w.norm();
            if b < 1e-12 || k + 1 == KRYLOV.min(dim) {
                break;
            }
            w.scale(C64::new(1.0 / b, 0.0));
            beta.push(b);
            basis.push(w);
        }
        let m = alpha.len();
        let t = DMatrix::from_fn(m, m, |r, c| {
            if r == c {
                alpha[r]
            } else if r + 1 == c {
                beta[r]
            } else if c + 1 == r {
                beta[c]
            } else {
                0.0
            }
        });
        let eig = SymmetricEigen::new(t);
        let (k, &energy) = eig
            .eigenvalues
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .expect("nonempty spectrum");
        let mut ritz = QuantumState::from_amplitudes(vec![C64::new(0.0, 0.0); dim]).expect("power of two");
        for (v, &c) in basis.iter().zip(eig.eigenvectors.column(k).iter()) {
            let mut term = v.clone();
            term.scale(C64::new(c, 0.0));
            ritz.add_assign(&term);
        }
        ritz.normalize();
        let r = residual(h, energy, &ritz);
        best = (energy, ritz.clone());
        if r <= RESIDUAL_TOL {
            return Ok(best);
        }
        start = ritz;
    }
    Ok(best)
}
