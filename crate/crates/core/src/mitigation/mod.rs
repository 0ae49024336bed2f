//! Readout-error mitigation for uncorrelated bit flips.
//!
//! Each qubit `q` misreads a 0 as 1 with probability `p0` and a 1 as 0 with
//! probability `p1`, independently of the other qubits. Diagonal
//! observables are corrected term by term: a k-local Z-string is replaced
//! by `2^k` noisy sub-strings whose noisy expectation equals the exact one,
//! so the cost grows polynomially with the system size instead of requiring
//! the inverse of a `2^Q x 2^Q` response matrix.

mod calibration;
mod inversion;
mod noise;
mod preprocess;
mod t1;

pub use calibration::{
    calibrate, calibrate_run, mitigate_with_record, CalibrationRecord, Executor, MitigatedEstimate, SimulatedExecutor,
};
pub use inversion::{
    correct_operator, diagonal_mean, forward_operator, forward_sum, gamma, mitigated_expectation, DiagonalOp,
    MitigatedOperator,
};
pub use noise::{apply_readout_noise, apply_readout_noise_with, QubitFlip, ReadoutNoiseModel};
pub use preprocess::{preprocess_hamiltonian, split_settings, MeasurementSetting};
pub use t1::{t1_correct, t1_forward};
