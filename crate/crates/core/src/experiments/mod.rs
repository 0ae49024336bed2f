//! Simulated studies built on the expressivity and mitigation modules.
//!
//! Every study takes one seed; repetitions derive their own seeds with
//! [`crate::rng::sub_seed`] so results are reproducible bit for bit.

mod config;
mod diag;
mod eigen_shots;
mod fit;
mod haar;
mod histogram;
mod ising;
mod scaling;
mod vqe;

pub use config::{
    format_real, run_experiment, ExperimentConfig, ExperimentKind, ExperimentOutcome, NoiseSpec, ShotsSpec,
    DEFAULT_SEED,
};
pub use diag::{apply_hamiltonian, exact_ground_state, exact_ground_state_on, hamiltonian_matrix, residual, MAX_EXACT_QUBITS};
pub use eigen_shots::{
    eigenvalue_shot_experiment, eigenvalue_shot_experiment_with, exact_two_smallest, EigenShotRow, BOOTSTRAP_RESAMPLES,
};
pub use fit::{power_law_fit, PowerLaw, Subset};
pub use haar::haar_random_state;
pub use histogram::{histogram, histogram_experiment, histogram_for_state, GaussianFit, HistogramOptions, HistogramResult};
pub use ising::{build_ti_hamiltonian, Boundary, TransverseIsingModel};
pub use scaling::{
    default_shots_grid, scaling_experiment, scaling_experiment_with, FitWithError, ScalingOptions, ScalingResult,
    ScalingRow,
};
pub use vqe::{vqe_minimize, Objective, VqeOptions, VqeResult};

use serde::{Deserialize, Serialize};

/// Which flip probabilities the mitigation uses.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CalibrationMode {
    /// A fresh calibration for every repetition, with as many shots per
    /// preparation as the measurement itself.
    #[default]
    PerRun,
    /// The simulated model itself.
    TrueModel,
}

/// Mean and sample standard deviation (`n - 1` denominator; 0 for fewer
/// than two values).
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mean_std_values() {
        let (m, s) = mean_std(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(m, 2.5);
        assert!((s - (5.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert_eq!(mean_std(&[7.0]), (7.0, 0.0));
    }
}
