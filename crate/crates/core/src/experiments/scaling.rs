//! Estimation error of `<Z_1 Z_0>` against the number of shots.

use serde::{Deserialize, Serialize};

use super::fit::{power_law_fit, PowerLaw, Subset};
use super::haar::haar_random_state;
use super::{mean_std, CalibrationMode};
use crate::error::{Error, Result};
use crate::mitigation::{calibrate_run, correct_operator, diagonal_mean, Executor, ReadoutNoiseModel, SimulatedExecutor};
use crate::pauli::{PauliString, PauliSum};
use crate::rng;
use crate::simulate::pauli_expectation;

/// `2^4 ... 2^13`.
pub fn default_shots_grid() -> Vec<u64> {
    (4..=13).map(|k| 1u64 << k).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingOptions {
    pub repetitions: usize,
    pub shots_grid: Vec<u64>,
    pub noise: ReadoutNoiseModel,
    #[serde(default)]
    pub calibration: CalibrationMode,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingRow {
    pub shots: u64,
    pub mean_err_mitigated: f64,
    pub std_mitigated: f64,
    pub mean_err_raw: f64,
    pub std_raw: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingResult {
    pub rows: Vec<ScalingRow>,
    /// Absolute errors, indexed `[shots index][repetition]`.
    pub errors_mitigated: Vec<Vec<f64>>,
    pub errors_raw: Vec<Vec<f64>>,
}

/// Fit with a bootstrap standard error on `beta`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitWithError {
    pub fit: PowerLaw,
    pub beta_stderr: f64,
}

impl ScalingResult {
    fn points(&self, errors: &[Vec<f64>], pick: Option<&[usize]>) -> Vec<(f64, f64)> {
        self.rows
            .iter()
            .zip(errors)
            .map(|(row, errs)| {
                let mean = match pick {
                    Some(idx) => idx.iter().map(|&i| errs[i]).sum::<f64>() / idx.len() as f64,
                    None => errs.iter().sum::<f64>() / errs.len() as f64,
                };
                (row.shots as f64, mean)
            })
            .collect()
    }

    pub fn fit_mitigated(&self, subset: Subset) -> Result<PowerLaw> {
        power_law_fit(&self.points(&self.errors_mitigated, None), subset)
    }

    pub fn fit_raw(&self, subset: Subset) -> Result<PowerLaw> {
        power_law_fit(&self.points(&self.errors_raw, None), subset)
    }

    /// Nonparametric bootstrap over repetitions: the same resampled set of
    /// repetitions is used for every shot count.
    pub fn bootstrap_fit(&self, mitigated: bool, subset: Subset, resamples: usize, seed: u64) -> Result<FitWithError> {
        let errors = if mitigated { &self.errors_mitigated } else { &self.errors_raw };
        let fit = power_law_fit(&self.points(errors, None), subset)?;
        let reps = errors.first().map_or(0, Vec::len);
        let mut rng = rng::stream(seed, 0);
        let mut betas = Vec::with_capacity(resamples);
        for _ in 0..resamples {
            let idx: Vec<usize> = (0..reps).map(|_| rand::Rng::random_range(&mut rng, 0..reps)).collect();
            if let Ok(f) = power_law_fit(&self.points(errors, Some(&idx)), subset) {
                betas.push(f.beta);
            }
        }
        let (_, beta_stderr) = mean_std(&betas);
        Ok(FitWithError { fit, beta_stderr })
    }
}

/// Two-qubit study with `repetitions` Haar-random states.
pub fn scaling_experiment(
    repetitions: usize,
    shots_grid: &[u64],
    noise: &ReadoutNoiseModel,
    seed: u64,
) -> Result<ScalingResult> {
    let opts = ScalingOptions {
        repetitions,
        shots_grid: shots_grid.to_vec(),
        noise: noise.clone(),
        calibration: CalibrationMode::default(),
    };
    scaling_experiment_with(&opts, seed)
}

/// For every state and shot count: measure `Z_1 Z_0` with `s` noisy shots,
/// report the raw estimate and the estimate mitigated with either the true
/// model or a calibration of `s` shots per preparation made for that run.
pub fn scaling_experiment_with(opts: &ScalingOptions, seed: u64) -> Result<ScalingResult> {
    const QUBITS: usize = 2;
    if opts.repetitions == 0 {
        return Err(Error::InvalidArgument("at least one repetition is required".into()));
    }
    if opts.shots_grid.is_empty() || opts.shots_grid.contains(&0) {
        return Err(Error::InvalidArgument("shots grid must be nonempty and positive".into()));
    }
    if opts.noise.num_qubits() < QUBITS {
        return Err(Error::InvalidNoiseModel(format!("model covers {} of {QUBITS} qubits", opts.noise.num_qubits())));
    }
    let zz = PauliString::z(&[0, 1]);
    let observable = PauliSum::from_terms([(1.0, zz.clone())])?;
    let executor = SimulatedExecutor::with_noise(opts.noise.clone());

    let n = opts.shots_grid.len();
    let mut errors_mitigated = vec![Vec::with_capacity(opts.repetitions); n];
    let mut errors_raw = vec![Vec::with_capacity(opts.repetitions); n];
    for r in 0..opts.repetitions {
        let task = rng::sub_seed(seed, r as u64);
        let psi = haar_random_state(QUBITS, rng::sub_seed(task, 0))?;
        let exact = pauli_expectation(&psi, &zz)?;
        for (k, &shots) in opts.shots_grid.iter().enumerate() {
            let run = rng::sub_seed(rng::sub_seed(task, 1), k as u64);
            let counts = executor.run(&psi, shots, rng::sub_seed(run, 0))?;
            let raw = diagonal_mean(&observable, &counts)?;
            let corrected = match opts.calibration {
                CalibrationMode::PerRun => {
                    let record = calibrate_run(&executor, QUBITS, shots, rng::sub_seed(run, 1), k as u64)?;
                    correct_operator(&zz, &record.model)?
                }
                CalibrationMode::TrueModel => correct_operator(&zz, &opts.noise)?,
            };
            let mitigated = diagonal_mean(&corrected, &counts)?;
            errors_raw[k].push((raw - exact).abs());
            errors_mitigated[k].push((mitigated - exact).abs());
        }
    }
    let rows = opts
        .shots_grid
        .iter()
        .enumerate()
        .map(|(k, &shots)| {
            let (mean_err_mitigated, std_mitigated) = mean_std(&errors_mitigated[k]);
            let (mean_err_raw, std_raw) = mean_std(&errors_raw[k]);
            ScalingRow { shots, mean_err_mitigated, std_mitigated, mean_err_raw, std_raw }
        })
        .collect();
    Ok(ScalingResult { rows, errors_mitigated, errors_raw })
}
