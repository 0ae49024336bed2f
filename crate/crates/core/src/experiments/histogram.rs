//! Repeated noisy energy measurements of an Ising ground state.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::diag::exact_ground_state_on;
use super::ising::{build_ti_hamiltonian, TransverseIsingModel};
use super::{mean_std, CalibrationMode};
use crate::error::{Error, Result};
use crate::mitigation::{
    calibrate_run, forward_sum, split_settings, Executor, MeasurementSetting, MitigatedOperator,
    ReadoutNoiseModel, SimulatedExecutor,
};
use crate::pauli::PauliSum;
use crate::rng;
use crate::simulate::expectation;
use crate::state::QuantumState;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaussianFit {
    pub mean: f64,
    pub std: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HistogramResult {
    pub exact_energy: f64,
    /// Expectation of the unmitigated estimator under the noise model.
    pub predicted_mean: f64,
    /// Standard deviation of one experiment's unmitigated estimate.
    pub predicted_std: f64,
    /// Always `"gaussian"`: a normal fit by sample moments.
    pub fit_family: String,
    pub fit: GaussianFit,
    pub noisy_energies: Vec<f64>,
    pub mitigated_energies: Vec<f64>,
    pub bin_edges: Vec<f64>,
    pub bin_counts: Vec<u64>,
}

impl HistogramResult {
    /// Standard error of the noisy sample mean.
    pub fn noisy_mean_stderr(&self) -> f64 {
        self.fit.std / (self.noisy_energies.len() as f64).sqrt()
    }

    pub fn mitigated_mean_std(&self) -> (f64, f64) {
        mean_std(&self.mitigated_energies)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HistogramOptions {
    pub experiments: usize,
    /// Shots per measurement setting; one experiment uses twice this.
    pub shots_per_setting: u64,
    pub noise: ReadoutNoiseModel,
    #[serde(default)]
    pub calibration: CalibrationMode,
    /// Defaults to `ceil(sqrt(experiments))`.
    #[serde(default)]
    pub bins: Option<usize>,
}

/// Exact ground state of the Ising chain measured `experiments` times.
pub fn histogram_experiment(
    model: &TransverseIsingModel,
    noise: &ReadoutNoiseModel,
    experiments: usize,
    shots_per_setting: u64,
    seed: u64,
) -> Result<HistogramResult> {
    let opts = HistogramOptions {
        experiments,
        shots_per_setting,
        noise: noise.clone(),
        calibration: CalibrationMode::default(),
        bins: None,
    };
    let h = build_ti_hamiltonian(model)?;
    let (energy, state) = exact_ground_state_on(&h, model.sites)?;
    histogram_for_state(&h, &state, energy, &opts, seed)
}

/// Same study for an arbitrary prepared state, e.g. a variational one;
/// `reference_energy` is reported as the exact energy.
pub fn histogram_for_state(
    h: &PauliSum,
    state: &QuantumState,
    reference_energy: f64,
    opts: &HistogramOptions,
    seed: u64,
) -> Result<HistogramResult> {
    if opts.experiments == 0 || opts.shots_per_setting == 0 {
        return Err(Error::InvalidArgument("experiments and shots must be positive".into()));
    }
    let qubits = state.num_qubits();
    if opts.noise.num_qubits() < qubits {
        return Err(Error::InvalidNoiseModel(format!("model covers {} of {qubits} qubits", opts.noise.num_qubits())));
    }
    let settings = split_settings(h)?;
    let rotated: BTreeMap<MeasurementSetting, QuantumState> =
        settings.keys().map(|&s| (s, s.rotate(state))).collect();

    let (predicted_mean, predicted_std) = predict(&settings, &rotated, &opts.noise, opts.shots_per_setting)?;
    let fixed_ops: Option<BTreeMap<_, _>> = match opts.calibration {
        CalibrationMode::TrueModel => Some(
            settings
                .iter()
                .map(|(&s, op)| Ok((s, MitigatedOperator::new(op.clone(), &opts.noise)?)))
                .collect::<Result<_>>()?,
        ),
        CalibrationMode::PerRun => None,
    };

    let executor = SimulatedExecutor::with_noise(opts.noise.clone());
    let mut noisy_energies = Vec::with_capacity(opts.experiments);
    let mut mitigated_energies = Vec::with_capacity(opts.experiments);
    for r in 0..opts.experiments {
        let task = rng::sub_seed(seed, r as u64);
        let calibrated;
        let ops = match &fixed_ops {
            Some(ops) => ops,
            None => {
                let record = calibrate_run(&executor, qubits, opts.shots_per_setting, rng::sub_seed(task, 0), r as u64)?;
                calibrated = settings
                    .iter()
                    .map(|(&s, op)| Ok((s, MitigatedOperator::new(op.clone(), &record.model)?)))
                    .collect::<Result<BTreeMap<_, _>>>()?;
                &calibrated
            }
        };
        let (mut noisy, mut mitigated) = (0.0, 0.0);
        for (i, (setting, psi)) in rotated.iter().enumerate() {
            let counts = executor.run(psi, opts.shots_per_setting, rng::sub_seed(task, 1 + i as u64))?;
            let op = &ops[setting];
            noisy += op.evaluate_raw(&counts)?;
            mitigated += op.evaluate(&counts)?;
        }
        noisy_energies.push(noisy);
        mitigated_energies.push(mitigated);
    }

    let (mean, std) = mean_std(&noisy_energies);
    let bins = opts.bins.unwrap_or_else(|| (opts.experiments as f64).sqrt().ceil() as usize).max(1);
    let (bin_edges, bin_counts) = histogram(&noisy_energies, bins);
    Ok(HistogramResult {
        exact_energy: reference_energy,
        predicted_mean,
        predicted_std,
        fit_family: "gaussian".into(),
        fit: GaussianFit { mean, std },
        noisy_energies,
        mitigated_energies,
        bin_edges,
        bin_counts,
    })
}

/// Mean from the forward-damped operators; spread from the exact noisy
/// outcome distribution of the per-shot energy in each setting.
fn predict(
    settings: &BTreeMap<MeasurementSetting, PauliSum>,
    rotated: &BTreeMap<MeasurementSetting, QuantumState>,
    noise: &ReadoutNoiseModel,
    shots: u64,
) -> Result<(f64, f64)> {
    let mut mean = 0.0;
    let mut variance = 0.0;
    for (setting, op) in settings {
        let psi = &rotated[setting];
        mean += expectation(psi, &forward_sum(op, noise)?)?;
        let noisy = noise.noisy_distribution(&psi.probabilities())?;
        let (mut m1, mut m2) = (0.0, 0.0);
        for (x, &p) in noisy.iter().enumerate() {
            let f: f64 = op
                .terms()
                .iter()
                .map(|t| {
                    let odd = (x & t.string.support_mask()).count_ones() % 2 == 1;
                    if odd {
                        -t.coefficient
                    } else {
                        t.coefficient
                    }
                })
                .sum();
            m1 += p * f;
            m2 += p * f * f;
        }
        variance += (m2 - m1 * m1).max(0.0) / shots as f64;
    }
    Ok((mean, variance.sqrt()))
}

/// Equal-width bins spanning the data; the last bin is closed.
pub fn histogram(values: &[f64], bins: usize) -> (Vec<f64>, Vec<u64>) {
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let (lo, hi) = if hi > lo { (lo, hi) } else { (lo - 0.5, lo + 0.5) };
    let width = (hi - lo) / bins as f64;
    let mut edges: Vec<f64> = (0..bins).map(|i| lo + width * i as f64).collect();
    edges.push(hi);
    let mut counts = vec![0u64; bins];
    for &v in values {
        let i = (((v - lo) / width) as usize).min(bins - 1);
        counts[i] += 1;
    }
    (edges, counts)
}
