//! JSON experiment descriptions and CSV output.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::eigen_shots::{eigenvalue_shot_experiment, EigenShotRow};
use super::histogram::{histogram_for_state, HistogramOptions, HistogramResult};
use super::ising::{build_ti_hamiltonian, Boundary, TransverseIsingModel};
use super::scaling::{default_shots_grid, scaling_experiment_with, ScalingOptions, ScalingResult};
use super::{diag::exact_ground_state_on, CalibrationMode};
use crate::circuit::ParametricCircuit;
use crate::error::{Error, Result};
use crate::expressivity::random_point;
use crate::mitigation::{QubitFlip, ReadoutNoiseModel};

/// Seed used when a configuration does not give one.
pub const DEFAULT_SEED: u64 = 20_200_101;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    Histogram,
    Scaling,
    Eigenvalue,
}

/// Either one flip probability applied to both directions on every qubit,
/// or a full per-qubit model.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum NoiseSpec {
    Symmetric(f64),
    Model(ReadoutNoiseModel),
}

impl NoiseSpec {
    pub fn model(&self, qubits: usize) -> Result<ReadoutNoiseModel> {
        match self {
            NoiseSpec::Symmetric(p) => ReadoutNoiseModel::uniform(qubits, QubitFlip::symmetric(*p)),
            NoiseSpec::Model(m) if m.num_qubits() >= qubits => Ok(m.clone()),
            NoiseSpec::Model(m) => {
                Err(Error::InvalidNoiseModel(format!("model covers {} of {qubits} qubits", m.num_qubits())))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ShotsSpec {
    One(u64),
    List(Vec<u64>),
}

impl ShotsSpec {
    pub fn as_list(&self) -> Vec<u64> {
        match self {
            ShotsSpec::One(s) => vec![*s],
            ShotsSpec::List(v) => v.clone(),
        }
    }
}

/// One experiment run. Keys that do not apply to the chosen experiment
/// are ignored; missing keys take the documented defaults.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    /// Ising chain for `histogram`; default `L = 4`, `J = -1`, `h = 1`, periodic.
    #[serde(default)]
    pub model: Option<TransverseIsingModel>,
    /// Default: noiseless.
    #[serde(default)]
    pub noise: Option<NoiseSpec>,
    /// Shots per setting (`histogram`), grid (`scaling`, default `2^4..2^13`)
    /// or budgets (`eigenvalue`, default 1000, 4000, 8000).
    #[serde(default)]
    pub shots: Option<ShotsSpec>,
    /// Experiments (`histogram`, default 2048) or random states
    /// (`scaling`, default 1024).
    #[serde(default)]
    pub repetitions: Option<usize>,
    #[serde(default)]
    pub seed: Option<u64>,
    /// CSV path, relative to the working directory.
    #[serde(default)]
    pub output: Option<String>,
    #[serde(default)]
    pub calibration: Option<CalibrationMode>,
    /// Circuit for `eigenvalue`.
    #[serde(default)]
    pub circuit: Option<ParametricCircuit>,
    /// Evaluation point for `eigenvalue`; default is a seeded random point.
    #[serde(default)]
    pub params: Option<Vec<f64>>,
}

impl ExperimentConfig {
    pub fn from_json_str(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(DEFAULT_SEED)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ExperimentOutcome {
    Histogram(HistogramResult),
    Scaling(ScalingResult),
    Eigenvalue(Vec<EigenShotRow>),
}

pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentOutcome> {
    let seed = config.seed();
    let calibration = config.calibration.unwrap_or_default();
    match config.experiment {
        ExperimentKind::Histogram => {
            let model = config.model.unwrap_or(TransverseIsingModel { sites: 4, j: -1.0, h: 1.0, boundary: Boundary::Periodic });
            let noise = noise_for(config, model.sites)?;
            let shots = match &config.shots {
                None => 2048,
                Some(ShotsSpec::One(s)) => *s,
                Some(ShotsSpec::List(_)) => {
                    return Err(Error::InvalidArgument("histogram takes a single shots value".into()))
                }
            };
            let opts = HistogramOptions {
                experiments: config.repetitions.unwrap_or(2048),
                shots_per_setting: shots,
                noise,
                calibration,
                bins: None,
            };
            let h = build_ti_hamiltonian(&model)?;
            let (energy, state) = exact_ground_state_on(&h, model.sites)?;
            Ok(ExperimentOutcome::Histogram(histogram_for_state(&h, &state, energy, &opts, seed)?))
        }
        ExperimentKind::Scaling => {
            let opts = ScalingOptions {
                repetitions: config.repetitions.unwrap_or(1024),
                shots_grid: config.shots.as_ref().map_or_else(default_shots_grid, ShotsSpec::as_list),
                noise: noise_for(config, 2)?,
                calibration,
            };
            Ok(ExperimentOutcome::Scaling(scaling_experiment_with(&opts, seed)?))
        }
        ExperimentKind::Eigenvalue => {
            let circuit = config
                .circuit
                .as_ref()
                .ok_or_else(|| Error::InvalidArgument("eigenvalue experiment needs a `circuit`".into()))?;
            let params = match &config.params {
                Some(p) => p.clone(),
                None => random_point(circuit.num_params(), seed),
            };
            let shots = config.shots.as_ref().map_or_else(|| vec![1000, 4000, 8000], ShotsSpec::as_list);
            Ok(ExperimentOutcome::Eigenvalue(eigenvalue_shot_experiment(circuit, &params, &shots, seed)?))
        }
    }
}

fn noise_for(config: &ExperimentConfig, qubits: usize) -> Result<ReadoutNoiseModel> {
    match &config.noise {
        Some(spec) => spec.model(qubits),
        None => Ok(ReadoutNoiseModel::noiseless(qubits)),
    }
}

/// 17 significant digits in scientific notation, locale independent.
pub fn format_real(x: f64) -> String {
    format!("{x:.16e}")
}

impl ExperimentOutcome {
    pub fn csv_header(&self) -> &'static str {
        match self {
            ExperimentOutcome::Histogram(_) => "experiment_index,noisy_energy,mitigated_energy",
            ExperimentOutcome::Scaling(_) => "shots,mean_err_mitigated,std_mitigated,mean_err_raw,std_raw",
            ExperimentOutcome::Eigenvalue(_) => "shots,eig_smallest,eig_smallest_stderr,eig_second,eig_second_stderr",
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(self.csv_header());
        out.push('\n');
        let f = format_real;
        match self {
            ExperimentOutcome::Histogram(r) => {
                for (i, (n, m)) in r.noisy_energies.iter().zip(&r.mitigated_energies).enumerate() {
                    let _ = writeln!(out, "{i},{},{}", f(*n), f(*m));
                }
            }
            ExperimentOutcome::Scaling(r) => {
                for row in &r.rows {
                    let _ = writeln!(
                        out,
                        "{},{},{},{},{}",
                        row.shots,
                        f(row.mean_err_mitigated),
                        f(row.std_mitigated),
                        f(row.mean_err_raw),
                        f(row.std_raw)
                    );
                }
            }
            ExperimentOutcome::Eigenvalue(rows) => {
                for row in rows {
                    let _ = writeln!(
                        out,
                        "{},{},{},{},{}",
                        row.shots,
                        f(row.eig_smallest),
                        f(row.eig_smallest_stderr),
                        f(row.eig_second),
                        f(row.eig_second_stderr)
                    );
                }
            }
        }
        out
    }
}
