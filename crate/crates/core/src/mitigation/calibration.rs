//! Estimating flip probabilities from basis-state preparations.

use serde::{Deserialize, Serialize};

use super::inversion::mitigated_expectation;
use super::noise::{apply_readout_noise_with, QubitFlip, ReadoutNoiseModel};
use crate::error::{Error, Result};
use crate::pauli::PauliSum;
use crate::rng;
use crate::sampling::{sample_with, ShotCounts};
use crate::state::QuantumState;

/// Prepares states and returns measured shot counts.
pub trait Executor {
    fn run(&self, state: &QuantumState, shots: u64, seed: u64) -> Result<ShotCounts>;
}

/// Exact sampling followed by optional simulated readout flips.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SimulatedExecutor {
    pub noise: Option<ReadoutNoiseModel>,
}

impl SimulatedExecutor {
    pub fn noiseless() -> Self {
        Self { noise: None }
    }

    pub fn with_noise(model: ReadoutNoiseModel) -> Self {
        Self { noise: Some(model) }
    }
}

impl Executor for SimulatedExecutor {
    /// Shots come from stream 0 of `seed` and flips from stream 1.
    fn run(&self, state: &QuantumState, shots: u64, seed: u64) -> Result<ShotCounts> {
        let counts = sample_with(state, shots, &mut rng::stream(seed, 0))?;
        match &self.noise {
            Some(model) => apply_readout_noise_with(&counts, model, &mut rng::stream(seed, 1)),
            None => Ok(counts),
        }
    }
}

/// Estimated noise model with binomial standard errors.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CalibrationJson", into = "CalibrationJson")]
pub struct CalibrationRecord {
    pub model: ReadoutNoiseModel,
    /// `(stderr of p0, stderr of p1)` per qubit.
    pub stderr: Vec<(f64, f64)>,
    pub shots: u64,
    pub run_index: u64,
    pub timestamp: Option<u64>,
}

impl CalibrationRecord {
    pub fn from_json_str(s: &str) -> Result<Self> {
        serde_json::from_str::<CalibrationJson>(s)?.try_into()
    }
}

fn binomial_stderr(p: f64, shots: u64) -> f64 {
    (p * (1.0 - p) / shots as f64).sqrt()
}

/// Calibrates all `qubits` with two preparations, `|0...0>` and `|1...1>`,
/// each measured `shots` times.
pub fn calibrate(executor: &dyn Executor, qubits: usize, shots: u64, seed: u64) -> Result<CalibrationRecord> {
    calibrate_run(executor, qubits, shots, seed, 0)
}

/// Calibration for repetition `run_index` of a longer study; the run gets
/// its own derived seed.
pub fn calibrate_run(
    executor: &dyn Executor,
    qubits: usize,
    shots: u64,
    seed: u64,
    run_index: u64,
) -> Result<CalibrationRecord> {
    if shots == 0 {
        return Err(Error::InvalidArgument("calibration needs at least one shot".into()));
    }
    if qubits == 0 {
        return Err(Error::InvalidArgument("calibration needs at least one qubit".into()));
    }
    let run_seed = rng::sub_seed(seed, run_index);
    let zeros = executor.run(&QuantumState::zero(qubits), shots, rng::sub_seed(run_seed, 0))?;
    let ones = executor.run(&QuantumState::basis(qubits, (1 << qubits) - 1), shots, rng::sub_seed(run_seed, 1))?;
    let mut flips = Vec::with_capacity(qubits);
    let mut stderr = Vec::with_capacity(qubits);
    for q in 0..qubits {
        let p0 = zeros.bit_frequency(q);
        let p1 = 1.0 - ones.bit_frequency(q);
        flips.push(QubitFlip { p0, p1 });
        stderr.push((binomial_stderr(p0, shots), binomial_stderr(p1, shots)));
    }
    Ok(CalibrationRecord { model: ReadoutNoiseModel::new(flips)?, stderr, shots, run_index, timestamp: None })
}

/// Mitigated value with the calibration uncertainty propagated to first
/// order.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MitigatedEstimate {
    pub value: f64,
    pub calibration_stderr: f64,
}

const SENSITIVITY_STEP: f64 = 1e-6;

/// Mitigates with the calibrated model and propagates the per-qubit
/// standard errors through finite-difference sensitivities of the result to
/// each flip probability.
pub fn mitigate_with_record(
    counts: &ShotCounts,
    observable: &PauliSum,
    record: &CalibrationRecord,
) -> Result<MitigatedEstimate> {
    let value = mitigated_expectation(counts, observable, &record.model)?;
    let flips = record.model.flips();
    let mut variance = 0.0;
    for q in 0..flips.len() {
        for which in 0..2 {
            let sigma = if which == 0 { record.stderr[q].0 } else { record.stderr[q].1 };
            if sigma == 0.0 {
                continue;
            }
            let at = |delta: f64| -> Result<(f64, f64)> {
                let mut f = flips.to_vec();
                let p = if which == 0 { &mut f[q].p0 } else { &mut f[q].p1 };
                let moved = (*p + delta).clamp(0.0, 1.0);
                let actual = moved - *p;
                *p = moved;
                Ok((mitigated_expectation(counts, observable, &ReadoutNoiseModel::new(f)?)?, actual))
            };
            let (up, du) = at(SENSITIVITY_STEP)?;
            let (down, dd) = at(-SENSITIVITY_STEP)?;
            let slope = (up - down) / (du - dd);
            variance += (slope * sigma).powi(2);
        }
    }
    Ok(MitigatedEstimate { value, calibration_stderr: variance.sqrt() })
}

#[derive(Serialize, Deserialize)]
struct CalibrationJson {
    qubits: Vec<CalibrationEntry>,
    shots: u64,
    run_index: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    timestamp: Option<u64>,
}

#[derive(Serialize, Deserialize)]
struct CalibrationEntry {
    q: usize,
    p0: f64,
    p1: f64,
    stderr0: f64,
    stderr1: f64,
}

impl TryFrom<CalibrationJson> for CalibrationRecord {
    type Error = Error;

    fn try_from(raw: CalibrationJson) -> Result<Self> {
        let mut entries = raw.qubits;
        entries.sort_by_key(|e| e.q);
        if entries.iter().enumerate().any(|(i, e)| e.q != i) {
            return Err(Error::InvalidNoiseModel("calibration qubits must be 0..n without repeats".into()));
        }
        let model = ReadoutNoiseModel::new(entries.iter().map(|e| QubitFlip { p0: e.p0, p1: e.p1 }).collect())?;
        let stderr = entries.iter().map(|e| (e.stderr0, e.stderr1)).collect();
        Ok(CalibrationRecord { model, stderr, shots: raw.shots, run_index: raw.run_index, timestamp: raw.timestamp })
    }
}

impl From<CalibrationRecord> for CalibrationJson {
    fn from(r: CalibrationRecord) -> Self {
        let qubits = r
            .model
            .flips()
            .iter()
            .zip(&r.stderr)
            .enumerate()
            .map(|(q, (f, s))| CalibrationEntry { q, p0: f.p0, p1: f.p1, stderr0: s.0, stderr1: s.1 })
            .collect();
        CalibrationJson { qubits, shots: r.shots, run_index: r.run_index, timestamp: r.timestamp }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::PauliString;

    #[test]
    fn noiseless_executor_gives_zero() {
        let rec = calibrate(&SimulatedExecutor::noiseless(), 3, 500, 9).unwrap();
        assert!(rec.model.flips().iter().all(|f| f.p0 == 0.0 && f.p1 == 0.0));
        assert!(rec.stderr.iter().all(|&(a, b)| a == 0.0 && b == 0.0));
    }

    #[test]
    fn recovers_asymmetric_flips() {
        let truth = ReadoutNoiseModel::uniform(2, QubitFlip { p0: 0.02, p1: 0.08 }).unwrap();
        let shots = 4096;
        let rec = calibrate(&SimulatedExecutor::with_noise(truth), 2, shots, 11).unwrap();
        for f in rec.model.flips() {
            assert!((f.p0 - 0.02).abs() < 5.0 * binomial_stderr(0.02, shots));
            assert!((f.p1 - 0.08).abs() < 5.0 * binomial_stderr(0.08, shots));
        }
    }

    #[test]
    fn runs_are_distinct_and_reproducible() {
        let truth = ReadoutNoiseModel::uniform(1, QubitFlip::symmetric(0.1)).unwrap();
        let ex = SimulatedExecutor::with_noise(truth);
        let a = calibrate_run(&ex, 1, 1000, 5, 0).unwrap();
        let b = calibrate_run(&ex, 1, 1000, 5, 1).unwrap();
        assert_ne!(a.model, b.model);
        assert_eq!(a, calibrate_run(&ex, 1, 1000, 5, 0).unwrap());
    }

    #[test]
    fn json_round_trip() {
        let truth = ReadoutNoiseModel::uniform(2, QubitFlip::symmetric(0.05)).unwrap();
        let mut rec = calibrate(&SimulatedExecutor::with_noise(truth), 2, 100, 1).unwrap();
        rec.timestamp = Some(1_700_000_000);
        let text = serde_json::to_string(&rec).unwrap();
        assert!(text.contains("\"stderr0\""));
        assert_eq!(CalibrationRecord::from_json_str(&text).unwrap(), rec);
    }

    #[test]
    fn uncertainty_propagation_matches_single_qubit_formula() {
        // Z = ~Z / (1 - p0 - p1) + (p0 - p1) / (1 - p0 - p1) for one qubit.
        let mut counts = ShotCounts::new(1);
        counts.add(0, 700);
        counts.add(1, 300);
        let rec = CalibrationRecord {
            model: ReadoutNoiseModel::uniform(1, QubitFlip { p0: 0.04, p1: 0.06 }).unwrap(),
            stderr: vec![(0.01, 0.02)],
            shots: 100,
            run_index: 0,
            timestamp: None,
        };
        let obs = PauliSum::from_terms([(1.0, PauliString::z(&[0]))]).unwrap();
        let est = mitigate_with_record(&counts, &obs, &rec).unwrap();
        let (zt, g) = (0.4, 0.9);
        assert!((est.value - (zt - 0.02) / g).abs() < 1e-12);
        // d/dp0 = (zt + 1) / g^2 - ... evaluate directly
        let d0 = ((zt - (0.06 - 0.04)) / g + 1.0) / g;
        let d1 = ((zt - (0.06 - 0.04)) / g - 1.0) / g;
        let expect = ((d0 * 0.01).powi(2) + (d1 * 0.02).powi(2)).sqrt();
        assert!((est.calibration_stderr - expect).abs() < 1e-7, "{} vs {expect}", est.calibration_stderr);
    }
}
