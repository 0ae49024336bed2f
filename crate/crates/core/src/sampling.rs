//! Computational-basis measurement records.

use std::collections::BTreeMap;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng;
use crate::state::QuantumState;

/// Outcome histogram. Outcomes are basis-state indices (qubit 0 = least
/// significant bit); on disk they are bitstrings with qubit 0 rightmost.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ShotCountsJson", into = "ShotCountsJson")]
pub struct ShotCounts {
    num_qubits: usize,
    counts: BTreeMap<usize, u64>,
    shots: u64,
}

impl ShotCounts {
    pub fn new(num_qubits: usize) -> Self {
        Self { num_qubits, counts: BTreeMap::new(), shots: 0 }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn shots(&self) -> u64 {
        self.shots
    }

    pub fn add(&mut self, outcome: usize, n: u64) {
        debug_assert!(outcome < 1 << self.num_qubits);
        if n > 0 {
            *self.counts.entry(outcome).or_insert(0) += n;
            self.shots += n;
        }
    }

    pub fn get(&self, outcome: usize) -> u64 {
        self.counts.get(&outcome).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.counts.iter().map(|(&k, &v)| (k, v))
    }

    pub fn frequency(&self, outcome: usize) -> f64 {
        self.get(outcome) as f64 / self.shots as f64
    }

    /// Fraction of shots with qubit `q` read as 1.
    pub fn bit_frequency(&self, q: usize) -> f64 {
        let ones: u64 = self.iter().filter(|(x, _)| x >> q & 1 == 1).map(|(_, c)| c).sum();
        ones as f64 / self.shots as f64
    }

    /// Sample mean of the Z-string on the qubits in `mask`:
    /// each shot contributes `(-1)^{popcount(outcome & mask)}`.
    pub fn z_mean(&self, mask: usize) -> f64 {
        let signed: i64 = self
            .iter()
            .map(|(x, c)| if (x & mask).count_ones().is_multiple_of(2) { c as i64 } else { -(c as i64) })
            .sum();
        signed as f64 / self.shots as f64
    }

    pub fn bitstring(&self, outcome: usize) -> String {
        format!("{outcome:0width$b}", width = self.num_qubits)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        serde_json::from_str::<ShotCountsJson>(s)?.try_into()
    }
}

#[derive(Serialize, Deserialize)]
struct ShotCountsJson {
    num_qubits: usize,
    counts: BTreeMap<String, u64>,
}

impl TryFrom<ShotCountsJson> for ShotCounts {
    type Error = Error;

    fn try_from(raw: ShotCountsJson) -> Result<Self> {
        let mut out = ShotCounts::new(raw.num_qubits);
        for (bits, n) in raw.counts {
            if bits.len() != raw.num_qubits || !bits.chars().all(|c| c == '0' || c == '1') {
                return Err(Error::InvalidArgument(format!(
                    "bitstring `{bits}` is not {} binary digits",
                    raw.num_qubits
                )));
            }
            let outcome = usize::from_str_radix(&bits, 2).expect("validated binary");
            out.add(outcome, n);
        }
        Ok(out)
    }
}

impl From<ShotCounts> for ShotCountsJson {
    fn from(c: ShotCounts) -> Self {
        let counts = c.counts.iter().map(|(&k, &v)| (c.bitstring(k), v)).collect();
        ShotCountsJson { num_qubits: c.num_qubits, counts }
    }
}

/// Draws `shots` i.i.d. outcomes from `|amplitude|^2`.
pub fn sample_measurements(state: &QuantumState, shots: u64, seed: u64) -> Result<ShotCounts> {
    let mut rng = rng::stream(seed, 0);
    sample_with(state, shots, &mut rng)
}

pub fn sample_with<R: Rng + ?Sized>(state: &QuantumState, shots: u64, rng: &mut R) -> Result<ShotCounts> {
    if shots == 0 {
        return Err(Error::InvalidArgument("shots must be positive".into()));
    }
    let sampler = WeightedIndex::new(state.probabilities())
        .map_err(|e| Error::InvalidArgument(format!("cannot sample from state: {e}")))?;
    let mut counts = ShotCounts::new(state.num_qubits());
    for _ in 0..shots {
        counts.add(sampler.sample(rng), 1);
    }
    Ok(counts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::ParametricCircuit;
    use crate::simulate::evaluate_circuit;

    #[test]
    fn zero_state_always_reads_zero() {
        let counts = sample_measurements(&QuantumState::zero(1), 1000, 1).unwrap();
        assert_eq!(counts.get(0), 1000);
        assert_eq!(counts.shots(), 1000);
    }

    #[test]
    fn zero_shots_rejected() {
        assert!(sample_measurements(&QuantumState::zero(1), 0, 1).is_err());
    }

    #[test]
    fn plus_state_frequency_within_five_sigma() {
        let mut c = ParametricCircuit::new(1);
        c.h(0);
        let plus = evaluate_circuit(&c, &[]).unwrap();
        let shots = 1_000_000;
        let counts = sample_measurements(&plus, shots, 42).unwrap();
        let sigma = (0.25 / shots as f64).sqrt();
        assert!((counts.frequency(1) - 0.5).abs() < 5.0 * sigma);
    }

    #[test]
    fn bell_state_only_correlated_outcomes() {
        let mut c = ParametricCircuit::new(2);
        c.h(0).cnot(0, 1);
        let bell = evaluate_circuit(&c, &[]).unwrap();
        let counts = sample_measurements(&bell, 1_000_000, 3).unwrap();
        assert_eq!(counts.get(0b00) + counts.get(0b11), 1_000_000);
    }

    #[test]
    fn same_seed_same_counts() {
        let mut c = ParametricCircuit::new(2);
        c.h(0).h(1);
        let s = evaluate_circuit(&c, &[]).unwrap();
        assert_eq!(sample_measurements(&s, 500, 9).unwrap(), sample_measurements(&s, 500, 9).unwrap());
        assert_ne!(sample_measurements(&s, 500, 9).unwrap(), sample_measurements(&s, 500, 10).unwrap());
    }

    #[test]
    fn bitstrings_are_little_endian() {
        let mut counts = ShotCounts::new(3);
        counts.add(0b001, 4);
        let text = serde_json::to_string(&counts).unwrap();
        assert!(text.contains(r#""001":4"#), "{text}");
        assert_eq!(ShotCounts::from_json_str(&text).unwrap(), counts);
        assert!(ShotCounts::from_json_str(r#"{"num_qubits":2,"counts":{"1":3}}"#).is_err());
    }

    #[test]
    fn z_mean_signs() {
        let mut counts = ShotCounts::new(2);
        counts.add(0b00, 3);
        counts.add(0b01, 1);
        assert_eq!(counts.z_mean(0b01), 0.5);
        assert_eq!(counts.z_mean(0b11), 0.5);
        assert_eq!(counts.z_mean(0b10), 1.0);
        assert_eq!(counts.z_mean(0), 1.0);
    }
}
