use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sampling::ShotCounts;

/// Bit-flip probabilities of one qubit's readout.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QubitFlip {
    /// Probability of reading a prepared 0 as 1.
    pub p0: f64,
    /// Probability of reading a prepared 1 as 0.
    pub p1: f64,
}

impl QubitFlip {
    pub const NONE: QubitFlip = QubitFlip { p0: 0.0, p1: 0.0 };

    pub fn symmetric(p: f64) -> Self {
        Self { p0: p, p1: p }
    }
}

/// Independent per-qubit readout flips, indexed by qubit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "NoiseModelJson", into = "NoiseModelJson")]
pub struct ReadoutNoiseModel {
    qubits: Vec<QubitFlip>,
}

impl ReadoutNoiseModel {
    pub fn new(qubits: Vec<QubitFlip>) -> Result<Self> {
        for (q, f) in qubits.iter().enumerate() {
            for (name, p) in [("p0", f.p0), ("p1", f.p1)] {
                if !(0.0..=1.0).contains(&p) {
                    return Err(Error::InvalidNoiseModel(format!("qubit {q}: {name} = {p} outside [0, 1]")));
                }
            }
        }
        Ok(Self { qubits })
    }

    pub fn noiseless(num_qubits: usize) -> Self {
        Self { qubits: vec![QubitFlip::NONE; num_qubits] }
    }

    pub fn uniform(num_qubits: usize, flip: QubitFlip) -> Result<Self> {
        Self::new(vec![flip; num_qubits])
    }

    pub fn num_qubits(&self) -> usize {
        self.qubits.len()
    }

    pub fn qubit(&self, q: usize) -> Result<QubitFlip> {
        self.qubits
            .get(q)
            .copied()
            .ok_or_else(|| Error::InvalidNoiseModel(format!("no flip probabilities for qubit {q}")))
    }

    pub fn flips(&self) -> &[QubitFlip] {
        &self.qubits
    }

    /// Exact noisy outcome distribution from the noiseless one.
    pub fn noisy_distribution(&self, probabilities: &[f64]) -> Result<Vec<f64>> {
        let n = probabilities.len().trailing_zeros() as usize;
        if self.num_qubits() < n {
            return Err(Error::InvalidNoiseModel(format!("model covers {} of {n} qubits", self.num_qubits())));
        }
        let mut p = probabilities.to_vec();
        for (q, f) in self.qubits.iter().take(n).enumerate() {
            let bit = 1usize << q;
            for i in 0..p.len() {
                if i & bit == 0 {
                    let (a0, a1) = (p[i], p[i | bit]);
                    p[i] = (1.0 - f.p0) * a0 + f.p1 * a1;
                    p[i | bit] = f.p0 * a0 + (1.0 - f.p1) * a1;
                }
            }
        }
        Ok(p)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        serde_json::from_str::<NoiseModelJson>(s)?.try_into()
    }
}

#[derive(Serialize, Deserialize)]
struct NoiseModelJson {
    qubits: Vec<QubitEntry>,
}

#[derive(Serialize, Deserialize)]
struct QubitEntry {
    q: usize,
    p0: f64,
    p1: f64,
}

impl TryFrom<NoiseModelJson> for ReadoutNoiseModel {
    type Error = Error;

    fn try_from(raw: NoiseModelJson) -> Result<Self> {
        let n = raw.qubits.len();
        let mut flips = vec![None; n];
        for e in raw.qubits {
            match flips.get_mut(e.q) {
                Some(slot @ None) => *slot = Some(QubitFlip { p0: e.p0, p1: e.p1 }),
                Some(Some(_)) => return Err(Error::InvalidNoiseModel(format!("qubit {} listed twice", e.q))),
                None => {
                    return Err(Error::InvalidNoiseModel(format!(
                        "qubit indices must be 0..{n}, found {}",
                        e.q
                    )))
                }
            }
        }
        ReadoutNoiseModel::new(flips.into_iter().map(|f| f.expect("all slots filled")).collect())
    }
}

impl From<ReadoutNoiseModel> for NoiseModelJson {
    fn from(m: ReadoutNoiseModel) -> Self {
        let qubits = m.qubits.iter().enumerate().map(|(q, f)| QubitEntry { q, p0: f.p0, p1: f.p1 }).collect();
        NoiseModelJson { qubits }
    }
}

/// Flips every bit of every shot independently: 0 -> 1 with probability
/// `p0` and 1 -> 0 with probability `p1` of that qubit.
pub fn apply_readout_noise(counts: &ShotCounts, model: &ReadoutNoiseModel, seed: u64) -> Result<ShotCounts> {
    let mut rng = crate::rng::stream(seed, 0);
    apply_readout_noise_with(counts, model, &mut rng)
}

pub fn apply_readout_noise_with<R: Rng + ?Sized>(
    counts: &ShotCounts,
    model: &ReadoutNoiseModel,
    rng: &mut R,
) -> Result<ShotCounts> {
    let n = counts.num_qubits();
    if model.num_qubits() < n {
        return Err(Error::InvalidNoiseModel(format!("model covers {} of {n} qubits", model.num_qubits())));
    }
    let flips = &model.flips()[..n];
    let mut noisy = ShotCounts::new(n);
    for (outcome, count) in counts.iter() {
        for _ in 0..count {
            noisy.add(flip_bits(outcome, flips, rng), 1);
        }
    }
    Ok(noisy)
}

#[inline]
pub(crate) fn flip_bits<R: Rng + ?Sized>(outcome: usize, flips: &[QubitFlip], rng: &mut R) -> usize {
    let mut out = outcome;
    for (q, f) in flips.iter().enumerate() {
        let p = if outcome >> q & 1 == 0 { f.p0 } else { f.p1 };
        if p > 0.0 && rng.random::<f64>() < p {
            out ^= 1 << q;
        }
    }
    out
}
