//! Tangent-space Gram matrices, exact and shot-sampled.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::Rng;
use rand_distr::{Binomial, Distribution};

use crate::circuit::ParametricCircuit;
use crate::error::{Error, Result};
use crate::rng;
use crate::simulate::{insertion_states, tangent_vectors};
use crate::state::QuantumState;

/// `S_jl = Re <d_j C | d_l C>` over an ordered subset of parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct GramMatrix {
    pub indices: Vec<usize>,
    pub entries: DMatrix<f64>,
}

impl GramMatrix {
    pub fn k(&self) -> usize {
        self.indices.len()
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        sorted_eigenvalues(&self.entries)
    }

    pub fn smallest_eigenvalue(&self) -> f64 {
        self.eigenvalues()[0]
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        (&self.entries - self.entries.transpose()).amax() <= tol
    }
}

pub(crate) fn sorted_eigenvalues(m: &DMatrix<f64>) -> Vec<f64> {
    if m.nrows() == 0 {
        return Vec::new();
    }
    let mut ev: Vec<f64> = SymmetricEigen::new(m.clone()).eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Exact Gram matrix from analytic tangent vectors.
pub fn gram_matrix(circuit: &ParametricCircuit, params: &[f64], subset: &[usize]) -> Result<GramMatrix> {
    if subset.is_empty() {
        return Err(Error::InvalidArgument("parameter subset is empty".into()));
    }
    for &j in subset {
        circuit.check_index(j)?;
    }
    let tangents = tangent_vectors(circuit, params)?;
    Ok(gram_from_tangents(&tangents, subset))
}

pub fn gram_from_tangents(tangents: &[QuantumState], subset: &[usize]) -> GramMatrix {
    let k = subset.len();
    let mut entries = DMatrix::zeros(k, k);
    for a in 0..k {
        for b in a..k {
            let v = tangents[subset[a]].inner(&tangents[subset[b]]).re;
            entries[(a, b)] = v;
            entries[(b, a)] = v;
        }
    }
    GramMatrix { indices: subset.to_vec(), entries }
}

/// Real partial Jacobian: real parts of the tangents stacked over their
/// imaginary parts, one column per parameter.
pub fn real_jacobian(tangents: &[QuantumState]) -> DMatrix<f64> {
    let dim = tangents.first().map_or(0, QuantumState::dim);
    DMatrix::from_fn(2 * dim, tangents.len(), |r, c| {
        let a = tangents[c].amplitudes()[r % dim];
        if r < dim {
            a.re
        } else {
            a.im
        }
    })
}

/// Outcome of one simulated Hadamard test: `successes` ancilla-0 readings
/// out of `shots`, for a pair of unit insertion states.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HadamardTest {
    pub successes: u64,
    pub shots: u64,
}

impl HadamardTest {
    /// Unbiased estimate of `Re <psi_a|psi_b>`.
    pub fn overlap(&self) -> f64 {
        2.0 * self.successes as f64 / self.shots as f64 - 1.0
    }
}

/// Shot record for one Gram entry. A parameter that appears in several
/// gates contributes one insertion state per occurrence, so an entry is a
/// sum of pairwise Hadamard tests, each scaled by 1/4.
#[derive(Clone, Debug, PartialEq)]
pub struct EntrySample {
    pub tests: Vec<HadamardTest>,
}

impl EntrySample {
    pub fn estimate(&self) -> f64 {
        self.tests.iter().map(|t| t.overlap() / 4.0).sum()
    }

    /// Plug-in standard error from the observed success rates.
    pub fn stderr(&self) -> f64 {
        self.tests
            .iter()
            .map(|t| {
                let p = t.successes as f64 / t.shots as f64;
                // Var(2k/s - 1)/16 = 4 p(1-p) / (16 s)
                p * (1.0 - p) / (4.0 * t.shots as f64)
            })
            .sum::<f64>()
            .sqrt()
    }

    /// Bootstrap replicate: each test's shots are redrawn with replacement,
    /// which is a binomial draw at the observed success rate.
    pub fn resample<R: Rng + ?Sized>(&self, rng: &mut R) -> EntrySample {
        let tests = self
            .tests
            .iter()
            .map(|t| {
                let p = t.successes as f64 / t.shots as f64;
                HadamardTest { successes: binomial(t.shots, p, rng), shots: t.shots }
            })
            .collect();
        EntrySample { tests }
    }
}

fn binomial<R: Rng + ?Sized>(n: u64, p: f64, rng: &mut R) -> u64 {
    Binomial::new(n, p.clamp(0.0, 1.0)).expect("valid binomial parameters").sample(rng)
}

/// Simulates the ancilla-based estimation of Gram entries. Insertion states
/// are computed once; each entry draw is a binomial with success
/// probability `(1 + Re <psi_a|psi_b>)/2`.
pub struct HadamardSampler {
    insertions: Vec<Vec<QuantumState>>,
}

impl HadamardSampler {
    /// Fails if a parameter is carried by a controlled rotation, whose
    /// generator `|1><1| (x) P/2` is not a multiple of a unitary.
    pub fn new(circuit: &ParametricCircuit, params: &[f64]) -> Result<Self> {
        circuit.check_params(params)?;
        for gate in circuit.gates() {
            if let (Some(j), true) = (gate.param_index(), gate.kind.is_controlled_rotation()) {
                return Err(Error::Unsupported(format!(
                    "parameter `{}` is carried by controlled rotation {}; \
                     shot-based Gram estimation needs plain Pauli rotations",
                    circuit.parameters()[j],
                    gate.kind
                )));
            }
        }
        let insertions = (0..circuit.num_params()).map(|j| insertion_states(circuit, params, j)).collect();
        Ok(Self { insertions })
    }

    pub fn num_params(&self) -> usize {
        self.insertions.len()
    }

    pub fn sample_entry<R: Rng + ?Sized>(&self, j: usize, l: usize, shots: u64, rng: &mut R) -> EntrySample {
        let mut tests = Vec::new();
        for a in &self.insertions[j] {
            for b in &self.insertions[l] {
                let p = (1.0 + a.inner(b).re) / 2.0;
                tests.push(HadamardTest { successes: binomial(shots, p, rng), shots });
            }
        }
        EntrySample { tests }
    }

    /// Exact value the sampled entry converges to.
    pub fn exact_entry(&self, j: usize, l: usize) -> f64 {
        let mut total = 0.0;
        for a in &self.insertions[j] {
            for b in &self.insertions[l] {
                total += a.inner(b).re / 4.0;
            }
        }
        total
    }

    /// All upper-triangle entries with shots drawn from per-entry streams of
    /// `seed`; returns the symmetric matrix of samples.
    pub fn sample_all(&self, shots: u64, seed: u64) -> SampledGram {
        let n = self.num_params();
        let mut samples = Vec::with_capacity(n * (n + 1) / 2);
        for j in 0..n {
            for l in j..n {
                let mut rng = rng::stream(seed, entry_stream(j, l));
                samples.push(((j, l), self.sample_entry(j, l, shots, &mut rng)));
            }
        }
        SampledGram { n, samples }
    }
}

/// Stream index for the entry `(j, l)`, symmetric in its arguments.
pub(crate) fn entry_stream(j: usize, l: usize) -> u64 {
    let (a, b) = if j <= l { (j, l) } else { (l, j) };
    ((a as u64) << 32) | b as u64
}

/// Upper-triangle shot records of a full Gram matrix.
#[derive(Clone, Debug)]
pub struct SampledGram {
    n: usize,
    samples: Vec<((usize, usize), EntrySample)>,
}

impl SampledGram {
    /// Symmetric matrix of entry estimates; each entry is estimated once and
    /// mirrored, so `(S + S^T)/2` equals the result.
    pub fn matrix(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.n, self.n);
        for ((j, l), s) in &self.samples {
            let v = s.estimate();
            m[(*j, *l)] = v;
            m[(*l, *j)] = v;
        }
        m
    }

    pub fn entry(&self, j: usize, l: usize) -> &EntrySample {
        let key = if j <= l { (j, l) } else { (l, j) };
        &self.samples.iter().find(|(k, _)| *k == key).expect("entry present").1
    }

    pub fn resample<R: Rng + ?Sized>(&self, rng: &mut R) -> SampledGram {
        let samples = self.samples.iter().map(|(k, s)| (*k, s.resample(rng))).collect();
        SampledGram { n: self.n, samples }
    }

    pub fn max_stderr(&self) -> f64 {
        self.samples.iter().map(|(_, s)| s.stderr()).fold(0.0, f64::max)
    }
}

/// Shot-based estimate of `S_jl`. Each unit-insertion pair is measured
/// with `shots` shots; a single-occurrence Pauli-rotation pair gives
/// `(2 k / shots - 1)/4` with standard error at most `1/(4 sqrt(shots))`.
pub fn estimate_gram_entry(
    circuit: &ParametricCircuit,
    params: &[f64],
    j: usize,
    l: usize,
    shots: u64,
    seed: u64,
) -> Result<f64> {
    circuit.check_index(j)?;
    circuit.check_index(l)?;
    if shots == 0 {
        return Err(Error::InvalidArgument("shots must be positive".into()));
    }
    let sampler = HadamardSampler::new(circuit, params)?;
    let mut rng = rng::stream(seed, entry_stream(j, l));
    Ok(sampler.sample_entry(j, l, shots, &mut rng).estimate())
}
