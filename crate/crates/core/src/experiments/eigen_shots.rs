//! Gram-matrix eigenvalues estimated from simulated Hadamard tests.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use super::mean_std;
use crate::circuit::ParametricCircuit;
use crate::error::{Error, Result};
use crate::expressivity::HadamardSampler;
use crate::rng;

pub const BOOTSTRAP_RESAMPLES: usize = 200;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenShotRow {
    pub shots: u64,
    pub eig_smallest: f64,
    pub eig_smallest_stderr: f64,
    pub eig_second: f64,
    pub eig_second_stderr: f64,
    /// Largest binomial standard error among the sampled entries.
    pub entry_stderr: f64,
}

fn two_smallest(m: DMatrix<f64>) -> (f64, f64) {
    let sym = (&m + m.transpose()) * 0.5;
    let mut ev: Vec<f64> = SymmetricEigen::new(sym).eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    (ev[0], ev[1])
}

/// For every budget in `shots_list`, samples each Gram entry with that many
/// shots per Hadamard test and reports the two smallest eigenvalues with
/// bootstrap standard errors from `BOOTSTRAP_RESAMPLES` entry-level
/// replicates.
pub fn eigenvalue_shot_experiment(
    circuit: &ParametricCircuit,
    params: &[f64],
    shots_list: &[u64],
    seed: u64,
) -> Result<Vec<EigenShotRow>> {
    eigenvalue_shot_experiment_with(circuit, params, shots_list, BOOTSTRAP_RESAMPLES, seed)
}

pub fn eigenvalue_shot_experiment_with(
    circuit: &ParametricCircuit,
    params: &[f64],
    shots_list: &[u64],
    resamples: usize,
    seed: u64,
) -> Result<Vec<EigenShotRow>> {
    if circuit.num_params() < 2 {
        return Err(Error::InvalidArgument("two smallest eigenvalues need at least two parameters".into()));
    }
    if shots_list.contains(&0) {
        return Err(Error::InvalidArgument("shots must be positive".into()));
    }
    let sampler = HadamardSampler::new(circuit, params)?;
    shots_list
        .iter()
        .enumerate()
        .map(|(k, &shots)| {
            let run = rng::sub_seed(seed, k as u64);
            let sampled = sampler.sample_all(shots, rng::sub_seed(run, 0));
            let (eig_smallest, eig_second) = two_smallest(sampled.matrix());
            let mut rng = rng::stream(rng::sub_seed(run, 1), 0);
            let (mut low, mut second) = (Vec::with_capacity(resamples), Vec::with_capacity(resamples));
            for _ in 0..resamples {
                let (a, b) = two_smallest(sampled.resample(&mut rng).matrix());
                low.push(a);
                second.push(b);
            }
            Ok(EigenShotRow {
                shots,
                eig_smallest,
                eig_smallest_stderr: mean_std(&low).1,
                eig_second,
                eig_second_stderr: mean_std(&second).1,
                entry_stderr: sampled.max_stderr(),
            })
        })
        .collect()
}

/// Exact counterpart of one row: the two smallest eigenvalues of the
/// infinite-shot Gram matrix.
pub fn exact_two_smallest(circuit: &ParametricCircuit, params: &[f64]) -> Result<(f64, f64)> {
    let sampler = HadamardSampler::new(circuit, params)?;
    let n = sampler.num_params();
    if n < 2 {
        return Err(Error::InvalidArgument("two smallest eigenvalues need at least two parameters".into()));
    }
    Ok(two_smallest(DMatrix::from_fn(n, n, |j, l| sampler.exact_entry(j, l))))
}
