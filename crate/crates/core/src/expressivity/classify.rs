//! Iterative independent/redundant classification of circuit parameters.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::gram::{gram_from_tangents, sorted_eigenvalues, EntrySample, HadamardSampler};
use super::StateSpaceDim;
use crate::circuit::{Angle, ParametricCircuit};
use crate::error::{Error, Result};
use crate::rng;
use crate::simulate::tangent_vectors;

/// How Gram entries are obtained.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "mode")]
pub enum Mode {
    Exact,
    /// Simulated Hadamard tests with `shots` per entry.
    Sampled { shots: u64, seed: u64 },
}

impl Mode {
    /// 1e-8 for exact Gram matrices; five standard errors `5/(4 sqrt(shots))`
    /// for sampled ones.
    pub fn default_epsilon(&self) -> f64 {
        match *self {
            Mode::Exact => 1e-8,
            Mode::Sampled { shots, .. } => 5.0 / (4.0 * (shots as f64).sqrt()),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClassifyOptions {
    pub epsilon: f64,
    pub mode: Mode,
    /// Defaults to `dim_with_phase` of the circuit's qubit count.
    pub dim_target: Option<usize>,
    /// Stop testing once the independent count reaches the target; the
    /// remaining parameters are then reported redundant without an
    /// eigenvalue.
    pub early_stop: bool,
}

impl ClassifyOptions {
    pub fn new(mode: Mode) -> Self {
        Self { epsilon: mode.default_epsilon(), mode, dim_target: None, early_stop: false }
    }

    pub fn exact() -> Self {
        Self::new(Mode::Exact)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub param: String,
    pub independent: bool,
    /// Smallest eigenvalue of the Gram matrix over the accepted independents
    /// plus this candidate.
    pub min_eigenvalue: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpressivityReport {
    pub point: Vec<f64>,
    pub epsilon: f64,
    pub verdicts: Vec<Verdict>,
    pub independent_count: usize,
    pub dim_target: usize,
    pub maximally_expressive: bool,
    /// Seconds since the Unix epoch; omitted when reproducible output is
    /// requested.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<u64>,
}

impl ExpressivityReport {
    pub fn independent(&self) -> impl Iterator<Item = &Verdict> {
        self.verdicts.iter().filter(|v| v.independent)
    }

    pub fn redundant(&self) -> impl Iterator<Item = &Verdict> {
        self.verdicts.iter().filter(|v| !v.independent)
    }

    pub fn redundant_count(&self) -> usize {
        self.verdicts.len() - self.independent_count
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

/// Classifies every parameter at the point `params`.
///
/// Parameters are visited in circuit order. Each candidate is appended to
/// the set of accepted independents and the Gram matrix of that set is
/// formed; the candidate is redundant iff the smallest eigenvalue falls below
/// `epsilon`, in which case it is left out of every later matrix.
pub fn classify_parameters(
    circuit: &ParametricCircuit,
    params: &[f64],
    epsilon: f64,
    mode: Mode,
) -> Result<ExpressivityReport> {
    classify_with(circuit, params, &ClassifyOptions { epsilon, ..ClassifyOptions::new(mode) })
}

pub fn classify_with(
    circuit: &ParametricCircuit,
    params: &[f64],
    options: &ClassifyOptions,
) -> Result<ExpressivityReport> {
    circuit.check_params(params)?;
    if !(options.epsilon > 0.0) {
        return Err(Error::InvalidArgument(format!("epsilon must be positive, got {}", options.epsilon)));
    }
    let dim_target = options.dim_target.unwrap_or_else(|| StateSpaceDim::new(circuit.num_qubits()).with_phase);
    let mut source = EntrySource::new(circuit, params, options.mode)?;

    let mut accepted: Vec<usize> = Vec::new();
    let mut verdicts = Vec::with_capacity(circuit.num_params());
    for (j, name) in circuit.parameters().iter().enumerate() {
        if options.early_stop && accepted.len() >= dim_target {
            verdicts.push(Verdict { param: name.clone(), independent: false, min_eigenvalue: None });
            continue;
        }
        let mut subset = accepted.clone();
        subset.push(j);
        let s = source.matrix(&subset);
        let smallest = sorted_eigenvalues(&s)[0];
        let independent = smallest >= options.epsilon;
        if independent {
            accepted.push(j);
        }
        verdicts.push(Verdict { param: name.clone(), independent, min_eigenvalue: Some(smallest) });
    }
    let independent_count = accepted.len();
    Ok(ExpressivityReport {
        point: params.to_vec(),
        epsilon: options.epsilon,
        verdicts,
        independent_count,
        dim_target,
        maximally_expressive: independent_count == dim_target,
        timestamp: None,
    })
}

/// Gram entries on demand: exact inner products, or cached shot samples
/// drawn from per-entry streams.
enum EntrySource {
    Exact(DMatrix<f64>),
    Sampled { sampler: HadamardSampler, shots: u64, seed: u64, cache: BTreeMap<(usize, usize), f64> },
}

impl EntrySource {
    fn new(circuit: &ParametricCircuit, params: &[f64], mode: Mode) -> Result<Self> {
        Ok(match mode {
            Mode::Exact => {
                let tangents = tangent_vectors(circuit, params)?;
                let all: Vec<usize> = (0..circuit.num_params()).collect();
                EntrySource::Exact(gram_from_tangents(&tangents, &all).entries)
            }
            Mode::Sampled { shots, seed } => {
                if shots == 0 {
                    return Err(Error::InvalidArgument("shots must be positive".into()));
                }
                EntrySource::Sampled { sampler: HadamardSampler::new(circuit, params)?, shots, seed, cache: BTreeMap::new() }
            }
        })
    }

    fn entry(&mut self, j: usize, l: usize) -> f64 {
        match self {
            EntrySource::Exact(full) => full[(j, l)],
            EntrySource::Sampled { sampler, shots, seed, cache } => {
                let key = (j.min(l), j.max(l));
                *cache.entry(key).or_insert_with(|| {
                    let mut rng = rng::stream(*seed, super::gram::entry_stream(key.0, key.1));
                    let sample: EntrySample = sampler.sample_entry(key.0, key.1, *shots, &mut rng);
                    sample.estimate()
                })
            }
        }
    }

    fn matrix(&mut self, subset: &[usize]) -> DMatrix<f64> {
        let k = subset.len();
        let mut m = DMatrix::zeros(k, k);
        for a in 0..k {
            for b in a..k {
                let v = self.entry(subset[a], subset[b]);
                m[(a, b)] = v;
                m[(b, a)] = v;
            }
        }
        m
    }
}

/// Freezes every redundant parameter of `report` to a constant angle
/// (`freeze_values[name]`, default 0). The returned circuit's parameters are
/// the independent ones in their original order.
pub fn remove_redundant(
    circuit: &ParametricCircuit,
    report: &ExpressivityReport,
    freeze_values: &BTreeMap<String, f64>,
) -> Result<ParametricCircuit> {
    if report.verdicts.len() != circuit.num_params()
        || report.verdicts.iter().zip(circuit.parameters()).any(|(v, p)| &v.param != p)
    {
        return Err(Error::InvalidArgument("report does not match the circuit's parameters".into()));
    }
    for name in freeze_values.keys() {
        match report.verdicts.iter().find(|v| &v.param == name) {
            None => return Err(Error::UnknownParameter(name.clone())),
            Some(v) if v.independent => {
                return Err(Error::InvalidArgument(format!(
                    "freeze value given for independent parameter `{name}`"
                )))
            }
            _ => {}
        }
    }
    let redundant: Vec<bool> = report.verdicts.iter().map(|v| !v.independent).collect();
    Ok(circuit.map_angles(|g| match g.angle {
        Some(Angle::Param(j)) if redundant[j] => {
            let name = &circuit.parameters()[j];
            Some(Angle::Fixed(freeze_values.get(name).copied().unwrap_or(0.0)))
        }
        a => a,
    }))
}

/// Independent-parameter values of `params` in the order of the reduced
/// circuit produced by [`remove_redundant`].
pub fn independent_point(report: &ExpressivityReport, params: &[f64]) -> Vec<f64> {
    report.verdicts.iter().zip(params).filter(|(v, _)| v.independent).map(|(_, &p)| p).collect()
}
