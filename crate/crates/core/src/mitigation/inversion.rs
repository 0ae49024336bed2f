//! Term-wise inversion of uncorrelated readout flips.
//!
//! Under independent flips the noisy single-qubit readout of `Z_q` has
//! expectation `E[~Z_q] = g(Z_q) Z_q + g(1_q) 1` with
//! `g(Z_q) = 1 - p_{q,0} - p_{q,1}` and `g(1_q) = p_{q,1} - p_{q,0}`, and the
//! expectation of a noisy Z-string factorizes over its qubits. Inverting
//! each factor gives
//!
//! `Z_A = prod_{q in A} (E[~Z_q] - g(1_q)) / g(Z_q)`,
//!
//! which expands into `2^|A|` noisy sub-strings of `A`. All of them are read
//! off the same shot record, so a k-local term costs `2^k` sample means.

use serde::{Deserialize, Serialize};

use super::noise::ReadoutNoiseModel;
use crate::error::{Error, Result};
use crate::pauli::{PauliString, PauliSum};
use crate::sampling::ShotCounts;

/// Diagonal single-qubit operator a gamma factor is defined for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DiagonalOp {
    Z,
    Identity,
}

/// `1 - p0 - p1` for Z, `p1 - p0` for the identity.
pub fn gamma(op: DiagonalOp, q: usize, model: &ReadoutNoiseModel) -> Result<f64> {
    let f = model.qubit(q)?;
    Ok(match op {
        DiagonalOp::Z => 1.0 - f.p0 - f.p1,
        DiagonalOp::Identity => f.p1 - f.p0,
    })
}

/// Below this magnitude `g(Z_q)` is treated as zero.
const SINGULAR_GAMMA: f64 = 1e-12;

fn z_support(zstring: &PauliString) -> Result<Vec<usize>> {
    if !zstring.is_diagonal() {
        return Err(Error::InvalidObservable(format!("{zstring} is not a Z-string")));
    }
    Ok(zstring.support())
}

/// Noisy-operator expansion of the exact Z-string on `zstring`'s support.
///
/// Always returns `2^|A|` terms, one per sub-string, including terms whose
/// coefficient vanishes (e.g. `g(1_q) = 0` for symmetric flips). The
/// expectation of the result on noisy counts is an unbiased estimator of
/// the exact `<Z_A>`.
pub fn correct_operator(zstring: &PauliString, model: &ReadoutNoiseModel) -> Result<PauliSum> {
    let support = z_support(zstring)?;
    let mut gz = Vec::with_capacity(support.len());
    let mut gi = Vec::with_capacity(support.len());
    for &q in &support {
        let g = gamma(DiagonalOp::Z, q, model)?;
        if g.abs() < SINGULAR_GAMMA {
            return Err(Error::SingularReadout { qubit: q, gamma: g });
        }
        gz.push(g);
        gi.push(gamma(DiagonalOp::Identity, q, model)?);
    }
    let norm: f64 = gz.iter().map(|g| 1.0 / g).product();
    Ok(expand(&support, |i, kept| if kept { 1.0 } else { -gi[i] }, norm))
}

/// Forward map: `E[~Z_A]` as a combination of exact sub-strings,
/// `prod_{q in A} (g(Z_q) Z_q + g(1_q) 1)`.
pub fn forward_operator(zstring: &PauliString, model: &ReadoutNoiseModel) -> Result<PauliSum> {
    let support = z_support(zstring)?;
    let mut gz = Vec::with_capacity(support.len());
    let mut gi = Vec::with_capacity(support.len());
    for &q in &support {
        gz.push(gamma(DiagonalOp::Z, q, model)?);
        gi.push(gamma(DiagonalOp::Identity, q, model)?);
    }
    Ok(expand(&support, |i, kept| if kept { gz[i] } else { gi[i] }, 1.0))
}

/// Expands a product over `support` of `(factor(i, true) Z_q + factor(i, false) 1)`
/// times `scale`, listing sub-strings from the full string down to identity.
fn expand(support: &[usize], factor: impl Fn(usize, bool) -> f64, scale: f64) -> PauliSum {
    let k = support.len();
    let full = (1usize << k) - 1;
    let mut terms = Vec::with_capacity(1 << k);
    for sub in (0..=full).rev() {
        let mut c = scale;
        let mut kept = Vec::new();
        for (i, &q) in support.iter().enumerate() {
            let keep = sub >> i & 1 == 1;
            c *= factor(i, keep);
            if keep {
                kept.push(q);
            }
        }
        terms.push((c, PauliString::z(&kept)));
    }
    PauliSum::from_terms(terms).expect("sub-strings are distinct")
}

/// Applies the forward map to every term of a diagonal operator.
pub fn forward_sum(op: &PauliSum, model: &ReadoutNoiseModel) -> Result<PauliSum> {
    let mut out = PauliSum::new();
    for t in op.terms() {
        for f in forward_operator(&t.string, model)?.terms() {
            out.add_term(t.coefficient * f.coefficient, f.string.clone());
        }
    }
    Ok(out)
}

/// A diagonal observable together with its readout-corrected replacement.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MitigatedOperator {
    pub original: PauliSum,
    /// Noisy-readout expectation of `corrected` equals the exact
    /// expectation of `original`.
    pub corrected: PauliSum,
}

impl MitigatedOperator {
    pub fn new(original: PauliSum, model: &ReadoutNoiseModel) -> Result<Self> {
        let mut corrected = PauliSum::new();
        for t in original.terms() {
            for c in correct_operator(&t.string, model)?.terms() {
                corrected.add_term(t.coefficient * c.coefficient, c.string.clone());
            }
        }
        Ok(Self { original, corrected })
    }

    /// Mitigated estimate from noisy counts.
    pub fn evaluate(&self, counts: &ShotCounts) -> Result<f64> {
        diagonal_mean(&self.corrected, counts)
    }

    /// Unmitigated estimate: the original operator read off noisy counts.
    pub fn evaluate_raw(&self, counts: &ShotCounts) -> Result<f64> {
        diagonal_mean(&self.original, counts)
    }
}

/// Sample mean of a diagonal Pauli sum over shot counts.
pub fn diagonal_mean(op: &PauliSum, counts: &ShotCounts) -> Result<f64> {
    let mut total = 0.0;
    for t in op.terms() {
        if !t.string.is_diagonal() {
            return Err(Error::InvalidObservable(format!("{} is not diagonal", t.string)));
        }
        if let Some(q) = t.string.max_qubit() {
            if q >= counts.num_qubits() {
                return Err(Error::QubitOutOfRange { qubit: q, num_qubits: counts.num_qubits() });
            }
        }
        if t.coefficient != 0.0 {
            total += t.coefficient * counts.z_mean(t.string.support_mask());
        }
    }
    Ok(total)
}

/// Exact expectation of a diagonal observable from noisy counts, by
/// correcting each term and evaluating all noisy sub-strings on the same
/// counts.
pub fn mitigated_expectation(
    noisy_counts: &ShotCounts,
    observable: &PauliSum,
    model: &ReadoutNoiseModel,
) -> Result<f64> {
    if !observable.is_diagonal() {
        return Err(Error::InvalidObservable("observable must contain only Z and identity factors".into()));
    }
    let width = observable.min_qubits();
    if width > noisy_counts.num_qubits() {
        return Err(Error::QubitOutOfRange { qubit: width - 1, num_qubits: noisy_counts.num_qubits() });
    }
    MitigatedOperator::new(observable.clone(), model)?.evaluate(noisy_counts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mitigation::noise::QubitFlip;

    fn model(flips: &[(f64, f64)]) -> ReadoutNoiseModel {
        ReadoutNoiseModel::new(flips.iter().map(|&(p0, p1)| QubitFlip { p0, p1 }).collect()).unwrap()
    }

    #[test]
    fn gamma_values() {
        let m = model(&[(0.0, 0.0), (0.05, 0.05), (0.02, 0.07)]);
        assert_eq!(gamma(DiagonalOp::Z, 0, &m).unwrap(), 1.0);
        assert!((gamma(DiagonalOp::Z, 1, &m).unwrap() - 0.9).abs() < 1e-15);
        assert!((gamma(DiagonalOp::Identity, 2, &m).unwrap() - 0.05).abs() < 1e-15);
        assert!(gamma(DiagonalOp::Z, 3, &m).is_err());
    }

    #[test]
    fn single_qubit_symmetric_inversion() {
        let p = 0.05;
        let m = model(&[(p, p)]);
        let c = correct_operator(&PauliString::z(&[0]), &m).unwrap();
        assert_eq!(c.len(), 2);
        assert!((c.coefficient(&PauliString::z(&[0])) - 1.0 / (1.0 - 2.0 * p)).abs() < 1e-15);
        assert_eq!(c.coefficient(&PauliString::identity()), 0.0);
    }

    #[test]
    fn two_qubit_inversion_coefficients() {
        let m = model(&[(0.03, 0.08), (0.06, 0.01)]);
        let (gz1, gz2) = (1.0 - 0.03 - 0.08, 1.0 - 0.06 - 0.01);
        let (gi1, gi2) = (0.08 - 0.03, 0.01 - 0.06);
        let d = gz2 * gz1;
        let c = correct_operator(&PauliString::z(&[0, 1]), &m).unwrap();
        assert_eq!(c.len(), 4);
        let expect = [
            (PauliString::z(&[0, 1]), 1.0 / d),
            // E(~Z_2) (x) 1_1: qubit 1 kept, qubit 0 replaced
            (PauliString::z(&[1]), -gi1 / d),
            (PauliString::z(&[0]), -gi2 / d),
            (PauliString::identity(), gi2 * gi1 / d),
        ];
        for (s, v) in expect {
            assert!((c.coefficient(&s) - v).abs() < 1e-14, "{s}: {} vs {v}", c.coefficient(&s));
        }
    }

    #[test]
    fn noiseless_model_returns_original() {
        let z = PauliString::z(&[0, 2]);
        let c = correct_operator(&z, &ReadoutNoiseModel::noiseless(3)).unwrap();
        assert_eq!(c.len(), 4);
        let c = c.prune_zeros();
        assert_eq!(c.len(), 1);
        assert_eq!(c.coefficient(&z), 1.0);
    }

    #[test]
    fn half_flip_is_singular() {
        let m = model(&[(0.5, 0.5)]);
        assert!(matches!(
            correct_operator(&PauliString::z(&[0]), &m),
            Err(Error::SingularReadout { qubit: 0, .. })
        ));
    }

    #[test]
    fn rejects_non_diagonal() {
        let m = model(&[(0.1, 0.1)]);
        assert!(correct_operator(&PauliString::x(&[0]), &m).is_err());
    }

    #[test]
    fn noiseless_counts_give_raw_mean() {
        let mut counts = ShotCounts::new(2);
        counts.add(0b00, 5);
        counts.add(0b01, 2);
        counts.add(0b11, 1);
        let obs = PauliSum::from_terms([(0.7, PauliString::z(&[0, 1])), (-0.2, PauliString::z(&[1]))]).unwrap();
        let mitigated = mitigated_expectation(&counts, &obs, &ReadoutNoiseModel::noiseless(2)).unwrap();
        let raw = diagonal_mean(&obs, &counts).unwrap();
        assert!((mitigated - raw).abs() < 1e-15);
    }

    #[test]
    fn support_outside_counts_is_an_error() {
        let counts = {
            let mut c = ShotCounts::new(1);
            c.add(0, 1);
            c
        };
        let obs = PauliSum::from_terms([(1.0, PauliString::z(&[1]))]).unwrap();
        assert!(mitigated_expectation(&counts, &obs, &ReadoutNoiseModel::noiseless(2)).is_err());
    }
}
