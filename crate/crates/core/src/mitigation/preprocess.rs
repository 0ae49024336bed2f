//! Splitting a Hamiltonian into measurement settings and correcting each.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::inversion::MitigatedOperator;
use super::noise::ReadoutNoiseModel;
use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliString, PauliSum};
use crate::state::{QuantumState, HADAMARD};

/// Basis a circuit is measured in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasurementSetting {
    /// Plain Z-basis readout.
    Computational,
    /// A Hadamard on every qubit before readout, so X-strings read as Z-strings.
    Hadamard,
}

impl MeasurementSetting {
    /// Rotates `state` so that a computational-basis measurement realises
    /// this setting.
    pub fn rotate(self, state: &QuantumState) -> QuantumState {
        let mut out = state.clone();
        if self == MeasurementSetting::Hadamard {
            for q in 0..out.num_qubits() {
                out.apply_single(q, &HADAMARD);
            }
        }
        out
    }
}

/// Splits `h` into a Z part and an X part rewritten as Z-strings.
///
/// The identity term goes to the computational setting. Terms mixing X and
/// Z, or containing Y, are unsupported.
pub fn split_settings(h: &PauliSum) -> Result<BTreeMap<MeasurementSetting, PauliSum>> {
    let mut out: BTreeMap<MeasurementSetting, PauliSum> = BTreeMap::new();
    for t in h.terms() {
        let (setting, diagonal) = if t.string.is_diagonal() {
            (MeasurementSetting::Computational, t.string.clone())
        } else if t.string.is_uniform(Pauli::X) {
            (MeasurementSetting::Hadamard, PauliString::z(&t.string.support()))
        } else {
            return Err(Error::Unsupported(format!(
                "term {} is neither a pure Z- nor a pure X-string",
                t.string
            )));
        };
        out.entry(setting).or_default().add_term(t.coefficient, diagonal);
    }
    Ok(out)
}

/// Readout-corrected diagonal operator for every measurement setting of `h`.
pub fn preprocess_hamiltonian(
    h: &PauliSum,
    model: &ReadoutNoiseModel,
) -> Result<BTreeMap<MeasurementSetting, MitigatedOperator>> {
    split_settings(h)?
        .into_iter()
        .map(|(setting, op)| Ok((setting, MitigatedOperator::new(op, model)?)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mitigation::noise::QubitFlip;
    use crate::simulate::expectation;

    #[test]
    fn zz_is_one_setting() {
        let h = PauliSum::from_terms([(1.0, PauliString::z(&[0, 1]))]).unwrap();
        let m = ReadoutNoiseModel::uniform(2, QubitFlip { p0: 0.03, p1: 0.08 }).unwrap();
        let pre = preprocess_hamiltonian(&h, &m).unwrap();
        assert_eq!(pre.len(), 1);
        assert_eq!(pre[&MeasurementSetting::Computational].corrected.len(), 4);
    }

    #[test]
    fn x_goes_to_rotated_setting() {
        let h = PauliSum::from_terms([(1.0, PauliString::x(&[0]))]).unwrap();
        let m = ReadoutNoiseModel::uniform(1, QubitFlip::symmetric(0.1)).unwrap();
        let pre = preprocess_hamiltonian(&h, &m).unwrap();
        let op = &pre[&MeasurementSetting::Hadamard];
        assert_eq!(op.original.coefficient(&PauliString::z(&[0])), 1.0);
        assert!((op.corrected.coefficient(&PauliString::z(&[0])) - 1.0 / 0.8).abs() < 1e-15);
    }

    #[test]
    fn rejects_y_and_mixed_terms() {
        let m = ReadoutNoiseModel::noiseless(2);
        let y = PauliSum::from_terms([(1.0, PauliString::parse("Y0").unwrap())]).unwrap();
        assert!(matches!(preprocess_hamiltonian(&y, &m), Err(Error::Unsupported(_))));
        let mixed = PauliSum::from_terms([(1.0, PauliString::parse("X0 Z1").unwrap())]).unwrap();
        assert!(preprocess_hamiltonian(&mixed, &m).is_err());
    }

    #[test]
    fn rotation_maps_x_to_z() {
        let mut plus = QuantumState::zero(2);
        plus.apply_single(0, &HADAMARD);
        let rotated = MeasurementSetting::Hadamard.rotate(&plus);
        let x0 = PauliSum::from_terms([(1.0, PauliString::x(&[0]))]).unwrap();
        let z0 = PauliSum::from_terms([(1.0, PauliString::z(&[0]))]).unwrap();
        let ex = expectation(&plus, &x0).unwrap();
        let ez = expectation(&rotated, &z0).unwrap();
        assert!((ex - 1.0).abs() < 1e-14 && (ez - 1.0).abs() < 1e-14);
    }
}
