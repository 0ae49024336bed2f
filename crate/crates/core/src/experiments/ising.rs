use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::{PauliString, PauliSum};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    #[default]
    Periodic,
    Open,
}

/// `H = J sum_i Z_i Z_{i+1} + h sum_i X_i` on a chain of `sites` spins.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransverseIsingModel {
    pub sites: usize,
    pub j: f64,
    pub h: f64,
    #[serde(default)]
    pub boundary: Boundary,
}

impl TransverseIsingModel {
    pub fn new(sites: usize, j: f64, h: f64, boundary: Boundary) -> Result<Self> {
        let m = Self { sites, j, h, boundary };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        if self.sites < 2 {
            return Err(Error::InvalidArgument(format!("an Ising chain needs at least 2 sites, got {}", self.sites)));
        }
        if !self.j.is_finite() || !self.h.is_finite() {
            return Err(Error::InvalidArgument("couplings must be finite".into()));
        }
        Ok(())
    }

    /// Nearest-neighbour bonds. With two periodic sites the wrap bond
    /// coincides with the open one and is listed twice.
    pub fn bonds(&self) -> Vec<(usize, usize)> {
        let l = self.sites;
        let mut bonds: Vec<_> = (0..l - 1).map(|i| (i, i + 1)).collect();
        if self.boundary == Boundary::Periodic {
            bonds.push((l - 1, 0));
        }
        bonds
    }
}

/// Pauli expansion of the Ising Hamiltonian. Terms with a zero coupling are
/// kept so the term structure does not depend on the couplings; repeated
/// bonds (two periodic sites) are merged into one term.
pub fn build_ti_hamiltonian(model: &TransverseIsingModel) -> Result<PauliSum> {
    model.validate()?;
    let mut h = PauliSum::new();
    for (a, b) in model.bonds() {
        h.add_term(model.j, PauliString::z(&[a, b]));
    }
    for i in 0..model.sites {
        h.add_term(model.h, PauliString::x(&[i]));
    }
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn term_counts() {
        let periodic = build_ti_hamiltonian(&TransverseIsingModel::new(4, -1.0, 1.0, Boundary::Periodic).unwrap()).unwrap();
        assert_eq!(periodic.len(), 8);
        let open = build_ti_hamiltonian(&TransverseIsingModel::new(4, -1.0, 1.0, Boundary::Open).unwrap()).unwrap();
        assert_eq!(open.len(), 7);
        assert_eq!(open.coefficient(&PauliString::z(&[0, 3])), 0.0);
        assert_eq!(periodic.coefficient(&PauliString::z(&[0, 3])), -1.0);
    }

    #[test]
    fn two_site_chain() {
        let open = build_ti_hamiltonian(&TransverseIsingModel::new(2, -1.0, 0.0, Boundary::Open).unwrap()).unwrap();
        assert_eq!(open.coefficient(&PauliString::z(&[0, 1])), -1.0);
        let periodic =
            build_ti_hamiltonian(&TransverseIsingModel::new(2, -1.0, 0.5, Boundary::Periodic).unwrap()).unwrap();
        assert_eq!(periodic.len(), 3);
        assert_eq!(periodic.coefficient(&PauliString::z(&[0, 1])), -2.0);
    }

    #[test]
    fn single_site_rejected() {
        assert!(TransverseIsingModel::new(1, 1.0, 1.0, Boundary::Open).is_err());
    }
}
