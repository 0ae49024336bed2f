//! Pauli strings and real-weighted sums of them.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::state::{QuantumState, C64};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Pauli {
    X,
    Y,
    Z,
}

impl Pauli {
    fn from_char(c: char) -> Option<Self> {
        match c {
            'X' | 'x' => Some(Pauli::X),
            'Y' | 'y' => Some(Pauli::Y),
            'Z' | 'z' => Some(Pauli::Z),
            _ => None,
        }
    }
}

/// Tensor product of single-qubit Paulis; qubits not listed carry identity.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PauliString(BTreeMap<usize, Pauli>);

impl PauliString {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn from_ops(ops: impl IntoIterator<Item = (usize, Pauli)>) -> Self {
        Self(ops.into_iter().collect())
    }

    pub fn uniform(pauli: Pauli, qubits: &[usize]) -> Self {
        Self::from_ops(qubits.iter().map(|&q| (q, pauli)))
    }

    pub fn z(qubits: &[usize]) -> Self {
        Self::uniform(Pauli::Z, qubits)
    }

    pub fn x(qubits: &[usize]) -> Self {
        Self::uniform(Pauli::X, qubits)
    }

    /// Parses whitespace-separated factors such as `"Z0 Z1"` or `"X3"`;
    /// the empty string (or `"I"`) is the identity.
    pub fn parse(s: &str) -> Result<Self> {
        let mut ops = BTreeMap::new();
        for tok in s.split_whitespace() {
            if tok == "I" {
                continue;
            }
            let mut chars = tok.chars();
            let p = chars
                .next()
                .and_then(Pauli::from_char)
                .ok_or_else(|| Error::InvalidObservable(format!("bad Pauli factor `{tok}`")))?;
            let q: usize = chars
                .as_str()
                .parse()
                .map_err(|_| Error::InvalidObservable(format!("bad qubit index in `{tok}`")))?;
            if ops.insert(q, p).is_some() {
                return Err(Error::InvalidObservable(format!("qubit {q} repeated in `{s}`")));
            }
        }
        Ok(Self(ops))
    }

    pub fn ops(&self) -> &BTreeMap<usize, Pauli> {
        &self.0
    }

    pub fn get(&self, q: usize) -> Option<Pauli> {
        self.0.get(&q).copied()
    }

    pub fn support(&self) -> Vec<usize> {
        self.0.keys().copied().collect()
    }

    pub fn weight(&self) -> usize {
        self.0.len()
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    /// Only Z factors (or identity).
    pub fn is_diagonal(&self) -> bool {
        self.0.values().all(|&p| p == Pauli::Z)
    }

    pub fn is_uniform(&self, pauli: Pauli) -> bool {
        self.0.values().all(|&p| p == pauli)
    }

    pub fn max_qubit(&self) -> Option<usize> {
        self.0.keys().next_back().copied()
    }

    /// Bit mask of the support.
    pub fn support_mask(&self) -> usize {
        self.0.keys().fold(0, |m, &q| m | (1 << q))
    }

    /// `P|psi>`, using `P|i> = i^{#Y} (-1)^{|i & zmask|} |i ^ xmask>`
    /// with X and Y in `xmask`, Z and Y in `zmask`.
    pub fn apply(&self, state: &QuantumState) -> QuantumState {
        let (mut xmask, mut zmask, mut ny) = (0usize, 0usize, 0u32);
        for (&q, &p) in &self.0 {
            match p {
                Pauli::X => xmask |= 1 << q,
                Pauli::Z => zmask |= 1 << q,
                Pauli::Y => {
                    xmask |= 1 << q;
                    zmask |= 1 << q;
                    ny += 1;
                }
            }
        }
        let phase = match ny % 4 {
            0 => C64::new(1.0, 0.0),
            1 => C64::new(0.0, 1.0),
            2 => C64::new(-1.0, 0.0),
            _ => C64::new(0.0, -1.0),
        };
        let src = state.amplitudes();
        let mut out = vec![C64::new(0.0, 0.0); src.len()];
        for (i, &a) in src.iter().enumerate() {
            let sign = if (i & zmask).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
            out[i ^ xmask] = a * phase * sign;
        }
        QuantumState::from_amplitudes(out).expect("same dimension")
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("I");
        }
        let mut first = true;
        for (q, p) in &self.0 {
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            write!(f, "{p:?}{q}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PauliTerm {
    pub coefficient: f64,
    #[serde(rename = "ops")]
    pub string: PauliString,
}

/// Real linear combination of distinct Pauli strings.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PauliSumJson", into = "PauliSumJson")]
pub struct PauliSum {
    terms: Vec<PauliTerm>,
}

impl PauliSum {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a sum from terms, rejecting duplicate strings and non-finite
    /// coefficients.
    pub fn from_terms(terms: impl IntoIterator<Item = (f64, PauliString)>) -> Result<Self> {
        let mut sum = PauliSum::new();
        for (c, s) in terms {
            if !c.is_finite() {
                return Err(Error::InvalidObservable(format!("non-finite coefficient for {s}")));
            }
            if sum.terms.iter().any(|t| t.string == s) {
                return Err(Error::InvalidObservable(format!("duplicate Pauli string {s}")));
            }
            sum.terms.push(PauliTerm { coefficient: c, string: s });
        }
        Ok(sum)
    }

    /// Adds `c * s`, merging with an existing term on the same string.
    pub fn add_term(&mut self, c: f64, s: PauliString) {
        match self.terms.iter_mut().find(|t| t.string == s) {
            Some(t) => t.coefficient += c,
            None => self.terms.push(PauliTerm { coefficient: c, string: s }),
        }
    }

    pub fn terms(&self) -> &[PauliTerm] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, s: &PauliString) -> f64 {
        self.terms.iter().find(|t| &t.string == s).map_or(0.0, |t| t.coefficient)
    }

    /// Drops terms whose coefficient is exactly zero.
    pub fn prune_zeros(mut self) -> Self {
        self.terms.retain(|t| t.coefficient != 0.0);
        self
    }

    /// Smallest qubit count that covers every term.
    pub fn min_qubits(&self) -> usize {
        self.terms.iter().filter_map(|t| t.string.max_qubit()).max().map_or(0, |q| q + 1)
    }

    pub fn is_diagonal(&self) -> bool {
        self.terms.iter().all(|t| t.string.is_diagonal())
    }

    /// Equality up to term order and zero coefficients, within `tol`.
    pub fn approx_eq(&self, other: &PauliSum, tol: f64) -> bool {
        let keys = self.terms.iter().chain(&other.terms).map(|t| &t.string);
        keys.into_iter().all(|s| (self.coefficient(s) - other.coefficient(s)).abs() <= tol)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        serde_json::from_str::<PauliSumJson>(s)?.try_into()
    }
}

#[derive(Serialize, Deserialize)]
struct PauliSumJson {
    terms: Vec<PauliTerm>,
}

impl TryFrom<PauliSumJson> for PauliSum {
    type Error = Error;

    fn try_from(raw: PauliSumJson) -> Result<Self> {
        PauliSum::from_terms(raw.terms.into_iter().map(|t| (t.coefficient, t.string)))
    }
}

impl From<PauliSum> for PauliSumJson {
    fn from(s: PauliSum) -> Self {
        PauliSumJson { terms: s.terms }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        let s = PauliString::parse("Z1 X0").unwrap();
        assert_eq!(s.to_string(), "X0 Z1");
        assert_eq!(PauliString::parse("").unwrap(), PauliString::identity());
        assert!(PauliString::parse("Z0 Z0").is_err());
        assert!(PauliString::parse("Q0").is_err());
    }

    #[test]
    fn y_action_matches_matrix() {
        // Y|0> = i|1>, Y|1> = -i|0>
        let y = PauliString::parse("Y0").unwrap();
        let out = y.apply(&QuantumState::zero(1));
        assert!((out.amplitudes()[1] - C64::new(0.0, 1.0)).norm() < 1e-15);
        let out = y.apply(&QuantumState::basis(1, 1));
        assert!((out.amplitudes()[0] - C64::new(0.0, -1.0)).norm() < 1e-15);
    }

    #[test]
    fn duplicates_rejected_but_add_term_merges() {
        let z = PauliString::z(&[0]);
        assert!(PauliSum::from_terms([(1.0, z.clone()), (2.0, z.clone())]).is_err());
        let mut s = PauliSum::new();
        s.add_term(1.0, z.clone());
        s.add_term(2.0, z.clone());
        assert_eq!(s.len(), 1);
        assert_eq!(s.coefficient(&z), 3.0);
    }

    #[test]
    fn json_round_trip() {
        let s = PauliSum::from_terms([(0.5, PauliString::parse("Z0 Z1").unwrap()), (-1.0, PauliString::x(&[2]))])
            .unwrap();
        let text = serde_json::to_string(&s).unwrap();
        assert!(text.contains(r#""ops":{"0":"Z","1":"Z"}"#), "{text}");
        assert_eq!(PauliSum::from_json_str(&text).unwrap(), s);
    }
}
