//! Parametric circuits over a fixed gate set.
//!
//! A circuit is an ordered list of gates on `num_qubits` qubits together with
//! an ordered list of parameter names. The position of a name in that list is
//! the parameter index used by every other module. Parameters may be shared
//! between several gates.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GateKind {
    Rx,
    Ry,
    Rz,
    Crx,
    Cry,
    Crz,
    Cnot,
    H,
    X,
    Z,
}

impl GateKind {
    pub const ALL: [GateKind; 10] = [
        GateKind::Rx,
        GateKind::Ry,
        GateKind::Rz,
        GateKind::Crx,
        GateKind::Cry,
        GateKind::Crz,
        GateKind::Cnot,
        GateKind::H,
        GateKind::X,
        GateKind::Z,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GateKind::Rx => "rx",
            GateKind::Ry => "ry",
            GateKind::Rz => "rz",
            GateKind::Crx => "crx",
            GateKind::Cry => "cry",
            GateKind::Crz => "crz",
            GateKind::Cnot => "cnot",
            GateKind::H => "h",
            GateKind::X => "x",
            GateKind::Z => "z",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        GateKind::ALL
            .into_iter()
            .find(|k| k.name() == name)
            .ok_or_else(|| Error::UnknownGate(name.to_string()))
    }

    pub fn arity(self) -> usize {
        match self {
            GateKind::Crx | GateKind::Cry | GateKind::Crz | GateKind::Cnot => 2,
            _ => 1,
        }
    }

    /// Rotations carry an angle, fixed gates do not.
    pub fn is_rotation(self) -> bool {
        matches!(
            self,
            GateKind::Rx | GateKind::Ry | GateKind::Rz | GateKind::Crx | GateKind::Cry | GateKind::Crz
        )
    }

    pub fn is_controlled_rotation(self) -> bool {
        matches!(self, GateKind::Crx | GateKind::Cry | GateKind::Crz)
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Angle of a rotation gate: a circuit parameter or a constant.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Angle {
    Param(usize),
    Fixed(f64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Gate {
    pub kind: GateKind,
    /// For controlled gates `[control, target]`.
    pub qubits: Vec<usize>,
    pub angle: Option<Angle>,
}

impl Gate {
    pub fn param_index(&self) -> Option<usize> {
        match self.angle {
            Some(Angle::Param(j)) => Some(j),
            _ => None,
        }
    }

    /// Angle value at the given parameter point; 0 for fixed gates.
    pub fn angle_value(&self, params: &[f64]) -> f64 {
        match self.angle {
            Some(Angle::Param(j)) => params[j],
            Some(Angle::Fixed(v)) => v,
            None => 0.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CircuitJson", into = "CircuitJson")]
pub struct ParametricCircuit {
    num_qubits: usize,
    gates: Vec<Gate>,
    parameters: Vec<String>,
}

impl ParametricCircuit {
    pub fn new(num_qubits: usize) -> Self {
        assert!(num_qubits > 0, "a circuit needs at least one qubit");
        Self { num_qubits, gates: Vec::new(), parameters: Vec::new() }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn parameters(&self) -> &[String] {
        &self.parameters
    }

    pub fn num_params(&self) -> usize {
        self.parameters.len()
    }

    pub fn param_index(&self, name: &str) -> Option<usize> {
        self.parameters.iter().position(|p| p == name)
    }

    /// Returns the angle for parameter `name`, registering it at the end of
    /// the parameter order if it is new.
    pub fn param(&mut self, name: &str) -> Angle {
        let index = match self.param_index(name) {
            Some(i) => i,
            None => {
                self.parameters.push(name.to_string());
                self.parameters.len() - 1
            }
        };
        Angle::Param(index)
    }

    /// Appends a gate after checking arity, qubit range and angle presence.
    pub fn push(&mut self, gate: Gate) -> Result<()> {
        check_gate(&gate, self.num_qubits, self.parameters.len())?;
        self.gates.push(gate);
        Ok(())
    }

    fn push_unchecked(&mut self, kind: GateKind, qubits: Vec<usize>, angle: Option<Angle>) -> &mut Self {
        let gate = Gate { kind, qubits, angle };
        if let Err(e) = self.push(gate) {
            panic!("{e}");
        }
        self
    }

    // Builder helpers. They panic on out-of-range qubits; use `push` for
    // fallible construction.

    pub fn rx(&mut self, q: usize, angle: Angle) -> &mut Self {
        self.push_unchecked(GateKind::Rx, vec![q], Some(angle))
    }

    pub fn ry(&mut self, q: usize, angle: Angle) -> &mut Self {
        self.push_unchecked(GateKind::Ry, vec![q], Some(angle))
    }

    pub fn rz(&mut self, q: usize, angle: Angle) -> &mut Self {
        self.push_unchecked(GateKind::Rz, vec![q], Some(angle))
    }

    pub fn crx(&mut self, control: usize, target: usize, angle: Angle) -> &mut Self {
        self.push_unchecked(GateKind::Crx, vec![control, target], Some(angle))
    }

    pub fn cry(&mut self, control: usize, target: usize, angle: Angle) -> &mut Self {
        self.push_unchecked(GateKind::Cry, vec![control, target], Some(angle))
    }

    pub fn crz(&mut self, control: usize, target: usize, angle: Angle) -> &mut Self {
        self.push_unchecked(GateKind::Crz, vec![control, target], Some(angle))
    }

    pub fn cnot(&mut self, control: usize, target: usize) -> &mut Self {
        self.push_unchecked(GateKind::Cnot, vec![control, target], None)
    }

    pub fn h(&mut self, q: usize) -> &mut Self {
        self.push_unchecked(GateKind::H, vec![q], None)
    }

    pub fn x(&mut self, q: usize) -> &mut Self {
        self.push_unchecked(GateKind::X, vec![q], None)
    }

    pub fn z(&mut self, q: usize) -> &mut Self {
        self.push_unchecked(GateKind::Z, vec![q], None)
    }

    /// Gate positions at which parameter `j` occurs.
    pub fn occurrences(&self, j: usize) -> Vec<usize> {
        self.gates
            .iter()
            .enumerate()
            .filter(|(_, g)| g.param_index() == Some(j))
            .map(|(i, _)| i)
            .collect()
    }

    /// Full invariant check: gate well-formedness plus every parameter being
    /// used by at least one gate.
    pub fn validate(&self) -> Result<()> {
        for gate in &self.gates {
            check_gate(gate, self.num_qubits, self.parameters.len())?;
        }
        let mut used = vec![false; self.parameters.len()];
        for j in self.gates.iter().filter_map(Gate::param_index) {
            used[j] = true;
        }
        if let Some(j) = used.iter().position(|u| !u) {
            return Err(Error::InvalidCircuit(format!(
                "parameter `{}` does not appear in any gate",
                self.parameters[j]
            )));
        }
        let mut seen = HashMap::new();
        for (i, name) in self.parameters.iter().enumerate() {
            if let Some(prev) = seen.insert(name.as_str(), i) {
                return Err(Error::InvalidCircuit(format!(
                    "parameter `{name}` listed twice (positions {prev} and {i})"
                )));
            }
        }
        Ok(())
    }

    pub fn check_params(&self, params: &[f64]) -> Result<()> {
        if params.len() != self.parameters.len() {
            return Err(Error::DimensionMismatch { expected: self.parameters.len(), actual: params.len() });
        }
        Ok(())
    }

    pub fn check_index(&self, j: usize) -> Result<()> {
        if j >= self.parameters.len() {
            return Err(Error::InvalidParameter { index: j, count: self.parameters.len() });
        }
        Ok(())
    }

    /// `self` followed by `other`. Parameters of `other` with the same name
    /// are shared; new names are appended to the parameter order.
    pub fn concat(&self, other: &ParametricCircuit) -> Result<ParametricCircuit> {
        if other.num_qubits != self.num_qubits {
            return Err(Error::DimensionMismatch { expected: self.num_qubits, actual: other.num_qubits });
        }
        let mut out = self.clone();
        for gate in &other.gates {
            let angle = match gate.angle {
                Some(Angle::Param(j)) => Some(out.param(&other.parameters[j])),
                a => a,
            };
            out.push(Gate { kind: gate.kind, qubits: gate.qubits.clone(), angle })?;
        }
        Ok(out)
    }

    /// Rebuilds the circuit with each gate's angle replaced by `f(gate)`.
    /// Parameter names that end up unused are dropped; the remaining ones
    /// keep their relative order.
    pub(crate) fn map_angles(&self, mut f: impl FnMut(&Gate) -> Option<Angle>) -> ParametricCircuit {
        let mapped: Vec<Gate> = self
            .gates
            .iter()
            .map(|g| Gate { kind: g.kind, qubits: g.qubits.clone(), angle: f(g) })
            .collect();
        let mut used = vec![false; self.parameters.len()];
        for j in mapped.iter().filter_map(Gate::param_index) {
            used[j] = true;
        }
        let mut remap = vec![usize::MAX; self.parameters.len()];
        let mut parameters = Vec::new();
        for (j, name) in self.parameters.iter().enumerate() {
            if used[j] {
                remap[j] = parameters.len();
                parameters.push(name.clone());
            }
        }
        let gates = mapped
            .into_iter()
            .map(|mut g| {
                if let Some(Angle::Param(j)) = g.angle {
                    g.angle = Some(Angle::Param(remap[j]));
                }
                g
            })
            .collect();
        ParametricCircuit { num_qubits: self.num_qubits, gates, parameters }
    }

    /// Same gates with the parameter order replaced by `order`, which must be
    /// a permutation of the current names.
    pub fn reorder_parameters(&self, order: &[String]) -> Result<ParametricCircuit> {
        if order.len() != self.parameters.len() {
            return Err(Error::DimensionMismatch { expected: self.parameters.len(), actual: order.len() });
        }
        let mut remap = vec![usize::MAX; self.parameters.len()];
        for (new, name) in order.iter().enumerate() {
            let old = self.param_index(name).ok_or_else(|| Error::UnknownParameter(name.clone()))?;
            if remap[old] != usize::MAX {
                return Err(Error::InvalidArgument(format!("parameter `{name}` repeated in order")));
            }
            remap[old] = new;
        }
        let gates = self
            .gates
            .iter()
            .map(|g| Gate {
                kind: g.kind,
                qubits: g.qubits.clone(),
                angle: match g.angle {
                    Some(Angle::Param(j)) => Some(Angle::Param(remap[j])),
                    a => a,
                },
            })
            .collect();
        Ok(ParametricCircuit { num_qubits: self.num_qubits, gates, parameters: order.to_vec() })
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        serde_json::from_str::<CircuitJson>(s)?.try_into()
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("circuit serialization cannot fail")
    }
}

fn check_gate(gate: &Gate, num_qubits: usize, num_params: usize) -> Result<()> {
    if gate.qubits.len() != gate.kind.arity() {
        return Err(Error::InvalidCircuit(format!(
            "gate {} acts on {} qubits, got {}",
            gate.kind,
            gate.kind.arity(),
            gate.qubits.len()
        )));
    }
    for &q in &gate.qubits {
        if q >= num_qubits {
            return Err(Error::QubitOutOfRange { qubit: q, num_qubits });
        }
    }
    if gate.qubits.len() == 2 && gate.qubits[0] == gate.qubits[1] {
        return Err(Error::InvalidCircuit(format!("gate {} uses qubit {} twice", gate.kind, gate.qubits[0])));
    }
    match (gate.kind.is_rotation(), gate.angle) {
        (true, None) => {
            return Err(Error::InvalidCircuit(format!("rotation {} needs a parameter or value", gate.kind)))
        }
        (false, Some(_)) => {
            return Err(Error::InvalidCircuit(format!("fixed gate {} takes no angle", gate.kind)))
        }
        (_, Some(Angle::Param(j))) if j >= num_params => {
            return Err(Error::InvalidParameter { index: j, count: num_params })
        }
        (_, Some(Angle::Fixed(v))) if !v.is_finite() => {
            return Err(Error::InvalidCircuit(format!("non-finite angle on gate {}", gate.kind)))
        }
        _ => {}
    }
    Ok(())
}

// On-disk representation. Gates reference parameters by name.

#[derive(Clone, Debug, Serialize, Deserialize)]
struct CircuitJson {
    num_qubits: usize,
    gates: Vec<GateJson>,
    #[serde(default)]
    parameter_order: Option<Vec<String>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct GateJson {
    gate: String,
    qubits: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    param: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    value: Option<f64>,
}

impl TryFrom<CircuitJson> for ParametricCircuit {
    type Error = Error;

    fn try_from(raw: CircuitJson) -> Result<Self> {
        if raw.num_qubits == 0 {
            return Err(Error::InvalidCircuit("num_qubits must be positive".into()));
        }
        let explicit_order = raw.parameter_order.is_some();
        let mut circuit = ParametricCircuit {
            num_qubits: raw.num_qubits,
            gates: Vec::new(),
            parameters: raw.parameter_order.unwrap_or_default(),
        };
        for g in raw.gates {
            let kind = GateKind::from_name(&g.gate)?;
            let angle = match (g.param, g.value) {
                (Some(_), Some(_)) => {
                    return Err(Error::InvalidCircuit(format!("gate {kind} has both `param` and `value`")))
                }
                (Some(name), None) => match circuit.param_index(&name) {
                    Some(j) => Some(Angle::Param(j)),
                    None if explicit_order => return Err(Error::UnknownParameter(name)),
                    None => Some(circuit.param(&name)),
                },
                (None, Some(v)) => Some(Angle::Fixed(v)),
                (None, None) => None,
            };
            circuit.push(Gate { kind, qubits: g.qubits, angle })?;
        }
        circuit.validate()?;
        Ok(circuit)
    }
}

impl From<ParametricCircuit> for CircuitJson {
    fn from(c: ParametricCircuit) -> Self {
        let gates = c
            .gates
            .iter()
            .map(|g| GateJson {
                gate: g.kind.name().to_string(),
                qubits: g.qubits.clone(),
                param: g.param_index().map(|j| c.parameters[j].clone()),
                value: match g.angle {
                    Some(Angle::Fixed(v)) => Some(v),
                    _ => None,
                },
            })
            .collect();
        CircuitJson { num_qubits: c.num_qubits, gates, parameter_order: Some(c.parameters) }
    }
}
