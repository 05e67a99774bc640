use crate::angle::canonical;
use crate::error::CircuitError;
use crate::gate::GateKind;
use num_rational::Ratio;
use serde::Serialize;
use std::hash::{Hash, Hasher};

/// One gate application: the triple (gate, qubits, angles).
#[derive(Debug, Clone)]
pub struct Instruction {
    pub gate: GateKind,
    pub qubits: Vec<usize>,
    pub angles: Vec<f64>,
}

impl Instruction {
    pub fn new(gate: GateKind, qubits: Vec<usize>, angles: Vec<f64>) -> Result<Self, CircuitError> {
        if qubits.len() != gate.arity() {
            return Err(CircuitError::Arity {
                gate: gate.name(),
                expected: gate.arity(),
                got: qubits.len(),
            });
        }
        if angles.len() != gate.angle_arity() {
            return Err(CircuitError::AngleArity {
                gate: gate.name(),
                expected: gate.angle_arity(),
                got: angles.len(),
            });
        }
        for (i, q) in qubits.iter().enumerate() {
            if qubits[..i].contains(q) {
                return Err(CircuitError::RepeatedQubit { gate: gate.name(), qubit: *q });
            }
        }
        if let Some(a) = angles.iter().find(|a| !a.is_finite()) {
            return Err(CircuitError::NonFiniteAngle(*a));
        }
        let angles = angles.into_iter().map(canonical).collect();
        Ok(Instruction { gate, qubits, angles })
    }

    /// Shorthand for gates without angles; panics on arity mismatch.
    pub fn gate(gate: GateKind, qubits: &[usize]) -> Self {
        Instruction::new(gate, qubits.to_vec(), vec![]).expect("valid instruction")
    }

    /// Shorthand for rotations; panics on arity mismatch.
    pub fn rotation(gate: GateKind, qubits: &[usize], angles: &[f64]) -> Self {
        Instruction::new(gate, qubits.to_vec(), angles.to_vec()).expect("valid instruction")
    }

    pub fn alias(&self) -> u8 {
        self.gate.alias()
    }

    /// `(qubit, role)` pairs for every slot.
    pub fn roles(&self) -> impl Iterator<Item = (usize, u8)> + '_ {
        self.qubits.iter().enumerate().map(move |(slot, &q)| (q, self.gate.role(slot)))
    }

    /// Equality with angles compared within `tol` on the circle.
    pub fn approx_eq(&self, other: &Instruction, tol: f64) -> bool {
        self.gate == other.gate
            && self.qubits == other.qubits
            && self.angles.len() == other.angles.len()
            && self
                .angles
                .iter()
                .zip(&other.angles)
                .all(|(a, b)| crate::angle::angle_distance(*a, *b) <= tol)
    }
}

impl PartialEq for Instruction {
    fn eq(&self, other: &Self) -> bool {
        self.gate == other.gate
            && self.qubits == other.qubits
            && self.angles.len() == other.angles.len()
            && self.angles.iter().zip(&other.angles).all(|(a, b)| a.to_bits() == b.to_bits())
    }
}

impl Eq for Instruction {}

impl Hash for Instruction {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.gate.hash(state);
        self.qubits.hash(state);
        for a in &self.angles {
            a.to_bits().hash(state);
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Circuit {
    pub num_qubits: usize,
    pub instructions: Vec<Instruction>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CircuitMetrics {
    pub n: usize,
    pub total: usize,
    pub m1: usize,
    pub m2: usize,
    pub m3: usize,
    pub depth: usize,
    pub l: usize,
    pub d1: f64,
    pub d2: f64,
}

impl CircuitMetrics {
    /// `(d1, d2)` as exact fractions.
    pub fn densities_exact(&self) -> (Ratio<u64>, Ratio<u64>) {
        let denom = (self.n * self.l) as u64;
        if denom == 0 {
            return (Ratio::from_integer(0), Ratio::from_integer(0));
        }
        (
            Ratio::new(self.m1 as u64, denom),
            Ratio::new(2 * (self.m2 + self.m3) as u64, denom),
        )
    }
}

impl Circuit {
    pub fn new(num_qubits: usize) -> Self {
        Circuit { num_qubits, instructions: Vec::new() }
    }

    pub fn from_instructions(
        num_qubits: usize,
        instructions: Vec<Instruction>,
    ) -> Result<Self, CircuitError> {
        let mut c = Circuit::new(num_qubits);
        for ins in instructions {
            c.push(ins)?;
        }
        Ok(c)
    }

    pub fn push(&mut self, ins: Instruction) -> Result<(), CircuitError> {
        if let Some(&q) = ins.qubits.iter().find(|&&q| q >= self.num_qubits) {
            return Err(CircuitError::QubitOutOfRange { qubit: q, num_qubits: self.num_qubits });
        }
        self.instructions.push(ins);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.instructions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instructions.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Instruction> {
        self.instructions.iter()
    }

    /// The alias string Γ of the circuit.
    pub fn gate_sequence(&self) -> Vec<u8> {
        self.instructions.iter().map(|i| i.alias()).collect()
    }

    pub fn gate_sequence_string(&self) -> String {
        String::from_utf8(self.gate_sequence()).expect("aliases are ASCII")
    }

    /// ASAP layer count; identity gates do not occupy a layer.
    pub fn depth(&self) -> usize {
        let mut level = vec![0usize; self.num_qubits];
        let mut depth = 0;
        for ins in &self.instructions {
            if ins.gate.is_identity() {
                continue;
            }
            let l = 1 + ins.qubits.iter().map(|&q| level[q]).max().unwrap_or(0);
            for &q in &ins.qubits {
                level[q] = l;
            }
            depth = depth.max(l);
        }
        depth
    }

    /// Number of non-identity gates.
    pub fn gate_count(&self) -> usize {
        self.instructions.iter().filter(|i| !i.gate.is_identity()).count()
    }

    pub fn metrics(&self) -> CircuitMetrics {
        let (mut m1, mut m2, mut m3) = (0, 0, 0);
        for ins in self.instructions.iter().filter(|i| !i.gate.is_identity()) {
            match ins.gate.arity() {
                1 => m1 += 1,
                2 => m2 += 1,
                _ => m3 += 1,
            }
        }
        let depth = self.depth();
        let denom = (self.num_qubits * depth) as f64;
        let (d1, d2) = if depth == 0 {
            (0.0, 0.0)
        } else {
            (m1 as f64 / denom, 2.0 * (m2 + m3) as f64 / denom)
        };
        CircuitMetrics {
            n: self.num_qubits,
            total: m1 + m2 + m3,
            m1,
            m2,
            m3,
            depth,
            l: depth,
            d1,
            d2,
        }
    }

    pub fn remove_identities(&self) -> Circuit {
        Circuit {
            num_qubits: self.num_qubits,
            instructions: self
                .instructions
                .iter()
                .filter(|i| !i.gate.is_identity())
                .cloned()
                .collect(),
        }
    }

    /// Distinct gate kinds present, in registry order.
    pub fn gate_kinds(&self) -> Vec<GateKind> {
        let mut kinds: Vec<GateKind> = self.instructions.iter().map(|i| i.gate).collect();
        kinds.sort();
        kinds.dedup();
        kinds
    }

    pub fn approx_eq(&self, other: &Circuit, tol: f64) -> bool {
        self.num_qubits == other.num_qubits
            && self.len() == other.len()
            && self.iter().zip(other.iter()).all(|(a, b)| a.approx_eq(b, tol))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use GateKind::*;

    fn xcx7_rewritten() -> Circuit {
        Circuit::from_instructions(
            3,
            vec![Instruction::gate(Cx, &[0, 2]), Instruction::gate(X, &[0]), Instruction::gate(X, &[2])],
        )
        .unwrap()
    }

    #[test]
    fn depth_examples() {
        assert_eq!(xcx7_rewritten().depth(), 2);
        let c = Circuit::from_instructions(
            3,
            vec![Instruction::gate(X, &[2]), Instruction::gate(Cx, &[0, 2]), Instruction::gate(X, &[0])],
        )
        .unwrap();
        assert_eq!(c.depth(), 3);
        let mut one = Circuit::new(1);
        one.push(Instruction::gate(H, &[0])).unwrap();
        assert_eq!(one.depth(), 1);
    }

    #[test]
    fn identities_ignored() {
        let mut c = xcx7_rewritten();
        c.instructions.insert(1, Instruction::gate(I, &[0]));
        c.instructions.push(Instruction::gate(I, &[1]));
        assert_eq!(c.depth(), 2);
        assert_eq!(c.metrics().total, 3);
        let r = c.remove_identities();
        assert_eq!(r, xcx7_rewritten());
    }

    #[test]
    fn empty_metrics() {
        let m = Circuit::new(4).metrics();
        assert_eq!((m.total, m.depth, m.d1, m.d2), (0, 0, 0.0, 0.0));
    }

    #[test]
    fn rejects_bad_instructions() {
        assert!(Instruction::new(Cx, vec![1, 1], vec![]).is_err());
        assert!(Instruction::new(Rx, vec![0], vec![]).is_err());
        assert!(Instruction::new(Rx, vec![0], vec![f64::NAN]).is_err());
        assert!(Circuit::new(2).push(Instruction::gate(X, &[2])).is_err());
    }

    #[test]
    fn angles_canonicalized() {
        let i = Instruction::rotation(Rz, &[0], &[3.0 * std::f64::consts::PI]);
        assert!((i.angles[0] - std::f64::consts::PI).abs() < 1e-12);
    }
}
