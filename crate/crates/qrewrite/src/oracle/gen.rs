//! Random circuits parameterized by the gate density vector `(d1, d2)`.
//!
//! The circuit is built from `layers` layers of qubit-disjoint gates. Gate
//! totals are `round(d1·n·layers)` one-qubit gates and
//! `round(d2·n·layers / 2)` two-qubit gates, spread evenly over the layers.
//! Each nonempty layer reuses a qubit of the previous nonempty layer, so the
//! ASAP depth equals the number of nonempty layers.

use crate::circuit::{Circuit, Instruction};
use crate::error::OracleError;
use crate::gate::GateKind;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

#[derive(Debug, Clone, PartialEq)]
pub struct GenConfig {
    pub one_qubit: Vec<GateKind>,
    pub two_qubit: Vec<GateKind>,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig { one_qubit: vec![GateKind::X], two_qubit: vec![GateKind::Cx] }
    }
}

fn spread(total: usize, layers: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut counts = vec![total / layers; layers];
    let mut order: Vec<usize> = (0..layers).collect();
    order.shuffle(rng);
    for &l in order.iter().take(total % layers) {
        counts[l] += 1;
    }
    counts
}

fn instance(kind: GateKind, qubits: &[usize], rng: &mut ChaCha8Rng) -> Instruction {
    let angles: Vec<f64> = (0..kind.angle_arity()).map(|_| rng.gen_range(-PI..PI)).collect();
    Instruction::new(kind, qubits.to_vec(), angles).expect("generator builds valid gates")
}

pub fn gen_circuit(
    n: usize,
    layers: usize,
    d1: f64,
    d2: f64,
    seed: u64,
    cfg: &GenConfig,
) -> Result<Circuit, OracleError> {
    if !(d1.is_finite() && d2.is_finite()) || d1 < 0.0 || d2 < 0.0 || d1 + d2 > 1.0 + 1e-9 {
        return Err(OracleError::Argument(format!("infeasible densities d1={d1}, d2={d2}")));
    }
    if cfg.one_qubit.iter().any(|g| g.arity() != 1) || cfg.two_qubit.iter().any(|g| g.arity() != 2) {
        return Err(OracleError::Argument("alphabet gate has the wrong arity".into()));
    }
    let mut c = Circuit::new(n);
    if layers == 0 || n == 0 || (d1 == 0.0 && d2 == 0.0) {
        return Ok(c);
    }
    if d2 > 0.0 && n < 2 {
        return Err(OracleError::Argument("two-qubit density needs at least 2 qubits".into()));
    }
    let slots = (n * layers) as f64;
    let m1 = (d1 * slots).round() as usize;
    let m2 = (d2 * slots / 2.0).round() as usize;
    if (m1 > 0 && cfg.one_qubit.is_empty()) || (m2 > 0 && cfg.two_qubit.is_empty()) {
        return Err(OracleError::Argument("empty gate alphabet for a nonzero density".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let per1 = spread(m1, layers, &mut rng);
    let per2 = spread(m2, layers, &mut rng);
    let mut prev: Vec<usize> = Vec::new();
    let mut qubits: Vec<usize> = (0..n).collect();
    for layer in 0..layers {
        let k2 = per2[layer].min(n / 2);
        let k1 = per1[layer].min(n - 2 * k2);
        if k1 + k2 == 0 {
            continue;
        }
        qubits.shuffle(&mut rng);
        if let Some(&link) = prev.choose(&mut rng) {
            let pos = qubits.iter().position(|&q| q == link).expect("qubit present");
            qubits.swap(0, pos);
        }
        let mut used = Vec::with_capacity(k1 + 2 * k2);
        for p in 0..k2 {
            let pair = [qubits[2 * p], qubits[2 * p + 1]];
            let kind = *cfg.two_qubit.choose(&mut rng).expect("nonempty");
            c.push(instance(kind, &pair, &mut rng)).expect("in range");
            used.extend_from_slice(&pair);
        }
        for p in 0..k1 {
            let q = qubits[2 * k2 + p];
            let kind = *cfg.one_qubit.choose(&mut rng).expect("nonempty");
            c.push(instance(kind, &[q], &mut rng)).expect("in range");
            used.push(q);
        }
        prev = used;
    }
    Ok(c)
}
