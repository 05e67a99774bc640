#![allow(dead_code)]

use qrewrite::oracle::circuit_unitary;
use qrewrite::oracle::equiv_up_to_phase;
use qrewrite::{Circuit, GateKind, Instruction};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

pub const ONE_QUBIT: [GateKind; 11] = [
    GateKind::H,
    GateKind::X,
    GateKind::Y,
    GateKind::Z,
    GateKind::T,
    GateKind::Tdg,
    GateKind::S,
    GateKind::Sdg,
    GateKind::Rx,
    GateKind::Ry,
    GateKind::Rz,
];
pub const TWO_QUBIT: [GateKind; 3] = [GateKind::Cx, GateKind::Cz, GateKind::Swap];

/// `len` gates drawn uniformly from `alphabet` on random qubits. Angles are
/// multiples of π/4 half the time so that merge rules get a chance.
pub fn random_circuit(n: usize, len: usize, alphabet: &[GateKind], seed: u64) -> Circuit {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut c = Circuit::new(n);
    let qubits: Vec<usize> = (0..n).collect();
    while c.len() < len {
        let g = *alphabet.choose(&mut rng).unwrap();
        if g.arity() > n {
            continue;
        }
        let qs: Vec<usize> = qubits.choose_multiple(&mut rng, g.arity()).copied().collect();
        let angles: Vec<f64> = (0..g.angle_arity())
            .map(|_| if rng.gen_bool(0.5) { rng.gen_range(-4..=4) as f64 * PI / 4.0 } else { rng.gen_range(-PI..PI) })
            .collect();
        c.push(Instruction::new(g, qs, angles).unwrap()).unwrap();
    }
    c
}

pub fn same_unitary(a: &Circuit, b: &Circuit) -> (bool, f64) {
    equiv_up_to_phase(&circuit_unitary(a).unwrap(), &circuit_unitary(b).unwrap(), 1e-9).unwrap()
}
