//! Dense unitary simulation and global-phase equivalence.

use crate::circuit::{Circuit, Instruction};
use crate::error::OracleError;
use crate::gate::GateKind;
use num_complex::Complex64;
use std::f64::consts::FRAC_1_SQRT_2;

/// Largest qubit count the dense simulator accepts.
pub const MAX_QUBITS: usize = 10;

/// Square complex matrix stored row-major. Basis state index bit `q` is
/// the value of qubit `q`.
#[derive(Debug, Clone, PartialEq)]
pub struct Unitary {
    pub dim: usize,
    pub entries: Vec<Complex64>,
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

impl Unitary {
    pub fn identity(dim: usize) -> Self {
        let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = c(1.0, 0.0);
        }
        Unitary { dim, entries }
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim + col]
    }

    pub fn scaled(&self, k: Complex64) -> Unitary {
        Unitary { dim: self.dim, entries: self.entries.iter().map(|e| e * k).collect() }
    }

    pub fn mul(&self, other: &Unitary) -> Unitary {
        let d = self.dim;
        let mut out = vec![Complex64::new(0.0, 0.0); d * d];
        for i in 0..d {
            for k in 0..d {
                let a = self.entries[i * d + k];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..d {
                    out[i * d + j] += a * other.entries[k * d + j];
                }
            }
        }
        Unitary { dim: d, entries: out }
    }

    pub fn adjoint(&self) -> Unitary {
        let d = self.dim;
        let mut out = vec![Complex64::new(0.0, 0.0); d * d];
        for i in 0..d {
            for j in 0..d {
                out[j * d + i] = self.entries[i * d + j].conj();
            }
        }
        Unitary { dim: d, entries: out }
    }

    pub fn frobenius_distance(&self, other: &Unitary) -> f64 {
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// `‖U·U† − I‖_F`.
    pub fn unitarity_error(&self) -> f64 {
        self.mul(&self.adjoint()).frobenius_distance(&Unitary::identity(self.dim))
    }

    /// Left-multiplies by `ins` embedded on the global qubits.
    pub fn apply(&mut self, ins: &Instruction) {
        if ins.gate.is_identity() {
            return;
        }
        let g = gate_matrix(ins.gate, &ins.angles);
        let k = ins.qubits.len();
        let local = 1usize << k;
        let d = self.dim;
        // Global bit mask of local index `l`; slot 0 is the local MSB.
        let masks: Vec<usize> = (0..local)
            .map(|l| {
                (0..k)
                    .filter(|&s| (l >> (k - 1 - s)) & 1 == 1)
                    .fold(0usize, |m, s| m | (1 << ins.qubits[s]))
            })
            .collect();
        let gate_mask = masks[local - 1];
        let mut rows = vec![0usize; local];
        let mut buf = vec![Complex64::new(0.0, 0.0); local];
        for base in 0..d {
            if base & gate_mask != 0 {
                continue;
            }
            for l in 0..local {
                rows[l] = base | masks[l];
            }
            for col in 0..d {
                for (r, slot) in buf.iter_mut().enumerate() {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for (s, &row) in rows.iter().enumerate() {
                        acc += g[r * local + s] * self.entries[row * d + col];
                    }
                    *slot = acc;
                }
                for (l, &row) in rows.iter().enumerate() {
                    self.entries[row * d + col] = buf[l];
                }
            }
        }
    }
}

/// Row-major matrix of a gate in its local basis (slot 0 = MSB).
pub fn gate_matrix(gate: GateKind, angles: &[f64]) -> Vec<Complex64> {
    use GateKind::*;
    let z = c(0.0, 0.0);
    let one = c(1.0, 0.0);
    let h = FRAC_1_SQRT_2;
    let phase = |t: f64| Complex64::from_polar(1.0, t);
    let u3 = |theta: f64, phi: f64, lam: f64| {
        let (co, si) = ((theta / 2.0).cos(), (theta / 2.0).sin());
        vec![c(co, 0.0), -phase(lam) * si, phase(phi) * si, phase(phi + lam) * co]
    };
    let diag = |d: &[Complex64]| {
        let n = d.len();
        let mut m = vec![z; n * n];
        for (i, v) in d.iter().enumerate() {
            m[i * n + i] = *v;
        }
        m
    };
    let perm = |p: &[usize]| {
        let n = p.len();
        let mut m = vec![z; n * n];
        for (col, &row) in p.iter().enumerate() {
            m[row * n + col] = one;
        }
        m
    };
    match gate {
        I => diag(&[one, one]),
        H => vec![c(h, 0.0), c(h, 0.0), c(h, 0.0), c(-h, 0.0)],
        X => vec![z, one, one, z],
        Y => vec![z, c(0.0, -1.0), c(0.0, 1.0), z],
        Z => diag(&[one, -one]),
        T => diag(&[one, phase(std::f64::consts::FRAC_PI_4)]),
        Tdg => diag(&[one, phase(-std::f64::consts::FRAC_PI_4)]),
        S => diag(&[one, c(0.0, 1.0)]),
        Sdg => diag(&[one, c(0.0, -1.0)]),
        Rx => {
            let (co, si) = ((angles[0] / 2.0).cos(), (angles[0] / 2.0).sin());
            vec![c(co, 0.0), c(0.0, -si), c(0.0, -si), c(co, 0.0)]
        }
        Ry => {
            let (co, si) = ((angles[0] / 2.0).cos(), (angles[0] / 2.0).sin());
            vec![c(co, 0.0), c(-si, 0.0), c(si, 0.0), c(co, 0.0)]
        }
        Rz => diag(&[phase(-angles[0] / 2.0), phase(angles[0] / 2.0)]),
        U1 => diag(&[one, phase(angles[0])]),
        U2 => u3(std::f64::consts::FRAC_PI_2, angles[0], angles[1]),
        U3 => u3(angles[0], angles[1], angles[2]),
        Cx => perm(&[0, 1, 3, 2]),
        Cz => diag(&[one, one, one, -one]),
        Swap => perm(&[0, 2, 1, 3]),
        Ccz => diag(&[one, one, one, one, one, one, one, -one]),
        Ccx => perm(&[0, 1, 2, 3, 4, 5, 7, 6]),
    }
}

/// Unitary of a circuit of at most [`MAX_QUBITS`] qubits.
pub fn circuit_unitary(c: &Circuit) -> Result<Unitary, OracleError> {
    if c.num_qubits > MAX_QUBITS {
        return Err(OracleError::Capacity { qubits: c.num_qubits, max: MAX_QUBITS });
    }
    let mut u = Unitary::identity(1 << c.num_qubits);
    for ins in c.iter() {
        u.apply(ins);
    }
    Ok(u)
}

/// Compares `a` and `e^{iφ}·b`, with φ aligning the largest entry of `b`.
/// Returns the verdict `residual ≤ tol·dim` and the residual.
pub fn equiv_up_to_phase(a: &Unitary, b: &Unitary, tol: f64) -> Result<(bool, f64), OracleError> {
    if a.dim != b.dim {
        return Err(OracleError::DimensionMismatch(a.dim, b.dim));
    }
    let (idx, _) = b
        .entries
        .iter()
        .enumerate()
        .fold((0, -1.0), |best, (i, e)| if e.norm() > best.1 { (i, e.norm()) } else { best });
    let ratio = a.entries[idx] / b.entries[idx];
    let phase = if ratio.norm() > 0.0 && ratio.is_finite() { ratio / ratio.norm() } else { c(1.0, 0.0) };
    let residual = a.frobenius_distance(&b.scaled(phase));
    Ok((residual <= tol * a.dim as f64, residual))
}

/// Circuit-level equivalence check.
pub fn circuits_equivalent(a: &Circuit, b: &Circuit, tol: f64) -> Result<bool, OracleError> {
    if a.num_qubits != b.num_qubits {
        return Err(OracleError::DimensionMismatch(1 << a.num_qubits.min(30), 1 << b.num_qubits.min(30)));
    }
    Ok(equiv_up_to_phase(&circuit_unitary(a)?, &circuit_unitary(b)?, tol)?.0)
}
