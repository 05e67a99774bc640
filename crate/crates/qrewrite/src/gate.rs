//! Gate registry: names, single-character aliases, arities and qubit roles.
//!
//! Every gate slot carries a role used by the commutation test in the
//! matcher. Gates diagonal in the Z basis act as *controls* on their qubits,
//! gates diagonal in the X basis act as *targets*, and basis-changing gates
//! carry both roles. Two gates that only share control-control or
//! target-target qubits commute.

use std::fmt;

/// Role bit for a qubit acted on diagonally in the Z basis.
pub const CONTROL: u8 = 0b01;
/// Role bit for a qubit acted on diagonally in the X basis.
pub const TARGET: u8 = 0b10;
/// Both roles; the gate changes the basis on that qubit.
pub const BOTH: u8 = CONTROL | TARGET;

/// Returns true when two role masks on the same qubit prevent commutation.
#[inline]
pub fn roles_clash(a: u8, b: u8) -> bool {
    (a & CONTROL != 0 && b & TARGET != 0) || (a & TARGET != 0 && b & CONTROL != 0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GateKind {
    I,
    H,
    X,
    Y,
    Z,
    T,
    Tdg,
    S,
    Sdg,
    Rx,
    Ry,
    Rz,
    Cx,
    Cz,
    Ccz,
    Ccx,
    Swap,
    U1,
    U2,
    U3,
}

impl GateKind {
    pub const ALL: [GateKind; 20] = [
        GateKind::I,
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
        GateKind::Cx,
        GateKind::Cz,
        GateKind::Ccz,
        GateKind::Ccx,
        GateKind::Swap,
        GateKind::U1,
        GateKind::U2,
        GateKind::U3,
    ];

    /// Canonical lowercase name, as used in QASM and rule files.
    pub fn name(self) -> &'static str {
        use GateKind::*;
        match self {
            I => "id",
            H => "h",
            X => "x",
            Y => "y",
            Z => "z",
            T => "t",
            Tdg => "tdg",
            S => "s",
            Sdg => "sdg",
            Rx => "rx",
            Ry => "ry",
            Rz => "rz",
            Cx => "cx",
            Cz => "cz",
            Ccz => "ccz",
            Ccx => "ccx",
            Swap => "swap",
            U1 => "u1",
            U2 => "u2",
            U3 => "u3",
        }
    }

    /// Single-character symbol used in gate sequences.
    pub fn alias(self) -> u8 {
        use GateKind::*;
        match self {
            I => b'I',
            H => b'h',
            X => b'x',
            Y => b'y',
            Z => b'z',
            T => b't',
            Tdg => b'T',
            S => b's',
            Sdg => b'S',
            Rx => b'X',
            Ry => b'Y',
            Rz => b'Z',
            Cx => b'c',
            Cz => b'C',
            Ccz => b'E',
            Ccx => b'F',
            Swap => b'w',
            U1 => b'1',
            U2 => b'2',
            U3 => b'3',
        }
    }

    pub fn from_name(name: &str) -> Option<GateKind> {
        let lower = name.to_ascii_lowercase();
        let key = match lower.as_str() {
            "i" => "id",
            "cnot" => "cx",
            "toffoli" => "ccx",
            other => other,
        };
        GateKind::ALL.iter().copied().find(|g| g.name() == key)
    }

    pub fn from_alias(alias: u8) -> Option<GateKind> {
        GateKind::ALL.iter().copied().find(|g| g.alias() == alias)
    }

    pub fn arity(self) -> usize {
        use GateKind::*;
        match self {
            Cx | Cz | Swap => 2,
            Ccz | Ccx => 3,
            _ => 1,
        }
    }

    pub fn angle_arity(self) -> usize {
        use GateKind::*;
        match self {
            Rx | Ry | Rz | U1 => 1,
            U2 => 2,
            U3 => 3,
            _ => 0,
        }
    }

    pub fn is_identity(self) -> bool {
        self == GateKind::I
    }

    /// Role mask of the qubit in position `slot`.
    pub fn role(self, slot: usize) -> u8 {
        use GateKind::*;
        debug_assert!(slot < self.arity());
        match self {
            I => 0,
            Z | S | Sdg | T | Tdg | Rz | U1 | Cz | Ccz => CONTROL,
            X | Rx => TARGET,
            H | Y | Ry | Swap | U2 | U3 => BOTH,
            Cx => {
                if slot == 0 {
                    CONTROL
                } else {
                    TARGET
                }
            }
            Ccx => {
                if slot < 2 {
                    CONTROL
                } else {
                    TARGET
                }
            }
        }
    }

    pub fn control_slots(self) -> Vec<usize> {
        (0..self.arity()).filter(|&s| self.role(s) & CONTROL != 0).collect()
    }

    pub fn target_slots(self) -> Vec<usize> {
        (0..self.arity()).filter(|&s| self.role(s) & TARGET != 0).collect()
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}
