//! Ground-truth engines used by validation and the test suites.

pub mod gen;
pub mod subseq;
pub mod unitary;

pub use gen::{gen_circuit, GenConfig};
pub use subseq::{brute_subsequences, check_grid, GridReport};
pub use unitary::{circuit_unitary, circuits_equivalent, equiv_up_to_phase, Unitary, MAX_QUBITS};
