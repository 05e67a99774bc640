//! Quantum circuit rewriting by subsequence pattern matching.
//!
//! A circuit is projected to a string of one-character gate aliases. Rule
//! patterns are found as subsequences of that string, filtered by qubit
//! mapping and a commutation test on the gates in between, resolved into a
//! non-overlapping scheduler and substituted in place.

pub mod angle;
pub mod benchmarks;
pub mod circuit;
pub mod error;
pub mod gate;
pub mod matcher;
pub mod oracle;
pub mod qasm;
pub mod rewriter;
pub mod rules;
pub mod scheduler;

pub use circuit::{Circuit, CircuitMetrics, Instruction};
pub use error::{CircuitError, OracleError, QasmError, RewriteError, RuleError};
pub use gate::GateKind;
pub use matcher::{distinct_subsequence, pattern_matching, MatchCandidate, Window};
pub use qasm::{parse_qasm, parse_qasm_with, serialize_qasm, QasmOptions};
pub use rewriter::{optimize, optimize_best_of, rewrite_once, substitute, OptimizeOptions, OptimizeReport};
pub use rules::{parse_rules, RuleSet, RuleSetKind, RuleSpec};
pub use scheduler::{find_conflicts, solve_conflicts, Policy, PolicyKind, Scheduler};
