use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CircuitError {
    #[error("gate `{gate}` takes {expected} qubit(s), got {got}")]
    Arity { gate: &'static str, expected: usize, got: usize },
    #[error("gate `{gate}` takes {expected} angle(s), got {got}")]
    AngleArity { gate: &'static str, expected: usize, got: usize },
    #[error("gate `{gate}` repeats qubit {qubit}")]
    RepeatedQubit { gate: &'static str, qubit: usize },
    #[error("angle {0} is not finite")]
    NonFiniteAngle(f64),
    #[error("qubit {qubit} out of range for a {num_qubits}-qubit circuit")]
    QubitOutOfRange { qubit: usize, num_qubits: usize },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QasmErrorKind {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("unknown gate `{0}`")]
    UnknownGate(String),
    #[error("gate `{0}` is only accepted when a rule set translating it is loaded")]
    GateNotEnabled(String),
    #[error("qubit index out of range: {0}")]
    QubitOutOfRange(String),
    #[error("non-unitary statement unsupported: `{0}`")]
    NonUnitary(String),
    #[error("{0}")]
    Circuit(CircuitError),
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("line {line}, column {col}: {kind}")]
pub struct QasmError {
    pub line: usize,
    pub col: usize,
    pub kind: QasmErrorKind,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RuleError {
    #[error("malformed rule document: {0}")]
    Malformed(String),
    #[error("rule `{rule}`: unknown gate `{gate}`")]
    UnknownGate { rule: String, gate: String },
    #[error("rule `{rule}`: substitution uses unbound variable `{var}`")]
    UnboundVariable { rule: String, var: String },
    #[error("rule `{rule}`: pattern qubits must be exactly 0..k-1")]
    QubitNamespace { rule: String },
    #[error("rule `{rule}`: empty pattern")]
    EmptyPattern { rule: String },
    #[error("rule `{rule}`: {msg}")]
    Invalid { rule: String, msg: String },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("oracle capacity exceeded: {qubits} qubits (max {max})")]
    Capacity { qubits: usize, max: usize },
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("{0}")]
    Argument(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RewriteError {
    #[error("window must be at least 1")]
    BadWindow,
    #[error("empty pattern")]
    EmptyPattern,
    #[error("precise policy explored more than {0} partial schedulers; use the greedy or stochastic policy")]
    QueueCap(usize),
    #[error("pick index {index} out of range for a circuit of {len} gates")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("scheduler picks overlap at index {0}")]
    Overlap(usize),
    #[error("internal error: {0}")]
    Internal(String),
}
