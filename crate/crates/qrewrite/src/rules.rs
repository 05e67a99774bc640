//! Rewrite rules, rule files and the built-in rule sets.

use crate::angle::{AngleExpr, Rational};
use crate::circuit::{Circuit, Instruction};
use crate::error::{OracleError, RuleError};
use crate::gate::GateKind;
use crate::oracle::unitary::{circuit_unitary, equiv_up_to_phase, MAX_QUBITS};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::PI;
use std::sync::Arc;

/// One gate of a rule side, over pattern-local qubits and symbolic angles.
#[derive(Debug, Clone, PartialEq)]
pub struct TemplateInstr {
    pub gate: GateKind,
    pub qubits: Vec<usize>,
    pub angles: Vec<AngleExpr>,
}

impl TemplateInstr {
    /// Instantiates the template under a qubit map and angle bindings.
    pub fn instantiate(
        &self,
        qubit_map: &[usize],
        bindings: &BTreeMap<String, f64>,
    ) -> Option<Instruction> {
        let qubits = self
            .qubits
            .iter()
            .map(|&q| qubit_map.get(q).copied())
            .collect::<Option<Vec<_>>>()?;
        let angles = self
            .angles
            .iter()
            .map(|a| a.eval(bindings))
            .collect::<Option<Vec<_>>>()?;
        Instruction::new(self.gate, qubits, angles).ok()
    }
}

/// A rewrite rule `pattern = substitution`.
#[derive(Debug, Clone, PartialEq)]
pub struct RuleSpec {
    pub name: String,
    pub pattern: Vec<TemplateInstr>,
    pub substitution: Vec<TemplateInstr>,
    /// Number of pattern-local qubits `k`; both sides live on `0..k`.
    pub num_qubits: usize,
}

impl RuleSpec {
    pub fn pattern_sequence(&self) -> Vec<u8> {
        self.pattern.iter().map(|t| t.gate.alias()).collect()
    }

    pub fn pattern_sequence_string(&self) -> String {
        String::from_utf8(self.pattern_sequence()).expect("aliases are ASCII")
    }

    /// Angle variables in order of first appearance in the pattern.
    pub fn variables(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for t in &self.pattern {
            for a in &t.angles {
                for v in a.variables() {
                    if !out.iter().any(|o| o == v) {
                        out.push(v.to_string());
                    }
                }
            }
        }
        out
    }

    fn side_circuit(&self, side: &[TemplateInstr], bindings: &BTreeMap<String, f64>) -> Circuit {
        let ident: Vec<usize> = (0..self.num_qubits).collect();
        let mut c = Circuit::new(self.num_qubits);
        for t in side {
            let ins = t.instantiate(&ident, bindings).expect("validated rule instantiates");
            c.push(ins).expect("rule qubits in range");
        }
        c
    }

    pub fn pattern_circuit(&self, bindings: &BTreeMap<String, f64>) -> Circuit {
        self.side_circuit(&self.pattern, bindings)
    }

    pub fn substitution_circuit(&self, bindings: &BTreeMap<String, f64>) -> Circuit {
        self.side_circuit(&self.substitution, bindings)
    }

    pub fn uses_gate(&self, g: GateKind) -> bool {
        self.pattern.iter().chain(&self.substitution).any(|t| t.gate == g)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RuleSetKind {
    Internal,
    External,
}

#[derive(Debug, Clone)]
pub struct RuleSet {
    pub name: String,
    pub kind: RuleSetKind,
    pub rules: Vec<Arc<RuleSpec>>,
    pub validated: bool,
}

pub const BUILTIN_NAMES: [&str; 4] = ["internal", "surface17", "fig4", "ibm"];

const INTERNAL_JSON: &str = include_str!("../rules/internal.rules.json");
const SURFACE17_JSON: &str = include_str!("../rules/surface17.rules.json");
const FIG4_JSON: &str = include_str!("../rules/fig4.rules.json");
const IBM_JSON: &str = include_str!("../rules/ibm.rules.json");

impl RuleSet {
    pub fn new(name: &str, kind: RuleSetKind, rules: Vec<RuleSpec>) -> Self {
        RuleSet {
            name: name.to_string(),
            kind,
            rules: rules.into_iter().map(Arc::new).collect(),
            validated: false,
        }
    }

    pub fn empty(name: &str, kind: RuleSetKind) -> Self {
        RuleSet::new(name, kind, Vec::new())
    }

    pub fn from_json(name: &str, kind: RuleSetKind, text: &str) -> Result<Self, RuleError> {
        Ok(RuleSet::new(name, kind, parse_rules(text)?))
    }

    /// A shipped rule set by name, oracle-validated on load.
    pub fn builtin(name: &str) -> Option<RuleSet> {
        let (text, kind) = match name {
            "internal" => (INTERNAL_JSON, RuleSetKind::Internal),
            "surface17" => (SURFACE17_JSON, RuleSetKind::External),
            "fig4" => (FIG4_JSON, RuleSetKind::External),
            "ibm" => (IBM_JSON, RuleSetKind::External),
            _ => return None,
        };
        let mut rs = RuleSet::from_json(name, kind, text).expect("shipped rule file parses");
        let report = validate(&rs).expect("shipped rules fit the oracle");
        assert!(report.all_passed(), "shipped rule set `{name}` failed validation: {report:?}");
        rs.validated = true;
        Some(rs)
    }

    pub fn builtin_internal() -> RuleSet {
        RuleSet::builtin("internal").expect("builtin")
    }

    pub fn builtin_surface17() -> RuleSet {
        RuleSet::builtin("surface17").expect("builtin")
    }

    pub fn builtin_fig4() -> RuleSet {
        RuleSet::builtin("fig4").expect("builtin")
    }

    /// Validates with the oracle and records the outcome.
    pub fn into_validated(mut self) -> Result<(RuleSet, ValidationReport), OracleError> {
        let report = validate(&self)?;
        self.validated = report.all_passed();
        Ok((self, report))
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn get(&self, name: &str) -> Option<&Arc<RuleSpec>> {
        self.rules.iter().find(|r| r.name == name)
    }

    /// The rules with the given names, in set order.
    pub fn subset(&self, names: &[&str]) -> RuleSet {
        RuleSet {
            name: self.name.clone(),
            kind: self.kind,
            rules: self.rules.iter().filter(|r| names.contains(&r.name.as_str())).cloned().collect(),
            validated: self.validated,
        }
    }

    /// Concatenation, keeping `self`'s rules first.
    pub fn merged(&self, other: &RuleSet) -> RuleSet {
        RuleSet {
            name: format!("{}+{}", self.name, other.name),
            kind: self.kind,
            rules: self.rules.iter().chain(&other.rules).cloned().collect(),
            validated: self.validated && other.validated,
        }
    }

    pub fn uses_gate(&self, g: GateKind) -> bool {
        self.rules.iter().any(|r| r.uses_gate(g))
    }
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct RuleDoc {
    rules: Vec<RuleEntry>,
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct RuleEntry {
    name: String,
    pattern: Vec<TemplateEntry>,
    substitution: Vec<TemplateEntry>,
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct TemplateEntry {
    gate: String,
    qubits: Vec<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    angles: Vec<String>,
}

/// Parses a rule document and checks every rule's well-formedness.
pub fn parse_rules(text: &str) -> Result<Vec<RuleSpec>, RuleError> {
    let doc: RuleDoc = serde_json::from_str(text).map_err(|e| RuleError::Malformed(e.to_string()))?;
    let mut names = BTreeSet::new();
    let mut out = Vec::with_capacity(doc.rules.len());
    for entry in doc.rules {
        if !names.insert(entry.name.clone()) {
            return Err(RuleError::Invalid { rule: entry.name, msg: "duplicate rule name".into() });
        }
        out.push(build_rule(entry)?);
    }
    Ok(out)
}

fn build_template(rule: &str, e: &TemplateEntry) -> Result<TemplateInstr, RuleError> {
    let gate = GateKind::from_name(&e.gate)
        .ok_or_else(|| RuleError::UnknownGate { rule: rule.to_string(), gate: e.gate.clone() })?;
    let invalid = |msg: String| RuleError::Invalid { rule: rule.to_string(), msg };
    if e.qubits.len() != gate.arity() {
        return Err(invalid(format!(
            "gate `{}` takes {} qubit(s), got {}",
            gate,
            gate.arity(),
            e.qubits.len()
        )));
    }
    for (i, q) in e.qubits.iter().enumerate() {
        if e.qubits[..i].contains(q) {
            return Err(invalid(format!("gate `{gate}` repeats qubit {q}")));
        }
    }
    if e.angles.len() != gate.angle_arity() {
        return Err(invalid(format!(
            "gate `{}` takes {} angle(s), got {}",
            gate,
            gate.angle_arity(),
            e.angles.len()
        )));
    }
    let angles = e
        .angles
        .iter()
        .map(|a| AngleExpr::parse(a).map_err(|err| invalid(err.to_string())))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(TemplateInstr { gate, qubits: e.qubits.clone(), angles })
}

fn build_rule(entry: RuleEntry) -> Result<RuleSpec, RuleError> {
    let name = entry.name;
    let invalid = |msg: &str| RuleError::Invalid { rule: name.clone(), msg: msg.to_string() };
    if entry.pattern.is_empty() {
        return Err(RuleError::EmptyPattern { rule: name });
    }
    let pattern = entry
        .pattern
        .iter()
        .map(|e| build_template(&name, e))
        .collect::<Result<Vec<_>, _>>()?;
    let substitution = entry
        .substitution
        .iter()
        .map(|e| build_template(&name, e))
        .collect::<Result<Vec<_>, _>>()?;

    if pattern.iter().any(|t| t.gate.is_identity()) {
        return Err(invalid("pattern may not contain identity gates"));
    }
    let used: BTreeSet<usize> = pattern.iter().flat_map(|t| t.qubits.iter().copied()).collect();
    let k = used.len();
    if used.iter().copied().ne(0..k) {
        return Err(RuleError::QubitNamespace { rule: name });
    }
    if substitution.iter().flat_map(|t| &t.qubits).any(|&q| q >= k) {
        return Err(RuleError::QubitNamespace { rule: name });
    }

    let unit = Rational::from_integer(1);
    let mut bound = BTreeSet::new();
    for t in &pattern {
        for a in &t.angles {
            if a.var_terms.len() > 1 {
                return Err(invalid("a pattern angle may use at most one variable"));
            }
            if let Some((v, c)) = a.var_terms.iter().next() {
                if *c != unit && *c != -unit {
                    return Err(invalid("pattern variables must have coefficient 1 or -1"));
                }
                bound.insert(v.clone());
            }
        }
    }
    for t in &substitution {
        for a in &t.angles {
            if let Some(v) = a.variables().find(|v| !bound.contains(*v)) {
                return Err(RuleError::UnboundVariable { rule: name.clone(), var: v.to_string() });
            }
        }
    }
    Ok(RuleSpec { name, pattern, substitution, num_qubits: k })
}

fn template_entry(t: &TemplateInstr) -> TemplateEntry {
    TemplateEntry {
        gate: t.gate.name().to_string(),
        qubits: t.qubits.clone(),
        angles: t.angles.iter().map(|a| a.to_string()).collect(),
    }
}

/// Writes rules back to the JSON rule-file format, one rule per line.
pub fn serialize_rules(rules: &[RuleSpec]) -> String {
    let mut out = String::from("{\"rules\":[\n");
    for (i, r) in rules.iter().enumerate() {
        let entry = RuleEntry {
            name: r.name.clone(),
            pattern: r.pattern.iter().map(template_entry).collect(),
            substitution: r.substitution.iter().map(template_entry).collect(),
        };
        out.push_str(&serde_json::to_string(&entry).expect("rule serializes"));
        if i + 1 < rules.len() {
            out.push(',');
        }
        out.push('\n');
    }
    out.push_str("]}\n");
    out
}

/// Angle samples used to instantiate rule variables during validation.
pub const VALIDATION_SAMPLES: [f64; 3] = [PI / 3.0, -PI / 7.0, 1.0];

/// Equivalence tolerance used when validating rules.
pub const VALIDATION_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RuleCheck {
    pub name: String,
    pub passed: bool,
    /// Largest phase-aligned Frobenius residual over the samples.
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub set: String,
    pub checks: Vec<RuleCheck>,
}

impl ValidationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&str> {
        self.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect()
    }
}

/// Checks one rule at every sampled angle binding.
pub fn validate_rule(rule: &RuleSpec) -> Result<RuleCheck, OracleError> {
    if rule.num_qubits > MAX_QUBITS {
        return Err(OracleError::Capacity { qubits: rule.num_qubits, max: MAX_QUBITS });
    }
    let vars = rule.variables();
    let rounds = if vars.is_empty() { 1 } else { VALIDATION_SAMPLES.len() };
    let mut passed = true;
    let mut residual: f64 = 0.0;
    for k in 0..rounds {
        let bindings: BTreeMap<String, f64> = vars
            .iter()
            .enumerate()
            .map(|(j, v)| (v.clone(), VALIDATION_SAMPLES[(k + j) % VALIDATION_SAMPLES.len()]))
            .collect();
        let a = circuit_unitary(&rule.pattern_circuit(&bindings))?;
        let b = circuit_unitary(&rule.substitution_circuit(&bindings))?;
        let (ok, r) = equiv_up_to_phase(&a, &b, VALIDATION_TOL)?;
        passed &= ok;
        residual = residual.max(r);
    }
    Ok(RuleCheck { name: rule.name.clone(), passed, residual })
}

pub fn validate(rs: &RuleSet) -> Result<ValidationReport, OracleError> {
    let checks = rs.rules.iter().map(|r| validate_rule(r)).collect::<Result<Vec<_>, _>>()?;
    Ok(ValidationReport { set: rs.name.clone(), checks })
}
