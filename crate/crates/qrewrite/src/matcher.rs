//! Subsequence matching of rule patterns against a circuit.
//!
//! A pattern matches when its gate sequence occurs as a (not necessarily
//! contiguous) subsequence of the circuit's gate sequence, the matched gates
//! admit a consistent injective qubit mapping and angle binding, and every
//! gate lying in the gaps commutes with the matched gates by the role test.

use crate::circuit::Circuit;
use crate::error::RewriteError;
use crate::gate::roles_clash;
use crate::rules::{RuleSet, RuleSpec};
use serde::Serialize;
use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

/// Bound on the span `s[last] - s[0]` of a match.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Window {
    /// Four times the pattern length.
    #[default]
    Auto,
    Span(usize),
    Unbounded,
}

impl Window {
    pub fn for_pattern(self, pattern_len: usize) -> Option<usize> {
        match self {
            Window::Auto => Some(4 * pattern_len.max(1)),
            Window::Span(d) => Some(d),
            Window::Unbounded => None,
        }
    }

    fn check(self) -> Result<(), RewriteError> {
        if self == Window::Span(0) {
            Err(RewriteError::BadWindow)
        } else {
            Ok(())
        }
    }
}

/// All index lists `s` spelling `pattern` in `target` with span `< delta`,
/// in lexicographic order.
pub fn distinct_subsequence(
    target: &[u8],
    pattern: &[u8],
    delta: Option<usize>,
) -> Result<Vec<Vec<usize>>, RewriteError> {
    if pattern.is_empty() {
        return Err(RewriteError::EmptyPattern);
    }
    if delta == Some(0) {
        return Err(RewriteError::BadWindow);
    }
    let m = pattern.len();
    let mut d: Vec<Vec<Vec<usize>>> = vec![Vec::new(); m + 1];
    d[0].push(Vec::new());
    let in_span = |s: &Vec<usize>, i: usize| delta.is_none_or(|w| i - s[0] < w);
    for (i, &sym) in target.iter().enumerate() {
        if let Some(w) = delta {
            if i % w == 0 {
                for partial in d.iter_mut().take(m).skip(1) {
                    partial.retain(|s| i - s[0] < w);
                }
            }
        }
        for j in (0..m.min(i + 1)).rev() {
            if sym != pattern[j] {
                continue;
            }
            let (lo, hi) = d.split_at_mut(j + 1);
            hi[0].extend(lo[j].iter().filter(|s| s.is_empty() || in_span(s, i)).map(|s| {
                let mut t = Vec::with_capacity(j + 1);
                t.extend_from_slice(s);
                t.push(i);
                t
            }));
        }
    }
    let mut out = std::mem::take(&mut d[m]);
    out.sort();
    Ok(out)
}

/// Pattern-qubit to circuit-qubit map (index = pattern qubit).
pub type QubitMapping = Vec<usize>;
pub type AngleBindings = BTreeMap<String, f64>;

/// Builds the qubit mapping and angle bindings for `s`, without the
/// commutation test.
pub fn map_qubits(s: &[usize], ct: &Circuit, rule: &RuleSpec) -> Option<(QubitMapping, AngleBindings)> {
    if s.len() != rule.pattern.len() {
        return None;
    }
    let mut map: Vec<Option<usize>> = vec![None; rule.num_qubits];
    let mut bindings = AngleBindings::new();
    for (p, &idx) in rule.pattern.iter().zip(s) {
        let t = ct.instructions.get(idx)?;
        if t.gate != p.gate {
            return None;
        }
        for (&pq, &tq) in p.qubits.iter().zip(&t.qubits) {
            match map[pq] {
                Some(existing) if existing != tq => return None,
                Some(_) => {}
                None => {
                    if map.contains(&Some(tq)) {
                        return None;
                    }
                    map[pq] = Some(tq);
                }
            }
        }
        for (pa, &ta) in p.angles.iter().zip(&t.angles) {
            if !pa.unify(ta, &mut bindings) {
                return None;
            }
        }
    }
    let mapping = map.into_iter().collect::<Option<Vec<_>>>()?;
    Some((mapping, bindings))
}

/// Per-qubit role masks of the matched gates and of the substitution.
fn footprint(s: &[usize], ct: &Circuit, rule: &RuleSpec, mapping: &[usize]) -> HashMap<usize, u8> {
    let mut fp: HashMap<usize, u8> = HashMap::new();
    for &idx in s {
        for (q, r) in ct.instructions[idx].roles() {
            *fp.entry(q).or_default() |= r;
        }
    }
    for t in &rule.substitution {
        for (slot, &pq) in t.qubits.iter().enumerate() {
            *fp.entry(mapping[pq]).or_default() |= t.gate.role(slot);
        }
    }
    fp
}

/// Extra per-position roles: gates that other rewrites may place there.
pub type ExtraRoles = HashMap<usize, Vec<(usize, u8)>>;

fn gaps_commute(
    s: &[usize],
    ct: &Circuit,
    fp: &HashMap<usize, u8>,
    extra: Option<&ExtraRoles>,
) -> bool {
    let (first, last) = (s[0], s[s.len() - 1]);
    let mut k = 0;
    for pos in first..=last {
        if k < s.len() && s[k] == pos {
            k += 1;
            continue;
        }
        let clash = |q: usize, r: u8| fp.get(&q).is_some_and(|&f| roles_clash(f, r));
        if ct.instructions[pos].roles().any(|(q, r)| clash(q, r)) {
            return false;
        }
        if let Some(roles) = extra.and_then(|e| e.get(&pos)) {
            if roles.iter().any(|&(q, r)| clash(q, r)) {
                return false;
            }
        }
    }
    true
}

/// Qubit mapping, angle unification and the commutation test for `s`.
pub fn check_qubit_condition(
    s: &[usize],
    ct: &Circuit,
    rule: &RuleSpec,
) -> Option<(QubitMapping, AngleBindings)> {
    let (mapping, bindings) = map_qubits(s, ct, rule)?;
    let fp = footprint(s, ct, rule, &mapping);
    gaps_commute(s, ct, &fp, None).then_some((mapping, bindings))
}

#[derive(Debug, Clone)]
pub struct MatchCandidate {
    pub indices: Vec<usize>,
    pub rule: Arc<RuleSpec>,
    /// Position of the rule in its rule set.
    pub rule_index: usize,
    pub mapping: QubitMapping,
    pub bindings: AngleBindings,
    /// Smallest index shared with another candidate, or −1.
    pub conflict: i64,
}

impl MatchCandidate {
    pub fn first(&self) -> usize {
        self.indices[0]
    }

    pub fn last(&self) -> usize {
        self.indices[self.indices.len() - 1]
    }

    pub fn overlaps(&self, other: &MatchCandidate) -> bool {
        let (mut i, mut j) = (0, 0);
        while i < self.indices.len() && j < other.indices.len() {
            match self.indices[i].cmp(&other.indices[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return true,
            }
        }
        false
    }

    /// Where each substitution gate lands: `sub[k]` at `indices[k]` for
    /// `k < n`, the rest right after `indices[n-1]`.
    pub fn substitution_positions(&self) -> Vec<usize> {
        let n = self.indices.len().min(self.rule.substitution.len());
        (0..self.rule.substitution.len())
            .map(|k| self.indices[k.min(n.saturating_sub(1))])
            .collect()
    }

    pub fn report(&self) -> CandidateReport {
        CandidateReport {
            rule: self.rule.name.clone(),
            indices: self.indices.clone(),
            mapping: self.mapping.clone(),
            bindings: self.bindings.clone(),
            conflict: self.conflict,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CandidateReport {
    pub rule: String,
    pub indices: Vec<usize>,
    pub mapping: Vec<usize>,
    pub bindings: BTreeMap<String, f64>,
    pub conflict: i64,
}

fn extra_roles(cands: &[MatchCandidate]) -> ExtraRoles {
    let mut extra: ExtraRoles = HashMap::new();
    for c in cands {
        for (t, pos) in c.rule.substitution.iter().zip(c.substitution_positions()) {
            if t.gate.is_identity() {
                continue;
            }
            let entry = extra.entry(pos).or_default();
            for (slot, &pq) in t.qubits.iter().enumerate() {
                entry.push((c.mapping[pq], t.gate.role(slot)));
            }
        }
    }
    extra
}

/// Every accepted candidate of every rule, ordered by rule then indices.
///
/// Candidates are kept only if their gap gates also commute with whatever
/// any other candidate could substitute into those gaps, so that any
/// index-disjoint selection can be applied in place.
pub fn pattern_matching(ct: &Circuit, rs: &RuleSet, window: Window) -> Result<Vec<MatchCandidate>, RewriteError> {
    window.check()?;
    let gamma = ct.gate_sequence();
    let mut cands = Vec::new();
    let mut footprints = Vec::new();
    for (rule_index, rule) in rs.rules.iter().enumerate() {
        let subs = distinct_subsequence(&gamma, &rule.pattern_sequence(), window.for_pattern(rule.pattern.len()))?;
        for s in subs {
            let Some((mapping, bindings)) = map_qubits(&s, ct, rule) else { continue };
            let fp = footprint(&s, ct, rule, &mapping);
            if !gaps_commute(&s, ct, &fp, None) {
                continue;
            }
            footprints.push(fp);
            cands.push(MatchCandidate {
                indices: s,
                rule: Arc::clone(rule),
                rule_index,
                mapping,
                bindings,
                conflict: -1,
            });
        }
    }
    let extra = extra_roles(&cands);
    let keep: Vec<bool> = cands
        .iter()
        .zip(&footprints)
        .map(|(c, fp)| c.indices.len() < 2 || gaps_commute(&c.indices, ct, fp, Some(&extra)))
        .collect();
    Ok(cands.into_iter().zip(keep).filter_map(|(c, k)| k.then_some(c)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Instruction;
    use crate::gate::GateKind::*;
    use crate::qasm::parse_qasm;

    fn xcx7() -> Circuit {
        parse_qasm(
            "OPENQASM 2.0; qreg q[3]; x q[2]; x q[2]; cx q[0],q[1]; cx q[0],q[2]; cx q[0],q[1]; x q[2]; x q[0];",
        )
        .unwrap()
    }

    #[test]
    fn dp_examples() {
        assert_eq!(distinct_subsequence(b"xxcccxx", b"cc", None).unwrap(), vec![vec![2, 3], vec![2, 4], vec![3, 4]]);
        assert_eq!(distinct_subsequence(b"hEhhEhhEh", b"E", None).unwrap(), vec![vec![1], vec![4], vec![7]]);
        assert!(distinct_subsequence(b"abc", b"d", None).unwrap().is_empty());
        assert_eq!(distinct_subsequence(b"aaa", b"aa", Some(2)).unwrap(), vec![vec![0, 1], vec![1, 2]]);
        assert!(distinct_subsequence(b"abc", b"", None).is_err());
        assert!(distinct_subsequence(b"abc", b"a", Some(0)).is_err());
    }

    #[test]
    fn xcx7_conditions() {
        let c = xcx7();
        let rs = RuleSet::builtin_fig4();
        let r2 = rs.get("cx_cancel").unwrap();
        let (map, _) = check_qubit_condition(&[2, 4], &c, r2).unwrap();
        assert_eq!(map, vec![0, 1]);
        assert!(check_qubit_condition(&[2, 3], &c, r2).is_none());
        let r4 = rs.get("x_cx_x").unwrap();
        let (map, _) = check_qubit_condition(&[1, 3, 5], &c, r4).unwrap();
        assert_eq!(map, vec![0, 2]);
    }

    #[test]
    fn inconsistent_mapping_rejected() {
        let c = Circuit::from_instructions(
            15,
            vec![Instruction::gate(Cx, &[13, 2]), Instruction::gate(Cx, &[9, 14]), Instruction::gate(Cx, &[4, 12])],
        )
        .unwrap();
        let r2 = RuleSet::builtin_fig4().get("cx_cancel").unwrap().clone();
        assert!(check_qubit_condition(&[0, 1], &c, &r2).is_none());
    }

    #[test]
    fn angle_binding_must_agree() {
        let c = Circuit::from_instructions(
            1,
            vec![Instruction::rotation(Rx, &[0], &[-0.4]), Instruction::rotation(Rx, &[0], &[0.4])],
        )
        .unwrap();
        let rs = RuleSet::builtin_internal();
        let (_, b) = check_qubit_condition(&[0, 1], &c, rs.get("rx_cancel").unwrap()).unwrap();
        assert!((b["a"] - 0.4).abs() < 1e-12);
        let d = Circuit::from_instructions(
            1,
            vec![Instruction::rotation(Rx, &[0], &[-0.4]), Instruction::rotation(Rx, &[0], &[0.5])],
        )
        .unwrap();
        assert!(check_qubit_condition(&[0, 1], &d, rs.get("rx_cancel").unwrap()).is_none());
    }

    #[test]
    fn empty_circuit_has_no_candidates() {
        let cands = pattern_matching(&Circuit::new(2), &RuleSet::builtin_fig4(), Window::Unbounded).unwrap();
        assert!(cands.is_empty());
    }
}
