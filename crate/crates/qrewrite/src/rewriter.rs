//! Applying schedulers and the round-based optimization driver.

use crate::circuit::{Circuit, Instruction};
use crate::error::RewriteError;
use crate::matcher::{pattern_matching, Window};
use crate::rules::RuleSet;
use crate::scheduler::{solve_conflicts, Policy, PolicyKind, Scheduler};
use serde::Serialize;
use std::collections::HashSet;

/// Applies every pick of `sch` to a copy of `ct`.
///
/// Substitution gate `k` replaces the gate at the pick's `k`-th matched
/// position; surplus substitution gates follow the last replaced position
/// and surplus matched positions are deleted. Gates in the gaps keep their
/// places. Identity gates from the substitution are kept.
pub fn substitute(ct: &Circuit, sch: &Scheduler) -> Result<Circuit, RewriteError> {
    let len = ct.len();
    let mut edits: Vec<Option<Vec<Instruction>>> = vec![None; len];
    // Reverse order, as the edit table never shifts positions.
    for pick in sch.picks.iter().rev() {
        let sub = &pick.rule.substitution;
        let n = pick.indices.len().min(sub.len());
        for &idx in &pick.indices {
            if idx >= len {
                return Err(RewriteError::IndexOutOfRange { index: idx, len });
            }
            if edits[idx].is_some() {
                return Err(RewriteError::Overlap(idx));
            }
            edits[idx] = Some(Vec::new());
        }
        for (k, t) in sub.iter().enumerate() {
            let ins = t.instantiate(&pick.mapping, &pick.bindings).ok_or_else(|| {
                RewriteError::Internal(format!("rule `{}` cannot instantiate its substitution", pick.rule.name))
            })?;
            let at = pick.indices[k.min(n - 1)];
            edits[at].as_mut().expect("marked above").push(ins);
        }
    }
    let mut out = Circuit::new(ct.num_qubits);
    for (ins, edit) in ct.instructions.iter().zip(edits) {
        match edit {
            None => out.instructions.push(ins.clone()),
            Some(repl) => out.instructions.extend(repl),
        }
    }
    Ok(out)
}

/// Match, schedule, substitute and drop identities once.
pub fn rewrite_once(
    ct: &Circuit,
    rs: &RuleSet,
    policy: &Policy,
    window: Window,
) -> Result<(Circuit, usize), RewriteError> {
    let cands = pattern_matching(ct, rs, window)?;
    if cands.is_empty() {
        return Ok((ct.clone(), 0));
    }
    let sch = solve_conflicts(ct, &cands, policy)?;
    let out = substitute(ct, &sch)?.remove_identities();
    Ok((out, sch.len()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OptimizeOptions {
    pub policy: Policy,
    pub max_rounds: usize,
    pub window: Window,
    /// Upper bound on internal rewrite passes within one round.
    pub pass_limit: usize,
    /// External rewrite passes per round.
    pub external_passes: usize,
}

impl Default for OptimizeOptions {
    fn default() -> Self {
        OptimizeOptions { policy: Policy::greedy(), max_rounds: 5, window: Window::Auto, pass_limit: 50, external_passes: 1 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RoundReport {
    pub round: usize,
    pub gates: usize,
    pub depth: usize,
    pub picks: usize,
    pub internal_picks: usize,
    pub external_picks: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct OptimizeReport {
    pub rounds: Vec<RoundReport>,
}

impl OptimizeReport {
    /// One JSON object per round, newline separated.
    pub fn to_json_lines(&self) -> String {
        self.rounds
            .iter()
            .map(|r| serde_json::to_string(r).expect("report serializes") + "\n")
            .collect()
    }
}

fn mix_seed(seed: u64, round: usize, phase: usize, pass: usize) -> u64 {
    let mut x = seed ^ ((round as u64) << 40) ^ ((phase as u64) << 32) ^ pass as u64;
    // splitmix64 finalizer
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Rewrites with `rs` until nothing matches, a state repeats, or the pass
/// limit is hit. On a repeat the smallest visited circuit is kept.
fn run_phase(
    ct: Circuit,
    rs: &RuleSet,
    opts: &OptimizeOptions,
    limit: usize,
    round: usize,
    phase: usize,
) -> Result<(Circuit, usize), RewriteError> {
    if rs.is_empty() {
        return Ok((ct, 0));
    }
    let mut seen: HashSet<Circuit> = HashSet::new();
    let mut cur = ct;
    let mut picks = 0;
    let mut best = cur.clone();
    for pass in 0..limit {
        let policy = match opts.policy.kind {
            PolicyKind::Stochastic => opts.policy.with_seed(mix_seed(opts.policy.seed, round, phase, pass)),
            _ => opts.policy,
        };
        let (next, n) = rewrite_once(&cur, rs, &policy, opts.window)?;
        if n == 0 {
            return Ok((next, picks));
        }
        picks += n;
        seen.insert(std::mem::replace(&mut cur, next));
        if (cur.len(), cur.depth()) < (best.len(), best.depth()) {
            best = cur.clone();
        }
        if seen.contains(&cur) {
            return Ok((best, picks));
        }
    }
    Ok((cur, picks))
}

/// Alternates internal and external phases for up to `max_rounds` rounds,
/// stopping early once a round changes nothing.
pub fn optimize(
    ct: &Circuit,
    internal: &RuleSet,
    external: &RuleSet,
    opts: &OptimizeOptions,
) -> Result<(Circuit, OptimizeReport), RewriteError> {
    if opts.max_rounds == 0 {
        return Err(RewriteError::Internal("max_rounds must be at least 1".into()));
    }
    let mut cur = ct.remove_identities();
    let mut report = OptimizeReport::default();
    for round in 0..opts.max_rounds {
        let start = cur.clone();
        let (after_internal, ip) = run_phase(cur, internal, opts, opts.pass_limit, round, 0)?;
        let (after_external, ep) = run_phase(after_internal, external, opts, opts.external_passes, round, 1)?;
        cur = after_external;
        report.rounds.push(RoundReport {
            round: round + 1,
            gates: cur.len(),
            depth: cur.depth(),
            picks: ip + ep,
            internal_picks: ip,
            external_picks: ep,
        });
        if ip + ep == 0 || cur == start {
            break;
        }
    }
    Ok((cur, report))
}

/// Runs [`optimize`] `tries` times with seeds `seed, seed + 1, ...` when the
/// policy is stochastic, once otherwise. The kept run has the smallest
/// depth, then gate count, then try index.
pub fn optimize_best_of(
    ct: &Circuit,
    internal: &RuleSet,
    external: &RuleSet,
    opts: &OptimizeOptions,
    tries: usize,
) -> Result<(Circuit, OptimizeReport, usize), RewriteError> {
    let tries = if opts.policy.kind == PolicyKind::Stochastic { tries.max(1) } else { 1 };
    let mut best: Option<(Circuit, OptimizeReport, usize)> = None;
    for t in 0..tries {
        let mut o = *opts;
        o.policy = o.policy.with_seed(opts.policy.seed.wrapping_add(t as u64));
        let (c, rep) = optimize(ct, internal, external, &o)?;
        let better = match &best {
            None => true,
            Some((b, _, _)) => (c.depth(), c.len()) < (b.depth(), b.len()),
        };
        if better {
            best = Some((c, rep, t));
        }
    }
    Ok(best.expect("at least one try"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gate::GateKind::*;
    use crate::matcher::check_qubit_condition;
    use crate::qasm::parse_qasm;
    use crate::rules::{RuleSet, RuleSetKind};
    use std::sync::Arc;

    fn xcx7() -> Circuit {
        parse_qasm(
            "OPENQASM 2.0; qreg q[3]; x q[2]; x q[2]; cx q[0],q[1]; cx q[0],q[2]; cx q[0],q[1]; x q[2]; x q[0];",
        )
        .unwrap()
    }

    #[test]
    fn xcx7_greedy_round() {
        let (out, n) = rewrite_once(&xcx7(), &RuleSet::builtin_fig4(), &Policy::greedy(), Window::Unbounded).unwrap();
        assert_eq!(n, 2);
        assert_eq!(out.len(), 3);
        assert_eq!(out.depth(), 2);
        assert_eq!(out.instructions[0], Instruction::gate(Cx, &[0, 2]));
    }

    #[test]
    fn no_match_is_identity() {
        let c = parse_qasm("OPENQASM 2.0; qreg q[2]; h q[0]; cx q[0],q[1];").unwrap();
        let (out, n) = rewrite_once(&c, &RuleSet::builtin_fig4(), &Policy::greedy(), Window::Auto).unwrap();
        assert_eq!((n, out), (0, c));
    }

    #[test]
    fn interleaved_picks_edit_in_place() {
        // x q0, x q1, x q0, x q1: two x_cancel picks with interleaved indices.
        let c = parse_qasm("OPENQASM 2.0; qreg q[2]; x q[0]; x q[1]; x q[0]; x q[1];").unwrap();
        let (out, n) = rewrite_once(&c, &RuleSet::builtin_fig4(), &Policy::greedy(), Window::Unbounded).unwrap();
        assert_eq!(n, 2);
        assert!(out.is_empty());
    }

    #[test]
    fn longer_substitution_inserts_after_last_replaced() {
        let rs = RuleSet::builtin("internal").unwrap();
        let rule = Arc::clone(rs.get("h_s_h").unwrap());
        let c = parse_qasm("OPENQASM 2.0; qreg q[2]; h q[0]; x q[1]; s q[0]; h q[0]; x q[1];").unwrap();
        let s = vec![0, 2, 3];
        let (mapping, bindings) = check_qubit_condition(&s, &c, &rule).unwrap();
        let pick = crate::matcher::MatchCandidate { indices: s, rule, rule_index: 0, mapping, bindings, conflict: -1 };
        let out = substitute(&c, &Scheduler::new(vec![pick])).unwrap();
        assert_eq!(out.gate_sequence_string(), "SxhSx");
    }

    #[test]
    fn optimize_fixpoint_reports_single_round() {
        let c = parse_qasm("OPENQASM 2.0; qreg q[2]; h q[0]; cx q[0],q[1];").unwrap();
        let empty = RuleSet::empty("none", RuleSetKind::External);
        let (out, rep) = optimize(&c, &RuleSet::builtin_internal(), &empty, &OptimizeOptions::default()).unwrap();
        assert_eq!(out, c);
        assert_eq!(rep.rounds.len(), 1);
        assert_eq!(rep.rounds[0].picks, 0);
    }

    #[test]
    fn substitute_rejects_bad_schedulers() {
        let c = xcx7();
        let rs = RuleSet::builtin_fig4();
        let rule = Arc::clone(rs.get("x_cancel").unwrap());
        let mk = |s: Vec<usize>| crate::matcher::MatchCandidate {
            indices: s,
            rule: Arc::clone(&rule),
            rule_index: 0,
            mapping: vec![2],
            bindings: Default::default(),
            conflict: -1,
        };
        let overlap = Scheduler::new(vec![mk(vec![0, 1]), mk(vec![1, 5])]);
        assert_eq!(substitute(&c, &overlap).unwrap_err(), RewriteError::Overlap(1));
        let out_of_range = Scheduler::new(vec![mk(vec![0, 9])]);
        assert!(matches!(substitute(&c, &out_of_range), Err(RewriteError::IndexOutOfRange { .. })));
    }
}
