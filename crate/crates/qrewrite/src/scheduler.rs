//! Conflict detection and the three conflict-resolution policies.

use crate::circuit::Circuit;
use crate::error::RewriteError;
use crate::matcher::MatchCandidate;
use crate::rewriter::substitute;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::{BTreeMap, HashSet, VecDeque};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PolicyKind {
    Precise,
    Greedy,
    Stochastic,
}

impl std::str::FromStr for PolicyKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "precise" => Ok(PolicyKind::Precise),
            "greedy" => Ok(PolicyKind::Greedy),
            "stochastic" => Ok(PolicyKind::Stochastic),
            other => Err(format!("unknown policy `{other}`")),
        }
    }
}

pub const DEFAULT_QUEUE_CAP: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Policy {
    pub kind: PolicyKind,
    pub seed: u64,
    pub queue_cap: usize,
}

impl Policy {
    pub fn precise() -> Self {
        Policy { kind: PolicyKind::Precise, seed: 0, queue_cap: DEFAULT_QUEUE_CAP }
    }

    pub fn greedy() -> Self {
        Policy { kind: PolicyKind::Greedy, seed: 0, queue_cap: DEFAULT_QUEUE_CAP }
    }

    pub fn stochastic(seed: u64) -> Self {
        Policy { kind: PolicyKind::Stochastic, seed, queue_cap: DEFAULT_QUEUE_CAP }
    }

    pub fn with_seed(self, seed: u64) -> Self {
        Policy { seed, ..self }
    }
}

/// An index-disjoint selection of candidates, ordered by first index.
#[derive(Debug, Clone, Default)]
pub struct Scheduler {
    pub picks: Vec<MatchCandidate>,
}

impl Scheduler {
    pub fn new(mut picks: Vec<MatchCandidate>) -> Self {
        picks.sort_by(|a, b| a.indices.cmp(&b.indices));
        Scheduler { picks }
    }

    pub fn len(&self) -> usize {
        self.picks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.picks.is_empty()
    }

    pub fn is_index_disjoint(&self) -> bool {
        let mut seen = HashSet::new();
        self.picks.iter().flat_map(|p| &p.indices).all(|i| seen.insert(*i))
    }

    pub fn first_indices(&self) -> Vec<usize> {
        self.picks.iter().map(|p| p.first()).collect()
    }

    pub fn index_sets(&self) -> Vec<Vec<usize>> {
        self.picks.iter().map(|p| p.indices.clone()).collect()
    }
}

/// Candidates sharing one target index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConflictSet {
    pub index: usize,
    /// Positions in the candidate list.
    pub members: Vec<usize>,
}

/// One conflict set per target index held by two or more candidates, in
/// index order. Sets each candidate's `conflict` to the smallest index it
/// shares, leaving −1 on candidates that share none.
pub fn find_conflicts(cands: &mut [MatchCandidate]) -> Vec<ConflictSet> {
    let mut holders: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (k, c) in cands.iter().enumerate() {
        for &i in &c.indices {
            holders.entry(i).or_default().push(k);
        }
    }
    for c in cands.iter_mut() {
        c.conflict = -1;
    }
    let mut sets = Vec::new();
    for (index, members) in holders {
        if members.len() < 2 {
            continue;
        }
        for &k in &members {
            if cands[k].conflict < 0 {
                cands[k].conflict = index as i64;
            }
        }
        sets.push(ConflictSet { index, members });
    }
    sets
}

/// Depth, gate count, first indices, index sets.
type PreciseKey = (usize, usize, Vec<usize>, Vec<Vec<usize>>);

struct Conflicts<'a> {
    cands: &'a [MatchCandidate],
    overlaps: Vec<Vec<usize>>,
    holders: Vec<(usize, Vec<usize>)>,
}

impl<'a> Conflicts<'a> {
    fn new(cands: &'a [MatchCandidate]) -> Self {
        let mut holders: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (k, c) in cands.iter().enumerate() {
            for &i in &c.indices {
                holders.entry(i).or_default().push(k);
            }
        }
        let holders: Vec<(usize, Vec<usize>)> = holders.into_iter().filter(|(_, v)| v.len() > 1).collect();
        let mut overlaps = vec![Vec::new(); cands.len()];
        for (_, members) in &holders {
            for &a in members {
                for &b in members {
                    if a != b {
                        overlaps[a].push(b);
                    }
                }
            }
        }
        for o in &mut overlaps {
            o.sort_unstable();
            o.dedup();
        }
        Conflicts { cands, overlaps, holders }
    }

    /// Members of the leftmost index still held by two alive candidates,
    /// scanning from `*cursor`. Resolved indices never conflict again, so
    /// the cursor only moves forward.
    fn next_conflict(&self, alive: &[bool], cursor: &mut usize) -> Option<Vec<usize>> {
        while *cursor < self.holders.len() {
            let live: Vec<usize> = self.holders[*cursor].1.iter().copied().filter(|&k| alive[k]).collect();
            if live.len() > 1 {
                return Some(live);
            }
            *cursor += 1;
        }
        None
    }

    fn choose(&self, alive: &mut [bool], k: usize) {
        for &o in &self.overlaps[k] {
            alive[o] = false;
        }
    }

    fn scheduler(&self, alive: &[bool]) -> Scheduler {
        Scheduler::new(
            self.cands.iter().zip(alive).filter(|(_, &a)| a).map(|(c, _)| c.clone()).collect(),
        )
    }

    fn greedy_key(&self, k: usize) -> (usize, usize, &[usize]) {
        let c = &self.cands[k];
        (c.first(), c.rule_index, &c.indices)
    }
}

/// Resolves conflicts left to right under `policy`.
pub fn solve_conflicts(
    ct: &Circuit,
    cands: &[MatchCandidate],
    policy: &Policy,
) -> Result<Scheduler, RewriteError> {
    let conflicts = Conflicts::new(cands);
    match policy.kind {
        PolicyKind::Greedy => {
            let mut alive = vec![true; cands.len()];
            let mut cursor = 0;
            while let Some(members) = conflicts.next_conflict(&alive, &mut cursor) {
                let k = *members.iter().min_by_key(|&&k| conflicts.greedy_key(k)).expect("nonempty");
                conflicts.choose(&mut alive, k);
            }
            Ok(conflicts.scheduler(&alive))
        }
        PolicyKind::Stochastic => {
            let mut rng = ChaCha8Rng::seed_from_u64(policy.seed);
            let mut alive = vec![true; cands.len()];
            let mut cursor = 0;
            while let Some(members) = conflicts.next_conflict(&alive, &mut cursor) {
                let k = members[rng.gen_range(0..members.len())];
                conflicts.choose(&mut alive, k);
            }
            Ok(conflicts.scheduler(&alive))
        }
        PolicyKind::Precise => {
            let complete = enumerate_precise(&conflicts, cands.len(), policy.queue_cap)?;
            let mut best: Option<(PreciseKey, Scheduler)> = None;
            for alive in complete {
                let sch = conflicts.scheduler(&alive);
                let out = substitute(ct, &sch)?.remove_identities();
                let key = (out.depth(), out.len(), sch.first_indices(), sch.index_sets());
                if best.as_ref().is_none_or(|(k, _)| key < *k) {
                    best = Some((key, sch));
                }
            }
            Ok(best.map(|b| b.1).unwrap_or_default())
        }
    }
}

/// Every complete scheduler reachable by branching at each conflict.
pub fn precise_schedulers(cands: &[MatchCandidate], queue_cap: usize) -> Result<Vec<Scheduler>, RewriteError> {
    let conflicts = Conflicts::new(cands);
    Ok(enumerate_precise(&conflicts, cands.len(), queue_cap)?
        .into_iter()
        .map(|alive| conflicts.scheduler(&alive))
        .collect())
}

fn enumerate_precise(conflicts: &Conflicts<'_>, n: usize, queue_cap: usize) -> Result<Vec<Vec<bool>>, RewriteError> {
    let mut queue: VecDeque<(Vec<bool>, usize)> = VecDeque::new();
    let mut seen: HashSet<Vec<bool>> = HashSet::new();
    let mut complete = Vec::new();
    let start = vec![true; n];
    seen.insert(start.clone());
    queue.push_back((start, 0));
    while let Some((alive, mut cursor)) = queue.pop_front() {
        match conflicts.next_conflict(&alive, &mut cursor) {
            None => complete.push(alive),
            Some(members) => {
                for k in members {
                    let mut next = alive.clone();
                    conflicts.choose(&mut next, k);
                    if seen.insert(next.clone()) {
                        if seen.len() > queue_cap {
                            return Err(RewriteError::QueueCap(queue_cap));
                        }
                        queue.push_back((next, cursor));
                    }
                }
            }
        }
    }
    Ok(complete)
}
