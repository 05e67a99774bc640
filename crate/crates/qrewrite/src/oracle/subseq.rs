//! Exhaustive subsequence enumeration, the reference for the matcher's DP.

use crate::error::OracleError;
use std::collections::BTreeSet;

/// Longest target sequence accepted by [`brute_subsequences`].
pub const MAX_TARGET_LEN: usize = 20;

/// Every strictly increasing index list `s` with `target[s[k]] == pattern[k]`
/// and, when `delta` is given, `s[last] - s[0] < delta`.
pub fn brute_subsequences(
    target: &[u8],
    pattern: &[u8],
    delta: Option<usize>,
) -> Result<BTreeSet<Vec<usize>>, OracleError> {
    if pattern.is_empty() {
        return Err(OracleError::Argument("empty pattern".into()));
    }
    if target.len() > MAX_TARGET_LEN {
        return Err(OracleError::Argument(format!(
            "target length {} exceeds the enumeration cap {MAX_TARGET_LEN}",
            target.len()
        )));
    }
    if delta == Some(0) {
        return Err(OracleError::Argument("delta must be at least 1".into()));
    }
    let mut out = BTreeSet::new();
    visit(target, pattern, delta, &mut |s| {
        out.insert(s.to_vec());
    });
    Ok(out)
}

/// Calls `f` on each index list [`brute_subsequences`] would return, in
/// lexicographic order, without the length cap.
pub fn visit(target: &[u8], pattern: &[u8], delta: Option<usize>, f: &mut impl FnMut(&[usize])) {
    let mut cur = Vec::with_capacity(pattern.len());
    walk(target, pattern, delta, 0, &mut cur, f);
}

fn walk(
    target: &[u8],
    pattern: &[u8],
    delta: Option<usize>,
    from: usize,
    cur: &mut Vec<usize>,
    f: &mut impl FnMut(&[usize]),
) {
    if cur.len() == pattern.len() {
        let span_ok = match (delta, cur.first(), cur.last()) {
            (Some(d), Some(a), Some(b)) => b - a < d,
            _ => true,
        };
        if span_ok {
            f(cur);
        }
        return;
    }
    for i in from..target.len() {
        if target[i] == pattern[cur.len()] {
            cur.push(i);
            walk(target, pattern, delta, i + 1, cur, f);
            cur.pop();
        }
    }
}

/// Outcome of [`check_grid`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridReport {
    pub checks: u64,
    /// First disagreement as `(target, pattern, delta)`.
    pub mismatch: Option<(Vec<u8>, Vec<u8>, Option<usize>)>,
}

fn word(code: usize, len: usize, alphabet: usize) -> Vec<u8> {
    let mut w = Vec::with_capacity(len);
    let mut c = code;
    for _ in 0..len {
        w.push(b'a' + (c % alphabet) as u8);
        c /= alphabet;
    }
    w
}

/// Patterns up to length `max_pattern` with symbols numbered in order of
/// first appearance. Every pattern is a renaming of exactly one of these.
fn canonical_patterns(max_pattern: usize, alphabet: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    for m in 1..=max_pattern {
        for code in 0..alphabet.pow(m as u32) {
            let p = word(code, m, alphabet);
            let mut next = b'a';
            let canonical = p.iter().all(|&c| {
                if c == next {
                    next += 1;
                }
                c < next
            });
            if canonical {
                out.push(p);
            }
        }
    }
    out
}

/// Compares `under_test` with exhaustive enumeration on every target of
/// length `0..=max_target` over `alphabet` symbols, every pattern up to
/// `max_pattern` up to symbol renaming, and every window in `deltas`.
pub fn check_grid(
    max_target: usize,
    max_pattern: usize,
    alphabet: usize,
    deltas: &[Option<usize>],
    under_test: impl Fn(&[u8], &[u8], Option<usize>) -> Vec<Vec<usize>>,
) -> GridReport {
    let patterns = canonical_patterns(max_pattern, alphabet);
    let mut checks = 0;
    for len in 0..=max_target {
        for code in 0..alphabet.pow(len as u32) {
            let t = word(code, len, alphabet);
            for p in &patterns {
                for &d in deltas {
                    checks += 1;
                    let got = under_test(&t, p, d);
                    let mut k = 0;
                    let mut same = true;
                    visit(&t, p, d, &mut |s| {
                        same &= got.get(k).is_some_and(|g| g.as_slice() == s);
                        k += 1;
                    });
                    if !same || k != got.len() {
                        return GridReport { checks, mismatch: Some((t, p.clone(), d)) };
                    }
                }
            }
        }
    }
    GridReport { checks, mismatch: None }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[&[usize]]) -> BTreeSet<Vec<usize>> {
        v.iter().map(|s| s.to_vec()).collect()
    }

    #[test]
    fn hand_enumerations() {
        assert_eq!(brute_subsequences(b"xxcccxx", b"cc", None).unwrap(), set(&[&[2, 3], &[2, 4], &[3, 4]]));
        assert_eq!(brute_subsequences(b"aaa", b"aa", Some(2)).unwrap(), set(&[&[0, 1], &[1, 2]]));
        assert!(brute_subsequences(b"abc", b"", None).is_err());
        assert!(brute_subsequences(&[b'a'; 21], b"a", None).is_err());
    }

    #[test]
    fn canonical_pattern_counts() {
        // Set partitions of 1..=4 elements into at most three blocks.
        assert_eq!(canonical_patterns(4, 3).len(), 1 + 2 + 5 + 14);
    }

    #[test]
    fn grid_catches_a_wrong_enumerator() {
        let r = check_grid(3, 2, 2, &[None], |_, _, _| Vec::new());
        assert!(r.mismatch.is_some());
    }
}
