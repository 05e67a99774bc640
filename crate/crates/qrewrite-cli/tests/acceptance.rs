//! Acceptance criteria 1-8, one PASS/FAIL line each.
//!
//! Exits 0 after reporting; with `ACCEPTANCE_STRICT=1` any FAIL exits 1.

use qrewrite::gate::GateKind;
use qrewrite::oracle::{check_grid, circuit_unitary, equiv_up_to_phase, gen_circuit, GenConfig};
use qrewrite::rules::{validate, BUILTIN_NAMES};
use qrewrite::scheduler::precise_schedulers;
use qrewrite::{
    benchmarks, distinct_subsequence, optimize, optimize_best_of, pattern_matching, rewrite_once, serialize_qasm,
    solve_conflicts, substitute, Circuit, OptimizeOptions, Policy, RuleSet, RuleSetKind, Window,
};
use std::collections::BTreeSet;
use std::time::{Duration, Instant};

const TOL: f64 = 1e-9;
const G_SUR: [GateKind; 5] = [GateKind::X, GateKind::Y, GateKind::Rx, GateKind::Ry, GateKind::Cz];

// (name, g1, d1) for the decomposition without optimization.
const SWEEP: [(&str, usize, usize); 6] = [
    ("toff_nc3", 135, 64),
    ("toff_nc4", 225, 104),
    ("toff_nc5", 315, 144),
    ("toff_barenco3", 174, 86),
    ("mod5_4", 187, 97),
    ("vbe_adder3", 450, 194),
];

struct Line {
    ok: bool,
    text: String,
}

fn line(ok: bool, text: String) -> Line {
    Line { ok, text }
}

/// Input/output pairs whose semantics criterion 6 checks.
#[derive(Default)]
struct Rewrites {
    pairs: Vec<(String, Circuit, Circuit)>,
}

impl Rewrites {
    fn add(&mut self, label: &str, a: &Circuit, b: &Circuit) {
        self.pairs.push((label.to_string(), a.clone(), b.clone()));
    }
}

fn no_rules() -> RuleSet {
    RuleSet::empty("none", RuleSetKind::Internal)
}

fn criterion1(xcx7: &Circuit) -> (Line, Duration) {
    let t = Instant::now();
    let cands = pattern_matching(xcx7, &RuleSet::builtin_fig4(), Window::Unbounded).unwrap();
    let elapsed = t.elapsed();
    let sets = |rule: &str| -> BTreeSet<Vec<usize>> {
        cands.iter().filter(|c| c.rule.name == rule).map(|c| c.indices.clone()).collect()
    };
    let (xx, cc, ccc, xcx) = (sets("x_cancel"), sets("cx_cancel"), sets("cx_reassociate"), sets("x_cx_x"));
    // X(q2) at 0 and 1 are interchangeable.
    let swap01 = |s: &Vec<usize>| -> Vec<usize> {
        let mut v: Vec<usize> = s.iter().map(|&i| if i == 0 { 1 } else if i == 1 { 0 } else { i }).collect();
        v.sort();
        v
    };
    let variants_ok = |got: &BTreeSet<Vec<usize>>, listed: &[usize]| {
        let listed = listed.to_vec();
        got.contains(&listed) && got.iter().all(|s| *s == listed || swap01(s) == listed || overlaps_listed(s, &listed))
    };
    let ok = variants_ok(&xx, &[0, 1])
        && cc == BTreeSet::from([vec![2, 4]])
        && ccc.is_empty()
        && variants_ok(&xcx, &[1, 3, 5])
        && elapsed < Duration::from_secs(1);
    let text = format!("7-gate X/CX example matching: xx {xx:?}, cc {cc:?}, ccc {ccc:?}, xcx {xcx:?}; {elapsed:.2?} (< 1 s)");
    (line(ok, text), elapsed)
}

/// Extra X pairs must share an X gate with the listed pair or its variant.
fn overlaps_listed(s: &[usize], listed: &[usize]) -> bool {
    s.iter().any(|i| listed.contains(i) || (*i <= 1 && listed.iter().any(|j| *j <= 1)))
}

fn criterion2(xcx7: &Circuit, rw: &mut Rewrites) -> Line {
    let cands = pattern_matching(xcx7, &RuleSet::builtin_fig4(), Window::Unbounded).unwrap();
    let mut shapes = BTreeSet::new();
    for sch in precise_schedulers(&cands, 10_000).unwrap() {
        let out = substitute(xcx7, &sch).unwrap().remove_identities();
        shapes.insert((out.len(), out.depth()));
        rw.add("xcx7 scheduler", xcx7, &out);
    }
    let best = substitute(xcx7, &solve_conflicts(xcx7, &cands, &Policy::precise()).unwrap())
        .unwrap()
        .remove_identities();
    rw.add("xcx7 precise", xcx7, &best);
    let gates: BTreeSet<usize> = shapes.iter().map(|s| s.0).collect();
    let depths: BTreeSet<usize> = shapes.iter().map(|s| s.1).collect();
    let ok = gates == BTreeSet::from([3]) && depths == BTreeSet::from([2, 3]) && best.depth() == 2;
    line(
        ok,
        format!(
            "7-gate X/CX example schedulers: (gates, depth) {shapes:?}; precise picks {} gates, depth {}",
            best.len(),
            best.depth()
        ),
    )
}

/// Greedy and stochastic best-of-5 with the internal library enabled; keeps
/// the smaller gate count, then depth.
fn optimize_both(c: &Circuit, external: &RuleSet) -> (Circuit, String) {
    let internal = RuleSet::builtin_internal();
    let greedy = OptimizeOptions { window: Window::Unbounded, ..Default::default() };
    let (g, _) = optimize(c, &internal, external, &greedy).unwrap();
    let stoch = OptimizeOptions { policy: Policy::stochastic(0), ..greedy };
    let (s, _, t) = optimize_best_of(c, &internal, external, &stoch, 5).unwrap();
    let detail = format!("greedy {}/{}, stochastic best-of-5 {}/{} (seed {t})", g.len(), g.depth(), s.len(), s.depth());
    if (s.len(), s.depth()) < (g.len(), g.depth()) {
        (s, detail)
    } else {
        (g, detail)
    }
}

fn criterion3(rw: &mut Rewrites, artifacts: &mut Vec<String>) -> Line {
    let c = benchmarks::benchmark("toff_nc3").unwrap();
    let sur = RuleSet::builtin_surface17();
    let (g0, _) = rewrite_once(&c, &sur.subset(&["ccz_to_t_cx"]), &Policy::greedy(), Window::Auto).unwrap();
    let (g1, _) = optimize(&c, &no_rules(), &sur, &OptimizeOptions::default()).unwrap();
    let (g2, detail) = optimize_both(&c, &sur);
    rw.add("toff_nc3 g0", &c, &g0);
    rw.add("toff_nc3 g1", &c, &g1);
    rw.add("toff_nc3 g2", &c, &g2);
    artifacts.extend([serialize_qasm(&g0), serialize_qasm(&g1), serialize_qasm(&g2)]);
    let closed = g1.gate_kinds().iter().chain(&g2.gate_kinds()).all(|g| G_SUR.contains(g));
    let ok = g0.len() == 45
        && (g1.len(), g1.depth()) == (135, 64)
        && g2.len() <= 95
        && g2.depth() <= 50
        && closed;
    line(
        ok,
        format!(
            "Toff-NC3 on Surface-17: g0 {} (= 45), g1 {} / d1 {} (= 135 / 64), with internal rules {} / {} (<= 95 / 50) [{detail}], gate set closed: {closed}",
            g0.len(),
            g1.len(),
            g1.depth(),
            g2.len(),
            g2.depth()
        ),
    )
}

fn criterion4(artifacts: &mut Vec<String>) -> (Line, Circuit, Circuit) {
    let c = benchmarks::benchmark("xcx37").unwrap();
    let t = Instant::now();
    let opts = OptimizeOptions { policy: Policy::stochastic(0), window: Window::Unbounded, ..Default::default() };
    let (out, _, seed) = optimize_best_of(&c, &no_rules(), &RuleSet::builtin_fig4(), &opts, 5).unwrap();
    let elapsed = t.elapsed();
    artifacts.push(serialize_qasm(&out));
    let reduction = 1.0 - out.depth() as f64 / c.depth() as f64;
    let ok = out.len() <= 21 && reduction >= 0.15 && elapsed < Duration::from_secs(1);
    let text = format!(
        "37-gate X/CX example stochastic best-of-5: {} -> {} gates (<= 21), depth {} -> {} ({:.1}% >= 15%), best seed {seed}, {elapsed:.2?} (< 1 s)",
        c.len(),
        out.len(),
        c.depth(),
        out.depth(),
        100.0 * reduction
    );
    (line(ok, text), c, out)
}

fn criterion5(rw: &mut Rewrites, artifacts: &mut Vec<String>) -> Line {
    let t = Instant::now();
    let sur = RuleSet::builtin_surface17();
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, g1_want, d1_want) in SWEEP {
        let c = benchmarks::benchmark(name).unwrap();
        let (g1, _) = optimize(&c, &no_rules(), &sur, &OptimizeOptions::default()).unwrap();
        let (g2, _) = optimize_both(&c, &sur);
        let delta = (g1.len() as f64 - g2.len() as f64) / g1.len() as f64;
        let exact = (g1.len(), g1.depth()) == (g1_want, d1_want);
        ok &= exact && delta >= 0.30;
        parts.push(format!(
            "{name} g1 {}{} g2 {} d2 {} delta {:.1}%",
            g1.len(),
            if exact { "" } else { " (MISMATCH)" },
            g2.len(),
            g2.depth(),
            100.0 * delta
        ));
        if c.num_qubits <= 10 {
            rw.add(&format!("{name} g1"), &c, &g1);
            rw.add(&format!("{name} g2"), &c, &g2);
        }
        artifacts.extend([serialize_qasm(&g1), serialize_qasm(&g2)]);
    }
    let elapsed = t.elapsed();
    ok &= elapsed < Duration::from_secs(60);
    line(ok, format!("benchmark sweep (g1 exact, delta >= 30%): {}; {elapsed:.2?} (< 60 s)", parts.join("; ")))
}

/// X/CX circuits permute basis states; compares the two maps on every input.
fn classical_equal(a: &Circuit, b: &Circuit) -> Option<bool> {
    let reversible = |c: &Circuit| c.iter().all(|g| matches!(g.gate, GateKind::X | GateKind::Cx | GateKind::I));
    if !(reversible(a) && reversible(b)) || a.num_qubits != b.num_qubits || a.num_qubits > 20 {
        return None;
    }
    let run = |c: &Circuit, mut s: u32| {
        for g in c.iter() {
            match g.gate {
                GateKind::X => s ^= 1 << g.qubits[0],
                GateKind::Cx if s >> g.qubits[0] & 1 == 1 => s ^= 1 << g.qubits[1],
                _ => {}
            }
        }
        s
    };
    Some((0..1u32 << a.num_qubits).all(|s| run(a, s) == run(b, s)))
}

fn criterion6(rw: &Rewrites, xcx37: &(Circuit, Circuit)) -> Line {
    let mut worst: f64 = 0.0;
    let mut failed = Vec::new();
    for (label, a, b) in &rw.pairs {
        let (ok, res) = equiv_up_to_phase(&circuit_unitary(a).unwrap(), &circuit_unitary(b).unwrap(), TOL).unwrap();
        worst = worst.max(res);
        if !ok {
            failed.push(label.clone());
        }
    }
    let xcx37_ok = classical_equal(&xcx37.0, &xcx37.1) == Some(true);
    line(
        failed.is_empty() && xcx37_ok,
        format!(
            "semantics: {} rewrites on <= 10 qubits equal up to global phase (worst residual {worst:.1e}, failures {failed:?}); 37-gate X/CX example 16-qubit X/CX rewrite equal on all 65536 basis states: {xcx37_ok}",
            rw.pairs.len()
        ),
    )
}

fn criterion7() -> Line {
    let t = Instant::now();
    let grid = check_grid(12, 4, 3, &[Some(2), Some(4), None], |t, p, d| distinct_subsequence(t, p, d).unwrap());
    let grid_ok = grid.mismatch.is_none();

    let mut rules_checked = 0;
    let mut rules_ok = true;
    for name in BUILTIN_NAMES {
        let report = validate(&RuleSet::builtin(name).unwrap()).unwrap();
        rules_checked += report.checks.len();
        rules_ok &= report.all_passed();
    }

    let internal = RuleSet::builtin_internal();
    let sur = RuleSet::builtin_surface17();
    let wide = GenConfig {
        one_qubit: vec![
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
        ],
        two_qubit: vec![GateKind::Cx, GateKind::Cz, GateKind::Swap],
    };
    let mut unitary_ok = 0;
    for seed in 0..200u64 {
        let c = gen_circuit(5, 8, 0.4, 0.4, seed, &wide).unwrap();
        let policy = if seed % 2 == 0 { Policy::greedy() } else { Policy::stochastic(seed) };
        let external = if seed % 3 == 0 { sur.clone() } else { no_rules() };
        let opts = OptimizeOptions { policy, window: Window::Unbounded, ..Default::default() };
        let (out, _) = optimize(&c, &internal, &external, &opts).unwrap();
        let (ok, _) = equiv_up_to_phase(&circuit_unitary(&c).unwrap(), &circuit_unitary(&out).unwrap(), TOL).unwrap();
        unitary_ok += usize::from(ok);
    }

    let mut disjoint_ok = 0;
    let xcx = GenConfig {
        one_qubit: vec![GateKind::X, GateKind::H, GateKind::S, GateKind::T],
        two_qubit: vec![GateKind::Cx, GateKind::Swap],
    };
    for seed in 0..1000u64 {
        let c = gen_circuit(4, 10, 0.5, 0.4, seed, &xcx).unwrap();
        let cands = pattern_matching(&c, &internal, Window::Unbounded).unwrap();
        let policy = if seed % 2 == 0 { Policy::greedy() } else { Policy::stochastic(seed) };
        disjoint_ok += usize::from(solve_conflicts(&c, &cands, &policy).unwrap().is_index_disjoint());
    }
    let ok = grid_ok && rules_ok && unitary_ok == 200 && disjoint_ok == 1000;
    line(
        ok,
        format!(
            "properties: DP = enumeration on {} grid cases (mismatch {:?}); {rules_checked} built-in rules validated: {rules_ok}; {unitary_ok}/200 random 5-qubit optimize runs preserve the unitary; {disjoint_ok}/1000 schedulers index-disjoint; {:.1?}",
            grid.checks,
            grid.mismatch,
            t.elapsed()
        ),
    )
}

struct Run {
    lines: Vec<Line>,
    artifacts: Vec<String>,
}

fn criteria_1_to_6() -> Run {
    let xcx7 = benchmarks::benchmark("xcx7").unwrap();
    let mut rw = Rewrites::default();
    let mut artifacts = Vec::new();
    let (l1, _) = criterion1(&xcx7);
    let l2 = criterion2(&xcx7, &mut rw);
    let l3 = criterion3(&mut rw, &mut artifacts);
    let (l4, a8, b8) = criterion4(&mut artifacts);
    let l5 = criterion5(&mut rw, &mut artifacts);
    let l6 = criterion6(&rw, &(a8, b8));
    artifacts.extend([&l1, &l2].iter().map(|l| l.text.split(';').next().unwrap_or_default().to_string()));
    Run { lines: vec![l1, l2, l3, l4, l5, l6], artifacts }
}

fn main() {
    let first = criteria_1_to_6();
    let l7 = criterion7();
    let second = criteria_1_to_6();
    let same = first.artifacts == second.artifacts;
    let bytes: usize = first.artifacts.iter().map(String::len).sum();
    let l8 = line(
        same,
        format!("determinism: two runs of criteria 1-5 gave {} artifacts ({bytes} bytes), identical: {same}", first.artifacts.len()),
    );
    let mut all = first.lines;
    all.push(l7);
    all.push(l8);
    for (k, l) in all.iter().enumerate() {
        println!("criterion {}: {} {}", k + 1, if l.ok { "PASS" } else { "FAIL" }, l.text);
    }
    let failed = all.iter().filter(|l| !l.ok).count();
    println!("acceptance: {}/{} criteria pass", all.len() - failed, all.len());
    if failed > 0 && std::env::var("ACCEPTANCE_STRICT").is_ok_and(|v| v == "1") {
        std::process::exit(1);
    }
}
