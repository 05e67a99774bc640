//! `qrewrite` command-line front end.
//!
//! Reports go to stdout as JSON with a `"schema": 1` field; diagnostics go
//! to stderr. Exit codes: 0 success, 1 usage, 2 parse error, 3 verification
//! failure, 4 capacity exceeded.

use clap::{Args, Parser, Subcommand};
use qrewrite::gate::GateKind;
use qrewrite::oracle::{circuit_unitary, equiv_up_to_phase, gen_circuit, GenConfig};
use qrewrite::{
    optimize_best_of, parse_qasm_with, serialize_qasm, Circuit, OptimizeOptions, OracleError, Policy, PolicyKind,
    QasmOptions, RewriteError, RuleSet, RuleSetKind, Window,
};
use serde_json::json;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "qrewrite", version, about = "Subsequence-based quantum circuit rewriting")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the accepted match candidates of a rule set.
    Match {
        circuit: PathBuf,
        #[arg(long)]
        rules: String,
        /// Match span bound, or `inf`. Defaults to four times the pattern length.
        #[arg(long)]
        delta: Option<String>,
    },
    /// Rewrite a circuit with a rule set, internal rules included unless disabled.
    Rewrite(RewriteArgs),
    /// Same as `rewrite`.
    Optimize(RewriteArgs),
    /// Gate counts, depth and densities.
    Stats { circuit: PathBuf },
    /// Check two circuits for equality up to global phase.
    Verify {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Generate a random layered circuit.
    Gen {
        #[arg(long)]
        qubits: usize,
        #[arg(long)]
        layers: usize,
        #[arg(long, default_value_t = 0.0)]
        d1: f64,
        #[arg(long, default_value_t = 0.0)]
        d2: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short = 'o', long)]
        output: PathBuf,
    },
}

#[derive(Args)]
struct RewriteArgs {
    circuit: PathBuf,
    /// Built-in set name (internal, surface17, fig4, ibm) or a rule file.
    #[arg(long)]
    rules: String,
    #[arg(long, default_value = "greedy")]
    policy: PolicyKind,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Stochastic runs to try, with seeds seed, seed+1, ...
    #[arg(long, default_value_t = 5)]
    tries: usize,
    #[arg(long)]
    delta: Option<String>,
    #[arg(long, default_value_t = 5)]
    rounds: usize,
    #[arg(long)]
    no_internal: bool,
    #[arg(short = 'o', long)]
    output: Option<PathBuf>,
}

struct Failure {
    code: u8,
    msg: String,
}

impl Failure {
    fn usage(msg: impl Into<String>) -> Self {
        Failure { code: 1, msg: msg.into() }
    }

    fn parse(msg: impl Into<String>) -> Self {
        Failure { code: 2, msg: msg.into() }
    }
}

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Self {
        let code = match e {
            OracleError::Capacity { .. } => 4,
            _ => 1,
        };
        Failure { code, msg: e.to_string() }
    }
}

impl From<RewriteError> for Failure {
    fn from(e: RewriteError) -> Self {
        let code = match e {
            RewriteError::QueueCap(_) => 4,
            RewriteError::BadWindow | RewriteError::EmptyPattern => 1,
            _ => 3,
        };
        Failure { code, msg: e.to_string() }
    }
}

type CmdResult = Result<serde_json::Value, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn load_circuit(path: &Path, opts: QasmOptions) -> Result<Circuit, Failure> {
    parse_qasm_with(&read(path)?, opts).map_err(|e| Failure::parse(format!("{}: {e}", path.display())))
}

fn load_rules(spec: &str) -> Result<RuleSet, Failure> {
    if let Some(rs) = RuleSet::builtin(spec) {
        return Ok(rs);
    }
    let path = Path::new(spec);
    if !path.exists() {
        return Err(Failure::usage(format!(
            "`{spec}` is neither a built-in rule set ({}) nor a file",
            qrewrite::rules::BUILTIN_NAMES.join(", ")
        )));
    }
    let rs = RuleSet::from_json(spec, RuleSetKind::External, &read(path)?)
        .map_err(|e| Failure::parse(format!("{spec}: {e}")))?;
    let (rs, report) = rs.into_validated()?;
    if !report.all_passed() {
        return Err(Failure {
            code: 3,
            msg: format!("{spec}: rules not equivalent to their patterns: {}", report.failures().join(", ")),
        });
    }
    Ok(rs)
}

fn qasm_options(sets: &[&RuleSet]) -> QasmOptions {
    QasmOptions { allow_u2_u3: sets.iter().any(|rs| rs.uses_gate(GateKind::U2) || rs.uses_gate(GateKind::U3)) }
}

fn parse_window(delta: Option<&str>) -> Result<Window, Failure> {
    match delta {
        None => Ok(Window::Auto),
        Some("inf" | "unbounded") => Ok(Window::Unbounded),
        Some(s) => match s.parse::<usize>() {
            Ok(k) if k >= 1 => Ok(Window::Span(k)),
            _ => Err(Failure::usage(format!("--delta must be a positive integer or `inf`, got `{s}`"))),
        },
    }
}

fn summary(c: &Circuit) -> serde_json::Value {
    json!({ "gates": c.len(), "depth": c.depth() })
}

fn cmd_match(circuit: &Path, rules: &str, delta: Option<&str>) -> CmdResult {
    let rs = load_rules(rules)?;
    let window = parse_window(delta)?;
    let c = load_circuit(circuit, qasm_options(&[&rs]))?;
    let mut cands = qrewrite::pattern_matching(&c, &rs, window)?;
    qrewrite::find_conflicts(&mut cands);
    let reports: Vec<_> = cands.iter().map(|c| c.report()).collect();
    Ok(json!({ "schema": 1, "rules": rs.name, "candidates": reports }))
}

fn cmd_rewrite(a: &RewriteArgs) -> CmdResult {
    let external = load_rules(&a.rules)?;
    let internal =
        if a.no_internal { RuleSet::empty("none", RuleSetKind::Internal) } else { RuleSet::builtin_internal() };
    if a.rounds == 0 {
        return Err(Failure::usage("--rounds must be at least 1"));
    }
    let window = parse_window(a.delta.as_deref())?;
    let c = load_circuit(&a.circuit, qasm_options(&[&external, &internal]))?;
    let policy = Policy { kind: a.policy, seed: a.seed, ..Policy::greedy() };
    let opts = OptimizeOptions { policy, max_rounds: a.rounds, window, ..Default::default() };
    let (out, report, try_index) = optimize_best_of(&c, &internal, &external, &opts, a.tries)?;
    if let Some(path) = &a.output {
        write(path, &serialize_qasm(&out))?;
    }
    Ok(json!({
        "schema": 1,
        "rules": external.name,
        "internal": !a.no_internal,
        "policy": a.policy,
        "seed": a.seed.wrapping_add(try_index as u64),
        "input": summary(&c),
        "output": summary(&out),
        "rounds": report.rounds,
    }))
}

fn cmd_stats(circuit: &Path) -> CmdResult {
    let c = load_circuit(circuit, QasmOptions { allow_u2_u3: true })?;
    let m = c.metrics();
    Ok(json!({
        "schema": 1,
        "n": m.n,
        "gates": m.total,
        "m1": m.m1,
        "m2": m.m2,
        "m3": m.m3,
        "depth": m.depth,
        "d1": m.d1,
        "d2": m.d2,
    }))
}

fn cmd_verify(a: &Path, b: &Path, tol: f64) -> CmdResult {
    let opts = QasmOptions { allow_u2_u3: true };
    let (ca, cb) = (load_circuit(a, opts)?, load_circuit(b, opts)?);
    if ca.num_qubits != cb.num_qubits {
        return Err(Failure {
            code: 3,
            msg: format!("qubit counts differ: {} vs {}", ca.num_qubits, cb.num_qubits),
        });
    }
    let (ok, residual) = equiv_up_to_phase(&circuit_unitary(&ca)?, &circuit_unitary(&cb)?, tol)?;
    let report = json!({ "schema": 1, "equivalent": ok, "residual": residual, "n": ca.num_qubits });
    if ok {
        Ok(report)
    } else {
        println!("{report}");
        Err(Failure { code: 3, msg: format!("circuits differ (residual {residual:.3e})") })
    }
}

fn run(cli: Cli) -> CmdResult {
    match cli.command {
        Command::Match { circuit, rules, delta } => cmd_match(&circuit, &rules, delta.as_deref()),
        Command::Rewrite(a) | Command::Optimize(a) => cmd_rewrite(&a),
        Command::Stats { circuit } => cmd_stats(&circuit),
        Command::Verify { a, b, tol } => cmd_verify(&a, &b, tol),
        Command::Gen { qubits, layers, d1, d2, seed, output } => {
            let c = gen_circuit(qubits, layers, d1, d2, seed, &GenConfig::default())?;
            write(&output, &serialize_qasm(&c))?;
            let m = c.metrics();
            Ok(json!({ "schema": 1, "n": m.n, "gates": m.total, "depth": m.depth, "d1": m.d1, "d2": m.d2 }))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(report) => {
            println!("{report}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
