//! Command-line surface for theta evaluation, argument reduction, and the
//! seeded verification suites.
//!
//! Output discipline: results go to standard output as JSON and are
//! byte-identical for identical inputs, flags and seed; human-readable
//! summaries and wall times go to standard error. Exit codes: 0 pass,
//! 2 input error, 3 numeric failure, 4 property violation.

use std::fs;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::Serialize;
use sha2::{Digest, Sha256};

use sjtheta::classical::{self, Gamma0Element};
use sjtheta::error::Error;
use sjtheta::linalg::principal_half_power;
use sjtheta::theta::{self, SiegelJacobiPoint};
use sjtheta::verify::{run_case, run_suite, ReplayRecord, Suite, SuiteConfig, SuiteReport};

const EXIT_INPUT: u8 = 2;
const EXIT_NUMERIC: u8 = 3;
const EXIT_VIOLATION: u8 = 4;

#[derive(Parser)]
#[command(name = "sjtheta", version, about = "Theta series on the Siegel-Jacobi space")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the theta series at a point read from a JSON file.
    Eval(EvalArgs),
    /// Run argument reduction on a point and print the trace.
    Reduce(ReduceArgs),
    /// Run a randomized verification suite.
    Verify(VerifyArgs),
    /// Check the half-integral-weight transformation formula for one
    /// Gamma_0(4) element at one point.
    Hecke(HeckeArgs),
}

#[derive(Args)]
struct EvalArgs {
    /// JSON file with {"omega": [[...]], "z": [[...]]}; complex entries are
    /// [re, im], real entries may be bare numbers.
    #[arg(long)]
    point: String,
    /// Certified bound on the truncation error of the result.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
}

#[derive(Args)]
struct ReduceArgs {
    #[arg(long)]
    point: String,
    /// Cap on the number of reduction moves.
    #[arg(long, default_value_t = 64)]
    max_steps: usize,
}

#[derive(Args)]
struct VerifyArgs {
    /// One of: action, cocycle, theorem, hecke, lemma, poisson.
    #[arg(long, conflicts_with = "replay")]
    suite: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    count: usize,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long, default_value_t = 1)]
    g: usize,
    #[arg(long, default_value_t = 1)]
    m: usize,
    #[arg(long, default_value_t = 8)]
    word_len: usize,
    /// Re-run a single failing case from a serialized replay record.
    #[arg(long)]
    replay: Option<String>,
}

#[derive(Args)]
struct HeckeArgs {
    #[arg(long)]
    a: i64,
    #[arg(long)]
    b: i64,
    #[arg(long)]
    c: i64,
    #[arg(long)]
    d: i64,
    /// Point in the upper half plane as "re,im".
    #[arg(long, default_value = "0.0,1.0")]
    tau: String,
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Eval(args) => cmd_eval(&args),
        Command::Reduce(args) => cmd_reduce(&args),
        Command::Verify(args) => cmd_verify(&args),
        Command::Hecke(args) => cmd_hecke(&args),
    }
}

fn input_error(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("input error: {msg}");
    ExitCode::from(EXIT_INPUT)
}

fn numeric_error(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("numeric failure: {msg}");
    ExitCode::from(EXIT_NUMERIC)
}

/// Classify library errors onto the exit-code contract.
fn error_exit(err: &Error) -> ExitCode {
    match err {
        Error::Singular { .. }
        | Error::BudgetExceeded { .. }
        | Error::ThetaTooSmall { .. }
        | Error::IntegerOverflow
        | Error::ValueOverflow { .. } => numeric_error(err),
        _ => input_error(err),
    }
}

fn read_point(path: &str) -> Result<SiegelJacobiPoint, ExitCode> {
    let text = fs::read_to_string(path).map_err(|e| input_error(format!("{path}: {e}")))?;
    serde_json::from_str(&text).map_err(|e| input_error(format!("{path}: {e}")))
}

#[derive(Serialize)]
struct EvalOutput {
    #[serde(with = "sjtheta::jsonio::complex_pair")]
    value: Complex64,
    tail_bound: f64,
    terms: u64,
    reduction_steps: usize,
    reduction_converged: bool,
}

fn cmd_eval(args: &EvalArgs) -> ExitCode {
    let point = match read_point(&args.point) {
        Ok(p) => p,
        Err(code) => return code,
    };
    if args.tol <= 0.0 {
        return input_error("--tol must be positive");
    }
    match theta::theta_with_trace(&point, args.tol) {
        Ok((value, trace)) => {
            let out = EvalOutput {
                value: value.value,
                tail_bound: value.tail_bound,
                terms: value.terms,
                reduction_steps: trace.steps.len(),
                reduction_converged: trace.converged,
            };
            println!("{}", serde_json::to_string(&out).expect("serializable"));
            eprintln!(
                "theta = {} + {}i (tail < {:.3e}, {} terms, {} reduction steps)",
                value.value.re,
                value.value.im,
                value.tail_bound,
                value.terms,
                trace.steps.len()
            );
            ExitCode::SUCCESS
        }
        Err(e) => error_exit(&e),
    }
}

fn cmd_reduce(args: &ReduceArgs) -> ExitCode {
    let point = match read_point(&args.point) {
        Ok(p) => p,
        Err(code) => return code,
    };
    match theta::reduce_point(&point, args.max_steps) {
        Ok(trace) => {
            println!("{}", serde_json::to_string(&trace).expect("serializable"));
            eprintln!(
                "{} steps, converged = {}, |multiplier| = {:.6e}",
                trace.steps.len(),
                trace.converged,
                trace.multiplier.norm()
            );
            ExitCode::SUCCESS
        }
        Err(e) => error_exit(&e),
    }
}

#[derive(Serialize)]
struct RunReport<'a> {
    command: String,
    inputs_digest: String,
    report: &'a SuiteReport,
}

fn cmd_verify(args: &VerifyArgs) -> ExitCode {
    let started = Instant::now();
    if let Some(path) = &args.replay {
        return cmd_verify_replay(path, started);
    }
    let Some(name) = &args.suite else {
        return input_error("--suite or --replay is required");
    };
    let Some(suite) = Suite::parse(name) else {
        return input_error(format!("unknown suite '{name}'"));
    };
    if args.tol <= 0.0 {
        return input_error("--tol must be positive");
    }
    if args.g == 0 || args.g > 4 || args.m == 0 || args.m > 4 {
        return input_error("--g and --m must be in 1..=4");
    }
    if args.word_len > 64 {
        return input_error("--word-len is capped at 64");
    }
    let cfg = SuiteConfig {
        suite,
        g: args.g,
        m: args.m,
        count: args.count,
        seed: args.seed,
        tol: args.tol,
        word_len: args.word_len,
    };
    let report = match run_suite(&cfg) {
        Ok(r) => r,
        Err(e) => return error_exit(&e),
    };
    emit_suite_report(&cfg, &report, started)
}

fn cmd_verify_replay(path: &str, started: Instant) -> ExitCode {
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => return input_error(format!("{path}: {e}")),
    };
    // Accept a single record or a list (e.g. the failures array of a report).
    let record: ReplayRecord = match serde_json::from_str(&text) {
        Ok(r) => r,
        Err(_) => match serde_json::from_str::<Vec<ReplayRecord>>(&text) {
            Ok(list) if !list.is_empty() => list[0].clone(),
            _ => return input_error(format!("{path}: not a replay record")),
        },
    };
    let cfg = record.config();
    let case = match run_case(&cfg, record.index) {
        Ok(c) => c,
        Err(e) => return error_exit(&e),
    };
    let pass = case.pass;
    let report = SuiteReport {
        suite: cfg.suite,
        g: cfg.g,
        m: cfg.m,
        seed: cfg.seed,
        tol: cfg.tol,
        word_len: cfg.word_len,
        count: 1,
        passes: if pass { 1 } else { 0 },
        failures: if pass { vec![] } else { vec![record] },
        cases: vec![case],
    };
    emit_suite_report(&cfg, &report, started)
}

fn emit_suite_report(cfg: &SuiteConfig, report: &SuiteReport, started: Instant) -> ExitCode {
    let command = format!(
        "verify --suite {} --g {} --m {} --count {} --seed {} --tol {:e} --word-len {}",
        report.suite.name(),
        report.g,
        report.m,
        report.count,
        report.seed,
        report.tol,
        report.word_len
    );
    let digest = digest_of(&command);
    let out = RunReport { command, inputs_digest: digest, report };
    println!("{}", serde_json::to_string(&out).expect("serializable"));
    eprintln!(
        "suite {} (g={}, m={}): {}/{} pass in {} ms",
        report.suite.name(),
        cfg.g,
        cfg.m,
        report.passes,
        report.count,
        started.elapsed().as_millis()
    );
    if report.passes == report.count {
        ExitCode::SUCCESS
    } else {
        for failure in &report.failures {
            eprintln!(
                "  case {} failed; replay with: {}",
                failure.index,
                serde_json::to_string(failure).expect("serializable")
            );
        }
        ExitCode::from(EXIT_VIOLATION)
    }
}

fn digest_of(text: &str) -> String {
    let hash = Sha256::digest(text.as_bytes());
    hash.iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Serialize)]
struct HeckeOutput {
    a: i64,
    b: i64,
    c: i64,
    d: i64,
    tau: [f64; 2],
    #[serde(with = "sjtheta::jsonio::complex_pair")]
    lhs: Complex64,
    #[serde(with = "sjtheta::jsonio::complex_pair")]
    rhs: Complex64,
    defect: f64,
    pass: bool,
}

fn cmd_hecke(args: &HeckeArgs) -> ExitCode {
    let tau = match parse_complex(&args.tau) {
        Some(t) => t,
        None => return input_error("--tau must be 're,im'"),
    };
    if tau.im <= 0.0 {
        return input_error("tau must lie in the upper half plane");
    }
    let gamma = match Gamma0Element::new(args.a, args.b, args.c, args.d, 4) {
        Ok(g) => g,
        Err(e) => return input_error(e),
    };
    let (a, b, c, d) = gamma.entries();
    let denom = tau * c as f64 + Complex64::new(d as f64, 0.0);
    let inner_tol = args.tol / (10.0 * (1.0 + denom.norm().sqrt()));
    let run = || -> Result<HeckeOutput, Error> {
        let lhs = classical::hecke_theta(gamma.apply(tau), inner_tol)?;
        let rhs = classical::epsilon_d(d)?.conj()
            * classical::kronecker_symbol(c, d) as f64
            * principal_half_power(denom, 1)?
            * classical::hecke_theta(tau, inner_tol)?;
        let defect = (lhs - rhs).norm();
        Ok(HeckeOutput { a, b, c, d, tau: [tau.re, tau.im], lhs, rhs, defect, pass: defect < args.tol })
    };
    match run() {
        Ok(out) => {
            println!("{}", serde_json::to_string(&out).expect("serializable"));
            eprintln!("defect = {:.3e}, pass = {}", out.defect, out.pass);
            if out.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_VIOLATION)
            }
        }
        Err(e) => error_exit(&e),
    }
}

fn parse_complex(text: &str) -> Option<Complex64> {
    let (re, im) = text.split_once(',')?;
    Some(Complex64::new(re.trim().parse().ok()?, im.trim().parse().ok()?))
}
