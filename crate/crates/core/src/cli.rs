//! Command-line front end: eigenvalue queries, identity certificates,
//! decomposition listings, oracle cross-checks, and the acceptance sweep.
//!
//! Exit codes are a stable contract: 0 for success, 1 for a mathematical
//! violation, 2 for a usage or configuration problem. Rationals print as
//! `p/q` strings in every format, never as floats, and JSON output is
//! byte-stable for a fixed configuration and seed.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::casimir::{casimir_eigenvalue_closed, eigenvalue_report};
use crate::charmat::{
    invariant_scalars, prop1_sample, verify_prop1, verify_prop2, verify_theorem5_at,
    verify_theorem5_reduced, verify_theorem6_at, verify_theorem6_reduced, CharError,
    IdentityCertificate,
};
use crate::exact::Rat;
use crate::gt::build_module;
use crate::par::ExecMode;
use crate::sweep::{run_sweep, SweepConfig};
use crate::tensor::{decompose_by_weights, dimension_audit, lr_decompose, stability_check};
use crate::weights::{enumerate_partitions, HighestWeight};

/// Environment variable holding the hard cap on invariant orders.
pub const M_CAP_ENV: &str = "GLINF_M_CAP";
const DEFAULT_M_CAP: u32 = 12;

const EXIT_OK: i32 = 0;
const EXIT_VIOLATION: i32 = 1;
const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "glinf",
    version,
    about = "Casimir invariants and characteristic identities, exactly"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Eigenvalues of the Casimir invariants on one highest-weight module.
    Eigenvalues(EigenvaluesArgs),
    /// Certify a characteristic or split-Casimir identity.
    VerifyIdentity(VerifyIdentityArgs),
    /// Check the entry commutators, diagonal tails, and invariant scalars
    /// on one explicitly built module.
    VerifyInvariants(VerifyInvariantsArgs),
    /// Tensor-product decomposition with exact dimension audit.
    Decompose(DecomposeArgs),
    /// Cross-check the independent computation routes against each other.
    OracleCheck(OracleCheckArgs),
    /// Run the full acceptance battery.
    Sweep(SweepArgs),
}

#[derive(Args, Debug)]
struct CommonArgs {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct EigenvaluesArgs {
    /// Highest weight as comma-separated parts, e.g. "2,1"; empty or "0"
    /// means the trivial weight.
    #[arg(long, value_parser = parse_weight)]
    lambda: HighestWeight,
    /// Largest invariant order to report.
    #[arg(long, default_value_t = 6)]
    m_max: u32,
    /// Rank for the module-scalar validation leg.
    #[arg(long, value_name = "RANK")]
    n: Option<usize>,
    /// Also build the module and compare against its invariant scalars.
    #[arg(long)]
    validate: bool,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args, Debug)]
struct VerifyIdentityArgs {
    #[arg(long, value_parser = parse_weight)]
    lambda: HighestWeight,
    /// Second factor; present switches to the split-Casimir identity.
    #[arg(long, value_parser = parse_weight)]
    mu: Option<HighestWeight>,
    /// Verification rank; defaults to the natural rank of the identity.
    #[arg(long, value_name = "RANK")]
    n: Option<usize>,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args, Debug)]
struct VerifyInvariantsArgs {
    #[arg(long, value_parser = parse_weight)]
    lambda: HighestWeight,
    /// Rank to build at; defaults to depth + 3 so the tail checks bite.
    #[arg(long, value_name = "RANK")]
    n: Option<usize>,
    /// Largest invariant order to drive the checks to.
    #[arg(long, default_value_t = 3)]
    m_max: u32,
    /// Seed for sampled index tuples at ranks above 3.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args, Debug)]
struct DecomposeArgs {
    #[arg(long, value_parser = parse_weight)]
    lambda: HighestWeight,
    #[arg(long, value_parser = parse_weight)]
    mu: HighestWeight,
    /// Also rerun the stability and weight-convolution cross-checks.
    #[arg(long)]
    validate: bool,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args, Debug)]
struct OracleCheckArgs {
    /// Largest invariant order in the eigenvalue battery.
    #[arg(long, default_value_t = 6)]
    m_max: u32,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// Cap on invariant orders inside the battery.
    #[arg(long, default_value_t = 6)]
    m_max: u32,
    /// Seed for sampled checks.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Harness self-test: corrupt one generator and demand a failure.
    #[arg(long, hide = true)]
    inject_fault: bool,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
    Csv,
}

fn parse_weight(s: &str) -> Result<HighestWeight, String> {
    let trimmed = s.trim();
    if trimmed.is_empty() || trimmed == "0" {
        return Ok(HighestWeight::zero());
    }
    let parts: Result<Vec<i64>, _> = trimmed
        .split(',')
        .map(|p| p.trim().parse::<i64>())
        .collect();
    let parts = parts.map_err(|e| format!("weight part is not an integer: {e}"))?;
    HighestWeight::new(parts).map_err(|e| e.to_string())
}

fn hard_m_cap() -> u32 {
    std::env::var(M_CAP_ENV)
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_M_CAP)
}

struct Failure {
    message: String,
    code: i32,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            message: message.into(),
            code: EXIT_USAGE,
        }
    }

    fn violation(message: impl Into<String>) -> Self {
        Failure {
            message: message.into(),
            code: EXIT_VIOLATION,
        }
    }
}

/// Configuration problems exit 2, mathematical failures exit 1.
fn char_error_failure(e: CharError) -> Failure {
    let code = match &e {
        CharError::IdentityViolation { .. }
        | CharError::NotScalar { .. }
        | CharError::GradingViolation { .. } => EXIT_VIOLATION,
        _ => EXIT_USAGE,
    };
    Failure {
        message: e.to_string(),
        code,
    }
}

fn check_m_cap(m_max: u32) -> Result<(), Failure> {
    let cap = hard_m_cap();
    if m_max == 0 {
        return Err(Failure::usage("m-max must be at least 1"));
    }
    if m_max > cap {
        return Err(Failure::usage(format!(
            "m-max {m_max} exceeds the hard cap {cap} (override with {M_CAP_ENV})"
        )));
    }
    Ok(())
}

fn check_rank(n: Option<usize>, lambda: &HighestWeight) -> Result<(), Failure> {
    if let Some(n) = n {
        if n < lambda.depth() {
            return Err(Failure::usage(format!(
                "rank {n} cannot carry {lambda}, need at least {}",
                lambda.depth()
            )));
        }
    }
    Ok(())
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn to_json<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("reports always serialize");
    s.push('\n');
    s
}

fn render_table(title: &str, header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in rows {
        for (i, cell) in row.iter().enumerate() {
            widths[i] = widths[i].max(cell.len());
        }
    }
    let mut out = String::new();
    if !title.is_empty() {
        let _ = writeln!(out, "{title}");
    }
    let line =
        |cells: &[String], widths: &[usize]| -> String {
            cells
                .iter()
                .zip(widths)
                .map(|(c, w)| format!("{c:<w$}"))
                .collect::<Vec<_>>()
                .join("  ")
                .trim_end()
                .to_string()
        };
    let header_cells: Vec<String> = header.iter().map(|h| h.to_string()).collect();
    let _ = writeln!(out, "{}", line(&header_cells, &widths));
    let dashes: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
    let _ = writeln!(out, "{}", line(&dashes, &widths));
    for row in rows {
        let _ = writeln!(out, "{}", line(row, &widths));
    }
    out
}

fn csv_cell(cell: &str) -> String {
    if cell.contains([',', '"', '\n']) {
        format!("\"{}\"", cell.replace('"', "\"\""))
    } else {
        cell.to_string()
    }
}

fn render_csv(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{}", header.join(","));
    for row in rows {
        let cells: Vec<String> = row.iter().map(|c| csv_cell(c)).collect();
        let _ = writeln!(out, "{}", cells.join(","));
    }
    out
}

fn opt_rat(r: &Option<Rat>) -> String {
    r.as_ref().map(ToString::to_string).unwrap_or_default()
}

/// Entry point for the parsed command line; returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    let result = match cli.command {
        Command::Eigenvalues(args) => cmd_eigenvalues(args),
        Command::VerifyIdentity(args) => cmd_verify_identity(args),
        Command::VerifyInvariants(args) => cmd_verify_invariants(args),
        Command::Decompose(args) => cmd_decompose(args),
        Command::OracleCheck(args) => cmd_oracle_check(args),
        Command::Sweep(args) => cmd_sweep(args),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

#[derive(Serialize)]
struct EigenvalueRow {
    m: u32,
    closed: Rat,
    recursive: Rat,
    #[serde(skip_serializing_if = "Option::is_none")]
    geometric: Option<Rat>,
    #[serde(skip_serializing_if = "Option::is_none")]
    module: Option<Rat>,
    agree: bool,
}

#[derive(Serialize)]
struct EigenvalueDoc {
    lambda: HighestWeight,
    #[serde(skip_serializing_if = "Option::is_none")]
    n_validated: Option<usize>,
    rows: Vec<EigenvalueRow>,
}

fn cmd_eigenvalues(args: EigenvaluesArgs) -> Result<i32, Failure> {
    check_m_cap(args.m_max)?;
    check_rank(args.n, &args.lambda)?;
    let lambda = args.lambda;
    let module_scalars: Option<(usize, Vec<Rat>)> = if args.validate {
        let n = args.n.unwrap_or_else(|| lambda.depth().max(1));
        let rep = build_module(n, &lambda)
            .map_err(|e| Failure::usage(format!("cannot build the module: {e}")))?;
        let scalars =
            invariant_scalars(&rep, args.m_max, ExecMode::default()).map_err(char_error_failure)?;
        Some((n, scalars))
    } else {
        None
    };
    let mut rows = Vec::new();
    for m in 1..=args.m_max {
        let base = eigenvalue_report(&lambda, m);
        let module = module_scalars
            .as_ref()
            .map(|(_, s)| s[m as usize - 1].clone());
        let mut agree = base.agree;
        if let Some(g) = &base.oracle {
            agree = agree && *g == base.closed;
        }
        if let Some(v) = &module {
            agree = agree && *v == base.closed;
        }
        rows.push(EigenvalueRow {
            m,
            closed: base.closed,
            recursive: base.recursive,
            geometric: base.oracle,
            module,
            agree,
        });
    }
    let doc = EigenvalueDoc {
        lambda: lambda.clone(),
        n_validated: module_scalars.as_ref().map(|(n, _)| *n),
        rows,
    };
    let text = match args.common.format {
        Format::Json => to_json(&doc),
        Format::Csv => {
            let rows: Vec<Vec<String>> = doc
                .rows
                .iter()
                .map(|r| {
                    vec![
                        lambda.to_string(),
                        r.m.to_string(),
                        r.closed.to_string(),
                        r.recursive.to_string(),
                        opt_rat(&r.geometric),
                        opt_rat(&r.module),
                        r.agree.to_string(),
                    ]
                })
                .collect();
            render_csv(
                &["lambda", "m", "closed", "recursive", "geometric", "module", "agree"],
                &rows,
            )
        }
        Format::Table => {
            let rows: Vec<Vec<String>> = doc
                .rows
                .iter()
                .map(|r| {
                    vec![
                        r.m.to_string(),
                        r.closed.to_string(),
                        r.recursive.to_string(),
                        opt_rat(&r.geometric),
                        opt_rat(&r.module),
                        r.agree.to_string(),
                    ]
                })
                .collect();
            render_table(
                &format!("chi(I_m) on the module of {lambda}"),
                &["m", "closed", "recursive", "geometric", "module", "agree"],
                &rows,
            )
        }
    };
    emit(&args.common.out, &text)?;
    let offenders: Vec<u32> = doc.rows.iter().filter(|r| !r.agree).map(|r| r.m).collect();
    if offenders.is_empty() {
        Ok(EXIT_OK)
    } else {
        eprintln!("error: eigenvalue routes disagree at m = {offenders:?}");
        Ok(EXIT_VIOLATION)
    }
}

#[derive(Serialize)]
struct IdentityDoc {
    full: IdentityCertificate,
    reduced: IdentityCertificate,
}

fn certificate_rows(kind: &str, cert: &IdentityCertificate) -> Vec<Vec<String>> {
    cert.roots
        .iter()
        .zip(&cert.kernel_dims)
        .map(|(root, k)| {
            vec![
                kind.to_string(),
                cert.n.to_string(),
                root.to_string(),
                k.to_string(),
                cert.residual_zero.to_string(),
            ]
        })
        .collect()
}

fn cmd_verify_identity(args: VerifyIdentityArgs) -> Result<i32, Failure> {
    check_rank(args.n, &args.lambda)?;
    let lambda = args.lambda;
    let mode = ExecMode::default();
    let (full, reduced) = match &args.mu {
        None => {
            let natural = lambda.depth() + 1;
            let full = verify_theorem5_at(&lambda, args.n.unwrap_or(natural), mode)
                .map_err(char_error_failure)?;
            let reduced = verify_theorem5_reduced(&lambda, mode).map_err(char_error_failure)?;
            (full, reduced)
        }
        Some(mu) => {
            let natural = lambda.depth() + mu.depth();
            let full = verify_theorem6_at(&lambda, mu, args.n.unwrap_or(natural), mode)
                .map_err(char_error_failure)?;
            let reduced =
                verify_theorem6_reduced(&lambda, mu, mode).map_err(char_error_failure)?;
            (full, reduced)
        }
    };
    let doc = IdentityDoc { full, reduced };
    let text = match args.common.format {
        Format::Json => to_json(&doc),
        Format::Csv => {
            let mut rows = certificate_rows("full", &doc.full);
            rows.extend(certificate_rows("reduced", &doc.reduced));
            render_csv(&["identity", "n", "root", "kernel_dim", "residual_zero"], &rows)
        }
        Format::Table => {
            let mut rows = certificate_rows("full", &doc.full);
            rows.extend(certificate_rows("reduced", &doc.reduced));
            let title = match &doc.full.mu {
                Some(mu) => format!(
                    "characteristic identity for {} (x) {mu}",
                    doc.full.lambda
                ),
                None => format!("characteristic identity for {}", doc.full.lambda),
            };
            render_table(
                &title,
                &["identity", "n", "root", "kernel(partial)", "residual_zero"],
                &rows,
            )
        }
    };
    emit(&args.common.out, &text)?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct CheckRow {
    check: String,
    ok: bool,
    detail: String,
}

#[derive(Serialize)]
struct InvariantsDoc {
    lambda: HighestWeight,
    n: usize,
    rows: Vec<CheckRow>,
}

fn cmd_verify_invariants(args: VerifyInvariantsArgs) -> Result<i32, Failure> {
    check_m_cap(args.m_max)?;
    check_rank(args.n, &args.lambda)?;
    let lambda = args.lambda;
    let n = args.n.unwrap_or(lambda.depth() + 3);
    let mode = ExecMode::default();
    let rep = build_module(n, &lambda)
        .map_err(|e| Failure::usage(format!("cannot build the module: {e}")))?;
    let mut rows = Vec::new();

    let commutation = rep.verify_commutation(mode);
    rows.push(CheckRow {
        check: "generator commutation".into(),
        ok: commutation.is_ok(),
        detail: commutation
            .err()
            .map(|e| e.to_string())
            .unwrap_or_else(|| format!("all relations hold on dim {}", rep.dim())),
    });

    let samples = prop1_sample(n, args.seed);
    for m in 1..=args.m_max {
        let ok = verify_prop1(&rep, m, &samples, mode).map_err(char_error_failure)?;
        rows.push(CheckRow {
            check: format!("entry commutators, m = {m}"),
            ok,
            detail: format!("{} index tuples", samples.len()),
        });
    }
    for m in 2..=args.m_max.max(2) {
        let ok = verify_prop2(&rep, m, mode).map_err(char_error_failure)?;
        rows.push(CheckRow {
            check: format!("diagonal tails, m = {m}"),
            ok,
            detail: "entries beyond the weight support act by the lower invariant".into(),
        });
    }
    let scalars = invariant_scalars(&rep, args.m_max, mode).map_err(char_error_failure)?;
    for (idx, s) in scalars.iter().enumerate() {
        let m = idx as u32 + 1;
        let expected = casimir_eigenvalue_closed(&lambda, m);
        rows.push(CheckRow {
            check: format!("invariant scalar, m = {m}"),
            ok: *s == expected,
            detail: format!("module gives {s}, closed form gives {expected}"),
        });
    }

    let doc = InvariantsDoc {
        lambda: lambda.clone(),
        n,
        rows,
    };
    let text = match args.common.format {
        Format::Json => to_json(&doc),
        Format::Csv => {
            let rows: Vec<Vec<String>> = doc
                .rows
                .iter()
                .map(|r| vec![r.check.clone(), r.ok.to_string(), r.detail.clone()])
                .collect();
            render_csv(&["check", "ok", "detail"], &rows)
        }
        Format::Table => {
            let rows: Vec<Vec<String>> = doc
                .rows
                .iter()
                .map(|r| vec![r.check.clone(), r.ok.to_string(), r.detail.clone()])
                .collect();
            render_table(
                &format!("invariant checks for {lambda} at rank {n}"),
                &["check", "ok", "detail"],
                &rows,
            )
        }
    };
    emit(&args.common.out, &text)?;
    if doc.rows.iter().all(|r| r.ok) {
        Ok(EXIT_OK)
    } else {
        eprintln!("error: invariant checks failed for {lambda} at rank {n}");
        Ok(EXIT_VIOLATION)
    }
}

fn cmd_decompose(args: DecomposeArgs) -> Result<i32, Failure> {
    let d = lr_decompose(&args.lambda, &args.mu);
    let n = args.lambda.depth() + args.mu.depth();
    dimension_audit(&d, n).map_err(|e| Failure::violation(e.to_string()))?;
    dimension_audit(&d, n + 1).map_err(|e| Failure::violation(e.to_string()))?;
    if args.validate {
        if !stability_check(&args.lambda, &args.mu)
            .map_err(|e| Failure::violation(e.to_string()))?
        {
            return Err(Failure::violation(format!(
                "decomposition of {} (x) {} is not rank-stable",
                args.lambda, args.mu
            )));
        }
        let convolved = decompose_by_weights(&args.lambda, &args.mu, n)
            .map_err(|e| Failure::violation(e.to_string()))?;
        if convolved != d.summands {
            return Err(Failure::violation(format!(
                "weight convolution disagrees with the tableau rule for {} (x) {}",
                args.lambda, args.mu
            )));
        }
    }
    let text = match args.common.format {
        Format::Json => to_json(&d),
        Format::Csv => {
            let rows: Vec<Vec<String>> = d
                .summands
                .iter()
                .map(|(nu, c)| vec![nu.to_string(), c.to_string()])
                .collect();
            render_csv(&["nu", "multiplicity"], &rows)
        }
        Format::Table => {
            let rows: Vec<Vec<String>> = d
                .summands
                .iter()
                .map(|(nu, c)| {
                    vec![
                        nu.to_string(),
                        c.to_string(),
                        crate::gt::weyl_dim(n, nu).to_string(),
                    ]
                })
                .collect();
            render_table(
                &format!("{} (x) {} at rank {n}", args.lambda, args.mu),
                &["nu", "multiplicity", "dim at rank"],
                &rows,
            )
        }
    };
    emit(&args.common.out, &text)?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct EigenvalueSequence {
    lambda: HighestWeight,
    values: Vec<Rat>,
}

#[derive(Serialize)]
struct GlkTraceRow {
    lambda: HighestWeight,
    n: usize,
    m: u32,
    value: Rat,
}

#[derive(Serialize)]
struct OracleDoc {
    m_max: u32,
    eigenvalue_sequences: Vec<EigenvalueSequence>,
    glk_traces: Vec<GlkTraceRow>,
    decompositions: Vec<crate::tensor::Decomposition>,
    certificates: Vec<IdentityCertificate>,
    all_agree: bool,
}

fn cmd_oracle_check(args: OracleCheckArgs) -> Result<i32, Failure> {
    check_m_cap(args.m_max)?;
    let mode = ExecMode::default();
    let mut disagreements: Vec<String> = Vec::new();

    let mut eigenvalue_sequences = Vec::new();
    for lam in enumerate_partitions(3, 6) {
        let mut values = Vec::new();
        for m in 1..=args.m_max {
            let r = eigenvalue_report(&lam, m);
            let geometric_ok = r.oracle.as_ref().is_none_or(|g| *g == r.closed);
            if !(r.agree && geometric_ok) {
                disagreements.push(format!("eigenvalue routes split at {lam}, m = {m}"));
            }
            values.push(r.closed);
        }
        eigenvalue_sequences.push(EigenvalueSequence {
            lambda: lam,
            values,
        });
    }

    let mut glk_traces = Vec::new();
    for lam in enumerate_partitions(2, 4) {
        let n = lam.depth();
        let rep = build_module(n, &lam)
            .map_err(|e| Failure::usage(format!("cannot build the module: {e}")))?;
        for m in 1..=args.m_max.min(3) {
            let op = crate::charmat::glk_trace_operator(&rep, m, mode);
            match op.scalar_identity_value() {
                Some(value) => {
                    let formula = crate::casimir::glk_invariant_eigenvalue(&lam, n, m)
                        .map_err(|e| Failure::usage(e.to_string()))?;
                    if value != formula {
                        disagreements.push(format!("trace formula splits at {lam}, m = {m}"));
                    }
                    glk_traces.push(GlkTraceRow {
                        lambda: lam.clone(),
                        n,
                        m,
                        value,
                    });
                }
                None => disagreements.push(format!("non-scalar trace at {lam}, m = {m}")),
            }
        }
    }

    let shapes = [vec![1], vec![2], vec![1, 1], vec![2, 1]];
    let mut decompositions = Vec::new();
    for a in &shapes {
        for b in &shapes {
            let lam = HighestWeight::new(a.clone()).expect("dominant");
            let mu = HighestWeight::new(b.clone()).expect("dominant");
            let d = lr_decompose(&lam, &mu);
            let n = lam.depth() + mu.depth();
            if dimension_audit(&d, n).is_err() {
                disagreements.push(format!("dimension audit fails for {lam} (x) {mu}"));
            }
            match decompose_by_weights(&lam, &mu, n) {
                Ok(conv) if conv == d.summands => {}
                _ => disagreements.push(format!("convolution splits for {lam} (x) {mu}")),
            }
            decompositions.push(d);
        }
    }

    let mut certificates = Vec::new();
    for parts in [vec![1], vec![1, 1], vec![2]] {
        let lam = HighestWeight::new(parts).expect("dominant");
        match verify_theorem5_at(&lam, lam.depth() + 1, mode) {
            Ok(cert) => certificates.push(cert),
            Err(e) => disagreements.push(format!("identity fails: {e}")),
        }
    }

    let doc = OracleDoc {
        m_max: args.m_max,
        eigenvalue_sequences,
        glk_traces,
        decompositions,
        certificates,
        all_agree: disagreements.is_empty(),
    };
    let text = match args.common.format {
        Format::Json => to_json(&doc),
        Format::Csv => {
            let rows: Vec<Vec<String>> = doc
                .eigenvalue_sequences
                .iter()
                .map(|s| {
                    let mut row = vec![s.lambda.to_string()];
                    row.extend(s.values.iter().map(ToString::to_string));
                    row
                })
                .collect();
            let mut header: Vec<String> = vec!["lambda".into()];
            header.extend((1..=args.m_max).map(|m| format!("m{m}")));
            let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
            render_csv(&header_refs, &rows)
        }
        Format::Table => {
            let rows = vec![
                vec![
                    "eigenvalue sequences".to_string(),
                    doc.eigenvalue_sequences.len().to_string(),
                ],
                vec!["finite-rank traces".to_string(), doc.glk_traces.len().to_string()],
                vec![
                    "decompositions".to_string(),
                    doc.decompositions.len().to_string(),
                ],
                vec!["certificates".to_string(), doc.certificates.len().to_string()],
                vec!["all agree".to_string(), doc.all_agree.to_string()],
            ];
            render_table("oracle cross-checks", &["battery", "count"], &rows)
        }
    };
    emit(&args.common.out, &text)?;
    if doc.all_agree {
        Ok(EXIT_OK)
    } else {
        for d in &disagreements {
            eprintln!("error: {d}");
        }
        Ok(EXIT_VIOLATION)
    }
}

#[derive(Serialize)]
struct SweepDoc {
    m_max: u32,
    seed: u64,
    outcomes: Vec<crate::sweep::CriterionOutcome>,
    passed: bool,
}

fn cmd_sweep(args: SweepArgs) -> Result<i32, Failure> {
    check_m_cap(args.m_max)?;
    let cfg = SweepConfig {
        m_max: args.m_max,
        seed: args.seed,
        mode: ExecMode::default(),
        inject_fault: args.inject_fault,
    };
    let outcomes = run_sweep(&cfg);
    let passed = outcomes.iter().all(|o| o.passed);
    let doc = SweepDoc {
        m_max: args.m_max,
        seed: args.seed,
        outcomes,
        passed,
    };
    let text = match args.common.format {
        Format::Json => to_json(&doc),
        Format::Csv => {
            let rows: Vec<Vec<String>> = doc
                .outcomes
                .iter()
                .map(|o| {
                    vec![
                        o.id.to_string(),
                        o.name.to_string(),
                        o.passed.to_string(),
                        o.detail.clone(),
                    ]
                })
                .collect();
            render_csv(&["id", "name", "passed", "detail"], &rows)
        }
        Format::Table => {
            let mut s = String::new();
            for o in &doc.outcomes {
                let _ = writeln!(s, "{o}");
            }
            let _ = writeln!(
                s,
                "{}",
                if doc.passed {
                    "all criteria passed"
                } else {
                    "SWEEP FAILED"
                }
            );
            s
        }
    };
    emit(&args.common.out, &text)?;
    if passed {
        Ok(EXIT_OK)
    } else {
        let first = doc.outcomes.iter().find(|o| !o.passed);
        if let Some(o) = first {
            eprintln!("error: criterion {} failed: {}", o.id, o.detail);
        }
        Ok(EXIT_VIOLATION)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_parse_from_flag_strings() {
        assert_eq!(parse_weight("2,1").unwrap().parts(), &[2, 1]);
        assert_eq!(parse_weight(" 3 , 3 , 2 ").unwrap().parts(), &[3, 3, 2]);
        assert!(parse_weight("").unwrap().is_zero());
        assert!(parse_weight("0").unwrap().is_zero());
        assert!(parse_weight("1,2").is_err());
        assert!(parse_weight("a").is_err());
    }

    #[test]
    fn csv_cells_escape_properly() {
        assert_eq!(csv_cell("plain"), "plain");
        assert_eq!(csv_cell("a,b"), "\"a,b\"");
        assert_eq!(csv_cell("say \"hi\""), "\"say \"\"hi\"\"\"");
    }

    #[test]
    fn tables_align_columns() {
        let t = render_table("t", &["a", "bb"], &[vec!["1".into(), "2".into()]]);
        let lines: Vec<&str> = t.lines().collect();
        assert_eq!(lines[0], "t");
        assert_eq!(lines[1], "a  bb");
        assert_eq!(lines[2], "-  --");
        assert_eq!(lines[3], "1  2");
    }

    #[test]
    fn command_line_parses() {
        let cli = Cli::try_parse_from([
            "glinf",
            "eigenvalues",
            "--lambda",
            "2,1",
            "--m-max",
            "3",
            "--validate",
            "--format",
            "json",
        ])
        .unwrap();
        match cli.command {
            Command::Eigenvalues(a) => {
                assert_eq!(a.lambda.parts(), &[2, 1]);
                assert_eq!(a.m_max, 3);
                assert!(a.validate);
                assert_eq!(a.common.format, Format::Json);
            }
            _ => panic!("wrong subcommand"),
        }
    }

    #[test]
    fn sweep_hides_the_fault_flag_but_accepts_it() {
        let cli =
            Cli::try_parse_from(["glinf", "sweep", "--inject-fault", "--m-max", "2"]).unwrap();
        match cli.command {
            Command::Sweep(a) => {
                assert!(a.inject_fault);
                assert_eq!(a.m_max, 2);
            }
            _ => panic!("wrong subcommand"),
        }
    }
}
