//! Command-line front end.
//!
//! Exit codes: 0 when every verdict is theorem-consistent (or a search came
//! out as expected), 1 on a violation or an unexpected oracle hit, 2 on a
//! usage or precondition error.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde_json::{json, Value};

use crate::descent::{descent_trace, TraceVerdict};
use crate::oracles::{cohn_report, corollary_c_report, lemma_l2_report, OracleReport};
use crate::report::{
    bounds_json, hypotheses_json, instance_json, oracle_json, parity_json, render_json,
    solutions_json, trace_json, verification_config, verification_json, VERSION,
};
use crate::sieve::parity_certificate;
use crate::solver::{find_solutions, verify_instance, verify_range, Bounds, Verdict, VerificationReport};
use crate::triples::{check_hypotheses, make_instance, scan_instances, TeraiInstance};

/// Relative `--out` paths resolve against this directory when it is set.
pub const OUT_DIR_ENV: &str = "TERAI_OUT_DIR";

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "terai", version, about = "Search and verification for x^2 + b^y = c^z over parametrized triples")]
pub struct RunConfig {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..))]
    pub jobs: Option<u32>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List qualifying instances with m <= m_max.
    Scan {
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
        m_max: u64,
    },
    /// Run the full verification pipeline for one instance.
    Verify {
        #[arg(long, value_parser = parse_nat)]
        m: BigUint,
        #[arg(long, value_parser = parse_nat)]
        n: BigUint,
        #[command(flatten)]
        bounds: BoundArgs,
    },
    /// Verify every qualifying instance with m <= m_max.
    VerifyRange {
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
        m_max: u64,
        #[command(flatten)]
        bounds: BoundArgs,
    },
    /// Brute-force x^2 + b^y = c^z for arbitrary coprime b, c.
    Solve {
        #[arg(long, value_parser = parse_nat)]
        b: BigUint,
        #[arg(long, value_parser = parse_nat)]
        c: BigUint,
        #[arg(long, default_value_t = 40, value_parser = clap::value_parser!(u32).range(1..))]
        y_max: u32,
        #[arg(long, default_value_t = 40, value_parser = clap::value_parser!(u32).range(1..))]
        z_max: u32,
    },
    /// Jacobi-symbol parity certificate for one instance.
    Sieve {
        #[arg(long, value_parser = parse_nat)]
        m: BigUint,
        #[arg(long, value_parser = parse_nat)]
        n: BigUint,
    },
    /// Replay the descent for one solution.
    Trace {
        #[arg(long, value_parser = parse_nat)]
        m: BigUint,
        #[arg(long, value_parser = parse_nat)]
        n: BigUint,
        #[arg(long, value_parser = parse_nat)]
        x: BigUint,
        #[arg(long)]
        y: u64,
        #[arg(long)]
        z: u64,
    },
    /// Bounded searches for the cited external results.
    #[command(subcommand)]
    Oracle(OracleCommand),
}

#[derive(Debug, Subcommand)]
pub enum OracleCommand {
    /// 2z^k = y^2 + 1 with 3 <= k <= k_max, z <= z_max.
    Cohn {
        #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u32).range(3..))]
        k_max: u32,
        #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
        z_max: u64,
    },
    /// y^q = a^2 + (a+1)^2 for odd q >= 3 and y <= y_max.
    CorollaryC {
        #[arg(long, default_value_t = 500, value_parser = clap::value_parser!(u64).range(1..))]
        y_max: u64,
        #[arg(long, value_delimiter = ',', default_value = "3,5,7,9,11")]
        q: Vec<u32>,
    },
    /// x^2 + p^{2m} = 2y^n for primes p and n > 3.
    LemmaL2 {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u32).range(1..))]
        m_max: u32,
        #[arg(long, default_value_t = 200, value_parser = clap::value_parser!(u64).range(1..))]
        y_max: u64,
    },
}

#[derive(Debug, Clone, Args)]
pub struct BoundArgs {
    #[arg(long, default_value_t = 40, value_parser = clap::value_parser!(u32).range(1..))]
    pub y_max: u32,
    #[arg(long, default_value_t = 40, value_parser = clap::value_parser!(u32).range(1..))]
    pub z_max: u32,
    #[arg(long, default_value_t = 15, value_parser = clap::value_parser!(u32).range(1..))]
    pub r_max: u32,
    #[arg(long, default_value_t = 15, value_parser = clap::value_parser!(u32).range(1..))]
    pub k_max: u32,
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u32).range(3..))]
    pub cohn_k_max: u32,
    #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
    pub cohn_z_max: u64,
    #[arg(long, default_value_t = 500, value_parser = clap::value_parser!(u64).range(1..))]
    pub corollary_y_max: u64,
    #[arg(long, value_delimiter = ',', default_value = "3,5,7,9,11")]
    pub corollary_q: Vec<u32>,
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u32).range(1..))]
    pub l2_m_max: u32,
    #[arg(long, default_value_t = 200, value_parser = clap::value_parser!(u64).range(1..))]
    pub l2_y_max: u64,
}

impl From<&BoundArgs> for Bounds {
    fn from(a: &BoundArgs) -> Bounds {
        Bounds {
            y_max: a.y_max,
            z_max: a.z_max,
            r_max: a.r_max,
            k_max: a.k_max,
            cohn_k_max: a.cohn_k_max,
            cohn_z_max: a.cohn_z_max,
            corollary_y_max: a.corollary_y_max,
            corollary_exponents: a.corollary_q.clone(),
            l2_m_max: a.l2_m_max,
            l2_y_max: a.l2_y_max,
        }
    }
}

fn parse_nat(s: &str) -> Result<BigUint, String> {
    s.parse::<BigUint>().map_err(|e| format!("not a nonnegative integer: {e}"))
}

/// Rendered output plus exit code, or a precondition error message.
struct Outcome {
    body: String,
    code: i32,
}

#[derive(Debug)]
struct UsageError(String);

impl<T: std::fmt::Display> From<T> for UsageError {
    fn from(e: T) -> Self {
        UsageError(e.to_string())
    }
}

/// Parses `args` (including the program name), runs the command and returns
/// the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = stdout.write_all(rendered.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = stderr.write_all(rendered.as_bytes());
                    if !rendered.contains("Usage:") {
                        let usage = <RunConfig as clap::CommandFactory>::command().render_usage();
                        let _ = writeln!(stderr, "\n{usage}");
                    }
                    EXIT_USAGE
                }
            };
        }
    };

    let outcome = match config.jobs {
        Some(jobs) => match rayon::ThreadPoolBuilder::new().num_threads(jobs as usize).build() {
            Ok(pool) => pool.install(|| execute(&config)),
            Err(e) => Err(UsageError(e.to_string())),
        },
        None => execute(&config),
    };
    let outcome = match outcome {
        Ok(o) => o,
        Err(UsageError(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            return EXIT_USAGE;
        }
    };

    match &config.out {
        Some(path) => {
            let path = resolve_out(path);
            if let Err(e) = std::fs::write(&path, &outcome.body) {
                let _ = writeln!(stderr, "error: cannot write {}: {e}", path.display());
                return EXIT_USAGE;
            }
        }
        None => {
            let _ = stdout.write_all(outcome.body.as_bytes());
        }
    }
    outcome.code
}

fn resolve_out(path: &PathBuf) -> PathBuf {
    match std::env::var_os(OUT_DIR_ENV) {
        Some(dir) if path.is_relative() => PathBuf::from(dir).join(path),
        _ => path.clone(),
    }
}

fn base_config(config: &RunConfig, command: &str, params: Value) -> Value {
    json!({
        "command": command,
        "format": format!("{:?}", config.format).to_lowercase(),
        "jobs": config.jobs.map(|j| Value::String(j.to_string())).unwrap_or(Value::Null),
        "params": params,
    })
}

fn qualifying_instance(m: &BigUint, n: &BigUint) -> Result<TeraiInstance, UsageError> {
    let inst = make_instance(m, n)?;
    let hyp = check_hypotheses(&inst);
    if !hyp.qualifies {
        return Err(UsageError(format!(
            "instance (m,n)=({m},{n}) does not satisfy the hypotheses; unmet: {}",
            hyp.failures().join("; ")
        )));
    }
    Ok(inst)
}

fn csv_rows(header: &[&str], rows: Vec<Vec<String>>) -> Result<String, UsageError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    let bytes = w.into_inner().map_err(|e| UsageError(e.to_string()))?;
    Ok(String::from_utf8(bytes)?)
}

fn verdict_code(verdicts: impl IntoIterator<Item = Verdict>) -> i32 {
    if verdicts.into_iter().any(|v| v == Verdict::Violation) {
        EXIT_VIOLATION
    } else {
        EXIT_OK
    }
}

fn execute(config: &RunConfig) -> Result<Outcome, UsageError> {
    match &config.command {
        Command::Scan { m_max } => {
            let list = scan_instances(*m_max);
            let body = match config.format {
                Format::Json => render_json(&json!({
                    "version": VERSION,
                    "config": base_config(config, "scan", json!({ "m_max": m_max.to_string() })),
                    "instances": list.iter().map(instance_json).collect::<Vec<_>>(),
                    "count": list.len().to_string(),
                })),
                Format::Csv => csv_rows(
                    &["m", "n", "a", "b", "c", "p", "q"],
                    list.iter()
                        .map(|i| [&i.m, &i.n, &i.a, &i.b, &i.c, &i.p, &i.q].iter().map(|v| v.to_string()).collect())
                        .collect(),
                )?,
                Format::Text => {
                    let mut t = format!("{} qualifying instances with m <= {m_max}\n", list.len());
                    for i in &list {
                        let _ = writeln!(t, "{i}");
                    }
                    t
                }
            };
            Ok(Outcome { body, code: EXIT_OK })
        }
        Command::Verify { m, n, bounds } => {
            let inst = qualifying_instance(m, n)?;
            let report = verify_instance(&inst, &Bounds::from(bounds));
            let body = render_report(config, "verify", &report)?;
            Ok(Outcome {
                body,
                code: verdict_code([report.verdict]),
            })
        }
        Command::VerifyRange { m_max, bounds } => {
            let reports = verify_range(*m_max, &Bounds::from(bounds));
            let code = verdict_code(reports.iter().map(|r| r.verdict));
            let body = match config.format {
                Format::Json => {
                    let items: Vec<Value> = reports
                        .iter()
                        .map(|r| verification_json(r, verification_config(r)))
                        .collect();
                    render_json(&json!({
                        "version": VERSION,
                        "config": base_config(config, "verify-range", json!({
                            "m_max": m_max.to_string(),
                            "bounds": bounds_json(&Bounds::from(bounds)),
                        })),
                        "reports": items,
                        "verdict": if code == EXIT_OK { "theorem-consistent" } else { "VIOLATION" },
                    }))
                }
                Format::Csv => csv_rows(
                    &["m", "n", "verdict", "solutions"],
                    reports
                        .iter()
                        .map(|r| {
                            let sols: Vec<String> = r.solutions.iter().map(|s| format!("{}:{}:{}", s.x, s.y, s.z)).collect();
                            vec![r.instance.m.to_string(), r.instance.n.to_string(), r.verdict.to_string(), sols.join(";")]
                        })
                        .collect(),
                )?,
                Format::Text => {
                    let mut t = String::new();
                    for r in &reports {
                        let sols: Vec<String> = r.solutions.iter().map(ToString::to_string).collect();
                        let _ = writeln!(t, "(m,n)=({},{}) {} solutions=[{}]", r.instance.m, r.instance.n, r.verdict, sols.join(", "));
                    }
                    let _ = writeln!(t, "{} instances", reports.len());
                    t
                }
            };
            Ok(Outcome { body, code })
        }
        Command::Solve { b, c, y_max, z_max } => {
            let sols = find_solutions(b, c, *y_max, *z_max)?;
            let body = match config.format {
                Format::Json => render_json(&json!({
                    "version": VERSION,
                    "config": base_config(config, "solve", json!({
                        "b": b.to_string(), "c": c.to_string(),
                        "y_max": y_max.to_string(), "z_max": z_max.to_string(),
                    })),
                    "solutions": solutions_json(&sols),
                })),
                Format::Csv => csv_rows(
                    &["x", "y", "z"],
                    sols.iter().map(|s| vec![s.x.to_string(), s.y.to_string(), s.z.to_string()]).collect(),
                )?,
                Format::Text => {
                    let mut t = format!("x^2 + {b}^y = {c}^z, y <= {y_max}, z <= {z_max}: {} solutions\n", sols.len());
                    for s in &sols {
                        let _ = writeln!(t, "{s}");
                    }
                    t
                }
            };
            Ok(Outcome { body, code: EXIT_OK })
        }
        Command::Sieve { m, n } => {
            let inst = make_instance(m, n)?;
            let cert = parity_certificate(&inst);
            let code = if !check_hypotheses(&inst).qualifies {
                EXIT_USAGE
            } else if cert.valid {
                EXIT_OK
            } else {
                EXIT_VIOLATION
            };
            let body = match config.format {
                Format::Json => render_json(&json!({
                    "version": VERSION,
                    "config": base_config(config, "sieve", json!({ "m": m.to_string(), "n": n.to_string() })),
                    "instance": instance_json(&inst),
                    "hypotheses": hypotheses_json(&check_hypotheses(&inst)),
                    "parity": parity_json(&cert),
                })),
                Format::Csv => {
                    let mut row = vec![m.to_string(), n.to_string()];
                    row.extend(cert.symbols().iter().map(|j| j.as_i8().to_string()));
                    row.push(cert.valid.to_string());
                    csv_rows(&["m", "n", "j_minus1_c", "j_b_c", "j_c_b", "j_2_c", "j_2_b", "valid"], vec![row])?
                }
                Format::Text => {
                    let mut t = format!("{inst}\n");
                    for ((name, _), value) in crate::sieve::SYMBOLS.iter().zip(cert.symbols()) {
                        let _ = writeln!(t, "  {name} = {value}");
                    }
                    match &cert.conclusions {
                        Some(c) => {
                            let _ = writeln!(t, "valid: y {}, z {}, r {}, k {}", c.y, c.z, c.r, c.k);
                            let _ = writeln!(t, "note: {}", cert.note);
                        }
                        None => {
                            let _ = writeln!(t, "invalid");
                        }
                    }
                    t
                }
            };
            Ok(Outcome { body, code })
        }
        Command::Trace { m, n, x, y, z } => {
            let inst = make_instance(m, n)?;
            if config.format == Format::Csv {
                return Err(UsageError("trace output is nested; use --format json or text".into()));
            }
            let trace = descent_trace(&inst, x, *y, *z)?;
            let code = match trace.verdict {
                TraceVerdict::TheoremConsistent => EXIT_OK,
                TraceVerdict::Inconsistent { .. } => EXIT_VIOLATION,
            };
            let body = match config.format {
                Format::Json => render_json(&json!({
                    "version": VERSION,
                    "config": base_config(config, "trace", json!({
                        "m": m.to_string(), "n": n.to_string(),
                        "x": x.to_string(), "y": y.to_string(), "z": z.to_string(),
                    })),
                    "instance": instance_json(&inst),
                    "trace": trace_json(&trace),
                })),
                _ => render_trace_text(&trace),
            };
            Ok(Outcome { body, code })
        }
        Command::Oracle(cmd) => {
            let (name, params, report) = match cmd {
                OracleCommand::Cohn { k_max, z_max } => (
                    "oracle cohn",
                    json!({ "k_max": k_max.to_string(), "z_max": z_max.to_string() }),
                    cohn_report(*k_max, *z_max)?,
                ),
                OracleCommand::CorollaryC { y_max, q } => (
                    "oracle corollary-c",
                    json!({ "y_max": y_max.to_string(), "q": q.iter().map(u32::to_string).collect::<Vec<_>>() }),
                    corollary_c_report(*y_max, q)?,
                ),
                OracleCommand::LemmaL2 { p, n, m_max, y_max } => (
                    "oracle lemma-l2",
                    json!({
                        "p": p.to_string(), "n": n.to_string(),
                        "m_max": m_max.to_string(), "y_max": y_max.to_string(),
                    }),
                    lemma_l2_report(*p, *n, *m_max, *y_max)?,
                ),
            };
            let code = if report.as_expected() { EXIT_OK } else { EXIT_VIOLATION };
            Ok(Outcome {
                body: render_oracle(config, name, params, &report)?,
                code,
            })
        }
    }
}

fn render_oracle(config: &RunConfig, name: &str, params: Value, report: &OracleReport) -> Result<String, UsageError> {
    Ok(match config.format {
        Format::Json => render_json(&json!({
            "version": VERSION,
            "config": base_config(config, name, params),
            "oracles": [oracle_json(report)],
        })),
        Format::Csv => {
            let width = report.hits.iter().map(Vec::len).max().unwrap_or(3);
            let mut header = vec!["oracle".to_string()];
            header.extend((1..=width).map(|i| format!("v{i}")));
            let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
            csv_rows(
                &header_refs,
                report
                    .hits
                    .iter()
                    .map(|h| {
                        let mut row = vec![report.window.name().to_string()];
                        row.extend(h.iter().map(ToString::to_string));
                        row.resize(width + 1, String::new());
                        row
                    })
                    .collect(),
            )?
        }
        Format::Text => {
            let mut t = format!("{}: {} hits\n", report.window, report.hits.len());
            for h in &report.hits {
                let parts: Vec<String> = h.iter().map(ToString::to_string).collect();
                let _ = writeln!(t, "  ({})", parts.join(", "));
            }
            let _ = writeln!(
                t,
                "{}",
                if report.as_expected() { "as expected" } else { "UNEXPECTED hits present" }
            );
            t
        }
    })
}

fn render_report(config: &RunConfig, command: &str, r: &VerificationReport) -> Result<String, UsageError> {
    Ok(match config.format {
        Format::Json => {
            let mut cfg = verification_config(r);
            cfg["run"] = base_config(
                config,
                command,
                json!({ "m": r.instance.m.to_string(), "n": r.instance.n.to_string() }),
            );
            render_json(&verification_json(r, cfg))
        }
        Format::Csv => csv_rows(
            &["r", "k", "case_a", "case_b"],
            r.case_scan
                .iter()
                .map(|row| vec![row.r.to_string(), row.k.to_string(), row.case_a_holds.to_string(), row.case_b_holds.to_string()])
                .collect(),
        )?,
        Format::Text => {
            let mut t = format!("{}\n", r.instance);
            let _ = writeln!(t, "hypotheses: {}", if r.hypotheses.qualifies { "satisfied" } else { "FAILED" });
            let syms: Vec<String> = r.parity.symbols().iter().map(ToString::to_string).collect();
            let _ = writeln!(t, "parity symbols: [{}] valid={}", syms.join(", "), r.parity.valid);
            let _ = writeln!(
                t,
                "case scan: {} cells, case A at {} cells, case B at {:?}",
                r.case_scan.len(),
                r.case_scan.iter().filter(|row| row.case_a_holds).count(),
                r.case_b_cells()
            );
            let sols: Vec<String> = r.solutions.iter().map(ToString::to_string).collect();
            let _ = writeln!(t, "solutions (y <= {}, z <= {}): [{}]", r.bounds.y_max, r.bounds.z_max, sols.join(", "));
            for trace in &r.traces {
                t.push_str(&render_trace_text(trace));
            }
            for o in &r.oracles {
                let _ = writeln!(t, "oracle {}: {} hits, {}", o.window, o.hits.len(), if o.as_expected() { "as expected" } else { "UNEXPECTED" });
            }
            for f in &r.failures {
                let _ = writeln!(t, "FAILURE [{}] {}", f.step, f.detail);
            }
            let _ = writeln!(t, "verdict: {} ({} ms)", r.verdict, r.elapsed_ms);
            t
        }
    })
}

fn render_trace_text(t: &crate::descent::DescentTrace) -> String {
    let mut out = format!("trace for (x,y,z) = ({}, {}, {}): r = {}, k = {}\n", t.x, t.y, t.z, t.r, t.k);
    let _ = writeln!(out, "  legs u = {}, v = {}; case {}", t.u, t.v, t.case_tag);
    let decs: Vec<String> = t.decompositions.iter().map(ToString::to_string).collect();
    let _ = writeln!(out, "  decompositions of c: [{}]", decs.join(", "));
    if let Some((d, f)) = &t.chosen {
        let _ = writeln!(out, "  chosen {d}: epsilon = {}, t1 = {}, t2 = {}", f.epsilon, f.t1, f.t2);
    }
    if let Some((p, q)) = &t.pq {
        let _ = writeln!(out, "  P = {p}, Q = {q}");
    }
    for c in &t.identity_checks {
        let _ = writeln!(out, "  {}: {}", c.name, if c.holds { "ok" } else { "FAIL" });
    }
    let _ = writeln!(out, "  k: {}", t.k_conclusion);
    let _ = writeln!(out, "  verdict: {}", t.verdict);
    out
}
