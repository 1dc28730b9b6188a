//! Command-line front end.
//!
//! ```text
//! remoteproj run --scenario stripe_example --out runs/stripe
//! remoteproj run --scenario cap_lines --t power:1 --horizon 10000 --dim 8 --seed 7
//! remoteproj run --config runs/stripe/config.json
//! remoteproj analyze --schedule constant:1 --M 1000000 --witness witness.csv
//! remoteproj list
//! ```
//!
//! Exit codes: 0 on success, 1 on usage errors, 2 when a run finished but one
//! of its invariant checks failed.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::error::{Error, Result};
use crate::io::{trace_csv, witness_csv, write_file, RunReport};
use crate::scenarios::{by_name, Overrides, ScenarioConfig, CATALOGUE};
use crate::schedule::{build_extremal_witness, check_window_condition, partial_sum_diagnostics, Schedule};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_CHECK_FAILED: i32 = 2;

pub const OUT_ENV: &str = "REMOTEPROJ_OUT";
const DEFAULT_OUT_ROOT: &str = "remoteproj-runs";

#[derive(Debug, Parser)]
#[command(name = "remoteproj", version, about = "Remote projections onto families of convex sets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run built-in scenarios or a JSON config and write trace.csv, report.json, config.json.
    Run(RunArgs),
    /// Analyze a weakness-parameter schedule.
    Analyze(AnalyzeArgs),
    /// List the built-in scenarios.
    List,
}

#[derive(Debug, Args)]
struct RunArgs {
    /// Built-in scenario name; repeat or comma-separate to run several.
    #[arg(long, value_delimiter = ',', required_unless_present = "config", conflicts_with = "config")]
    scenario: Vec<String>,
    /// Path to a scenario config in the JSON schema.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory (a sub-directory per scenario when several run).
    /// Defaults to `$REMOTEPROJ_OUT/<scenario>`.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    horizon: Option<usize>,
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Schedule spec such as `constant:1`, `power:0.5`, `harmonic_log`.
    #[arg(long = "t", value_parser = parse_schedule)]
    schedule: Option<Schedule>,
    #[arg(long)]
    tol: Option<f64>,
    /// Keep every k-th iterate in memory.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    stride: Option<u64>,
    /// Number of scenarios run concurrently.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    jobs: u64,
}

#[derive(Debug, Args)]
struct AnalyzeArgs {
    #[arg(long, value_parser = parse_schedule)]
    schedule: Schedule,
    /// Number of terms examined.
    #[arg(long = "M", default_value_t = 1_000_000)]
    m: usize,
    /// Window-condition pair `delta:K`; may be repeated.
    #[arg(long = "window", value_parser = parse_window)]
    windows: Vec<(f64, usize)>,
    /// Write the extremal witness sequence to this CSV file.
    #[arg(long)]
    witness: Option<PathBuf>,
}

fn parse_schedule(s: &str) -> std::result::Result<Schedule, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_window(s: &str) -> std::result::Result<(f64, usize), String> {
    let (d, k) = s.split_once(':').ok_or_else(|| format!("expected delta:K, got `{s}`"))?;
    let delta: f64 = d.trim().parse().map_err(|_| format!("bad delta `{d}`"))?;
    let k: usize = k.trim().parse().map_err(|_| format!("bad K `{k}`"))?;
    if delta.is_nan() || delta <= 0.0 {
        return Err(format!("delta must be positive, got {delta}"));
    }
    Ok((delta, k))
}

/// What to run and where to put the artifacts.
#[derive(Debug, Clone, PartialEq)]
pub struct RunManifest {
    pub target: RunTarget,
    pub out: PathBuf,
    pub stride: Option<usize>,
    pub overrides: Overrides,
}

#[derive(Debug, Clone, PartialEq)]
pub enum RunTarget {
    Scenario(String),
    Config(PathBuf),
}

impl RunManifest {
    pub fn scenario(name: &str, out: impl Into<PathBuf>) -> Self {
        Self {
            target: RunTarget::Scenario(name.into()),
            out: out.into(),
            stride: None,
            overrides: Overrides::default(),
        }
    }

    pub fn config(path: impl Into<PathBuf>, out: impl Into<PathBuf>) -> Self {
        Self { target: RunTarget::Config(path.into()), out: out.into(), stride: None, overrides: Overrides::default() }
    }

    /// The fully resolved config this manifest runs.
    pub fn resolve(&self) -> Result<ScenarioConfig> {
        if self.stride == Some(0) {
            return Err(Error::InvalidArgument("stride must be at least 1".into()));
        }
        match &self.target {
            RunTarget::Scenario(name) => by_name(name, &self.overrides),
            RunTarget::Config(path) => {
                let ov = &self.overrides;
                if ov.dim.is_some() || ov.seed.is_some() {
                    return Err(Error::InvalidArgument(
                        "--dim and --seed apply to built-in scenarios, not to config files".into(),
                    ));
                }
                let mut cfg = ScenarioConfig::load(path)?;
                if let Some(h) = ov.horizon {
                    cfg.horizon = h;
                }
                if let Some(s) = &ov.schedule {
                    cfg.schedule = s.clone();
                }
                if let Some(tol) = ov.tol {
                    cfg.extras.tol = Some(tol);
                }
                cfg.validate()?;
                Ok(cfg)
            }
        }
    }
}

/// Result of a finished run.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub dir: PathBuf,
    pub report: RunReport,
}

/// Runs a manifest and writes `trace.csv`, `report.json`, `config.json`.
///
/// `Err` means the run could not be carried out; a run whose checks fail
/// still returns `Ok` with `report.passed == false`.
pub fn cmd_run(manifest: &RunManifest) -> Result<RunOutcome> {
    let cfg = manifest.resolve()?;
    let dir = &manifest.out;
    std::fs::create_dir_all(dir).map_err(|source| Error::Io { path: dir.clone(), source })?;
    let trace = cfg.run_with_stride(manifest.stride)?;
    let report = RunReport::build(&cfg, &trace)?;
    write_file(&dir.join("trace.csv"), &trace_csv(&trace.steps))?;
    write_file(&dir.join("config.json"), &cfg.to_json()?)?;
    write_file(&dir.join("report.json"), &serde_json::to_string_pretty(&report)?)?;
    Ok(RunOutcome { dir: dir.clone(), report })
}

fn exit_code(outcome: &Result<RunOutcome>) -> i32 {
    match outcome {
        Ok(o) if o.report.passed => EXIT_OK,
        Ok(_) => EXIT_CHECK_FAILED,
        Err(_) => EXIT_USAGE,
    }
}

fn summarize(outcome: &Result<RunOutcome>, label: &str) -> String {
    match outcome {
        Ok(o) => {
            let r = &o.report;
            let status = if r.passed {
                format!("all {} checks passed", r.checks.len())
            } else {
                format!("FAILED checks: {}", r.failed_checks.join(", "))
            };
            format!(
                "{label}: {} steps, stop {}, |x_N - a| = {:.6e}; {status}; wrote {}",
                r.steps,
                r.stop_reason,
                r.final_norm,
                o.dir.display()
            )
        }
        Err(e) => format!("{label}: error: {e}"),
    }
}

fn run_command(args: RunArgs, out: &mut dyn Write) -> i32 {
    let overrides =
        Overrides { horizon: args.horizon, dim: args.dim, seed: args.seed, schedule: args.schedule, tol: args.tol };
    let stride = args.stride.map(|s| s as usize);
    let root = std::env::var_os(OUT_ENV).map(PathBuf::from).unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_ROOT));
    let manifests: Vec<(String, RunManifest)> = match &args.config {
        Some(path) => {
            let label = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "config".into());
            let dir = args.out.clone().unwrap_or_else(|| root.join(&label));
            vec![(label, RunManifest { target: RunTarget::Config(path.clone()), out: dir, stride, overrides })]
        }
        None => {
            let several = args.scenario.len() > 1;
            args.scenario
                .iter()
                .map(|name| {
                    let dir = match &args.out {
                        Some(o) if several => o.join(name),
                        Some(o) => o.clone(),
                        None => root.join(name),
                    };
                    let m = RunManifest {
                        target: RunTarget::Scenario(name.clone()),
                        out: dir,
                        stride,
                        overrides: overrides.clone(),
                    };
                    (name.clone(), m)
                })
                .collect()
        }
    };

    let outcomes = run_parallel(&manifests, args.jobs as usize);
    let mut code = EXIT_OK;
    for ((label, _), outcome) in manifests.iter().zip(&outcomes) {
        let _ = writeln!(out, "{}", summarize(outcome, label));
        code = code.max(exit_code(outcome));
    }
    // usage errors take precedence over check failures
    if outcomes.iter().any(|o| o.is_err()) {
        code = EXIT_USAGE;
    }
    code
}

/// Runs manifests on up to `jobs` worker threads, preserving order.
fn run_parallel(manifests: &[(String, RunManifest)], jobs: usize) -> Vec<Result<RunOutcome>> {
    let jobs = jobs.clamp(1, manifests.len().max(1));
    if jobs == 1 {
        return manifests.iter().map(|(_, m)| cmd_run(m)).collect();
    }
    let next = std::sync::atomic::AtomicUsize::new(0);
    let mut slots: Vec<Option<Result<RunOutcome>>> = (0..manifests.len()).map(|_| None).collect();
    let results = std::sync::Mutex::new(&mut slots);
    std::thread::scope(|scope| {
        for _ in 0..jobs {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                if i >= manifests.len() {
                    break;
                }
                let outcome = cmd_run(&manifests[i].1);
                results.lock().expect("worker panicked")[i] = Some(outcome);
            });
        }
    });
    slots.into_iter().map(|s| s.expect("every manifest ran")).collect()
}

/// Text report of [`analyze`](cmd_analyze_schedule).
pub fn analyze_schedule_text(
    schedule: &Schedule,
    m: usize,
    windows: &[(f64, usize)],
    witness_path: Option<&Path>,
) -> Result<String> {
    schedule.validate()?;
    let mut s = String::new();
    let line = |s: &mut String, text: String| {
        s.push_str(&text);
        s.push('\n');
    };
    let sums = partial_sum_diagnostics(schedule, m)?;
    line(&mut s, format!("schedule: {schedule}"));
    line(&mut s, format!("condition (T): {:?}", schedule.condition_t()));
    line(&mut s, format!("sum_sq_diverges: {}", schedule.sum_sq_diverges()));
    line(&mut s, format!("terms: {}", sums.terms));
    line(&mut s, format!("sum_sq: {:.16e}", sums.sum_sq));
    line(&mut s, format!("sum_over_n: {:.16e}", sums.sum_over_n));
    for &(delta, k) in windows {
        if m < k + 1 {
            line(&mut s, format!("window delta={delta} K={k}: skipped (M < K + 1)"));
            continue;
        }
        let w = check_window_condition(schedule, delta, k, m)?;
        let detail = match w.first_violation {
            Some(n) => format!("false (first violation at n = {n})"),
            None => "true".into(),
        };
        line(&mut s, format!("window delta={delta} K={k}: {detail}"));
    }
    let witness = build_extremal_witness(schedule, m)?;
    for k in 1..=m.min(5) {
        line(&mut s, format!("a_{k}: {:.16e}", witness.a_at(k)));
    }
    let mut decade = 1usize;
    while decade <= m {
        line(&mut s, format!("sumsq({decade}): {:.16e}", witness.sumsq_at(decade)));
        decade = match decade.checked_mul(10) {
            Some(d) => d,
            None => break,
        };
    }
    if decade / 10 != m {
        line(&mut s, format!("sumsq({m}): {:.16e}", witness.sumsq_at(m)));
    }
    let worst_b = witness.b.iter().map(|b| (b - 1.0).abs()).fold(0.0, f64::max);
    line(&mut s, format!("max |b_m - 1|: {worst_b:.3e}"));
    if let Some(path) = witness_path {
        write_file(path, &witness_csv(&witness))?;
        line(&mut s, format!("witness written to {}", path.display()));
    }
    Ok(s)
}

/// Prints schedule diagnostics; exit 1 on malformed input.
pub fn cmd_analyze_schedule(
    schedule: &Schedule,
    m: usize,
    windows: &[(f64, usize)],
    witness_path: Option<&Path>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    match analyze_schedule_text(schedule, m, windows, witness_path) {
        Ok(text) => {
            let _ = out.write_all(text.as_bytes());
            EXIT_OK
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

pub fn cmd_list(out: &mut dyn Write) -> i32 {
    for info in CATALOGUE {
        let note = if info.documentation_only { " [reference only]" } else { "" };
        let _ = writeln!(out, "{:<26} {}{note}\n{:<26} ({})", info.name, info.summary, "", info.provenance);
    }
    EXIT_OK
}

/// Parses `args` (including the program name) and executes the command.
pub fn run_with_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    match cli.command {
        Command::Run(args) => {
            let mut buf = Vec::new();
            let code = run_command(args, &mut buf);
            let target: &mut dyn Write = if code == EXIT_USAGE { err } else { out };
            let _ = target.write_all(&buf);
            code
        }
        Command::Analyze(a) => cmd_analyze_schedule(&a.schedule, a.m, &a.windows, a.witness.as_deref(), out, err),
        Command::List => cmd_list(out),
    }
}

/// Entry point used by the binary.
pub fn main() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with_args(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}
