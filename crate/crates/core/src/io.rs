//! File formats: `trace.csv`, `witness.csv`, `report.json`, `config.json`.
//!
//! Floating-point fields are written as `{:.16e}` (17 significant digits),
//! which round-trips every `f64` exactly.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::diagnostics::ConvergenceVerdict;
use crate::engine::{StepRecord, Trace, WEAKNESS_TOL};
use crate::error::{Error, Result};
use crate::hilbert::Vector;
use crate::scenarios::{Check, ScenarioConfig};
use crate::schedule::WitnessSequence;

pub const TRACE_COLUMNS: [&str; 9] =
    ["n", "alpha", "dist_chosen", "dist_max", "t_required", "t_effective", "step_norm", "x_norm", "sin_eps"];

pub const WITNESS_COLUMNS: [&str; 6] = ["m", "t", "a", "partial_sum", "b", "sumsq"];

fn num(out: &mut String, x: f64) {
    write!(out, "{x:.16e}").expect("writing to a String cannot fail");
}

pub fn trace_csv(steps: &[StepRecord]) -> String {
    let mut out = TRACE_COLUMNS.join(",");
    out.push('\n');
    for s in steps {
        write!(out, "{},{}", s.n, s.alpha).expect("infallible");
        for x in [s.dist_chosen, s.dist_max, s.t_required, s.t_effective, s.step_norm, s.x_norm, s.sin_eps] {
            out.push(',');
            num(&mut out, x);
        }
        out.push('\n');
    }
    out
}

/// Parses a `trace.csv`; `flagged` is recomputed from the weakness inequality.
pub fn parse_trace_csv(text: &str) -> Result<Vec<StepRecord>> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| Error::InvalidArgument("empty trace file".into()))?;
    if header != TRACE_COLUMNS.join(",") {
        return Err(Error::InvalidArgument(format!("unexpected trace header `{header}`")));
    }
    let bad = |row: usize, what: &str| Error::InvalidArgument(format!("trace row {row}: {what}"));
    lines
        .enumerate()
        .map(|(row, line)| {
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != TRACE_COLUMNS.len() {
                return Err(bad(row, "wrong number of fields"));
            }
            let int = |i: usize| fields[i].parse::<usize>().map_err(|e| bad(row, &e.to_string()));
            let flt = |i: usize| fields[i].parse::<f64>().map_err(|e| bad(row, &e.to_string()));
            let (dist_chosen, dist_max, t_required) = (flt(2)?, flt(3)?, flt(4)?);
            Ok(StepRecord {
                n: int(0)?,
                alpha: int(1)?,
                dist_chosen,
                dist_max,
                t_required,
                t_effective: flt(5)?,
                step_norm: flt(6)?,
                x_norm: flt(7)?,
                sin_eps: flt(8)?,
                flagged: dist_chosen < t_required * dist_max - WEAKNESS_TOL,
            })
        })
        .collect()
}

pub fn witness_csv(w: &WitnessSequence) -> String {
    let mut out = WITNESS_COLUMNS.join(",");
    out.push('\n');
    for i in 0..w.len() {
        write!(out, "{}", i + 1).expect("infallible");
        for x in [w.t[i], w.a[i], w.partial_sums[i], w.b[i], w.sumsq[i]] {
            out.push(',');
            num(&mut out, x);
        }
        out.push('\n');
    }
    out
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|source| Error::Io { path: path.to_path_buf(), source })
}

pub fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })
}

/// Summary of one run, written as `report.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub scenario: String,
    pub steps: usize,
    pub stop_reason: String,
    pub flagged_steps: usize,
    pub initial_norm: f64,
    pub final_norm: f64,
    pub limit: Vector,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference_projection: Option<Vector>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub distance_to_reference: Option<f64>,
    pub norm_cauchy: bool,
    pub convergence: ConvergenceVerdict,
    pub checks: Vec<Check>,
    /// Names of the checks that failed.
    pub failed_checks: Vec<String>,
    pub passed: bool,
}

impl RunReport {
    pub fn build(cfg: &ScenarioConfig, trace: &Trace) -> Result<Self> {
        let convergence = cfg.verdict(trace)?;
        let checks = cfg.checks(trace)?;
        let failed_checks: Vec<String> = checks.iter().filter(|c| !c.passed).map(|c| c.name.clone()).collect();
        let limit = trace.final_point.clone();
        let reference_projection = cfg.extras.reference_projection.clone();
        let distance_to_reference = reference_projection.as_ref().map(|p| p.distance_to(&limit));
        Ok(Self {
            scenario: cfg.name.clone(),
            steps: trace.steps.len(),
            stop_reason: trace.stop_reason.as_str().to_string(),
            flagged_steps: trace.flag_count(),
            initial_norm: trace.initial_norm(),
            final_norm: trace.x_norms().last().copied().unwrap_or(0.0),
            limit,
            reference_projection,
            distance_to_reference,
            norm_cauchy: convergence.norm_cauchy,
            convergence,
            passed: failed_checks.is_empty(),
            checks,
            failed_checks,
        })
    }
}
