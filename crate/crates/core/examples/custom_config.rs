//! Writing a scenario config by hand and running it through the CLI layer.
//!
//! Produces `trace.csv`, `report.json`, and `config.json` in a directory given
//! as the first argument (a temporary directory by default).

use std::path::{Path, PathBuf};

use remoteproj::cli::{cmd_run, RunManifest};
use remoteproj::{Result, ScenarioConfig};

const CONFIG: &str = r#"{
  "name": "two_balls_and_a_halfspace",
  "family": [
    {"kind": "ball", "center": [1.0, 0.0, 0.0], "radius": 1.5},
    {"kind": "ball", "center": [-1.0, 0.0, 0.0], "radius": 1.5},
    {"kind": "halfspace", "normal": [0.0, 0.0, 1.0], "offset": 0.25}
  ],
  "schedule": {"kind": "power", "exponent": 0.5},
  "policy": {"kind": "threshold_first"},
  "x0": [0.5, 4.0, 3.0],
  "horizon": 300,
  "a_ref": [0.0, 0.0, 0.0]
}"#;

pub fn run(dir: &Path) -> Result<bool> {
    let cfg = ScenarioConfig::from_json(CONFIG)?;
    let config_path = dir.join("input.json");
    remoteproj::io::write_file(&config_path, &cfg.to_json()?)?;
    let outcome = cmd_run(&RunManifest::config(&config_path, dir.join("out")))?;
    let report = &outcome.report;
    println!("{}: {} steps, stop {}", report.scenario, report.steps, report.stop_reason);
    for check in &report.checks {
        println!("  {:<20} {}  {}", check.name, if check.passed { "ok" } else { "FAILED" }, check.detail);
    }
    Ok(report.passed)
}

#[allow(dead_code)]
fn main() -> Result<()> {
    let dir =
        std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(|| std::env::temp_dir().join("remoteproj-custom"));
    std::fs::create_dir_all(&dir).map_err(|source| remoteproj::Error::Io { path: dir.clone(), source })?;
    run(&dir).map(|_| ())
}
