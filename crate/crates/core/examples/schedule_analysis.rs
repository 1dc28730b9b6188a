//! Condition (T), the window condition, and the extremal witness sequence.

use remoteproj::schedule::{build_extremal_witness, check_window_condition, partial_sum_diagnostics};
use remoteproj::{Result, Schedule};

pub fn run() -> Result<Vec<(String, f64)>> {
    let mut sumsq = Vec::new();
    for spec in ["constant:1", "power:0.5", "power:1", "harmonic_log", "alternating:1,0"] {
        let schedule: Schedule = spec.parse()?;
        let sums = partial_sum_diagnostics(&schedule, 10_000)?;
        let window = check_window_condition(&schedule, 0.01, 5, 10_000)?;
        let witness = build_extremal_witness(&schedule, 10_000)?;
        println!(
            "{spec:<16} condition (T) {:?}; Σt² = {:.4}; window(0.01, 5) {}; witness sumsq = {:.6}",
            schedule.condition_t(),
            sums.sum_sq,
            window.holds,
            witness.sumsq_at(10_000)
        );
        sumsq.push((spec.to_string(), witness.sumsq_at(10_000)));
    }
    Ok(sumsq)
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run().map(|_| ())
}
