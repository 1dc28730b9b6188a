//! Quasi-periodic projection orders and the 1/(6M) effective-weakness bound.

use remoteproj::diagnostics::check_window_bound;
use remoteproj::scenarios::quasi_periodic;
use remoteproj::Result;

pub struct Outcome {
    pub windows_ok: bool,
    pub symmetric_converged: bool,
}

pub fn run() -> Result<Outcome> {
    let mut windows_ok = true;
    for (k, m) in [(3, 3), (3, 6), (5, 5), (5, 10)] {
        let cfg = quasi_periodic(k, m, 3, 4, 500, false)?;
        let trace = cfg.run()?;
        let report = check_window_bound(&trace, m)?;
        println!(
            "K={k} M={m}: {} steps ({}), {} windows, bound 1/(6M) = {:.4} holds: {}",
            trace.steps.len(),
            trace.stop_reason.as_str(),
            report.windows_checked,
            report.threshold,
            report.holds
        );
        windows_ok &= report.holds;
    }
    let cfg = quasi_periodic(5, 10, 3, 4, 2000, true)?;
    let trace = cfg.run()?;
    let verdict = cfg.verdict(&trace)?;
    println!("symmetric variant: norm Cauchy {} (tail diameter {:.3e})", verdict.norm_cauchy, verdict.tail_diameter);
    Ok(Outcome { windows_ok, symmetric_converged: verdict.norm_cauchy })
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run().map(|_| ())
}
