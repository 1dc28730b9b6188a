//! Sets sharing an interior ball: the product-form rate bound along a run.

use remoteproj::diagnostics::check_rate_bound;
use remoteproj::scenarios::ball_interior;
use remoteproj::{Result, Schedule};

/// Total number of bound violations over a few seeds and schedules.
pub fn run() -> Result<usize> {
    let mut violations = 0;
    for seed in 0..5 {
        for schedule in [Schedule::constant(1.0)?, Schedule::power(0.25)?] {
            let cfg = ball_interior(12, 4, 0.5, seed, &schedule, 500)?;
            let trace = cfg.run()?;
            let ball = cfg.extras.ball.as_ref().expect("ball parameters");
            let report = check_rate_bound(&trace, &cfg.family, &ball.center, ball.radius, &schedule)?;
            let last = report.points.last().expect("x0 is always retained");
            println!(
                "seed {seed} {schedule:<12} {:>3} steps  |x_N - P x_N| {:.3e} ≤ B_N {:.3e}",
                trace.steps.len(),
                last.actual,
                last.bound
            );
            violations += report.violations.len();
        }
    }
    Ok(violations)
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run().map(|_| ())
}
