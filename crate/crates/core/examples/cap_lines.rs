//! Lines through a spherical cap: with Σt_n² < ∞ the remote projections do
//! not converge in norm.

use remoteproj::scenarios::cap_lines;
use remoteproj::{Result, Schedule};

pub struct Outcome {
    pub m: usize,
    pub norm_floor_ratio: f64,
    pub oscillation: f64,
    pub norm_cauchy: bool,
}

pub fn run() -> Result<Outcome> {
    let cfg = cap_lines(&Schedule::power(1.0)?, 10_000, 8, 7)?;
    let trace = cfg.run()?;
    let cap = cfg.extras.cap.as_ref().expect("cap parameters");
    let norms = trace.x_norms();
    let xm = norms[cap.m];
    let floor = norms[cap.m..].iter().copied().fold(f64::INFINITY, f64::min);
    let verdict = cfg.verdict(&trace)?;
    println!("m = {}, |x_m| = {xm:.6}, min |x_n| / |x_m| = {:.6}", cap.m, floor / xm);
    println!("oscillation of ⟨x_n, w⟩ over the tail: {:.6}", verdict.oscillation[0]);
    println!("norm Cauchy: {}", verdict.norm_cauchy);
    Ok(Outcome {
        m: cap.m,
        norm_floor_ratio: floor / xm,
        oscillation: verdict.oscillation[0],
        norm_cauchy: verdict.norm_cauchy,
    })
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run().map(|_| ())
}
