//! Remotest projections onto a line and a stripe in the plane.
//!
//! Starting from (-4, 4) the iteration reaches (0, 1) in two steps, while the
//! nearest point of the intersection is (0, 2).

use remoteproj::scenarios::stripe_example;
use remoteproj::{Result, Vector};

pub struct Outcome {
    pub x1: Vector,
    pub limit: Vector,
    pub gap: f64,
}

pub fn run() -> Result<Outcome> {
    let cfg = stripe_example();
    let trace = cfg.run()?;
    let x1 = trace.iterates.iter().find(|it| it.n == 1).expect("stride 1 keeps x1").point.clone();
    let reference = cfg.extras.reference_projection.clone().expect("known projection");
    let gap = trace.final_point.distance_to(&reference);
    for step in &trace.steps {
        println!("step {}: project onto set {} (distance {:.6})", step.n, step.alpha, step.dist_chosen);
    }
    println!("limit {:?}, P_C x0 {:?}, gap {gap:.12}", trace.final_point.as_slice(), reference.as_slice());
    Ok(Outcome { x1, limit: trace.final_point, gap })
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run().map(|_| ())
}
