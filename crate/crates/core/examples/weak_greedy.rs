//! The Weak Greedy Algorithm is remote projection onto the hyperplanes `g^⊥`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use remoteproj::engine::{run_remote, run_wga};
use remoteproj::{ConvexSet, Result, Schedule, SelectionPolicy, Vector};

/// Largest coordinate difference between the two iterations over all steps.
pub fn run() -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut gaussian =
        |d: usize| -> Result<Vector> { Vector::new((0..d).map(|_| StandardNormal.sample(&mut rng)).collect()) };
    let dictionary: Vec<Vector> = (0..10).map(|_| gaussian(6)?.normalized()).collect::<Result<_>>()?;
    let x0 = gaussian(6)?;
    let schedule = Schedule::constant(1.0)?;

    let wga = run_wga(&dictionary, &schedule, &x0, 100, 0.0)?;
    let planes: Vec<ConvexSet> = dictionary.iter().map(|g| ConvexSet::hyperplane(g.clone())).collect::<Result<_>>()?;
    let remote = run_remote(&planes, &schedule, &x0, &SelectionPolicy::Remotest, 100, 0.0, None)?;

    let worst = wga
        .iterates
        .iter()
        .zip(&remote.iterates)
        .flat_map(|(a, b)| a.point.iter().zip(b.point.iter()).map(|(p, q)| (p - q).abs()))
        .fold(0.0, f64::max);
    println!("{} WGA steps, residual norm {:.3e}", wga.steps.len(), wga.final_point.norm());
    println!("max coordinate difference to remotest hyperplane projections: {worst:.3e}");
    Ok(worst)
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run().map(|_| ())
}
