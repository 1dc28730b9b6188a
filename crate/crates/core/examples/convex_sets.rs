//! Projection oracles and the quasi-symmetry estimate.

use remoteproj::sets::estimate_quasi_symmetry;
use remoteproj::{ConvexSet, Result, Vector};

pub fn run() -> Result<Vec<(String, Option<f64>)>> {
    let v = |c: &[f64]| Vector::new(c.to_vec());
    let x = v(&[3.0, -1.0, 2.0])?;
    let sets = vec![
        ConvexSet::halfspace(v(&[1.0, 0.0, 0.0])?, 1.0)?,
        ConvexSet::slab(v(&[0.0, 1.0, 0.0])?, -0.5, 0.5)?,
        ConvexSet::ball(v(&[0.0, 0.0, 0.0])?, 2.0)?,
        ConvexSet::line(v(&[0.0, 0.0, 1.0])?)?,
        ConvexSet::cuboid(v(&[-1.0, -1.0, -1.0])?, v(&[1.0, 1.0, 1.0])?)?,
    ];
    let center = Vector::zeros(3);
    let mut thetas = Vec::new();
    for set in &sets {
        let p = set.project(&x)?;
        let q = estimate_quasi_symmetry(set, &center, 0.5, 200, 1)?;
        println!("{:<10} P x = {:?}  dist = {:.6}  theta = {:?}", set.kind(), p.as_slice(), set.distance(&x)?, q.theta);
        thetas.push((set.kind().to_string(), q.theta));
    }
    Ok(thetas)
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run().map(|_| ())
}
