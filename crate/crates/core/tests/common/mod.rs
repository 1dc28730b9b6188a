//! Seeded random families shared by the property and acceptance suites.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use remoteproj::{ConvexSet, Vector};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn unit(rng: &mut ChaCha8Rng, d: usize) -> Vector {
    loop {
        let v = Vector::new((0..d).map(|_| StandardNormal.sample(&mut *rng)).collect()).unwrap();
        if let Ok(u) = v.normalized() {
            return u;
        }
    }
}

/// Half-spaces, slabs, and balls, each containing 0.
pub fn family_through_origin(rng: &mut ChaCha8Rng, d: usize, k: usize) -> Vec<ConvexSet> {
    (0..k)
        .map(|_| match rng.gen_range(0..3) {
            0 => ConvexSet::halfspace(unit(rng, d), rng.gen_range(0.0..1.0)).unwrap(),
            1 => {
                let g = unit(rng, d);
                ConvexSet::slab(g, -rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0)).unwrap()
            }
            _ => {
                let c = unit(rng, d).scale(rng.gen_range(0.0..2.0));
                let r = c.norm() + rng.gen_range(0.0..0.5);
                ConvexSet::ball(c, r).unwrap()
            }
        })
        .collect()
}

pub fn point(rng: &mut ChaCha8Rng, d: usize, radius: f64) -> Vector {
    unit(rng, d).scale(radius)
}
