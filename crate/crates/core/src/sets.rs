//! Closed convex primitives with exact metric projections.
//!
//! Families are plain lists of primitives; the intersection of a family is
//! never projected onto directly.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::Vector;

const UNIT_TOL: f64 = 1e-12;
const ORTHO_TOL: f64 = 1e-10;

/// A closed convex set with a closed-form projection.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ConvexSet {
    /// `{y : ⟨y, g⟩ = 0}`
    Hyperplane {
        normal: Vector,
    },
    /// `{y : ⟨y, g⟩ = c}`
    AffineHyperplane {
        normal: Vector,
        offset: f64,
    },
    /// `{y : ⟨y, g⟩ ≤ c}`
    Halfspace {
        normal: Vector,
        offset: f64,
    },
    /// `{y : ℓ ≤ ⟨y, g⟩ ≤ u}`
    Slab {
        normal: Vector,
        lower: f64,
        upper: f64,
    },
    Ball {
        center: Vector,
        radius: f64,
    },
    /// `span{v}`
    Line {
        direction: Vector,
    },
    /// Span of an orthonormal family.
    Subspace {
        basis: Vec<Vector>,
    },
    #[serde(rename = "box")]
    Box {
        lower: Vector,
        upper: Vector,
    },
}

fn check_unit(v: &Vector, what: &str) -> Result<()> {
    if (v.norm() - 1.0).abs() > UNIT_TOL {
        return Err(Error::InvalidSet(format!("{what} must have unit norm, has norm {}", v.norm())));
    }
    Ok(())
}

fn check_finite(x: f64, what: &str) -> Result<()> {
    if !x.is_finite() {
        return Err(Error::InvalidSet(format!("{what} must be finite")));
    }
    Ok(())
}

impl ConvexSet {
    pub fn hyperplane(normal: Vector) -> Result<Self> {
        Self::Hyperplane { normal }.validated()
    }

    pub fn affine_hyperplane(normal: Vector, offset: f64) -> Result<Self> {
        Self::AffineHyperplane { normal, offset }.validated()
    }

    pub fn halfspace(normal: Vector, offset: f64) -> Result<Self> {
        Self::Halfspace { normal, offset }.validated()
    }

    pub fn slab(normal: Vector, lower: f64, upper: f64) -> Result<Self> {
        Self::Slab { normal, lower, upper }.validated()
    }

    pub fn ball(center: Vector, radius: f64) -> Result<Self> {
        Self::Ball { center, radius }.validated()
    }

    pub fn line(direction: Vector) -> Result<Self> {
        Self::Line { direction }.validated()
    }

    pub fn subspace(basis: Vec<Vector>) -> Result<Self> {
        Self::Subspace { basis }.validated()
    }

    pub fn cuboid(lower: Vector, upper: Vector) -> Result<Self> {
        Self::Box { lower, upper }.validated()
    }

    fn validated(self) -> Result<Self> {
        self.validate()?;
        Ok(self)
    }

    /// Checks the parameter invariants: unit normals and directions,
    /// `ℓ ≤ u`, `r > 0`, orthonormal bases, consistent dimensions.
    pub fn validate(&self) -> Result<()> {
        match self {
            Self::Hyperplane { normal } => check_unit(normal, "hyperplane normal"),
            Self::AffineHyperplane { normal, offset } => {
                check_unit(normal, "hyperplane normal")?;
                check_finite(*offset, "offset")
            }
            Self::Halfspace { normal, offset } => {
                check_unit(normal, "half-space normal")?;
                check_finite(*offset, "offset")
            }
            Self::Slab { normal, lower, upper } => {
                check_unit(normal, "slab normal")?;
                check_finite(*lower, "slab lower bound")?;
                check_finite(*upper, "slab upper bound")?;
                if lower > upper {
                    return Err(Error::InvalidSet(format!("slab bounds out of order: {lower} > {upper}")));
                }
                Ok(())
            }
            Self::Ball { radius, .. } => {
                if !(radius.is_finite() && *radius > 0.0) {
                    return Err(Error::InvalidSet(format!("ball radius must be positive, got {radius}")));
                }
                Ok(())
            }
            Self::Line { direction } => check_unit(direction, "line direction"),
            Self::Subspace { basis } => {
                let first = basis.first().ok_or_else(|| Error::InvalidSet("subspace basis is empty".into()))?;
                for b in basis {
                    if b.dim() != first.dim() {
                        return Err(Error::InvalidSet("subspace basis vectors differ in dimension".into()));
                    }
                }
                for (i, u) in basis.iter().enumerate() {
                    for (j, w) in basis.iter().enumerate().skip(i) {
                        let expect = if i == j { 1.0 } else { 0.0 };
                        if (u.dot(w) - expect).abs() > ORTHO_TOL {
                            return Err(Error::InvalidSet("subspace basis is not orthonormal".into()));
                        }
                    }
                }
                Ok(())
            }
            Self::Box { lower, upper } => {
                if lower.dim() != upper.dim() {
                    return Err(Error::InvalidSet("box bounds differ in dimension".into()));
                }
                if lower.iter().zip(upper.iter()).any(|(l, u)| l > u) {
                    return Err(Error::InvalidSet("box has a lower bound above its upper bound".into()));
                }
                Ok(())
            }
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Self::Hyperplane { .. } => "hyperplane",
            Self::AffineHyperplane { .. } => "affine_hyperplane",
            Self::Halfspace { .. } => "halfspace",
            Self::Slab { .. } => "slab",
            Self::Ball { .. } => "ball",
            Self::Line { .. } => "line",
            Self::Subspace { .. } => "subspace",
            Self::Box { .. } => "box",
        }
    }

    pub fn ambient_dim(&self) -> usize {
        match self {
            Self::Hyperplane { normal }
            | Self::AffineHyperplane { normal, .. }
            | Self::Halfspace { normal, .. }
            | Self::Slab { normal, .. } => normal.dim(),
            Self::Ball { center, .. } => center.dim(),
            Self::Line { direction } => direction.dim(),
            Self::Subspace { basis } => basis[0].dim(),
            Self::Box { lower, .. } => lower.dim(),
        }
    }

    /// Metric projection of `x` onto the set.
    pub fn project(&self, x: &Vector) -> Result<Vector> {
        x.check_dim(self.ambient_dim())?;
        Ok(self.project_unchecked(x))
    }

    /// Distance from `x` to the set, `|x - P x|`.
    pub fn distance(&self, x: &Vector) -> Result<f64> {
        x.check_dim(self.ambient_dim())?;
        Ok(self.distance_unchecked(x))
    }

    /// Membership with the scale-aware tolerance `dist ≤ 1e-9 (1 + |x|)`.
    pub fn contains(&self, x: &Vector) -> Result<bool> {
        Ok(self.distance(x)? <= 1e-9 * (1.0 + x.norm()))
    }

    pub(crate) fn project_unchecked(&self, x: &Vector) -> Vector {
        match self {
            Self::Hyperplane { normal } => {
                let mut p = x.clone();
                p.add_scaled(-x.dot(normal), normal);
                p
            }
            Self::AffineHyperplane { normal, offset } => {
                let mut p = x.clone();
                p.add_scaled(offset - x.dot(normal), normal);
                p
            }
            Self::Halfspace { normal, offset } => {
                let s = x.dot(normal);
                let mut p = x.clone();
                if s > *offset {
                    p.add_scaled(offset - s, normal);
                }
                p
            }
            Self::Slab { normal, lower, upper } => {
                let s = x.dot(normal);
                let target = s.clamp(*lower, *upper);
                let mut p = x.clone();
                if target != s {
                    p.add_scaled(target - s, normal);
                }
                p
            }
            Self::Ball { center, radius } => {
                let d = x.sub(center);
                let n = d.norm();
                if n <= *radius {
                    x.clone()
                } else {
                    let mut p = center.clone();
                    p.add_scaled(radius / n, &d);
                    p
                }
            }
            Self::Line { direction } => direction.scale(x.dot(direction)),
            Self::Subspace { basis } => {
                let mut p = Vector::zeros(x.dim());
                for b in basis {
                    p.add_scaled(x.dot(b), b);
                }
                p
            }
            Self::Box { lower, upper } => {
                let mut p = x.clone();
                for i in 0..p.dim() {
                    p[i] = p[i].clamp(lower[i], upper[i]);
                }
                p
            }
        }
    }

    pub(crate) fn distance_unchecked(&self, x: &Vector) -> f64 {
        match self {
            Self::Hyperplane { normal } => x.dot(normal).abs(),
            Self::AffineHyperplane { normal, offset } => (x.dot(normal) - offset).abs(),
            Self::Halfspace { normal, offset } => (x.dot(normal) - offset).max(0.0),
            Self::Slab { normal, lower, upper } => {
                let s = x.dot(normal);
                (lower - s).max(s - upper).max(0.0)
            }
            Self::Ball { center, radius } => (x.distance_to(center) - radius).max(0.0),
            Self::Line { direction } => {
                let c = x.dot(direction);
                x.iter().zip(direction.iter()).map(|(xi, vi)| (xi - c * vi) * (xi - c * vi)).sum::<f64>().sqrt()
            }
            Self::Box { lower, upper } => (0..x.dim())
                .map(|i| {
                    let e = (lower[i] - x[i]).max(x[i] - upper[i]).max(0.0);
                    e * e
                })
                .sum::<f64>()
                .sqrt(),
            Self::Subspace { .. } => x.distance_to(&self.project_unchecked(x)),
        }
    }

    /// Closed-form certificate that `B(a, r) ⊂ self`.
    ///
    /// Proper affine sets (hyperplanes, lines, subspaces of lower dimension)
    /// contain no ball of positive radius.
    pub fn contains_ball(&self, a: &Vector, r: f64) -> Result<bool> {
        a.check_dim(self.ambient_dim())?;
        let ok = match self {
            Self::Hyperplane { .. } | Self::AffineHyperplane { .. } | Self::Line { .. } => {
                r <= 0.0 && self.distance_unchecked(a) == 0.0
            }
            Self::Halfspace { normal, offset } => a.dot(normal) + r <= *offset,
            Self::Slab { normal, lower, upper } => {
                let s = a.dot(normal);
                lower + r <= s && s + r <= *upper
            }
            Self::Ball { center, radius } => a.distance_to(center) + r <= *radius,
            Self::Subspace { basis } => {
                if basis.len() == a.dim() {
                    true
                } else {
                    r <= 0.0 && self.distance_unchecked(a) == 0.0
                }
            }
            Self::Box { lower, upper } => (0..a.dim()).all(|i| lower[i] + r <= a[i] && a[i] + r <= upper[i]),
        };
        Ok(ok)
    }
}

/// Outcome of [`estimate_quasi_symmetry`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuasiSymmetryReport {
    pub center: Vector,
    pub radius: f64,
    /// Largest grid value `θ = 2^-k` for which every sampled reflection stays
    /// in the set; `None` when even the grid floor fails.
    pub theta: Option<f64>,
    /// A sample whose reflections leave the set down to the grid floor.
    pub witness: Option<Vector>,
    pub sample_count: usize,
}

impl QuasiSymmetryReport {
    pub fn fails(&self) -> bool {
        self.theta.is_none()
    }
}

/// Grid floor for the reflection factor.
pub const THETA_FLOOR_EXP: i32 = 30;

pub(crate) fn random_unit(rng: &mut ChaCha8Rng, dim: usize) -> Vector {
    loop {
        let g: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
        let v = Vector::new(g).expect("normal samples are finite");
        if let Ok(u) = v.normalized() {
            return u;
        }
    }
}

fn random_in_ball(rng: &mut ChaCha8Rng, center: &Vector, radius: f64) -> Vector {
    let dim = center.dim();
    let dir = random_unit(rng, dim);
    let rho = radius * rng.gen::<f64>().powf(1.0 / dim as f64);
    let mut p = center.clone();
    p.add_scaled(rho, &dir);
    p
}

/// Numerical estimate of the quasi-symmetry constant `θ(r)` of a set about `a`.
///
/// Samples `C ∩ B(a, r)` (uniform ball samples that land in the set, the
/// projections of those that do not, and projections of exterior samples
/// from `B(a, 2r)` that fall back inside `B(a, r)`), then searches the grid
/// `1, 1/2, ..., 2^-30` for the largest `θ` with `a - θ(x - a) ∈ C` for
/// every sample. Reflections are tested with a tolerance proportional to `θ`.
pub fn estimate_quasi_symmetry(
    set: &ConvexSet,
    a: &Vector,
    r: f64,
    sample_count: usize,
    seed: u64,
) -> Result<QuasiSymmetryReport> {
    a.check_dim(set.ambient_dim())?;
    if !(r.is_finite() && r > 0.0) {
        return Err(Error::InvalidArgument(format!("radius must be positive, got {r}")));
    }
    if !set.contains(a)? {
        return Err(Error::NotInSet);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut samples = Vec::with_capacity(2 * sample_count);
    for _ in 0..sample_count {
        let p = random_in_ball(&mut rng, a, r);
        if set.contains(&p)? {
            samples.push(p);
        } else {
            samples.push(set.project_unchecked(&p));
        }
        let e = random_in_ball(&mut rng, a, 2.0 * r);
        let q = set.project_unchecked(&e);
        if q.distance_to(a) <= r {
            samples.push(q);
        }
    }
    if samples.is_empty() {
        return Err(Error::NoSamples);
    }

    let reflects = |x: &Vector, theta: f64| {
        let d = x.sub(a);
        let mut p = a.clone();
        p.add_scaled(-theta, &d);
        let tol = 1e-9 * theta * (1.0 + d.norm()) + 1e-15 * (1.0 + a.norm());
        set.distance_unchecked(&p) <= tol
    };

    for k in 0..=THETA_FLOOR_EXP {
        let theta = 0.5f64.powi(k);
        if samples.iter().all(|x| reflects(x, theta)) {
            return Ok(QuasiSymmetryReport {
                center: a.clone(),
                radius: r,
                theta: Some(theta),
                witness: None,
                sample_count: samples.len(),
            });
        }
    }
    let floor = 0.5f64.powi(THETA_FLOOR_EXP);
    let witness = samples.iter().find(|x| !reflects(x, floor)).cloned();
    Ok(QuasiSymmetryReport { center: a.clone(), radius: r, theta: None, witness, sample_count: samples.len() })
}
