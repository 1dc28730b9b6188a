//! Reproducible experiment constructors.
//!
//! Every scenario is a plain [`ScenarioConfig`]: the family, the schedule, the
//! selection policy, the start, and the horizon, plus scenario-specific
//! [`Extras`]. Randomness always comes from an explicit seed, so a config
//! fully determines its trace.

use std::f64::consts::FRAC_PI_6;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::diagnostics::{
    check_energy, check_fejer, check_rate_bound, check_sin_summability, check_window_bound, detect_convergence,
    law_of_cosines_residual, ConvergenceVerdict, DEFAULT_TAIL_FRACTION,
};
use crate::engine::{first_incomplete_window, RemoteProjection, SelectionPolicy, StopReason, Trace};
use crate::error::{Error, Result};
use crate::hilbert::Vector;
use crate::schedule::Schedule;
use crate::sets::{random_unit, ConvexSet};

pub const DEFAULT_TOL: f64 = 1e-12;

/// `cos 30°`, the cap boundary.
pub fn cap_cos() -> f64 {
    3f64.sqrt() / 2.0
}

/// A full experiment description; serializes to the strict JSON schema.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub name: String,
    pub family: Vec<ConvexSet>,
    pub schedule: Schedule,
    pub policy: SelectionPolicy,
    pub x0: Vector,
    pub horizon: usize,
    #[serde(default)]
    pub a_ref: Option<Vector>,
    #[serde(default)]
    pub extras: Extras,
}

/// Scenario-specific parameters. Unknown keys are rejected.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Extras {
    /// Stopping tolerance of the engine.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Analytic projection of `x0` onto the intersection, when known.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference_projection: Option<Vector>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ball: Option<BallParams>,
    /// Quasi-periodicity constant `M`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symmetric: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cap: Option<CapLinesParams>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BallParams {
    pub center: Vector,
    pub radius: f64,
}

/// Geometry of the cap-lines construction.
///
/// The family is `[L(a), L(b), L(s_m), L(s_{m+1}), ...]`; the walk points
/// `s_n` are the directions of the family lines from index 2 on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CapLinesParams {
    /// First index of the walk; `Σ_{n ≥ m} τ_n² < 1/4`.
    pub m: usize,
    /// Certified upper bound on `Σ_{n ≥ m} τ_n²`.
    pub tail_bound: f64,
    /// Cap centre `s`.
    pub pole: Vector,
    /// Unit tangent `w₁ ⊥ s` along which the walk oscillates.
    pub axis: Vector,
    pub a: Vector,
    pub b: Vector,
}

impl ScenarioConfig {
    pub fn tol(&self) -> f64 {
        self.extras.tol.unwrap_or(DEFAULT_TOL)
    }

    pub fn dim(&self) -> usize {
        self.x0.dim()
    }

    pub fn validate(&self) -> Result<()> {
        let first = self.family.first().ok_or_else(|| Error::Scenario("family must be nonempty".into()))?;
        let dim = first.ambient_dim();
        for set in &self.family {
            set.validate()?;
            if set.ambient_dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: set.ambient_dim() });
            }
        }
        self.x0.check_dim(dim)?;
        if let Some(a) = &self.a_ref {
            a.check_dim(dim)?;
        }
        self.schedule.validate()?;
        self.policy.validate(self.family.len())?;
        if self.horizon == 0 {
            return Err(Error::Scenario("horizon must be at least 1".into()));
        }
        Ok(())
    }

    /// Runs the engine with retained-iterate `stride` (engine default when `None`).
    pub fn run_with_stride(&self, stride: Option<usize>) -> Result<Trace> {
        self.validate()?;
        RemoteProjection::new(&self.family, &self.schedule, &self.policy)
            .horizon(self.horizon)
            .tol(self.tol())
            .reference(self.a_ref.clone())
            .stride(stride)
            .run(&self.x0)
    }

    pub fn run(&self) -> Result<Trace> {
        self.run_with_stride(None)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
        Self::from_json(&text)
    }

    /// Walk points `s_m, s_{m+1}, ...` of a cap-lines config.
    pub fn cap_walk(&self) -> Option<Vec<&Vector>> {
        self.extras.cap.as_ref()?;
        Some(
            self.family[2..]
                .iter()
                .filter_map(|s| match s {
                    ConvexSet::Line { direction } => Some(direction),
                    _ => None,
                })
                .collect(),
        )
    }

    /// Test functionals for the weak-convergence proxy: the cap axis for
    /// cap-lines, the coordinate functionals otherwise.
    pub fn test_functionals(&self) -> Vec<Vector> {
        match &self.extras.cap {
            Some(cap) => vec![cap.axis.clone()],
            None => (0..self.dim()).map(|i| Vector::basis(self.dim(), i)).collect(),
        }
    }

    /// Scenario invariants evaluated on a finished trace.
    pub fn checks(&self, trace: &Trace) -> Result<Vec<Check>> {
        let mut out = Vec::new();
        if let Some(a) = &trace.a_ref {
            let e = check_energy(trace)?;
            out.push(Check::new(
                "energy",
                e.holds,
                format!("max violation {:.3e}, Σ|y|² {:.6} ≤ {:.6}", e.max_violation, e.step_sq_sum, e.budget),
            ));
            let f = check_fejer(trace, a)?;
            out.push(Check::new("fejer", f.holds, format!("max increase {:.3e}", f.max_increase)));
            let r = law_of_cosines_residual(trace)?;
            out.push(Check::new("law_of_cosines", r <= 1e-8, format!("max residual {r:.3e}")));
        }
        if self.policy.is_searching() || self.extras.cap.is_some() {
            let flags = trace.flag_count();
            out.push(Check::new("weakness_inequality", flags == 0, format!("{flags} flagged steps")));
        }
        match self.name.as_str() {
            "stripe_example" => out.extend(stripe_checks(trace)),
            "cap_lines" => out.extend(self.cap_checks(trace)?),
            "ball_interior" => {
                if let Some(ball) = &self.extras.ball {
                    let rep = check_rate_bound(trace, &self.family, &ball.center, ball.radius, &self.schedule)?;
                    out.push(Check::new(
                        "rate_bound",
                        rep.holds(),
                        format!("{} violations over {} iterates", rep.violations.len(), rep.points.len()),
                    ));
                }
            }
            "quasi_periodic" => {
                if let Some(window) = self.extras.window {
                    let rep = check_window_bound(trace, window)?;
                    out.push(Check::new(
                        "window_bound",
                        rep.holds,
                        format!(
                            "threshold {:.6}, {} windows, first failure {:?}",
                            rep.threshold, rep.windows_checked, rep.first_failure
                        ),
                    ));
                }
                if self.extras.symmetric == Some(true) {
                    let v = self.verdict(trace)?;
                    out.push(Check::new(
                        "norm_convergence",
                        v.norm_cauchy,
                        format!("tail diameter {:.3e}", v.tail_diameter),
                    ));
                }
            }
            _ => {}
        }
        Ok(out)
    }

    pub fn verdict(&self, trace: &Trace) -> Result<ConvergenceVerdict> {
        detect_convergence(trace, &self.test_functionals(), DEFAULT_TAIL_FRACTION)
    }

    fn cap_checks(&self, trace: &Trace) -> Result<Vec<Check>> {
        let cap = self
            .extras
            .cap
            .as_ref()
            .ok_or_else(|| Error::Scenario("cap_lines config without cap parameters".into()))?;
        let m = cap.m;
        let mut out = Vec::new();
        let tau = |n: usize| cap_tau(&self.schedule, n);

        let tail: f64 = (m..=self.horizon).map(|n| tau(n) * tau(n)).sum();
        out.push(Check::new(
            "cap_tail_sum",
            tail < 0.25 && cap.tail_bound < 0.25,
            format!("Σ_{{n=m}}^{{horizon}} τ² = {tail:.6}, certified tail {:.6}, m = {m}", cap.tail_bound),
        ));

        let walk = self.cap_walk().unwrap_or_default();
        let in_cap = walk.iter().all(|s| s.dot(&cap.pole) >= cap_cos() - 1e-10);
        out.push(Check::new("cap_membership", in_cap, format!("{} walk points", walk.len())));
        let worst_link = walk
            .windows(2)
            .enumerate()
            .map(|(i, w)| (w[0].dot(w[1]) - (1.0 - tau(m + i).powi(2)).sqrt()).abs())
            .fold(0.0, f64::max);
        out.push(Check::new("cap_consecutive", worst_link <= 1e-12, format!("max deviation {worst_link:.3e}")));

        let norms = trace.x_norms();
        if norms.len() > m {
            let xm = norms[m];
            let floor = norms[m + 1..].iter().all(|x| x * x >= 0.75 * xm * xm - 1e-9);
            out.push(Check::new("cap_norm_floor", floor, format!("|x_m| = {xm:.6e}")));
            let worst = (m..trace.steps.len())
                .map(|n| (norms[n + 1] - norms[n] * (1.0 - tau(n).powi(2)).sqrt()).abs())
                .fold(0.0, f64::max);
            out.push(Check::new("cap_norm_identity", worst <= 1e-10, format!("max deviation {worst:.3e}")));
            let sin = check_sin_summability(trace, cap_cos() * xm)?;
            out.push(Check::new(
                "sin_summability",
                sin.holds,
                format!("Σ|y| sin ε = {:.6} ≤ {:.6}", sin.partial_sum, sin.bound),
            ));

            let v = self.verdict(trace)?;
            let osc = v.oscillation.first().copied().unwrap_or(0.0);
            out.push(Check::new(
                "cap_non_convergence",
                !v.norm_cauchy && !v.weak_proxy[0] && osc >= 0.1 * xm,
                format!("tail oscillation of ⟨x_n, w⟩ = {osc:.6e} vs 0.1 |x_m| = {:.6e}", 0.1 * xm),
            ));
        } else {
            out.push(Check::new("cap_norm_floor", false, "run ended before step m".into()));
        }
        Ok(out)
    }
}

/// A named pass/fail invariant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &str, passed: bool, detail: String) -> Self {
        Self { name: name.to_string(), passed, detail }
    }
}

/// The two-set planar example whose remotest-projection limit is not `P_C x0`.
pub const STRIPE_X1: [f64; 2] = [-1.0, 1.0];
pub const STRIPE_LIMIT: [f64; 2] = [0.0, 1.0];
pub const STRIPE_PROJECTION: [f64; 2] = [0.0, 2.0];

fn stripe_checks(trace: &Trace) -> Vec<Check> {
    let near = |p: &Vector, q: [f64; 2]| (p[0] - q[0]).abs() <= 1e-12 && (p[1] - q[1]).abs() <= 1e-12;
    let x1 = trace.iterates.iter().find(|it| it.n == 1).map(|it| &it.point);
    let limit = &trace.final_point;
    let gap = limit.distance_to(&Vector::new(STRIPE_PROJECTION.to_vec()).expect("finite"));
    vec![
        Check::new("stripe_x1", x1.is_some_and(|p| near(p, STRIPE_X1)), format!("x1 = {x1:?}")),
        Check::new(
            "stripe_limit",
            near(limit, STRIPE_LIMIT) && trace.steps.len() == 2 && trace.stop_reason == StopReason::InIntersection,
            format!("x2 = {limit:?}, stop {}", trace.stop_reason.as_str()),
        ),
        Check::new("stripe_gap", (gap - 1.0).abs() <= 1e-12, format!("|limit - P_C x0| = {gap}")),
    ]
}

/// Line `{s = 0}` and stripe `{s - 2 ≤ t ≤ s + 2}` in the plane, started at `(-4, 4)`.
pub fn stripe_example() -> ScenarioConfig {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let r2 = 2f64.sqrt();
    let v = |c: [f64; 2]| Vector::new(c.to_vec()).expect("finite");
    ScenarioConfig {
        name: "stripe_example".into(),
        family: vec![
            ConvexSet::line(v([0.0, 1.0])).expect("unit"),
            // t - s ∈ [-2, 2]  ⇔  ⟨y, (1, -1)/√2⟩ ∈ [-√2, √2]
            ConvexSet::slab(v([h, -h]), -r2, r2).expect("unit"),
        ],
        schedule: Schedule::Constant { value: 1.0 },
        policy: SelectionPolicy::Remotest,
        x0: v([-4.0, 4.0]),
        horizon: 100,
        a_ref: Some(v([0.0, 0.0])),
        extras: Extras { reference_projection: Some(v(STRIPE_PROJECTION)), ..Extras::default() },
    }
}

/// `1 / ((n + 2) ln(n + 2))`, the default floor of `τ_n`.
fn harmonic_log(n: usize) -> f64 {
    let k = (n + 2) as f64;
    1.0 / (k * k.ln())
}

/// `τ_n = max(t_n, 1/((n+2) ln(n+2)))`.
pub fn cap_tau(t: &Schedule, n: usize) -> f64 {
    t.t_at(n).max(harmonic_log(n))
}

/// Integral-test bound on `Σ_{n ≥ start} τ_n²`, or an error when `Σ t_n²`
/// is not known to converge for this schedule kind.
fn tau_sq_tail_bound(t: &Schedule, start: usize) -> Result<f64> {
    let k = (start + 2) as f64;
    let h_tail = (1.0 / k + 1.0 / (k * k)) / (k.ln() * k.ln());
    let t_tail = match t {
        Schedule::Constant { value } if *value == 0.0 => 0.0,
        Schedule::Power { exponent } if *exponent > 0.5 => {
            let j = (start + 1) as f64;
            let p = 2.0 * exponent;
            j.powf(-p) + j.powf(1.0 - p) / (p - 1.0)
        }
        Schedule::HarmonicLog {} => h_tail,
        Schedule::Explicit { values } if *values.last().expect("validated") == 0.0 && start >= values.len() => 0.0,
        other => {
            return Err(Error::Scenario(format!(
                "cap_lines needs Σ t_n² < ∞ with a certified tail; `{other}` is not supported \
                 (use constant:0, power with exponent > 1/2, harmonic_log, or explicit ending in 0)"
            )))
        }
    };
    Ok(t_tail + h_tail)
}

/// Largest start index `m` for which `|x_m|² ≈ 4^-m` stays a normal `f64`.
pub const MAX_CAP_START: usize = 400;

/// Smallest `m ≥ 1` with a certified `Σ_{n ≥ m} τ_n² < 1/4`, and that bound.
pub fn cap_start(t: &Schedule, horizon: usize) -> Result<(usize, f64)> {
    t.validate()?;
    let cutoff = 1_000_000usize.max(horizon + 2);
    let cutoff = match t {
        Schedule::Explicit { values } => cutoff.max(values.len()),
        _ => cutoff,
    };
    let beyond = tau_sq_tail_bound(t, cutoff)?;
    let mut suffix = beyond;
    let mut best: Option<(usize, f64)> = None;
    for n in (0..cutoff).rev() {
        let tau = cap_tau(t, n);
        suffix += tau * tau;
        if suffix < 0.25 {
            best = Some((n, suffix));
        } else {
            break;
        }
    }
    let (m, bound) = best.ok_or_else(|| Error::Scenario("no start index with Σ τ² < 1/4 found".into()))?;
    if m == 0 {
        // x_m must lie on L(a), which needs at least one step from x_0 = s
        let tau0 = cap_tau(t, 0);
        return Ok((1, bound - tau0 * tau0));
    }
    Ok((m, bound))
}

/// Remote projections onto lines through a spherical cap that stay away
/// from 0 when `Σ t_n² < ∞`.
///
/// `x0 = s`; the first `m` steps alternate between `L(a)` and `L(b)` so that
/// `x_m ∈ L(a)`, after which step `n` projects onto `L(s_{n+1})`, where
/// consecutive walk points satisfy `⟨s_n, s_{n+1}⟩ = √(1 - τ_n²)`.
pub fn cap_lines(t: &Schedule, horizon: usize, d: usize, walk_seed: u64) -> Result<ScenarioConfig> {
    if d < 3 {
        return Err(Error::Scenario(format!("cap_lines needs dimension at least 3, got {d}")));
    }
    let (m, tail_bound) = cap_start(t, horizon)?;
    if m > MAX_CAP_START {
        return Err(Error::Scenario(format!(
            "start index m = {m} is too large: |x_m|² ≈ 4^-m leaves the f64 range (limit {MAX_CAP_START})"
        )));
    }
    if horizon < m {
        return Err(Error::Scenario(format!("horizon {horizon} is shorter than the start index m = {m}")));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(walk_seed);
    let pole = random_unit(&mut rng, d);
    let axis = loop {
        let mut w = random_unit(&mut rng, d);
        w.add_scaled(-w.dot(&pole), &pole);
        if let Ok(u) = w.normalized() {
            if u.dot(&pole).abs() < 1e-14 {
                break u;
            }
            let mut u2 = u.clone();
            u2.add_scaled(-u.dot(&pole), &pole);
            break u2.normalized()?;
        }
    };
    let point = |phi: f64| {
        let mut p = pole.scale(phi.cos());
        p.add_scaled(phi.sin(), &axis);
        p
    };

    // walk angles φ_n in [-π/6, π/6], s_m = a at φ = π/6, heading towards b
    let mut angles = Vec::with_capacity(horizon + 2 - m);
    let mut phi = FRAC_PI_6;
    let mut dir = -1.0;
    angles.push(phi);
    for n in m..=horizon {
        let step = cap_tau(t, n).asin();
        let mut next = phi + dir * step;
        if next.abs() > FRAC_PI_6 {
            dir = -dir;
            next = phi + dir * step;
        }
        phi = next;
        angles.push(phi);
    }

    let a = point(FRAC_PI_6);
    let b = point(-FRAC_PI_6);
    let mut family = vec![ConvexSet::line(a.clone())?, ConvexSet::line(b.clone())?];
    for &phi in &angles {
        family.push(ConvexSet::line(point(phi))?);
    }

    let mut indices = Vec::with_capacity(horizon);
    for j in 0..m {
        indices.push(if (m - 1 - j) % 2 == 0 { 0 } else { 1 });
    }
    for n in m..horizon {
        indices.push(2 + (n + 1 - m));
    }

    Ok(ScenarioConfig {
        name: "cap_lines".into(),
        family,
        schedule: t.clone(),
        policy: SelectionPolicy::Scripted { indices },
        x0: pole.clone(),
        horizon,
        a_ref: Some(Vector::zeros(d)),
        extras: Extras {
            // |x_m| shrinks like 2^-m, so only exact membership may end the run
            tol: Some(0.0),
            seed: Some(walk_seed),
            cap: Some(CapLinesParams { m, tail_bound, pole, axis, a, b }),
            ..Extras::default()
        },
    })
}

/// `n_sets` random half-spaces `{⟨y, g_i⟩ ≤ c_i}` with `c_i ∈ [r, 1.1r)`, all
/// containing `B(0, r)`, and a start at norm `8r`.
pub fn ball_interior(
    n_sets: usize,
    d: usize,
    r: f64,
    seed: u64,
    schedule: &Schedule,
    horizon: usize,
) -> Result<ScenarioConfig> {
    if n_sets < 2 {
        return Err(Error::Scenario(format!("ball_interior needs at least 2 sets, got {n_sets}")));
    }
    if !(r.is_finite() && r > 0.0) {
        return Err(Error::Scenario(format!("radius must be positive, got {r}")));
    }
    if d == 0 {
        return Err(Error::Scenario("dimension must be positive".into()));
    }
    schedule.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let family = (0..n_sets)
        .map(|_| {
            let g = random_unit(&mut rng, d);
            let c = r * (1.0 + 0.1 * rng.gen::<f64>());
            ConvexSet::halfspace(g, c)
        })
        .collect::<Result<Vec<_>>>()?;
    let x0 = random_unit(&mut rng, d).scale(8.0 * r);
    let center = Vector::zeros(d);
    Ok(ScenarioConfig {
        name: "ball_interior".into(),
        family,
        schedule: schedule.clone(),
        policy: SelectionPolicy::ThresholdFirst,
        x0,
        horizon,
        a_ref: Some(center.clone()),
        extras: Extras { seed: Some(seed), ball: Some(BallParams { center, radius: r }), ..Extras::default() },
    })
}

/// Random index sequence over `0..k` of length `len` in which every `window`
/// consecutive entries contain every index.
///
/// Each index has a deadline (its last position plus `window`); a random
/// choice is kept only if the remaining deadlines stay schedulable, otherwise
/// the index with the earliest deadline is placed.
pub fn quasi_periodic_indices(k: usize, window: usize, len: usize, rng: &mut ChaCha8Rng) -> Result<Vec<usize>> {
    if k == 0 || window < k {
        return Err(Error::Scenario(format!("need 1 ≤ K ≤ M, got K = {k}, M = {window}")));
    }
    let mut deadline: Vec<usize> = vec![window - 1; k];
    let mut out = Vec::with_capacity(len);
    let feasible = |deadline: &[usize], next_pos: usize| {
        let mut ds = deadline.to_vec();
        ds.sort_unstable();
        ds.iter().enumerate().all(|(j, &d)| d >= next_pos + j)
    };
    for pos in 0..len {
        let candidate = rng.gen_range(0..k);
        let mut trial = deadline.clone();
        trial[candidate] = pos + window;
        let pick =
            if feasible(&trial, pos + 1) { candidate } else { (0..k).min_by_key(|&i| deadline[i]).expect("k ≥ 1") };
        deadline[pick] = pos + window;
        out.push(pick);
    }
    if let Some(start) = first_incomplete_window(&out, window, k) {
        return Err(Error::Scenario(format!("generated index list breaks the window property at {start}")));
    }
    Ok(out)
}

/// `k` random convex primitives sharing the point 0, projected onto in a
/// quasi-periodic order with constant `window`.
///
/// The general variant mixes half-spaces, slabs, and balls that merely
/// contain 0; the symmetric variant uses only balls and slabs centred at 0.
pub fn quasi_periodic(
    k: usize,
    window: usize,
    d: usize,
    seed: u64,
    horizon: usize,
    symmetric: bool,
) -> Result<ScenarioConfig> {
    if k < 2 || window < k {
        return Err(Error::Scenario(format!("quasi_periodic needs K ≥ 2 and M ≥ K, got K = {k}, M = {window}")));
    }
    if d == 0 || horizon == 0 {
        return Err(Error::Scenario("dimension and horizon must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut family = Vec::with_capacity(k);
    for _ in 0..k {
        let set = if symmetric {
            if rng.gen_bool(0.5) {
                ConvexSet::ball(Vector::zeros(d), rng.gen_range(0.5..2.0))?
            } else {
                let u = rng.gen_range(0.2..1.0);
                ConvexSet::slab(random_unit(&mut rng, d), -u, u)?
            }
        } else {
            match rng.gen_range(0..3) {
                // every set has 0 on its boundary, so the intersection is thin near 0
                0 => ConvexSet::halfspace(random_unit(&mut rng, d), 0.0)?,
                1 => ConvexSet::slab(random_unit(&mut rng, d), 0.0, rng.gen_range(0.2..1.0))?,
                _ => {
                    let center = random_unit(&mut rng, d).scale(rng.gen_range(0.5..2.0));
                    let radius = center.norm();
                    ConvexSet::ball(center, radius)?
                }
            }
        };
        family.push(set);
    }
    // shuffle so set kinds do not line up with the index pattern
    family.shuffle(&mut rng);
    let x0 = random_unit(&mut rng, d).scale(rng.gen_range(2.0..6.0));
    let indices = quasi_periodic_indices(k, window, horizon, &mut rng)?;
    Ok(ScenarioConfig {
        name: "quasi_periodic".into(),
        family,
        schedule: Schedule::Constant { value: 0.0 },
        policy: SelectionPolicy::QuasiPeriodic { indices, window },
        x0,
        horizon,
        a_ref: Some(Vector::zeros(d)),
        extras: Extras { seed: Some(seed), window: Some(window), symmetric: Some(symmetric), ..Extras::default() },
    })
}

/// Built-in scenario catalogue entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScenarioInfo {
    pub name: &'static str,
    pub summary: &'static str,
    pub provenance: &'static str,
    /// Listed for reference only; not constructible here.
    pub documentation_only: bool,
}

pub const CATALOGUE: &[ScenarioInfo] = &[
    ScenarioInfo {
        name: "stripe_example",
        summary: "line and stripe in the plane; remotest projections stop at (0,1), not at P_C x0 = (0,2)",
        provenance: "norm convergence, two-set planar example",
        documentation_only: false,
    },
    ScenarioInfo {
        name: "cap_lines",
        summary: "lines through a spherical cap; with Σt² < ∞ the iterates keep norm ≥ (√3/2)|x_m| and do not converge",
        provenance: "weak convergence, partial weak limits (sufficiency of Σt² = ∞ is sharp)",
        documentation_only: false,
    },
    ScenarioInfo {
        name: "ball_interior",
        summary: "random half-spaces containing B(0, r); checks the product-form rate bound",
        provenance: "symmetry conditions, sets with a common interior ball",
        documentation_only: false,
    },
    ScenarioInfo {
        name: "quasi_periodic",
        summary:
            "random convex sets through 0 visited in a quasi-periodic order; effective weakness ≥ 1/(6M) per window",
        provenance: "norm convergence corollary for quasi-periodic projections",
        documentation_only: false,
    },
    ScenarioInfo {
        name: "quasi_periodic_symmetric",
        summary: "quasi-periodic projections onto centred balls and slabs; converges in norm",
        provenance: "norm convergence corollary for quasi-periodic projections",
        documentation_only: false,
    },
    ScenarioInfo {
        name: "nunifsym",
        summary:
            "quasi-symmetric but not uniformly quasi-symmetric family (cone construction from an external reference)",
        provenance: "symmetry conditions; documentation only",
        documentation_only: true,
    },
    ScenarioInfo {
        name: "weak_div",
        summary: "remote projections with two partial weak limits (convex cone lemma from an external reference)",
        provenance: "weak convergence; documentation only",
        documentation_only: true,
    },
];

/// Command-line overrides for built-in scenarios.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub horizon: Option<usize>,
    pub dim: Option<usize>,
    pub seed: Option<u64>,
    pub schedule: Option<Schedule>,
    pub tol: Option<f64>,
}

/// Builds a built-in scenario by name, with its defaults unless overridden.
pub fn by_name(name: &str, ov: &Overrides) -> Result<ScenarioConfig> {
    let info = CATALOGUE
        .iter()
        .find(|i| i.name == name)
        .ok_or_else(|| Error::Scenario(format!("unknown scenario `{name}`")))?;
    if info.documentation_only {
        return Err(Error::Scenario(format!("`{name}` is listed for reference only and cannot be run")));
    }
    let mut cfg = match name {
        "stripe_example" => {
            let mut cfg = stripe_example();
            if let Some(h) = ov.horizon {
                cfg.horizon = h;
            }
            if let Some(s) = &ov.schedule {
                cfg.schedule = s.clone();
            }
            cfg
        }
        "cap_lines" => {
            let t = ov.schedule.clone().unwrap_or(Schedule::Power { exponent: 1.0 });
            cap_lines(&t, ov.horizon.unwrap_or(10_000), ov.dim.unwrap_or(8), ov.seed.unwrap_or(7))?
        }
        "ball_interior" => {
            let t = ov.schedule.clone().unwrap_or(Schedule::Constant { value: 1.0 });
            ball_interior(40, ov.dim.unwrap_or(3), 0.5, ov.seed.unwrap_or(0), &t, ov.horizon.unwrap_or(2000))?
        }
        "quasi_periodic" | "quasi_periodic_symmetric" => {
            let symmetric = name == "quasi_periodic_symmetric";
            let default_h = if symmetric { 2000 } else { 500 };
            let mut cfg = quasi_periodic(
                3,
                6,
                ov.dim.unwrap_or(3),
                ov.seed.unwrap_or(4),
                ov.horizon.unwrap_or(default_h),
                symmetric,
            )?;
            if let Some(s) = &ov.schedule {
                cfg.schedule = s.clone();
            }
            cfg
        }
        _ => unreachable!("catalogue and constructors agree"),
    };
    if let Some(tol) = ov.tol {
        cfg.extras.tol = Some(tol);
    }
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stripe_config_reaches_the_closed_form_iterates() {
        let cfg = stripe_example();
        let trace = cfg.run().unwrap();
        let checks = cfg.checks(&trace).unwrap();
        assert!(checks.iter().all(|c| c.passed), "{checks:#?}");
        assert_eq!(cfg.extras.reference_projection.as_ref().unwrap().as_slice(), &[0.0, 2.0]);
    }

    #[test]
    fn config_json_is_strict_and_round_trips() {
        let cfg = stripe_example();
        let text = cfg.to_json().unwrap();
        assert_eq!(ScenarioConfig::from_json(&text).unwrap(), cfg);
        let mut value: serde_json::Value = serde_json::from_str(&text).unwrap();
        value["colour"] = serde_json::json!("red");
        assert!(ScenarioConfig::from_json(&value.to_string()).is_err());
        let mut value: serde_json::Value = serde_json::from_str(&text).unwrap();
        value["extras"]["mystery"] = serde_json::json!(1);
        assert!(ScenarioConfig::from_json(&value.to_string()).is_err());
        let keys: Vec<String> = serde_json::from_str::<serde_json::Map<String, serde_json::Value>>(&text)
            .unwrap()
            .keys()
            .cloned()
            .collect();
        for k in ["name", "family", "schedule", "policy", "x0", "horizon", "a_ref", "extras"] {
            assert!(keys.iter().any(|x| x == k), "missing {k}");
        }
    }

    #[test]
    fn cap_start_for_harmonic_schedule() {
        // τ_n = 1/(n+1) for t = power 1; Σ_{k ≥ 5} 1/k² ≈ 0.2213 < 1/4 ≤ Σ_{k ≥ 4} 1/k²
        let (m, bound) = cap_start(&Schedule::Power { exponent: 1.0 }, 10_000).unwrap();
        assert_eq!(m, 4);
        assert!(bound < 0.25 && bound > 0.2213);
    }

    #[test]
    fn cap_lines_rejects_bad_inputs() {
        let t = Schedule::Power { exponent: 1.0 };
        assert!(cap_lines(&t, 100, 2, 0).is_err());
        assert!(cap_lines(&t, 3, 8, 0).is_err());
        assert!(cap_lines(&Schedule::Constant { value: 0.5 }, 100, 8, 0).is_err());
        assert!(cap_lines(&Schedule::Power { exponent: 0.5 }, 100, 8, 0).is_err());
        assert!(cap_lines(&Schedule::Constant { value: 0.0 }, 400, 4, 0).is_ok());
    }

    #[test]
    fn cap_lines_small_run_passes_its_checks() {
        let cfg = cap_lines(&Schedule::Power { exponent: 0.75 }, 600, 5, 3).unwrap();
        let trace = cfg.run().unwrap();
        assert_eq!(trace.steps.len(), 600);
        let checks = cfg.checks(&trace).unwrap();
        for c in &checks {
            if c.name != "cap_non_convergence" {
                assert!(c.passed, "{c:?}");
            }
        }
        let cap = cfg.extras.cap.as_ref().unwrap();
        let x_m = &trace.iterates[cap.m].point;
        // x_m lies on L(a)
        assert!(ConvexSet::line(cap.a.clone()).unwrap().distance(x_m).unwrap() < 1e-12);
    }

    #[test]
    fn quasi_periodic_indices_respect_windows() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for (k, m) in [(3, 3), (3, 4), (5, 5), (5, 10), (2, 7)] {
            let idx = quasi_periodic_indices(k, m, 300, &mut rng).unwrap();
            assert_eq!(first_incomplete_window(&idx, m, k), None);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let idx = quasi_periodic_indices(3, 3, 30, &mut rng).unwrap();
        // window K forces a periodic sequence
        assert!(idx.windows(4).all(|w| w[0] == w[3]));
        assert!(quasi_periodic_indices(4, 3, 10, &mut rng).is_err());
    }

    #[test]
    fn quasi_periodic_sets_contain_origin() {
        for symmetric in [false, true] {
            let cfg = quasi_periodic(5, 10, 6, 17, 100, symmetric).unwrap();
            let o = Vector::zeros(6);
            assert!(cfg.family.iter().all(|s| s.contains(&o).unwrap()));
        }
    }

    #[test]
    fn ball_interior_certificate() {
        let cfg = ball_interior(4, 3, 0.5, 9, &Schedule::Constant { value: 1.0 }, 100).unwrap();
        for set in &cfg.family {
            match set {
                ConvexSet::Halfspace { offset, .. } => assert!(0.5 <= *offset),
                _ => panic!("unexpected set"),
            }
        }
        assert!((cfg.x0.norm() - 4.0).abs() < 1e-12);
        assert!(ball_interior(1, 3, 0.5, 0, &Schedule::Constant { value: 1.0 }, 10).is_err());
        assert!(ball_interior(3, 3, 0.0, 0, &Schedule::Constant { value: 1.0 }, 10).is_err());
    }

    #[test]
    fn catalogue_lookup() {
        assert!(by_name("stripe_example", &Overrides::default()).is_ok());
        assert!(matches!(by_name("nunifsym", &Overrides::default()), Err(Error::Scenario(_))));
        assert!(matches!(by_name("nope", &Overrides::default()), Err(Error::Scenario(_))));
    }
}
