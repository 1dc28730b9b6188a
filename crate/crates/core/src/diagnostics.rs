//! Checks of the convergence machinery on finished traces.
//!
//! All checks are pure functions of a [`Trace`]. Weak convergence is only
//! ever approximated here: [`detect_convergence`] watches finitely many
//! linear functionals on the tail of the run, which is a proxy and not a
//! decision procedure.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::engine::{effective_weakness, StopReason, Trace};
use crate::error::{Error, Result};
use crate::hilbert::Vector;
use crate::schedule::Schedule;
use crate::sets::{random_unit, ConvexSet};

const STEP_TOL: f64 = 1e-9;
const SUM_TOL: f64 = 1e-6;

/// Outcome of [`check_energy`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergyReport {
    pub holds: bool,
    /// Largest amount by which `|x_n - a|² ≥ |x_{n+1} - a|² + |y_n|²` is missed.
    pub max_violation: f64,
    /// `Σ |y_n|²`
    pub step_sq_sum: f64,
    /// `|x_0 - a|²`
    pub budget: f64,
}

/// Energy inequality per step and `Σ |y_n|² ≤ |x_0 - a|²` overall.
pub fn check_energy(trace: &Trace) -> Result<EnergyReport> {
    if trace.a_ref.is_none() {
        return Err(Error::MissingReference);
    }
    let norms = trace.x_norms();
    let mut max_violation = 0.0f64;
    let mut step_sq_sum = 0.0;
    for (i, s) in trace.steps.iter().enumerate() {
        let before = norms[i] * norms[i];
        let after = norms[i + 1] * norms[i + 1] + s.step_norm * s.step_norm;
        max_violation = max_violation.max(after - before);
        step_sq_sum += s.step_norm * s.step_norm;
    }
    let budget = norms[0] * norms[0];
    Ok(EnergyReport {
        holds: max_violation <= STEP_TOL && step_sq_sum <= budget + SUM_TOL,
        max_violation,
        step_sq_sum,
        budget,
    })
}

/// Outcome of [`check_fejer`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FejerReport {
    pub holds: bool,
    /// Largest increase of `|x_n - v|` between consecutive retained iterates.
    pub max_increase: f64,
}

/// Fejér monotonicity `|x_{n+1} - v| ≤ |x_n - v|` over the retained iterates.
pub fn check_fejer(trace: &Trace, v: &Vector) -> Result<FejerReport> {
    v.check_dim(trace.x0.dim())?;
    if trace.iterates.is_empty() {
        return Err(Error::NoIterates);
    }
    let dists: Vec<f64> = trace.iterates.iter().map(|it| it.point.distance_to(v)).collect();
    let max_increase = dists.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max);
    Ok(FejerReport { holds: max_increase <= STEP_TOL, max_increase })
}

/// Largest residual of the identity
/// `|x_n - a|² = |x_{n+1} - a|² + |y_n|² + 2 |x_{n+1} - a| |y_n| sin ε_n`.
pub fn law_of_cosines_residual(trace: &Trace) -> Result<f64> {
    if trace.a_ref.is_none() {
        return Err(Error::MissingReference);
    }
    let norms = trace.x_norms();
    Ok(trace
        .steps
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let lhs = norms[i] * norms[i];
            let rhs =
                norms[i + 1] * norms[i + 1] + s.step_norm * s.step_norm + 2.0 * norms[i + 1] * s.step_norm * s.sin_eps;
            (lhs - rhs).abs()
        })
        .fold(0.0, f64::max))
}

/// Outcome of [`check_sin_summability`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SinReport {
    pub holds: bool,
    pub max_step_violation: f64,
    /// `Σ |y_n| sin ε_n`
    pub partial_sum: f64,
    /// `(|x_0 - a|² - inf |x_n - a|²) / (2 R)`
    pub bound: f64,
}

/// `|y_n| sin ε_n ≤ (|x_n - a|² - |x_{n+1} - a|²) / (2R)` per step, and the
/// resulting bound on the partial sums, for a floor `R` under every `|x_{n+1} - a|`.
pub fn check_sin_summability(trace: &Trace, r_floor: f64) -> Result<SinReport> {
    if trace.a_ref.is_none() {
        return Err(Error::MissingReference);
    }
    if !(r_floor.is_finite() && r_floor > 0.0) {
        return Err(Error::InvalidArgument(format!("floor must be positive, got {r_floor}")));
    }
    if let Some(s) = trace.steps.iter().find(|s| s.x_norm < r_floor - 1e-12) {
        return Err(Error::InvalidArgument(format!("{r_floor} is not a floor: |x_{} - a| = {}", s.n + 1, s.x_norm)));
    }
    let norms = trace.x_norms();
    let mut max_step_violation = 0.0f64;
    let mut partial_sum = 0.0;
    for (i, s) in trace.steps.iter().enumerate() {
        let term = s.step_norm * s.sin_eps;
        let allowed = (norms[i] * norms[i] - norms[i + 1] * norms[i + 1]) / (2.0 * r_floor);
        max_step_violation = max_step_violation.max(term - allowed);
        partial_sum += term;
    }
    let inf = norms.iter().copied().fold(f64::INFINITY, f64::min);
    let bound = (norms[0] * norms[0] - inf * inf) / (2.0 * r_floor);
    Ok(SinReport {
        holds: max_step_violation <= 1e-8 && partial_sum <= bound + SUM_TOL,
        max_step_violation,
        partial_sum,
        bound,
    })
}

/// One point of the rate comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatePoint {
    pub n: usize,
    /// `|x_n - w|`
    pub actual: f64,
    pub bound: f64,
}

/// Outcome of [`check_rate_bound`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateBoundReport {
    pub center: Vector,
    pub radius: f64,
    /// `B_n = 2 |x_0 - a| Π_{k<n} (1 - t_k² r² / |x_0 - a|²)^{1/2}` for `n = 0..=N`.
    pub bounds: Vec<f64>,
    pub points: Vec<RatePoint>,
    pub violations: Vec<usize>,
    pub tolerance: f64,
    /// Closed-form `Σ t_n² = ∞` for the schedule.
    pub sum_sq_diverges: bool,
}

impl RateBoundReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Verifies `B(a, r) ⊂ C` for every set: the closed-form certificate and a
/// probe of `a ± r e_i` plus 32 seeded random directions.
pub fn verify_ball_containment(family: &[ConvexSet], a: &Vector, r: f64) -> Result<()> {
    let dim = a.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_ba11);
    let mut dirs: Vec<Vector> = (0..dim)
        .flat_map(|i| {
            let e = Vector::basis(dim, i);
            [e.clone(), e.scale(-1.0)]
        })
        .collect();
    dirs.extend((0..32).map(|_| random_unit(&mut rng, dim)));
    for (index, set) in family.iter().enumerate() {
        if !set.contains_ball(a, r)? {
            return Err(Error::BallNotContained { index, reason: "closed-form certificate fails".into() });
        }
        for d in &dirs {
            let mut p = a.clone();
            p.add_scaled(r, d);
            if !set.contains(&p)? {
                return Err(Error::BallNotContained { index, reason: format!("probe point {p:?} is outside") });
            }
        }
    }
    Ok(())
}

/// Compares `|x_n - w|` (with `w` the final iterate) against the ball-interior
/// rate bound `B_n` at every retained iterate.
pub fn check_rate_bound(
    trace: &Trace,
    family: &[ConvexSet],
    a: &Vector,
    r: f64,
    schedule: &Schedule,
) -> Result<RateBoundReport> {
    a.check_dim(trace.x0.dim())?;
    if !(r.is_finite() && r > 0.0) {
        return Err(Error::InvalidArgument(format!("radius must be positive, got {r}")));
    }
    verify_ball_containment(family, a, r)?;

    let start = trace.x0.distance_to(a);
    let mut bounds = Vec::with_capacity(trace.steps.len() + 1);
    let mut product = 1.0f64;
    bounds.push(2.0 * start);
    for k in 0..trace.steps.len() {
        let t = schedule.t_at(k);
        let factor = if start > 0.0 { 1.0 - t * t * r * r / (start * start) } else { 0.0 };
        product = if factor <= 0.0 { 0.0 } else { product * factor.sqrt() };
        bounds.push(2.0 * start * product);
    }

    let tolerance = 1e-6 * (1.0 + start);
    let w = &trace.final_point;
    let points: Vec<RatePoint> = trace
        .iterates
        .iter()
        .map(|it| RatePoint { n: it.n, actual: it.point.distance_to(w), bound: bounds[it.n] })
        .collect();
    let violations = points.iter().filter(|p| p.actual > p.bound + tolerance).map(|p| p.n).collect();
    Ok(RateBoundReport {
        center: a.clone(),
        radius: r,
        bounds,
        points,
        violations,
        tolerance,
        sum_sq_diverges: schedule.sum_sq_diverges(),
    })
}

/// Outcome of [`detect_convergence`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceVerdict {
    /// Tail diameter below `1e-6 (1 + |x_0|)`.
    pub norm_cauchy: bool,
    pub tail_diameter: f64,
    /// Weak-convergence proxy: tail oscillation of `⟨x_n, u⟩` below
    /// `1e-6 (1 + |x_0|) |u|`, one flag per test functional.
    pub weak_proxy: Vec<bool>,
    /// `max - min` of `⟨x_n, u⟩` over the tail, per functional.
    pub oscillation: Vec<f64>,
    /// Smallest `|x_n - a_ref|` over the tail.
    pub residual_floor: f64,
    pub tail_len: usize,
    pub limit: Vector,
}

/// Default share of retained iterates treated as the tail.
pub const DEFAULT_TAIL_FRACTION: f64 = 0.25;

/// Tail-based convergence verdict.
///
/// For runs cut at the horizon the tail is the last `tail_fraction` of the
/// retained iterates. Runs that stopped in the intersection or stalled are
/// judged on the iterates after their last step of length at least `tol`.
pub fn detect_convergence(trace: &Trace, functionals: &[Vector], tail_fraction: f64) -> Result<ConvergenceVerdict> {
    if !(tail_fraction > 0.0 && tail_fraction <= 0.5) {
        return Err(Error::InvalidArgument(format!("tail fraction must lie in (0, 1/2], got {tail_fraction}")));
    }
    if trace.iterates.is_empty() {
        return Err(Error::NoIterates);
    }
    for u in functionals {
        u.check_dim(trace.x0.dim())?;
    }
    let len = trace.iterates.len();
    let tail_len = match trace.stop_reason {
        // the run is continued by its (numerically) constant extension, so
        // the tail starts after the last step longer than tol
        StopReason::InIntersection | StopReason::Converged => {
            let settled = trace.steps.iter().rposition(|s| s.step_norm >= trace.tol).map_or(0, |i| i + 1);
            trace.iterates.iter().filter(|it| it.n >= settled).count().max(1)
        }
        StopReason::Horizon => ((len as f64 * tail_fraction).ceil() as usize).clamp(1, len),
    };
    let tail = &trace.iterates[len - tail_len..];
    let scale = 1e-6 * (1.0 + trace.x0.norm());

    let mut tail_diameter = 0.0f64;
    for (i, p) in tail.iter().enumerate() {
        for q in &tail[i + 1..] {
            tail_diameter = tail_diameter.max(p.point.distance_to(&q.point));
        }
    }
    let norm_cauchy = tail_diameter <= scale;

    let oscillation: Vec<f64> = functionals
        .iter()
        .map(|u| {
            let (lo, hi) = tail
                .iter()
                .map(|it| it.point.dot(u))
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
            hi - lo
        })
        .collect();
    let weak_proxy =
        functionals.iter().zip(&oscillation).map(|(u, osc)| norm_cauchy || *osc <= scale * u.norm()).collect();
    let residual_floor = tail
        .iter()
        .map(|it| match &trace.a_ref {
            Some(a) => it.point.distance_to(a),
            None => it.point.norm(),
        })
        .fold(f64::INFINITY, f64::min);

    Ok(ConvergenceVerdict {
        norm_cauchy,
        tail_diameter,
        weak_proxy,
        oscillation,
        residual_floor,
        tail_len,
        limit: trace.final_point.clone(),
    })
}

/// Outcome of [`check_window_bound`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindowBoundReport {
    pub holds: bool,
    /// `1 / (6M)`
    pub threshold: f64,
    pub windows_checked: usize,
    /// Position (among non-terminal steps) of the first window with every
    /// effective weakness below the threshold.
    pub first_failure: Option<usize>,
}

/// Every `window` consecutive non-terminal steps contain an effective
/// weakness of at least `1 / (6 window)`.
pub fn check_window_bound(trace: &Trace, window: usize) -> Result<WindowBoundReport> {
    if window == 0 {
        return Err(Error::InvalidArgument("window must be at least 1".into()));
    }
    let threshold = 1.0 / (6.0 * window as f64);
    let eff: Vec<f64> = effective_weakness(trace).into_iter().flatten().collect();
    let mut run = 0usize;
    let mut first_failure = None;
    for (i, &t) in eff.iter().enumerate() {
        if t >= threshold {
            run = 0;
        } else {
            run += 1;
            if run >= window {
                first_failure = Some(i + 1 - window);
                break;
            }
        }
    }
    Ok(WindowBoundReport {
        holds: first_failure.is_none(),
        threshold,
        windows_checked: eff.len().saturating_sub(window - 1),
        first_failure,
    })
}

/// `b_m = (|y_m| / t_m) Σ_{ν ≤ m} |y_ν|` per step; `None` where `t_m = 0`.
///
/// Reported only; no threshold is asserted on these values.
pub fn greedy_ratios(trace: &Trace) -> Vec<Option<f64>> {
    let mut running = 0.0;
    trace
        .steps
        .iter()
        .map(|s| {
            running += s.step_norm;
            (s.t_required > 0.0).then(|| s.step_norm / s.t_required * running)
        })
        .collect()
}
