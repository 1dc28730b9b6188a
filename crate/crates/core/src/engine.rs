//! The remote-projection iteration and the Weak Greedy Algorithm.
//!
//! At step `n` the engine measures the distance from `x_n` to every set of
//! the family, picks an index `α(n)` according to a [`SelectionPolicy`], and
//! sets `x_{n+1} = P_{α(n)} x_n`. Policies that search (`remotest`,
//! `threshold_first`) always satisfy the weakness inequality
//! `dist(x_n, C_α(n)) ≥ t_n max_α dist(x_n, C_α)`; policies that dictate the
//! index (`scripted`, `cyclic`, `quasi_periodic`, `random`) are run as given
//! and every step that misses the inequality is flagged in its record.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::Vector;
use crate::schedule::Schedule;
use crate::sets::ConvexSet;

/// Distances within this of the maximum count as ties; ties go to the lowest index.
pub const TIE_TOL: f64 = 1e-12;
/// Slack in the weakness inequality before a step is flagged.
pub const WEAKNESS_TOL: f64 = 1e-9;
/// Consecutive sub-tolerance steps that end a run as converged.
pub const STALL_STEPS: usize = 10;

/// How the engine picks `α(n)`. Family indices are 0-based.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SelectionPolicy {
    /// Farthest set, lowest index on ties.
    Remotest,
    /// First index (in family order) meeting the weakness inequality.
    ThresholdFirst,
    /// The listed indices, one per step; the run ends when the list does.
    Scripted { indices: Vec<usize> },
    /// `α(n) = n mod size`.
    Cyclic { size: usize },
    /// A listed index sequence in which every `window` consecutive entries
    /// contain every family index.
    QuasiPeriodic { indices: Vec<usize>, window: usize },
    /// Uniform random index from a seeded stream.
    Random { seed: u64 },
}

impl SelectionPolicy {
    pub fn kind(&self) -> &'static str {
        match self {
            Self::Remotest => "remotest",
            Self::ThresholdFirst => "threshold_first",
            Self::Scripted { .. } => "scripted",
            Self::Cyclic { .. } => "cyclic",
            Self::QuasiPeriodic { .. } => "quasi_periodic",
            Self::Random { .. } => "random",
        }
    }

    /// Checks the policy against a family of `family_len` sets.
    pub fn validate(&self, family_len: usize) -> Result<()> {
        let check_indices = |indices: &[usize]| {
            if let Some(&bad) = indices.iter().find(|&&i| i >= family_len) {
                return Err(Error::IndexOutOfRange { index: bad, len: family_len });
            }
            Ok(())
        };
        match self {
            Self::Remotest | Self::ThresholdFirst | Self::Random { .. } => Ok(()),
            Self::Scripted { indices } => check_indices(indices),
            Self::Cyclic { size } => {
                if *size == 0 || *size > family_len {
                    return Err(Error::InvalidPolicy(format!(
                        "cyclic size {size} must be between 1 and the family size {family_len}"
                    )));
                }
                Ok(())
            }
            Self::QuasiPeriodic { indices, window } => {
                check_indices(indices)?;
                if let Some(start) = first_incomplete_window(indices, *window, family_len) {
                    return Err(Error::InvalidPolicy(format!(
                        "window of length {window} starting at {start} misses a family index"
                    )));
                }
                Ok(())
            }
        }
    }

    /// Whether the policy searches for an admissible index (as opposed to dictating it).
    pub fn is_searching(&self) -> bool {
        matches!(self, Self::Remotest | Self::ThresholdFirst)
    }
}

/// First start position of a length-`window` window of `indices` that does
/// not contain all of `0..k`, if any. Lists shorter than the window have no
/// complete windows.
pub fn first_incomplete_window(indices: &[usize], window: usize, k: usize) -> Option<usize> {
    if window == 0 {
        return Some(0);
    }
    if indices.len() < window {
        return None;
    }
    let mut counts = vec![0usize; k];
    let mut present = 0usize;
    for (pos, &i) in indices.iter().enumerate() {
        if i < k {
            if counts[i] == 0 {
                present += 1;
            }
            counts[i] += 1;
        }
        if pos >= window {
            let old = indices[pos - window];
            if old < k {
                counts[old] -= 1;
                if counts[old] == 0 {
                    present -= 1;
                }
            }
        }
        if pos + 1 >= window && present < k {
            return Some(pos + 1 - window);
        }
    }
    None
}

/// Per-policy state for one run.
struct Selector<'p> {
    policy: &'p SelectionPolicy,
    rng: Option<ChaCha8Rng>,
}

impl<'p> Selector<'p> {
    fn new(policy: &'p SelectionPolicy) -> Self {
        let rng = match policy {
            SelectionPolicy::Random { seed } => Some(ChaCha8Rng::seed_from_u64(*seed)),
            _ => None,
        };
        Self { policy, rng }
    }

    /// `None` once a listed index sequence is exhausted.
    fn choose(&mut self, n: usize, dists: &[f64], dist_max: f64, t: f64) -> Result<Option<usize>> {
        let len = dists.len();
        let pick = match self.policy {
            SelectionPolicy::Remotest => dists.iter().position(|&d| d >= dist_max - TIE_TOL),
            SelectionPolicy::ThresholdFirst => dists.iter().position(|&d| d >= t * dist_max - TIE_TOL),
            SelectionPolicy::Scripted { indices } | SelectionPolicy::QuasiPeriodic { indices, .. } => {
                match indices.get(n) {
                    None => return Ok(None),
                    Some(&i) if i >= len => return Err(Error::IndexOutOfRange { index: i, len }),
                    Some(&i) => Some(i),
                }
            }
            SelectionPolicy::Cyclic { size } => Some(n % size),
            SelectionPolicy::Random { .. } => {
                let rng = self.rng.as_mut().expect("random policy carries an rng");
                Some(rng.gen_range(0..len))
            }
        };
        Ok(Some(pick.expect("a searching policy always finds the maximum")))
    }
}

/// One projection step `x_n → x_{n+1}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub n: usize,
    /// Family index projected onto.
    pub alpha: usize,
    pub dist_chosen: f64,
    pub dist_max: f64,
    pub t_required: f64,
    /// `dist_chosen / dist_max`, or 1 when `dist_max = 0`.
    pub t_effective: f64,
    /// `|y_n| = |x_n - x_{n+1}|`
    pub step_norm: f64,
    /// `|x_{n+1} - a_ref|` (origin when no reference point is given).
    pub x_norm: f64,
    /// `sin ε_n = ⟨y_n, x_{n+1} - a_ref⟩ / (|y_n| |x_{n+1} - a_ref|)`, clamped to `[0, 1]`.
    pub sin_eps: f64,
    /// The step misses the weakness inequality by more than [`WEAKNESS_TOL`].
    pub flagged: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    /// `norm(x_n - x_{n+1}) < tol` for [`STALL_STEPS`] consecutive steps.
    Converged,
    Horizon,
    /// `max_α dist(x_n, C_α) ≤ tol`.
    InIntersection,
}

impl StopReason {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Converged => "converged",
            Self::Horizon => "horizon",
            Self::InIntersection => "in_intersection",
        }
    }
}

/// A retained iterate `x_n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Iterate {
    pub n: usize,
    pub point: Vector,
}

/// Full record of one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trace {
    pub x0: Vector,
    pub a_ref: Option<Vector>,
    pub tol: f64,
    pub steps: Vec<StepRecord>,
    /// `x_0`, every `stride`-th iterate, and the final iterate.
    pub iterates: Vec<Iterate>,
    pub final_point: Vector,
    pub stop_reason: StopReason,
}

impl Trace {
    /// Number of steps flagged for missing the weakness inequality.
    pub fn flag_count(&self) -> usize {
        self.steps.iter().filter(|s| s.flagged).count()
    }

    /// `|x_0 - a_ref|` (or `|x_0|`).
    pub fn initial_norm(&self) -> f64 {
        match &self.a_ref {
            Some(a) => self.x0.distance_to(a),
            None => self.x0.norm(),
        }
    }

    /// `|x_n - a_ref|` for `n = 0..=steps.len()`.
    pub fn x_norms(&self) -> Vec<f64> {
        std::iter::once(self.initial_norm()).chain(self.steps.iter().map(|s| s.x_norm)).collect()
    }
}

fn default_stride(dim: usize) -> usize {
    if dim < 64 {
        1
    } else {
        10
    }
}

struct Recorder {
    x0: Vector,
    a_ref: Option<Vector>,
    tol: f64,
    stride: usize,
    steps: Vec<StepRecord>,
    iterates: Vec<Iterate>,
    stalled: usize,
}

impl Recorder {
    fn new(x0: &Vector, a_ref: Option<Vector>, tol: f64, stride: usize) -> Self {
        Self {
            x0: x0.clone(),
            a_ref,
            tol,
            stride,
            steps: Vec::new(),
            iterates: vec![Iterate { n: 0, point: x0.clone() }],
            stalled: 0,
        }
    }

    /// Records `x_n → next`; returns true when the run has stalled.
    #[allow(clippy::too_many_arguments)]
    fn push(
        &mut self,
        n: usize,
        alpha: usize,
        x: &Vector,
        next: &Vector,
        dist_chosen: f64,
        dist_max: f64,
        t: f64,
    ) -> bool {
        let y = x.sub(next);
        let step_norm = y.norm();
        let rel = match &self.a_ref {
            Some(a) => next.sub(a),
            None => next.clone(),
        };
        let x_norm = rel.norm();
        let sin_eps =
            if step_norm > 0.0 && x_norm > 0.0 { (y.dot(&rel) / (step_norm * x_norm)).clamp(0.0, 1.0) } else { 0.0 };
        let t_effective = if dist_max > 0.0 { dist_chosen / dist_max } else { 1.0 };
        self.steps.push(StepRecord {
            n,
            alpha,
            dist_chosen,
            dist_max,
            t_required: t,
            t_effective,
            step_norm,
            x_norm,
            sin_eps,
            flagged: dist_chosen < t * dist_max - WEAKNESS_TOL,
        });
        if (n + 1).is_multiple_of(self.stride) {
            self.iterates.push(Iterate { n: n + 1, point: next.clone() });
        }
        if step_norm < self.tol {
            self.stalled += 1;
        } else {
            self.stalled = 0;
        }
        self.stalled >= STALL_STEPS
    }

    fn finish(mut self, x: Vector, stop_reason: StopReason) -> Trace {
        let n = self.steps.len();
        if self.iterates.last().map(|it| it.n) != Some(n) {
            self.iterates.push(Iterate { n, point: x.clone() });
        }
        Trace {
            x0: self.x0,
            a_ref: self.a_ref,
            tol: self.tol,
            steps: self.steps,
            iterates: self.iterates,
            final_point: x,
            stop_reason,
        }
    }
}

fn check_common(dim: usize, x0: &Vector, horizon: usize, tol: f64, stride: Option<usize>) -> Result<()> {
    x0.check_dim(dim)?;
    if horizon == 0 {
        return Err(Error::InvalidArgument("horizon must be at least 1".into()));
    }
    if !(tol.is_finite() && tol >= 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be finite and nonnegative, got {tol}")));
    }
    if stride == Some(0) {
        return Err(Error::InvalidArgument("iterate stride must be at least 1".into()));
    }
    Ok(())
}

/// Remote projections onto a finite family of convex sets.
///
/// ```
/// use remoteproj::{ConvexSet, RemoteProjection, Schedule, SelectionPolicy, Vector};
///
/// let family = vec![
///     ConvexSet::hyperplane(Vector::basis(2, 0)).unwrap(),
///     ConvexSet::hyperplane(Vector::basis(2, 1)).unwrap(),
/// ];
/// let schedule = Schedule::constant(1.0).unwrap();
/// let policy = SelectionPolicy::Remotest;
/// let x0 = Vector::new(vec![1.0, 1.0]).unwrap();
/// let trace = RemoteProjection::new(&family, &schedule, &policy).run(&x0).unwrap();
/// assert_eq!(trace.final_point, Vector::zeros(2));
/// ```
#[derive(Debug, Clone)]
pub struct RemoteProjection<'a> {
    family: &'a [ConvexSet],
    schedule: &'a Schedule,
    policy: &'a SelectionPolicy,
    horizon: usize,
    tol: f64,
    a_ref: Option<Vector>,
    stride: Option<usize>,
}

impl<'a> RemoteProjection<'a> {
    pub fn new(family: &'a [ConvexSet], schedule: &'a Schedule, policy: &'a SelectionPolicy) -> Self {
        Self { family, schedule, policy, horizon: 1000, tol: 1e-12, a_ref: None, stride: None }
    }

    pub fn horizon(mut self, horizon: usize) -> Self {
        self.horizon = horizon;
        self
    }

    pub fn tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    /// Reference point, ideally in every set, for the norm and angle columns.
    pub fn reference(mut self, a_ref: Option<Vector>) -> Self {
        self.a_ref = a_ref;
        self
    }

    /// Keep every `stride`-th iterate (default 1 below dimension 64, else 10).
    pub fn stride(mut self, stride: Option<usize>) -> Self {
        self.stride = stride;
        self
    }

    pub fn run(&self, x0: &Vector) -> Result<Trace> {
        let first = self.family.first().ok_or_else(|| Error::InvalidArgument("family must be nonempty".into()))?;
        let dim = first.ambient_dim();
        for set in self.family {
            set.validate()?;
            if set.ambient_dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: set.ambient_dim() });
            }
        }
        check_common(dim, x0, self.horizon, self.tol, self.stride)?;
        self.schedule.validate()?;
        self.policy.validate(self.family.len())?;
        if let Some(a) = &self.a_ref {
            a.check_dim(dim)?;
        }

        let stride = self.stride.unwrap_or_else(|| default_stride(dim));
        let mut rec = Recorder::new(x0, self.a_ref.clone(), self.tol, stride);
        let mut selector = Selector::new(self.policy);
        let mut dists = vec![0.0; self.family.len()];
        let mut x = x0.clone();
        let mut stop = StopReason::Horizon;

        for n in 0..self.horizon {
            for (d, set) in dists.iter_mut().zip(self.family) {
                *d = set.distance_unchecked(&x);
            }
            let dist_max = dists.iter().copied().fold(0.0, f64::max);
            if dist_max <= self.tol {
                stop = StopReason::InIntersection;
                break;
            }
            let t = self.schedule.t_at(n);
            let Some(alpha) = selector.choose(n, &dists, dist_max, t)? else {
                break;
            };
            let next = self.family[alpha].project_unchecked(&x);
            if !next.is_finite() {
                return Err(Error::NonFinite("iterate"));
            }
            let stalled = rec.push(n, alpha, &x, &next, dists[alpha], dist_max, t);
            x = next;
            if stalled {
                stop = StopReason::Converged;
                break;
            }
        }
        Ok(rec.finish(x, stop))
    }
}

/// Runs remote projections; see [`RemoteProjection`].
pub fn run_remote(
    family: &[ConvexSet],
    schedule: &Schedule,
    x0: &Vector,
    policy: &SelectionPolicy,
    horizon: usize,
    tol: f64,
    a_ref: Option<&Vector>,
) -> Result<Trace> {
    RemoteProjection::new(family, schedule, policy).horizon(horizon).tol(tol).reference(a_ref.cloned()).run(x0)
}

/// The Weak Greedy Algorithm `x_{n+1} = x_n - ⟨x_n, g_n⟩ g_n` over a finite dictionary.
///
/// `g_n` is chosen from `|⟨x_n, g⟩|` with the same policies as
/// [`RemoteProjection`]; the default is the greedy (remotest) choice. The
/// trace uses the origin as reference point.
#[derive(Debug, Clone)]
pub struct WeakGreedy<'a> {
    dictionary: &'a [Vector],
    schedule: &'a Schedule,
    policy: SelectionPolicy,
    horizon: usize,
    tol: f64,
    stride: Option<usize>,
}

impl<'a> WeakGreedy<'a> {
    pub fn new(dictionary: &'a [Vector], schedule: &'a Schedule) -> Self {
        Self { dictionary, schedule, policy: SelectionPolicy::Remotest, horizon: 1000, tol: 1e-12, stride: None }
    }

    pub fn policy(mut self, policy: SelectionPolicy) -> Self {
        self.policy = policy;
        self
    }

    pub fn horizon(mut self, horizon: usize) -> Self {
        self.horizon = horizon;
        self
    }

    pub fn tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn stride(mut self, stride: Option<usize>) -> Self {
        self.stride = stride;
        self
    }

    pub fn run(&self, x0: &Vector) -> Result<Trace> {
        let first =
            self.dictionary.first().ok_or_else(|| Error::InvalidArgument("dictionary must be nonempty".into()))?;
        let dim = first.dim();
        for (i, g) in self.dictionary.iter().enumerate() {
            g.check_dim(dim)?;
            if (g.norm() - 1.0).abs() > 1e-12 {
                return Err(Error::InvalidArgument(format!(
                    "dictionary element {i} is not a unit vector (norm {})",
                    g.norm()
                )));
            }
        }
        check_common(dim, x0, self.horizon, self.tol, self.stride)?;
        self.schedule.validate()?;
        self.policy.validate(self.dictionary.len())?;

        let stride = self.stride.unwrap_or_else(|| default_stride(dim));
        let mut rec = Recorder::new(x0, Some(Vector::zeros(dim)), self.tol, stride);
        let mut selector = Selector::new(&self.policy);
        let mut coeffs = vec![0.0; self.dictionary.len()];
        let mut mags = vec![0.0; self.dictionary.len()];
        let mut x = x0.clone();
        let mut stop = StopReason::Horizon;

        for n in 0..self.horizon {
            for ((c, m), g) in coeffs.iter_mut().zip(mags.iter_mut()).zip(self.dictionary) {
                *c = x.dot(g);
                *m = c.abs();
            }
            let best = mags.iter().copied().fold(0.0, f64::max);
            if x.norm() <= self.tol || best <= self.tol {
                stop = StopReason::InIntersection;
                break;
            }
            let t = self.schedule.t_at(n);
            let Some(k) = selector.choose(n, &mags, best, t)? else {
                break;
            };
            let mut next = x.clone();
            next.add_scaled(-coeffs[k], &self.dictionary[k]);
            if !next.is_finite() {
                return Err(Error::NonFinite("residual"));
            }
            let stalled = rec.push(n, k, &x, &next, mags[k], best, t);
            x = next;
            if stalled {
                stop = StopReason::Converged;
                break;
            }
        }
        Ok(rec.finish(x, stop))
    }
}

/// Greedy WGA run; see [`WeakGreedy`].
pub fn run_wga(dictionary: &[Vector], schedule: &Schedule, x0: &Vector, horizon: usize, tol: f64) -> Result<Trace> {
    WeakGreedy::new(dictionary, schedule).horizon(horizon).tol(tol).run(x0)
}

/// A-posteriori weakness `t_n = |x_{n+1} - x_n| / max_k dist(x_n, C_k)` per
/// step; `None` marks terminal steps with `dist_max ≤ tol`.
pub fn effective_weakness(trace: &Trace) -> Vec<Option<f64>> {
    trace.steps.iter().map(|s| if s.dist_max <= trace.tol { None } else { Some(s.step_norm / s.dist_max) }).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(c: &[f64]) -> Vector {
        Vector::new(c.to_vec()).unwrap()
    }

    fn stripe_family() -> Vec<ConvexSet> {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let r2 = 2f64.sqrt();
        vec![ConvexSet::line(v(&[0.0, 1.0])).unwrap(), ConvexSet::slab(v(&[h, -h]), -r2, r2).unwrap()]
    }

    #[test]
    fn stripe_remotest_run() {
        let fam = stripe_family();
        let one = Schedule::constant(1.0).unwrap();
        let t = run_remote(&fam, &one, &v(&[-4.0, 4.0]), &SelectionPolicy::Remotest, 50, 1e-12, Some(&v(&[0.0, 0.0])))
            .unwrap();
        assert_eq!(t.steps.len(), 2);
        assert_eq!((t.steps[0].alpha, t.steps[1].alpha), (1, 0));
        assert!((t.steps[0].dist_chosen - 3.0 * 2f64.sqrt()).abs() < 1e-12);
        assert!((t.steps[0].dist_max - t.steps[0].dist_chosen).abs() == 0.0);
        let x1 = &t.iterates[1].point;
        assert!((x1[0] + 1.0).abs() < 1e-12 && (x1[1] - 1.0).abs() < 1e-12);
        assert!(t.final_point.distance_to(&v(&[0.0, 1.0])) < 1e-12);
        assert_eq!(t.stop_reason, StopReason::InIntersection);
        let eff = effective_weakness(&t);
        assert_eq!(eff, vec![Some(1.0), Some(1.0)]);
    }

    #[test]
    fn orthogonal_hyperplanes_in_two_steps() {
        let fam = vec![
            ConvexSet::hyperplane(Vector::basis(2, 0)).unwrap(),
            ConvexSet::hyperplane(Vector::basis(2, 1)).unwrap(),
        ];
        let one = Schedule::constant(1.0).unwrap();
        let t = run_remote(&fam, &one, &v(&[1.0, 1.0]), &SelectionPolicy::Remotest, 10, 1e-12, None).unwrap();
        assert_eq!(t.iterates[1].point, v(&[0.0, 1.0]));
        assert_eq!(t.iterates[2].point, v(&[0.0, 0.0]));
        assert_eq!(t.stop_reason, StopReason::InIntersection);
    }

    #[test]
    fn wga_orthonormal_dictionary() {
        let dict = vec![Vector::basis(2, 0), Vector::basis(2, 1)];
        let one = Schedule::constant(1.0).unwrap();
        let t = run_wga(&dict, &one, &v(&[2.0, 1.0]), 10, 1e-12).unwrap();
        assert_eq!(t.steps.iter().map(|s| s.alpha).collect::<Vec<_>>(), vec![0, 1]);
        assert_eq!(t.final_point, Vector::zeros(2));

        let t = run_wga(&[Vector::basis(2, 0)], &one, &v(&[0.0, 1.0]), 10, 1e-12).unwrap();
        assert!(t.steps.is_empty());
        assert_eq!(t.final_point, v(&[0.0, 1.0]));
        assert_eq!(t.stop_reason, StopReason::InIntersection);
    }

    #[test]
    fn wga_rejects_non_unit_elements() {
        let one = Schedule::constant(1.0).unwrap();
        let err = run_wga(&[v(&[1.0, 1.0])], &one, &v(&[1.0, 0.0]), 10, 0.0).unwrap_err();
        assert!(matches!(err, Error::InvalidArgument(_)));
    }

    #[test]
    fn scripted_out_of_range_is_an_error() {
        let fam = stripe_family();
        let one = Schedule::constant(1.0).unwrap();
        let pol = SelectionPolicy::Scripted { indices: vec![0, 2] };
        let err = run_remote(&fam, &one, &v(&[-4.0, 4.0]), &pol, 5, 0.0, None).unwrap_err();
        assert!(matches!(err, Error::IndexOutOfRange { index: 2, len: 2 }));
    }

    #[test]
    fn dictated_steps_are_flagged_not_failed() {
        let fam = stripe_family();
        let one = Schedule::constant(1.0).unwrap();
        // projecting onto the nearer line first misses t = 1
        let pol = SelectionPolicy::Scripted { indices: vec![0, 1, 0, 1] };
        let t = run_remote(&fam, &one, &v(&[-4.0, 4.0]), &pol, 10, 1e-12, None).unwrap();
        assert!(t.steps[0].flagged);
        assert!(t.steps[0].t_effective < 1.0);
        assert!(t.flag_count() >= 1);
    }

    #[test]
    fn scripted_list_exhaustion_ends_at_horizon() {
        let fam = stripe_family();
        let zero = Schedule::constant(0.0).unwrap();
        let pol = SelectionPolicy::Scripted { indices: vec![0] };
        let t = run_remote(&fam, &zero, &v(&[-4.0, 4.0]), &pol, 10, 1e-12, None).unwrap();
        assert_eq!(t.steps.len(), 1);
        assert_eq!(t.stop_reason, StopReason::Horizon);
    }

    #[test]
    fn threshold_first_honours_schedule() {
        let fam = vec![
            ConvexSet::halfspace(v(&[1.0, 0.0]), 0.0).unwrap(),
            ConvexSet::halfspace(v(&[0.0, 1.0]), 0.0).unwrap(),
        ];
        let x0 = v(&[1.0, 3.0]);
        let half = Schedule::constant(0.5).unwrap();
        let t = run_remote(&fam, &half, &x0, &SelectionPolicy::ThresholdFirst, 10, 1e-12, None).unwrap();
        // 1 < 0.5 * 3, so the first admissible index is 1
        assert_eq!(t.steps[0].alpha, 1);
        let small = Schedule::constant(0.25).unwrap();
        let t = run_remote(&fam, &small, &x0, &SelectionPolicy::ThresholdFirst, 10, 1e-12, None).unwrap();
        assert_eq!(t.steps[0].alpha, 0);
        assert_eq!(t.flag_count(), 0);
    }

    #[test]
    fn stalled_runs_converge() {
        let fam = vec![
            ConvexSet::halfspace(v(&[1.0, 0.0]), 0.0).unwrap(),
            ConvexSet::halfspace(v(&[0.0, 1.0]), 0.0).unwrap(),
        ];
        let zero = Schedule::constant(0.0).unwrap();
        let t = run_remote(&fam, &zero, &v(&[1.0, 3.0]), &SelectionPolicy::ThresholdFirst, 100, 1e-12, None).unwrap();
        assert_eq!(t.stop_reason, StopReason::Converged);
        assert_eq!(t.steps.len(), 1 + STALL_STEPS);
    }

    #[test]
    fn random_policy_is_seeded() {
        let fam = vec![
            ConvexSet::halfspace(v(&[1.0, 0.0]), 0.0).unwrap(),
            ConvexSet::ball(v(&[0.0, 0.0]), 1.0).unwrap(),
            ConvexSet::halfspace(v(&[0.0, 1.0]), 0.0).unwrap(),
        ];
        let zero = Schedule::constant(0.0).unwrap();
        let pol = SelectionPolicy::Random { seed: 42 };
        let a = run_remote(&fam, &zero, &v(&[3.0, 3.0]), &pol, 50, 0.0, None).unwrap();
        let b = run_remote(&fam, &zero, &v(&[3.0, 3.0]), &pol, 50, 0.0, None).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn quasi_periodic_validation() {
        assert_eq!(first_incomplete_window(&[0, 1, 2, 0, 1, 2], 3, 3), None);
        assert_eq!(first_incomplete_window(&[0, 1, 2, 2, 1, 0], 3, 3), Some(1));
        assert_eq!(first_incomplete_window(&[0, 1], 3, 3), None);
        let pol = SelectionPolicy::QuasiPeriodic { indices: vec![0, 0, 1, 1], window: 2 };
        assert!(matches!(pol.validate(2), Err(Error::InvalidPolicy(_))));
        let pol = SelectionPolicy::QuasiPeriodic { indices: vec![0, 1, 0, 1], window: 2 };
        assert!(pol.validate(2).is_ok());
        assert!(SelectionPolicy::Cyclic { size: 3 }.validate(2).is_err());
    }

    #[test]
    fn iterate_retention_stride() {
        let fam = vec![ConvexSet::ball(Vector::zeros(70), 1.0).unwrap()];
        let mut x0 = Vector::zeros(70);
        x0[0] = 5.0;
        let zero = Schedule::constant(0.0).unwrap();
        let t = run_remote(&fam, &zero, &x0, &SelectionPolicy::Cyclic { size: 1 }, 3, 1e-12, None).unwrap();
        // stops in the ball after one step; x0 and the final iterate are kept
        assert_eq!(t.iterates.iter().map(|i| i.n).collect::<Vec<_>>(), vec![0, 1]);
    }

    #[test]
    fn precondition_errors() {
        let fam = stripe_family();
        let one = Schedule::constant(1.0).unwrap();
        assert!(run_remote(&[], &one, &v(&[0.0, 0.0]), &SelectionPolicy::Remotest, 5, 0.0, None).is_err());
        assert!(run_remote(&fam, &one, &v(&[0.0, 0.0]), &SelectionPolicy::Remotest, 0, 0.0, None).is_err());
        assert!(run_remote(&fam, &one, &v(&[0.0]), &SelectionPolicy::Remotest, 5, 0.0, None).is_err());
    }
}
