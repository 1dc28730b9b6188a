//! Weakness-parameter sequences `{t_n}` and their analyzers.
//!
//! Whether a schedule satisfies Temlyakov's condition (T) cannot be read off
//! finitely many terms. [`Schedule::condition_t`] only reports the labels the
//! implication chain `Σ t_n/n = ∞ ⇒ (T) ⇒ Σ t_n² = ∞` gives in closed form;
//! everything else is left to the witness trajectory and partial sums.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A deterministic sequence `t_0, t_1, ...` in `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Schedule {
    Constant {
        value: f64,
    },
    /// `t_n = min(1, (n + 1)^-exponent)`
    Power {
        exponent: f64,
    },
    /// `t_n = min(1, 1 / ((n + 2) ln(n + 2)))`
    HarmonicLog {},
    /// The listed values, extended by the last one.
    Explicit {
        values: Vec<f64>,
    },
    /// `hi` at even `n`, `lo` at odd `n`.
    Alternating {
        hi: f64,
        lo: f64,
    },
}

fn check_unit_interval(x: f64, what: &str) -> Result<()> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::InvalidSchedule(format!("{what} must lie in [0, 1], got {x}")));
    }
    Ok(())
}

/// Closed-form classification with respect to condition (T).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConditionT {
    /// `Σ t_n/(n+1)` diverges, hence (T) holds.
    Holds,
    /// `Σ t_n²` converges, hence (T) fails.
    Fails,
    /// The implication chain says nothing for this schedule.
    Undetermined,
}

impl Schedule {
    pub fn constant(value: f64) -> Result<Self> {
        Self::Constant { value }.validated()
    }

    pub fn power(exponent: f64) -> Result<Self> {
        Self::Power { exponent }.validated()
    }

    pub fn explicit(values: Vec<f64>) -> Result<Self> {
        Self::Explicit { values }.validated()
    }

    pub fn alternating(hi: f64, lo: f64) -> Result<Self> {
        Self::Alternating { hi, lo }.validated()
    }

    fn validated(self) -> Result<Self> {
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Self::Constant { value } => check_unit_interval(*value, "constant"),
            Self::Power { exponent } => {
                if !(exponent.is_finite() && *exponent > 0.0) {
                    return Err(Error::InvalidSchedule(format!("power exponent must be positive, got {exponent}")));
                }
                Ok(())
            }
            Self::HarmonicLog {} => Ok(()),
            Self::Explicit { values } => {
                if values.is_empty() {
                    return Err(Error::InvalidSchedule("explicit schedule needs at least one value".into()));
                }
                values.iter().try_for_each(|v| check_unit_interval(*v, "explicit value"))
            }
            Self::Alternating { hi, lo } => {
                check_unit_interval(*hi, "alternating hi")?;
                check_unit_interval(*lo, "alternating lo")
            }
        }
    }

    /// The weakness parameter `t_n`.
    pub fn t_at(&self, n: usize) -> f64 {
        match self {
            Self::Constant { value } => *value,
            Self::Power { exponent } => ((n + 1) as f64).powf(-exponent).min(1.0),
            Self::HarmonicLog {} => {
                let k = (n + 2) as f64;
                (1.0 / (k * k.ln())).min(1.0)
            }
            Self::Explicit { values } => *values.get(n).unwrap_or_else(|| values.last().expect("validated")),
            Self::Alternating { hi, lo } => {
                if n.is_multiple_of(2) {
                    *hi
                } else {
                    *lo
                }
            }
        }
    }

    /// Theorem-backed label for condition (T), or `Undetermined`.
    pub fn condition_t(&self) -> ConditionT {
        match self {
            Self::Constant { value } if *value > 0.0 => ConditionT::Holds,
            Self::Constant { .. } => ConditionT::Fails,
            Self::Power { exponent } if *exponent > 0.5 => ConditionT::Fails,
            Self::Power { .. } => ConditionT::Undetermined,
            Self::HarmonicLog {} => ConditionT::Fails,
            Self::Explicit { values } => {
                if *values.last().expect("validated") > 0.0 {
                    ConditionT::Holds
                } else {
                    ConditionT::Fails
                }
            }
            Self::Alternating { hi, lo } => {
                if *hi > 0.0 || *lo > 0.0 {
                    ConditionT::Holds
                } else {
                    ConditionT::Fails
                }
            }
        }
    }

    /// Whether `Σ t_n²` diverges, when known in closed form.
    pub fn sum_sq_diverges(&self) -> bool {
        match self {
            Self::Power { exponent } => *exponent <= 0.5,
            _ => self.condition_t() == ConditionT::Holds,
        }
    }
}

impl fmt::Display for Schedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Constant { value } => write!(f, "constant:{value}"),
            Self::Power { exponent } => write!(f, "power:{exponent}"),
            Self::HarmonicLog {} => write!(f, "harmonic_log"),
            Self::Explicit { values } => {
                let parts: Vec<String> = values.iter().map(|v| v.to_string()).collect();
                write!(f, "explicit:{}", parts.join(","))
            }
            Self::Alternating { hi, lo } => write!(f, "alternating:{hi},{lo}"),
        }
    }
}

/// Parses the command-line form `kind:params`, e.g. `power:0.5`,
/// `explicit:0.9,0.1`, `alternating:1,0`, `harmonic_log`.
impl FromStr for Schedule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, params) = match s.split_once(':') {
            Some((k, p)) => (k.trim(), p.trim()),
            None => (s.trim(), ""),
        };
        let nums = || -> Result<Vec<f64>> {
            params
                .split(',')
                .filter(|p| !p.trim().is_empty())
                .map(|p| {
                    p.trim()
                        .parse::<f64>()
                        .map_err(|_| Error::InvalidSchedule(format!("cannot parse `{p}` as a number")))
                })
                .collect()
        };
        let one = |v: Vec<f64>| -> Result<f64> {
            match v.as_slice() {
                [x] => Ok(*x),
                _ => Err(Error::InvalidSchedule(format!("`{kind}` takes exactly one parameter"))),
            }
        };
        match kind {
            "constant" => Self::constant(one(nums()?)?),
            "power" => Self::power(one(nums()?)?),
            "harmonic_log" if params.is_empty() => Ok(Self::HarmonicLog {}),
            "harmonic_log" => Err(Error::InvalidSchedule("`harmonic_log` takes no parameters".into())),
            "explicit" => Self::explicit(nums()?),
            "alternating" => match nums()?.as_slice() {
                [hi, lo] => Self::alternating(*hi, *lo),
                _ => Err(Error::InvalidSchedule("`alternating` takes two parameters hi,lo".into())),
            },
            other => Err(Error::InvalidSchedule(format!("unknown schedule kind `{other}`"))),
        }
    }
}

/// Result of [`check_window_condition`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowCheck {
    pub holds: bool,
    /// First `n` with `max(t_n, ..., t_{n+K}) ≤ δ`.
    pub first_violation: Option<usize>,
}

/// Checks that every window `t_n, ..., t_{n+K}` with `n ≤ horizon - K`
/// contains a value greater than `delta`.
pub fn check_window_condition(schedule: &Schedule, delta: f64, k: usize, horizon: usize) -> Result<WindowCheck> {
    if delta.is_nan() || delta <= 0.0 {
        return Err(Error::InvalidArgument(format!("delta must be positive, got {delta}")));
    }
    if horizon < k + 1 {
        return Err(Error::InvalidArgument(format!("horizon {horizon} must be at least K + 1 = {}", k + 1)));
    }
    // `run` counts consecutive terms ≤ delta ending at the current index.
    let mut run = 0usize;
    for j in 0..=horizon {
        if schedule.t_at(j) > delta {
            run = 0;
        } else {
            run += 1;
            if run > k {
                return Ok(WindowCheck { holds: false, first_violation: Some(j - k) });
            }
        }
    }
    Ok(WindowCheck { holds: true, first_violation: None })
}

/// Partial sums behind the implication chain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PartialSums {
    pub terms: usize,
    /// `Σ_{n<M} t_n²`
    pub sum_sq: f64,
    /// `Σ_{n<M} t_n / (n + 1)`
    pub sum_over_n: f64,
}

pub fn partial_sum_diagnostics(schedule: &Schedule, m: usize) -> Result<PartialSums> {
    if m == 0 {
        return Err(Error::InvalidArgument("M must be at least 1".into()));
    }
    Ok(partial_sums_range(schedule, 0, m))
}

/// Sums over `start ≤ n < end`.
pub fn partial_sums_range(schedule: &Schedule, start: usize, end: usize) -> PartialSums {
    let (mut sum_sq, mut sum_over_n) = (0.0, 0.0);
    for n in start..end {
        let t = schedule.t_at(n);
        sum_sq += t * t;
        sum_over_n += t / (n + 1) as f64;
    }
    PartialSums { terms: end.saturating_sub(start), sum_sq, sum_over_n }
}

/// The boundary sequence for condition (T): `a_m (S_{m-1} + a_m) = t_m`,
/// so that `b_m = (a_m / t_m) S_m = 1` whenever `t_m > 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessSequence {
    /// Weakness parameter paired with each `a_m`.
    pub t: Vec<f64>,
    pub a: Vec<f64>,
    pub partial_sums: Vec<f64>,
    /// `(a_m / t_m) S_m`, `NaN` where `t_m = 0`.
    pub b: Vec<f64>,
    pub sumsq: Vec<f64>,
}

impl WitnessSequence {
    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    /// `Σ_{ν ≤ m} a_ν²` for 1-based `m`.
    pub fn sumsq_at(&self, m: usize) -> f64 {
        self.sumsq[m - 1]
    }

    /// `a_m` for 1-based `m`.
    pub fn a_at(&self, m: usize) -> f64 {
        self.a[m - 1]
    }
}

/// Builds `a_1, ..., a_M` from the schedule; `a_m` uses the `m`-th term `t_{m-1}`.
pub fn build_extremal_witness(schedule: &Schedule, m: usize) -> Result<WitnessSequence> {
    if m == 0 {
        return Err(Error::InvalidArgument("M must be at least 1".into()));
    }
    let mut w = WitnessSequence {
        t: Vec::with_capacity(m),
        a: Vec::with_capacity(m),
        partial_sums: Vec::with_capacity(m),
        b: Vec::with_capacity(m),
        sumsq: Vec::with_capacity(m),
    };
    let (mut s, mut sq) = (0.0f64, 0.0f64);
    for idx in 0..m {
        let t = schedule.t_at(idx);
        // positive root of a² + S a - t = 0, written without cancellation
        let a = if t > 0.0 { 2.0 * t / (s + (s * s + 4.0 * t).sqrt()) } else { 0.0 };
        s += a;
        sq += a * a;
        w.t.push(t);
        w.a.push(a);
        w.partial_sums.push(s);
        w.b.push(if t > 0.0 { a / t * s } else { f64::NAN });
        w.sumsq.push(sq);
    }
    Ok(w)
}
