//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test --test acceptance`; the process exits non-zero if any
//! criterion fails.

mod common;

use std::time::{Duration, Instant};

use rand::Rng;
use remoteproj::cli::{cmd_run, RunManifest};
use remoteproj::diagnostics::{check_rate_bound, check_window_bound};
use remoteproj::engine::{run_remote, run_wga};
use remoteproj::io::trace_csv;
use remoteproj::scenarios::{ball_interior, cap_cos, cap_lines, cap_tau, quasi_periodic, stripe_example, Overrides};
use remoteproj::schedule::build_extremal_witness;
use remoteproj::{ConvexSet, ScenarioConfig, Schedule, SelectionPolicy, StopReason, Vector};

// High-precision (40-digit) evaluation of a_m(S_{m-1} + a_m) = 1, frozen.
const ORACLE_SUMSQ_1E3: f64 = 4.617_373_332_852_807;
const ORACLE_SUMSQ_1E6: f64 = 8.072_279_494_069_187;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn timed(limit: Option<Duration>, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let mut out = f();
    let elapsed = start.elapsed();
    out.detail = format!("{}; {:.2}s", out.detail, elapsed.as_secs_f64());
    if let Some(limit) = limit {
        if elapsed > limit {
            out.passed = false;
            out.detail = format!("{} exceeds the {:.0}s limit", out.detail, limit.as_secs_f64());
        }
    }
    out
}

fn stripe_exactness() -> Outcome {
    let cfg = stripe_example();
    let trace = cfg.run().unwrap();
    let close = |p: &Vector, q: [f64; 2]| (p[0] - q[0]).abs() <= 1e-12 && (p[1] - q[1]).abs() <= 1e-12;
    let x1 = &trace.iterates.iter().find(|it| it.n == 1).unwrap().point;
    let x2 = &trace.final_point;
    let reference = cfg.extras.reference_projection.clone().unwrap();
    let gap = x2.distance_to(&reference);
    let ok = close(x1, [-1.0, 1.0])
        && close(x2, [0.0, 1.0])
        && trace.steps.len() == 2
        && trace.stop_reason == StopReason::InIntersection
        && close(&reference, [0.0, 2.0])
        && (gap - 1.0).abs() <= 1e-12;
    outcome(ok, format!("x1 = {:?}, x2 = {:?}, |x2 - P_C x0| = {gap}", x1.as_slice(), x2.as_slice()))
}

fn fejer_energy_suite() -> Outcome {
    let mut worst_fejer = 0.0f64;
    let mut worst_energy = 0.0f64;
    let mut worst_budget = f64::NEG_INFINITY;
    let mut steps = 0;
    for seed in 0..100u64 {
        let mut rng = common::rng(seed);
        let d = rng.gen_range(2..=20);
        let k = rng.gen_range(2..=8);
        let family = common::family_through_origin(&mut rng, d, k);
        let radius = rng.gen_range(1.0..10.0);
        let x0 = common::point(&mut rng, d, radius);
        let schedule = match seed % 3 {
            0 => Schedule::Constant { value: 1.0 },
            1 => Schedule::Power { exponent: 0.5 },
            _ => Schedule::Constant { value: 0.3 },
        };
        let policy = match seed % 4 {
            0 => SelectionPolicy::Remotest,
            1 => SelectionPolicy::ThresholdFirst,
            2 => SelectionPolicy::Cyclic { size: k },
            _ => SelectionPolicy::Random { seed },
        };
        let origin = Vector::zeros(d);
        let trace = run_remote(&family, &schedule, &x0, &policy, 200, 0.0, Some(&origin)).unwrap();
        let pts: Vec<&Vector> = trace.iterates.iter().map(|it| &it.point).collect();
        assert_eq!(pts.len(), trace.steps.len() + 1, "stride 1 keeps every iterate");
        let mut sum_sq = 0.0;
        for (n, pair) in pts.windows(2).enumerate() {
            let (before, after) = (pair[0].norm(), pair[1].norm());
            let y = pair[0].distance_to(pair[1]);
            worst_fejer = worst_fejer.max(after - before);
            worst_energy = worst_energy.max(after * after + y * y - before * before);
            sum_sq += trace.steps[n].step_norm.powi(2);
        }
        worst_budget = worst_budget.max(sum_sq - x0.norm().powi(2));
        steps += trace.steps.len();
    }
    let ok = worst_fejer <= 1e-9 && worst_energy <= 1e-9 && worst_budget <= 1e-6;
    outcome(
        ok,
        format!(
            "100 families, {steps} steps; max Fejér increase {worst_fejer:.2e}, max energy excess {worst_energy:.2e}, \
             max Σ|y|² - |x0|² {worst_budget:.2e}"
        ),
    )
}

fn wga_equivalence() -> Outcome {
    let mut worst = 0.0f64;
    let mut mismatched_lengths = 0;
    for seed in 0..50u64 {
        let mut rng = common::rng(1000 + seed);
        let dict: Vec<Vector> = (0..10).map(|_| common::unit(&mut rng, 6)).collect();
        let planes: Vec<ConvexSet> = dict.iter().map(|g| ConvexSet::hyperplane(g.clone()).unwrap()).collect();
        let radius = rng.gen_range(0.5..5.0);
        let x0 = common::point(&mut rng, 6, radius);
        let schedule = Schedule::Constant { value: 1.0 };
        let wga = run_wga(&dict, &schedule, &x0, 100, 0.0).unwrap();
        let rem = run_remote(&planes, &schedule, &x0, &SelectionPolicy::Remotest, 100, 0.0, None).unwrap();
        if wga.iterates.len() != rem.iterates.len() {
            mismatched_lengths += 1;
        }
        for (a, b) in wga.iterates.iter().zip(&rem.iterates) {
            for (p, q) in a.point.iter().zip(b.point.iter()) {
                worst = worst.max((p - q).abs());
            }
        }
    }
    outcome(
        worst <= 1e-10 && mismatched_lengths == 0,
        format!("50 dictionaries x 100 steps; max coordinate difference {worst:.2e}"),
    )
}

fn rate_bound() -> Outcome {
    let mut violations = 0;
    let mut checked = 0;
    let mut min_slack = f64::INFINITY;
    for seed in 0..50u64 {
        for schedule in [Schedule::Constant { value: 1.0 }, Schedule::Power { exponent: 0.25 }] {
            let cfg = ball_interior(8, 3, 0.5, seed, &schedule, 1000).unwrap();
            assert!((cfg.x0.norm() - 4.0).abs() < 1e-12);
            let trace = cfg.run().unwrap();
            let ball = cfg.extras.ball.as_ref().unwrap();
            let report = check_rate_bound(&trace, &cfg.family, &ball.center, ball.radius, &schedule).unwrap();
            for p in &report.points {
                checked += 1;
                min_slack = min_slack.min(p.bound - p.actual);
                if p.actual > p.bound + 1e-6 {
                    violations += 1;
                }
            }
        }
    }
    outcome(
        violations == 0,
        format!("100 runs, {checked} iterates, {violations} violations, min B_n - A_n = {min_slack:.3e}"),
    )
}

fn quasi_periodic_windows() -> Outcome {
    let combos = [(3, 3), (3, 6), (5, 5), (5, 10)];
    let mut failures = Vec::new();
    let mut windows = 0;
    let mut not_cauchy = Vec::new();
    let mut widest = 0.0f64;
    for seed in 0..20u64 {
        let (k, m) = combos[seed as usize % combos.len()];
        let cfg = quasi_periodic(k, m, 3, seed, 500, false).unwrap();
        let trace = cfg.run().unwrap();
        let report = check_window_bound(&trace, m).unwrap();
        windows += report.windows_checked;
        if !report.holds {
            failures.push(seed);
        }
        let sym = quasi_periodic(k, m, 3, seed, 2000, true).unwrap();
        let trace = sym.run().unwrap();
        let verdict = sym.verdict(&trace).unwrap();
        widest = widest.max(verdict.tail_diameter);
        if !(verdict.norm_cauchy && verdict.tail_diameter <= 1e-6) {
            not_cauchy.push(seed);
        }
    }
    outcome(
        failures.is_empty() && not_cauchy.is_empty(),
        format!(
            "20 runs, {windows} windows, window failures {failures:?}; symmetric variants not Cauchy {not_cauchy:?}, \
             largest tail diameter {widest:.2e}"
        ),
    )
}

fn cap_lines_counterexample() -> Outcome {
    let t = Schedule::Power { exponent: 1.0 };
    let cfg = cap_lines(&t, 10_000, 8, 7).unwrap();
    let trace = cfg.run().unwrap();
    let cap = cfg.extras.cap.as_ref().unwrap();
    let m = cap.m;
    let norms = trace.x_norms();
    let xm = norms[m];

    let tail_sum: f64 = (m..=10_000).map(|n| cap_tau(&t, n).powi(2)).sum();
    let a = tail_sum < 0.25 && cap.tail_bound < 0.25;
    let b = norms[m + 1..].iter().all(|x| x * x >= 0.75 * xm * xm - 1e-9);
    let c = (m..trace.steps.len())
        .all(|n| (norms[n + 1] - norms[n] * (1.0 - cap_tau(&t, n).powi(2)).sqrt()).abs() <= 1e-10);
    let d = trace.flag_count() == 0 && trace.steps.len() == 10_000;
    let verdict = cfg.verdict(&trace).unwrap();
    let osc = verdict.oscillation[0];
    let e = !verdict.norm_cauchy && osc >= 0.1 * xm;
    let in_cap = cfg.cap_walk().unwrap().iter().all(|s| s.dot(&cap.pole) >= cap_cos() - 1e-10);
    outcome(
        a && b && c && d && e && in_cap,
        format!(
            "m = {m}, (a) Σ τ² = {tail_sum:.6} [{a}], (b) norm floor [{b}], (c) norm identity [{c}], \
             (d) {} flags [{d}], (e) oscillation {osc:.4e} vs {:.4e}, norm_cauchy {} [{e}]",
            trace.flag_count(),
            0.1 * xm,
            verdict.norm_cauchy
        ),
    )
}

fn witness_oracle() -> Outcome {
    let w = build_extremal_witness(&Schedule::Constant { value: 1.0 }, 1_000_000).unwrap();
    let a1 = w.a_at(1) == 1.0;
    let a2 = (w.a_at(2) - (5f64.sqrt() - 1.0) / 2.0).abs() <= 1e-12;
    let worst_b = w.b.iter().map(|b| (b - 1.0).abs()).fold(0.0, f64::max);
    let (s3, s6) = (w.sumsq_at(1000), w.sumsq_at(1_000_000));
    let growth = s6 - s3 >= 3.0;
    let oracle = (s3 - ORACLE_SUMSQ_1E3).abs() <= 1e-9 && (s6 - ORACLE_SUMSQ_1E6).abs() <= 1e-9;
    outcome(
        a1 && a2 && worst_b <= 1e-9 && growth && oracle,
        format!(
            "a_1 = {}, a_2 = {:.13}, max |b_m - 1| = {worst_b:.2e}, sumsq(10^3) = {s3:.12}, sumsq(10^6) = {s6:.12}, \
             oracle deviation {:.2e}",
            w.a_at(1),
            w.a_at(2),
            (s3 - ORACLE_SUMSQ_1E3).abs().max((s6 - ORACLE_SUMSQ_1E6).abs())
        ),
    )
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let golden: Vec<(&str, Overrides)> = vec![
        ("stripe_example", Overrides::default()),
        (
            "cap_lines",
            Overrides {
                horizon: Some(10_000),
                dim: Some(8),
                seed: Some(7),
                schedule: Some(Schedule::Power { exponent: 1.0 }),
                tol: None,
            },
        ),
        (
            "ball_interior",
            Overrides { seed: Some(3), schedule: Some(Schedule::Power { exponent: 0.25 }), ..Overrides::default() },
        ),
        ("quasi_periodic", Overrides { seed: Some(5), ..Overrides::default() }),
        ("quasi_periodic_symmetric", Overrides { seed: Some(5), ..Overrides::default() }),
    ];
    let mut mismatches = Vec::new();
    for (name, ov) in &golden {
        let runs: Vec<String> = (0..2)
            .map(|i| {
                let mut manifest = RunManifest::scenario(name, dir.path().join(format!("{name}-{i}")));
                manifest.overrides = ov.clone();
                let out = cmd_run(&manifest).unwrap();
                std::fs::read_to_string(out.dir.join("trace.csv")).unwrap()
            })
            .collect();
        let reloaded = ScenarioConfig::load(&dir.path().join(format!("{name}-0")).join("config.json")).unwrap();
        let replay = trace_csv(&reloaded.run().unwrap().steps);
        if runs[0] != runs[1] || runs[0] != replay {
            mismatches.push(*name);
        }
    }
    outcome(
        mismatches.is_empty(),
        format!("{} golden runs re-executed and replayed from config.json; mismatches {mismatches:?}", golden.len()),
    )
}

/// Name, runtime limit in seconds, check.
type Criterion = (&'static str, Option<u64>, fn() -> Outcome);

fn main() {
    let criteria: Vec<Criterion> = vec![
        ("stripe example exactness", Some(1), stripe_exactness),
        ("Fejér/energy property suite", Some(30), fejer_energy_suite),
        ("WGA equivalence oracle", None, wga_equivalence),
        ("rate bound on ball_interior", None, rate_bound),
        ("quasi-periodic window bound", None, quasi_periodic_windows),
        ("cap-lines counterexample", Some(10), cap_lines_counterexample),
        ("extremal witness oracle", Some(5), witness_oracle),
        ("determinism of golden runs", None, determinism),
    ];
    let mut failed = 0;
    for (i, (name, limit, f)) in criteria.into_iter().enumerate() {
        let out = timed(limit.map(Duration::from_secs), f);
        let tag = if out.passed { "PASS" } else { "FAIL" };
        if !out.passed {
            failed += 1;
        }
        println!("{tag} [{}] {name}: {}", i + 1, out.detail);
    }
    println!("acceptance: {} of 8 criteria passed", 8 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
