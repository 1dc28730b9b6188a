//! Property suites over random families, schedules, and policies.

mod common;

use proptest::prelude::*;
use remoteproj::diagnostics::{
    check_energy, check_fejer, check_rate_bound, check_window_bound, law_of_cosines_residual,
};
use remoteproj::engine::{first_incomplete_window, run_remote, run_wga};
use remoteproj::scenarios::{ball_interior, cap_lines, cap_start, quasi_periodic, MAX_CAP_START};
use remoteproj::{ConvexSet, Schedule, SelectionPolicy, Vector};

fn schedule_strategy() -> impl Strategy<Value = Schedule> {
    prop_oneof![
        (0.0..=1.0f64).prop_map(|v| Schedule::Constant { value: v }),
        (0.0..2.0f64).prop_map(|e| Schedule::Power { exponent: e }),
        Just(Schedule::HarmonicLog {}),
        ((0.0..=1.0f64), (0.0..=1.0f64)).prop_map(|(hi, lo)| Schedule::Alternating { hi, lo }),
    ]
}

fn policy_strategy(k: usize) -> impl Strategy<Value = SelectionPolicy> {
    prop_oneof![
        Just(SelectionPolicy::Remotest),
        Just(SelectionPolicy::ThresholdFirst),
        Just(SelectionPolicy::Cyclic { size: k }),
        any::<u64>().prop_map(|seed| SelectionPolicy::Random { seed }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn fejer_energy_and_cosines_hold(
        seed in any::<u64>(),
        d in 2usize..12,
        k in 2usize..8,
        schedule in schedule_strategy(),
        policy_pick in 0usize..4,
    ) {
        let mut rng = common::rng(seed);
        let family = common::family_through_origin(&mut rng, d, k);
        let x0 = common::point(&mut rng, d, 5.0);
        let policy = match policy_pick {
            0 => SelectionPolicy::Remotest,
            1 => SelectionPolicy::ThresholdFirst,
            2 => SelectionPolicy::Cyclic { size: k },
            _ => SelectionPolicy::Random { seed },
        };
        let origin = Vector::zeros(d);
        let trace = run_remote(&family, &schedule, &x0, &policy, 150, 1e-12, Some(&origin)).unwrap();
        prop_assert!(check_fejer(&trace, &origin).unwrap().holds);
        prop_assert!(check_energy(&trace).unwrap().holds);
        prop_assert!(law_of_cosines_residual(&trace).unwrap() <= 1e-8);
        if policy.is_searching() {
            prop_assert_eq!(trace.flag_count(), 0);
        }
        for s in &trace.steps {
            prop_assert!((0.0..=1.0).contains(&s.sin_eps));
            prop_assert!(s.dist_chosen <= s.dist_max + 1e-12);
        }
    }

    #[test]
    fn iterates_land_in_the_chosen_set(seed in any::<u64>(), d in 1usize..8, policy in policy_strategy(4)) {
        let mut rng = common::rng(seed);
        let family = common::family_through_origin(&mut rng, d, 4);
        let x0 = common::point(&mut rng, d, 3.0);
        let trace = run_remote(&family, &Schedule::Constant { value: 0.5 }, &x0, &policy, 40, 1e-12, None).unwrap();
        for (step, pair) in trace.steps.iter().zip(trace.iterates.windows(2)) {
            prop_assert!(family[step.alpha].contains(&pair[1].point).unwrap());
            prop_assert!((pair[0].point.distance_to(&pair[1].point) - step.step_norm).abs() <= 1e-12 * (1.0 + step.step_norm));
        }
    }

    #[test]
    fn wga_equals_remotest_hyperplanes(seed in any::<u64>(), d in 2usize..8, n in 2usize..12, theta in 0.0..1.5f64) {
        let mut rng = common::rng(seed);
        let dict: Vec<Vector> = (0..n).map(|_| common::unit(&mut rng, d)).collect();
        let planes: Vec<ConvexSet> = dict.iter().map(|g| ConvexSet::hyperplane(g.clone()).unwrap()).collect();
        let x0 = common::point(&mut rng, d, 2.0);
        let schedule = Schedule::Power { exponent: theta };
        let wga = run_wga(&dict, &schedule, &x0, 60, 0.0).unwrap();
        let rem = run_remote(&planes, &schedule, &x0, &SelectionPolicy::Remotest, 60, 0.0, None).unwrap();
        prop_assert_eq!(wga.steps.len(), rem.steps.len());
        for (a, b) in wga.iterates.iter().zip(&rem.iterates) {
            for (p, q) in a.point.iter().zip(b.point.iter()) {
                prop_assert!((p - q).abs() <= 1e-10);
            }
        }
    }

    #[test]
    fn ball_interior_rate_bound(seed in any::<u64>(), n_sets in 2usize..15, d in 1usize..6, schedule in schedule_strategy()) {
        let cfg = ball_interior(n_sets, d, 0.5, seed, &schedule, 300).unwrap();
        let trace = cfg.run().unwrap();
        let ball = cfg.extras.ball.as_ref().unwrap();
        let report = check_rate_bound(&trace, &cfg.family, &ball.center, ball.radius, &schedule).unwrap();
        prop_assert!(report.violations.is_empty(), "{:?}", report.violations);
    }

    #[test]
    fn quasi_periodic_windows(seed in any::<u64>(), k in 2usize..6, extra in 0usize..6, d in 2usize..5, symmetric in any::<bool>()) {
        let m = k + extra;
        let cfg = quasi_periodic(k, m, d, seed, 300, symmetric).unwrap();
        if let SelectionPolicy::QuasiPeriodic { indices, .. } = &cfg.policy {
            prop_assert_eq!(first_incomplete_window(indices, m, k), None);
        }
        let trace = cfg.run().unwrap();
        prop_assert!(check_window_bound(&trace, m).unwrap().holds);
        prop_assert!(check_fejer(&trace, &Vector::zeros(d)).unwrap().holds);
    }

    #[test]
    fn cap_lines_keeps_its_norm(seed in any::<u64>(), d in 3usize..10, theta in 0.6..2.0f64) {
        let t = Schedule::Power { exponent: theta };
        let m = cap_start(&t, 0).map(|(m, _)| m).unwrap_or(usize::MAX);
        prop_assume!(m <= MAX_CAP_START);
        let cfg = cap_lines(&t, m + 300, d, seed).unwrap();
        let trace = cfg.run().unwrap();
        let checks = cfg.checks(&trace).unwrap();
        for c in checks.iter().filter(|c| c.name != "cap_non_convergence") {
            prop_assert!(c.passed, "{:?}", c);
        }
    }
}
