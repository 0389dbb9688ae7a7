//! ODE lab: event times against the headline budgets, closed-form agreement,
//! cascade structure, and step-size robustness.

use semirandom_core::ode::{
    self, integrate, lower_closed_forms, lower_system, IntegrateOptions, OdeReference,
};

#[test]
fn lower_system_matches_closed_forms_at_spot_points() {
    let sys = lower_system();
    for target in [0.5f64, 1.0, 2.0] {
        let sol = integrate(
            &sys,
            0.0,
            [0.0; 5],
            &move |s, _y: &[f64; 5]| s - target,
            &IntegrateOptions::new(1e-5, 3.0),
        );
        let (s, y) = sol.event.expect("time event always fires");
        assert!((s - target).abs() < 1e-9);
        let cf = lower_closed_forms(s);
        let exact = [cf.x, cf.y, cf.u, cf.d, cf.w];
        for i in 0..5 {
            assert!(
                (y[i] - exact[i]).abs() < 1e-8,
                "component {i} at s={target}: {} vs {}",
                y[i],
                exact[i]
            );
        }
    }
}

#[test]
fn warmup_event_time_is_below_the_budget() {
    // From the empty state to x = 1 - eps/3, eps = 1e-14.
    let (s, _) = ode::warmup_event_time(0.0, 0.0, 1.0 - ode::WARMUP_EPS / 3.0, 1e-5).unwrap();
    assert!(s <= 1.2769497, "warm-up event at {s}");
    assert!(s >= 1.276, "warm-up event at {s}");
    // Frozen regression anchor (computed by this lab, cross-checked against
    // an independent integrator during development).
    assert!((s - 1.276_943_857).abs() < 1e-6, "s = {s}");
}

#[test]
fn warmup_event_time_half_step_agreement() {
    let (a, _) = ode::warmup_event_time(0.0, 0.0, 1.0 - ode::WARMUP_EPS / 3.0, 1e-5).unwrap();
    let (b, _) = ode::warmup_event_time(0.0, 0.0, 1.0 - ode::WARMUP_EPS / 3.0, 5e-6).unwrap();
    assert!((a - b).abs() <= 1e-8, "{a} vs {b}");
}

#[test]
fn continuation_run_finishes_before_its_budget() {
    // Restart at x = 1 - 1e-6: x(0.00158) must already exceed 1 - 1e-14.
    let c = ode::continuation_time(1e-6).unwrap();
    assert!(c <= 0.00158, "continuation time {c}");
    assert!(c >= 0.0014, "continuation time {c}");
}

#[test]
fn cascade_prefix_anchors() {
    // c_1 frozen as a regression anchor; two step sizes must agree.
    let a = ode::phase_cascade(5, 1e-5, 0, 0).unwrap();
    let b = ode::phase_cascade(5, 5e-6, 0, 0).unwrap();
    assert!((a.records[0].c - b.records[0].c).abs() < 1e-8);
    assert!(
        (a.records[0].c - 0.736_793_177_8).abs() < 1e-7,
        "c_1 = {}",
        a.records[0].c
    );
    assert!(
        (a.records[4].c - 1.047_629_493_2).abs() < 1e-7,
        "c_5 = {}",
        a.records[4].c
    );
    for pair in a.records.windows(2) {
        assert!(pair[1].c > pair[0].c, "phase times must increase");
    }
}

#[test]
fn beta_assembly_sums_components() {
    let cascade = ode::phase_cascade(3, 1e-5, 0, 0).unwrap();
    let continuation = ode::continuation_time(1e-5).unwrap();
    let (beta, comp) = ode::assemble_beta(&cascade, continuation);
    assert_eq!(
        beta,
        comp.cascade_time + comp.continuation_time + comp.cleanup_time
    );
    assert_eq!(comp.cleanup_time, 1e-5);
    assert_eq!(comp.cascade_time, cascade.last().c);
}

#[test]
fn compute_bounds_small_cascade_is_partial_but_consistent() {
    // k = 1 exercises the full report path cheaply.
    let report = ode::compute_bounds(&ode::BoundsOptions {
        k: 1,
        h: 1e-5,
        alpha_tol: 1e-9,
        half_step_check: true,
    })
    .unwrap();
    assert!(report.alpha >= 0.93261 && report.alpha <= 0.93262);
    assert_eq!(report.phase_times.len(), 1);
    let hs = report.half_step.unwrap();
    assert!(hs.cascade_time <= 1e-8);
    assert!(hs.continuation_time <= 1e-8);
    assert!(hs.warmup_only_time <= 1e-8);
    // With a one-phase cascade beta is far from the headline constant;
    // callers see that through the large unsaturated remainder.
    assert!(report.cascade_unsat > 0.1);
}

#[test]
fn warmup_guard_trips_when_the_event_is_unreachable() {
    // Integrating the direct-form warm-up system toward an impossible
    // threshold must end as a guard violation at the x -> 1 boundary, not an
    // event and not a hang.
    use semirandom_core::ode::{warmup_system, Outcome};
    let sys = warmup_system();
    let sol = integrate(
        &sys,
        0.0,
        [0.0, 0.0],
        &|_s, y: &[f64; 2]| y[0] - 2.0,
        &IntegrateOptions::new(1e-4, 3.0),
    );
    assert_eq!(sol.outcome, Outcome::GuardViolated);
    assert!(sol.end.0 < 3.0);
    assert!(sol.event_time().is_err());
}

#[test]
fn reference_curves_start_at_zero_and_cover_the_run() {
    let warm = OdeReference::warmup(1e-5, 0.995).unwrap();
    assert!(warm.s_end() > 1.0);
    let p = warm.eval(0.5).unwrap();
    assert!(p.x > 0.5 && p.x < 1.0);
    assert!(p.r > 0.0 && p.r < 0.5);

    let phased = OdeReference::phased(1e-5, 5).unwrap();
    assert!(phased.s_end() > 1.0);
    let p = phased.eval(1.0).unwrap();
    assert!(p.x > 0.9);
}
