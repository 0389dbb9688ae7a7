//! The bound constants: alpha from the certificate density root, beta from
//! the phase cascade plus the warm-up continuation plus the clean-up budget.

use alloc::boxed::Box;
use alloc::vec::Vec;

use libm::sqrt;

use super::systems::{g_lower_bound, phase_end_event, phase_system, warmup_complement_system};
use super::{integrate, IntegrateOptions, OdeSolution, Outcome};
use crate::error::{Error, Result};

/// Full-scale warm-up termination fraction (`|U| <= eps n` ends stage one).
pub const WARMUP_EPS: f64 = 1e-14;

/// Scaled round budget of the clean-up stage, `100 sqrt(eps)` at full scale.
pub const CLEANUP_TIME: f64 = 1e-5;

/// End state of one phase of the circle-minimizing player.
#[derive(Clone, Copy, Debug)]
pub struct PhaseRecord {
    pub q: u32,
    /// Phase end time `c_q`.
    pub c: f64,
    /// `x_q(c_q)`.
    pub x: f64,
    /// `y_q(c_q)`, the scaled type-`q` red count.
    pub y: f64,
}

/// The chained phase solutions `q = 1..=k`.
pub struct PhaseCascade {
    pub records: Vec<PhaseRecord>,
    /// Dense solutions for the first few phases (trajectory comparisons).
    pub dense: Vec<OdeSolution<2>>,
    pub h: f64,
}

impl PhaseCascade {
    pub fn last(&self) -> &PhaseRecord {
        self.records.last().expect("cascade has at least one phase")
    }

    pub fn times(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.c).collect()
    }
}

/// Runs the cascade: phase `q` integrates from `(c_{q-1}, x_{q-1}(c_{q-1}), 0)`
/// until no unsaturated vertex with `q-1` circles remains, which defines
/// `c_q`. Dense samples are retained for phases `q <= dense_q`.
pub fn phase_cascade(k: u32, h: f64, dense_q: u32, dense_every: u64) -> Result<PhaseCascade> {
    assert!(k >= 1, "cascade needs at least one phase");
    let mut records = Vec::with_capacity(k as usize);
    let mut dense = Vec::new();
    let mut s = 0.0f64;
    let mut x = 0.0f64;
    for q in 1..=k {
        let sys = phase_system(q);
        let event = phase_end_event(q);
        let mut opts = IntegrateOptions::new(h, s + 3.0);
        opts.dense_every = if q <= dense_q { dense_every.max(1) } else { 0 };
        let sol = integrate(&sys, s, [x, 0.0], &event, &opts);
        if sol.outcome != Outcome::Event {
            return Err(Error::EventNotFound { s_max: s + 3.0 });
        }
        let (c, state) = sol.event.expect("event recorded");
        records.push(PhaseRecord {
            q,
            c,
            x: state[0],
            y: state[1],
        });
        s = c;
        x = state[0];
        if q <= dense_q {
            dense.push(sol);
        }
    }
    Ok(PhaseCascade { records, dense, h })
}

/// Time for the warm-up player's scaled saturation to grow from `x0` to
/// `x_target`, starting with red density `r0`.
///
/// Integrated in complement coordinates `u = 1 - x` so thresholds near 1 keep
/// full precision, with the step clamped to `sqrt(u)/8`: the trajectory
/// touches `u = 0` like a parabola and the system's stiffness grows as
/// `1/sqrt(u)`, so steps must shrink with the distance to the touch point.
pub fn warmup_event_time(x0: f64, r0: f64, x_target: f64, h: f64) -> Result<(f64, [f64; 2])> {
    let u_target = 1.0 - x_target;
    assert!(u_target > 0.0, "target must be strictly below 1");
    let sys = warmup_complement_system();
    let mut opts = IntegrateOptions::new(h, 3.0);
    opts.max_step = Some(Box::new(|y: &[f64; 2]| sqrt(y[0].max(0.0)) / 8.0));
    let sol = integrate(
        &sys,
        0.0,
        [1.0 - x0, r0],
        &move |_s, y: &[f64; 2]| u_target - y[0],
        &opts,
    );
    let s = sol.event_time()?;
    let end = sol.event.expect("event recorded").1;
    Ok((s, [1.0 - end[0], end[1]]))
}

/// Continuation stage: warm-up dynamics restarted from `x0 = 1 - 1e-6`,
/// `r0 = 0`, run until `x > 1 - WARMUP_EPS`.
pub fn continuation_time(h: f64) -> Result<f64> {
    Ok(warmup_event_time(1.0 - 1e-6, 0.0, 1.0 - WARMUP_EPS, h)?.0)
}

/// Beta's three summands: cascade, continuation, clean-up.
#[derive(Clone, Copy, Debug)]
pub struct BetaComponents {
    pub cascade_time: f64,
    pub continuation_time: f64,
    pub cleanup_time: f64,
}

/// `beta = c_k + continuation + cleanup`.
pub fn assemble_beta(cascade: &PhaseCascade, continuation: f64) -> (f64, BetaComponents) {
    let components = BetaComponents {
        cascade_time: cascade.last().c,
        continuation_time: continuation,
        cleanup_time: CLEANUP_TIME,
    };
    (
        components.cascade_time + components.continuation_time + components.cleanup_time,
        components,
    )
}

/// Finds `alpha = inf { b >= 0 : g(b) >= 1/2 }` by bisection on `[0, 2]`.
///
/// `g(0) = 0` and `g(1) > 1/2` bracket the root; monotonicity over the
/// bracket is spot-checked by sampling so the bisection invariant is honest.
pub fn find_alpha(tol: f64) -> f64 {
    assert!(tol > 0.0);
    let f = |b: f64| g_lower_bound(b) - 0.5;
    let (mut lo, mut hi) = (0.0f64, 2.0f64);
    debug_assert!(f(lo) < 0.0 && f(hi) > 0.0, "bracket failure");
    let mut prev = f(0.0);
    for i in 1..=200 {
        let v = f(i as f64 * 0.01);
        debug_assert!(v >= prev - 1e-12, "g is not monotone on the bracket");
        prev = v;
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if f(mid) >= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// Differences between the headline constants computed at `h` and at `h/2`.
#[derive(Clone, Copy, Debug, Default)]
pub struct HalfStepDeltas {
    pub cascade_time: f64,
    pub continuation_time: f64,
    pub warmup_only_time: f64,
}

#[derive(Clone, Copy, Debug)]
pub struct BoundsOptions {
    /// Cascade depth (1100 reproduces the headline constant).
    pub k: u32,
    /// Integration step.
    pub h: f64,
    /// Bisection tolerance for alpha.
    pub alpha_tol: f64,
    /// Also run everything at `h/2` and record the drift.
    pub half_step_check: bool,
}

impl Default for BoundsOptions {
    fn default() -> Self {
        Self {
            k: 1100,
            h: 1e-6,
            alpha_tol: 1e-9,
            half_step_check: true,
        }
    }
}

/// Assembled numerical constants with solver provenance.
#[derive(Clone, Debug)]
pub struct BoundsReport {
    pub alpha: f64,
    pub alpha_tol: f64,
    pub beta: f64,
    pub components: BetaComponents,
    /// `c_q` for `q = 1..=k`.
    pub phase_times: Vec<f64>,
    /// `1 - x_k(c_k)`, the scaled unsaturated remainder after the cascade.
    pub cascade_unsat: f64,
    /// Warm-up-only event time: `x` from 0 to `1 - WARMUP_EPS/3`.
    pub warmup_only_time: f64,
    pub h: f64,
    pub event_tol: f64,
    pub half_step: Option<HalfStepDeltas>,
}

/// Computes every constant: alpha, the full cascade, the continuation, the
/// warm-up-only time, and beta.
pub fn compute_bounds(opts: &BoundsOptions) -> Result<BoundsReport> {
    let alpha = find_alpha(opts.alpha_tol);
    let cascade = phase_cascade(opts.k, opts.h, 0, 0)?;
    let continuation = continuation_time(opts.h)?;
    let warmup_only = warmup_event_time(0.0, 0.0, 1.0 - WARMUP_EPS / 3.0, opts.h)?.0;
    let (beta, components) = assemble_beta(&cascade, continuation);
    let half_step = if opts.half_step_check {
        let h2 = opts.h / 2.0;
        let cascade2 = phase_cascade(opts.k, h2, 0, 0)?;
        let cont2 = continuation_time(h2)?;
        let warm2 = warmup_event_time(0.0, 0.0, 1.0 - WARMUP_EPS / 3.0, h2)?.0;
        Some(HalfStepDeltas {
            cascade_time: (cascade.last().c - cascade2.last().c).abs(),
            continuation_time: (continuation - cont2).abs(),
            warmup_only_time: (warmup_only - warm2).abs(),
        })
    } else {
        None
    };
    Ok(BoundsReport {
        alpha,
        alpha_tol: opts.alpha_tol,
        beta,
        components,
        phase_times: cascade.times(),
        cascade_unsat: 1.0 - cascade.last().x,
        warmup_only_time: warmup_only,
        h: opts.h,
        event_tol: 1e-12,
        half_step,
    })
}
