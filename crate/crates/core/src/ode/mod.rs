//! Numerical lab: fixed-step 4th-order integration with event detection.
//!
//! The integrator walks a fixed grid of width `h` (optionally clamped by a
//! state-dependent step limit for systems that steepen near a boundary),
//! watches a scalar event function for a sign change, and refines the
//! crossing by bisecting re-integrations of the bracketing step. States that
//! go non-finite or leave the guard region during a step count as "past the
//! event" for bracketing purposes; if the refined point satisfies the event
//! function it is an event, otherwise the run aborts as a guard violation.

mod bounds;
mod reference;
mod systems;

pub use bounds::{
    assemble_beta, compute_bounds, continuation_time, find_alpha, phase_cascade, warmup_event_time,
    BetaComponents, BoundsOptions, BoundsReport, HalfStepDeltas, PhaseCascade, PhaseRecord,
    CLEANUP_TIME, WARMUP_EPS,
};
pub use reference::OdeReference;
pub use systems::{
    g_lower_bound, lower_closed_forms, lower_system, phase_end_event, phase_red_total,
    phase_system, warmup_complement_system, warmup_system, ClosedForms,
};

use alloc::boxed::Box;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Right-hand side `f(s, y) -> dy/ds`.
pub type Rhs<const D: usize> = Box<dyn Fn(f64, &[f64; D]) -> [f64; D] + Send + Sync>;
/// Admissibility predicate (`true` = inside the valid region).
pub type Guard<const D: usize> = Box<dyn Fn(f64, &[f64; D]) -> bool + Send + Sync>;
/// State-dependent upper bound on the step size.
pub type StepClamp<const D: usize> = Box<dyn Fn(&[f64; D]) -> f64 + Send + Sync>;

/// First-order ODE system of dimension `D` with an optional admissibility
/// guard.
pub struct OdeSystem<const D: usize> {
    pub rhs: Rhs<D>,
    pub guard: Option<Guard<D>>,
}

impl<const D: usize> OdeSystem<D> {
    pub fn new(rhs: impl Fn(f64, &[f64; D]) -> [f64; D] + Send + Sync + 'static) -> Self {
        Self {
            rhs: Box::new(rhs),
            guard: None,
        }
    }

    pub fn with_guard(
        mut self,
        guard: impl Fn(f64, &[f64; D]) -> bool + Send + Sync + 'static,
    ) -> Self {
        self.guard = Some(Box::new(guard));
        self
    }
}

pub struct IntegrateOptions<const D: usize> {
    /// Grid step.
    pub h: f64,
    /// Integration horizon.
    pub s_max: f64,
    /// Keep every k-th grid point in `samples` (0 keeps only the initial
    /// point and the event/end state).
    pub dense_every: u64,
    /// Target width for event bisection.
    pub event_tol: f64,
    /// Optional state-dependent clamp on the step size.
    pub max_step: Option<StepClamp<D>>,
}

impl<const D: usize> IntegrateOptions<D> {
    pub fn new(h: f64, s_max: f64) -> Self {
        Self {
            h,
            s_max,
            dense_every: 0,
            event_tol: 1e-12,
            max_step: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    /// Event function crossed zero; `event` holds the refined point.
    Event,
    /// Horizon reached first.
    SMaxReached,
    /// State left the guard region (or went non-finite) without the event.
    GuardViolated,
}

/// Dense-ish numerical solution plus the refined event, if one fired.
pub struct OdeSolution<const D: usize> {
    pub samples: Vec<(f64, [f64; D])>,
    pub event: Option<(f64, [f64; D])>,
    pub end: (f64, [f64; D]),
    pub outcome: Outcome,
    pub steps: u64,
    pub h: f64,
}

impl<const D: usize> OdeSolution<D> {
    /// Event time, or an error describing why there is none.
    pub fn event_time(&self) -> Result<f64> {
        match self.outcome {
            Outcome::Event => Ok(self.event.as_ref().expect("event recorded").0),
            Outcome::SMaxReached => Err(Error::EventNotFound { s_max: self.end.0 }),
            Outcome::GuardViolated => Err(Error::GuardViolated { s: self.end.0 }),
        }
    }
}

#[inline]
fn rk4_step<const D: usize>(
    rhs: &(dyn Fn(f64, &[f64; D]) -> [f64; D] + Send + Sync),
    s: f64,
    y: &[f64; D],
    h: f64,
) -> [f64; D] {
    let k1 = rhs(s, y);
    let mut t = [0.0; D];
    for i in 0..D {
        t[i] = y[i] + 0.5 * h * k1[i];
    }
    let k2 = rhs(s + 0.5 * h, &t);
    for i in 0..D {
        t[i] = y[i] + 0.5 * h * k2[i];
    }
    let k3 = rhs(s + 0.5 * h, &t);
    for i in 0..D {
        t[i] = y[i] + h * k3[i];
    }
    let k4 = rhs(s + h, &t);
    let mut out = [0.0; D];
    for i in 0..D {
        out[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    out
}

fn all_finite<const D: usize>(y: &[f64; D]) -> bool {
    y.iter().all(|v| v.is_finite())
}

/// Integrates from `(s0, y0)` until the event function becomes nonnegative,
/// the guard is violated, or `s_max` is reached.
pub fn integrate<const D: usize>(
    sys: &OdeSystem<D>,
    s0: f64,
    y0: [f64; D],
    event: &(dyn Fn(f64, &[f64; D]) -> f64 + Sync),
    opts: &IntegrateOptions<D>,
) -> OdeSolution<D> {
    let past = |s: f64, y: &[f64; D]| -> bool {
        if !all_finite(y) {
            return true;
        }
        if let Some(g) = &sys.guard {
            if !g(s, y) {
                return true;
            }
        }
        let e = event(s, y);
        e.is_nan() || e >= 0.0
    };
    let classify = |s: f64, y: [f64; D], samples: Vec<(f64, [f64; D])>, steps: u64| {
        let is_event = all_finite(&y) && event(s, &y) >= 0.0;
        OdeSolution {
            samples,
            event: is_event.then_some((s, y)),
            end: (s, y),
            outcome: if is_event {
                Outcome::Event
            } else {
                Outcome::GuardViolated
            },
            steps,
            h: opts.h,
        }
    };

    let mut samples = Vec::new();
    samples.push((s0, y0));
    if past(s0, &y0) {
        return classify(s0, y0, samples, 0);
    }

    let mut s = s0;
    let mut y = y0;
    let mut steps = 0u64;
    loop {
        if s >= opts.s_max {
            return OdeSolution {
                samples,
                event: None,
                end: (s, y),
                outcome: Outcome::SMaxReached,
                steps,
                h: opts.h,
            };
        }
        let mut step = opts.h.min(opts.s_max - s);
        if let Some(ms) = &opts.max_step {
            let m = ms(&y);
            if m.is_finite() && m > 0.0 {
                step = step.min(m);
            }
        }
        let y2 = rk4_step(&*sys.rhs, s, &y, step);
        steps += 1;
        if past(s + step, &y2) {
            // Refine within [s, s+step] by bisecting single re-steps from the
            // last good point; the step clamp has already kept `step` small
            // enough for these to be accurate.
            let mut lo = 0.0f64;
            let mut hi = step;
            let mut iters = 0;
            while hi - lo > opts.event_tol && iters < 200 {
                let mid = 0.5 * (lo + hi);
                let ym = rk4_step(&*sys.rhs, s, &y, mid);
                if past(s + mid, &ym) {
                    hi = mid;
                } else {
                    lo = mid;
                }
                iters += 1;
            }
            let y_star = rk4_step(&*sys.rhs, s, &y, hi);
            return classify(s + hi, y_star, samples, steps);
        }
        s += step;
        y = y2;
        if opts.dense_every > 0 && steps.is_multiple_of(opts.dense_every) {
            samples.push((s, y));
        }
    }
}
