//! The ODE systems governing the scaled trajectories, and the lower-bound
//! closed forms.
//!
//! Scaling convention throughout: `s = t/n`, counts divided by `n`.

use libm::exp;

use super::OdeSystem;

/// Warm-up greedy/augmenting player, state `[x, r]`:
/// `x` is the scaled saturated count, `r` the scaled red count.
///
/// ```text
/// x' = 2 (1 - x + r)
/// r' = (-2r / (1-x)) (1 - x + r) - r + x - 2r
/// ```
///
/// The `1/(1-x)` factor blows up as `x` approaches 1; the guard stops just
/// short, and event computations that must push into that corner use the
/// complement form below.
pub fn warmup_system() -> OdeSystem<2> {
    OdeSystem::new(|_s, y: &[f64; 2]| {
        let (x, r) = (y[0], y[1]);
        let dx = 2.0 * (1.0 - x + r);
        let dr = (-2.0 * r / (1.0 - x)) * (1.0 - x + r) - r + x - 2.0 * r;
        [dx, dr]
    })
    .with_guard(|_s, y| y[0] < 1.0 - 1e-15)
}

/// Warm-up system in complement coordinates `[u, r]` with `u = 1 - x`.
///
/// Algebraically identical to [`warmup_system`], but `u` keeps full relative
/// precision as it shrinks toward the stopping thresholds (`1e-14` scale),
/// where `1 - x` would be quantized at `2^-52`. Nonpositive `u` yields NaN so
/// that overshooting steps register as past any stopping event.
pub fn warmup_complement_system() -> OdeSystem<2> {
    OdeSystem::new(|_s, y: &[f64; 2]| {
        let (u, r) = (y[0], y[1]);
        if u <= 0.0 {
            return [f64::NAN, f64::NAN];
        }
        let du = -2.0 * (u + r);
        let dr = (1.0 - u) - 5.0 * r - 2.0 * r * r / u;
        [du, dr]
    })
}

/// Phase-`q` system for the circle-minimizing player, state `[x, y]`:
/// `x` the scaled saturated count, `y` the scaled count of type-`q` red
/// vertices. The type-`(q-1)` reds are the algebraic slave
/// `z = (q-1)(1 - x - y/q)`.
///
/// ```text
/// x' = 2 (1 - x + y + z)
/// y' = q (x - 3y - 2z) - y
/// ```
///
/// For `q = 1` this reduces to `x' = 2(1 - x + y)`, `y' = x - 4y`.
pub fn phase_system(q: u32) -> OdeSystem<2> {
    let qf = q as f64;
    OdeSystem::new(move |_s, v: &[f64; 2]| {
        let (x, y) = (v[0], v[1]);
        let z = (qf - 1.0) * (1.0 - x - y / qf);
        let dx = 2.0 * (1.0 - x + y + z);
        let dy = qf * (x - 3.0 * y - 2.0 * z) - y;
        [dx, dy]
    })
}

/// Event function ending phase `q`: fires when no unsaturated vertex with
/// `q-1` circles remains. The scaled count of those vertices is
/// `1 - x - y/q` (for `q >= 2` this is `z_q/(q-1)`, for `q = 1` it is
/// `(1-x) - y`), so the event is its down-crossing through zero.
pub fn phase_end_event(q: u32) -> impl Fn(f64, &[f64; 2]) -> f64 + Send + Sync {
    let qf = q as f64;
    move |_s, v: &[f64; 2]| -(1.0 - v[0] - v[1] / qf)
}

/// Total scaled red count during phase `q` at phase state `[x, y]`:
/// type-`q` reds plus the type-`(q-1)` slave.
pub fn phase_red_total(q: u32, x: f64, y: f64) -> f64 {
    let qf = q as f64;
    y + (qf - 1.0) * (1.0 - x - y / qf)
}

/// Lower-bound observable system, state `[x, y, u, d, w]`:
/// square-covered, singly-covered, redundant, dangerous, well-positioned.
///
/// ```text
/// x' = 1 - x          y' = 1 - x - y      u' = y - 2u
/// d' = y - u - 3d     w' = d - 2w
/// ```
pub fn lower_system() -> OdeSystem<5> {
    OdeSystem::new(|_s, v: &[f64; 5]| {
        let [x, y, u, d, w] = *v;
        [
            1.0 - x,
            1.0 - x - y,
            y - 2.0 * u,
            y - u - 3.0 * d,
            d - 2.0 * w,
        ]
    })
}

/// Closed-form solutions of [`lower_system`] from all-zero initial data,
/// plus `g = x + w - u`, the certificate density.
#[derive(Clone, Copy, Debug)]
pub struct ClosedForms {
    pub x: f64,
    pub y: f64,
    pub u: f64,
    pub d: f64,
    pub w: f64,
    pub g: f64,
}

pub fn lower_closed_forms(b: f64) -> ClosedForms {
    let e1 = exp(-b);
    let e2 = exp(-2.0 * b);
    let e3 = exp(-3.0 * b);
    let x = 1.0 - e1;
    let y = b * e1;
    let u = (b - 1.0) * e1 + e2;
    let d = 0.5 * e1 + 0.5 * e3 - e2;
    let w = 0.5 * e1 - b * e2 - 0.5 * e3;
    ClosedForms {
        x,
        y,
        u,
        d,
        w,
        g: x + w - u,
    }
}

/// The certificate density in its direct form:
/// `g(b) = 1 + (1-2b)/2 e^{-b} - (b+1) e^{-2b} - e^{-3b}/2`.
///
/// Equal to `x + w - u` of the closed forms; both are computed so that the
/// identity can be asserted numerically.
pub fn g_lower_bound(b: f64) -> f64 {
    1.0 + 0.5 * (1.0 - 2.0 * b) * exp(-b) - (b + 1.0) * exp(-2.0 * b) - 0.5 * exp(-3.0 * b)
}
