//! Piecewise reference curves for simulation-to-ODE comparisons.
//!
//! Holds decimated solution grids and answers "what do the ODEs predict for
//! the scaled saturated count and the scaled red count at time `s`" with
//! linear interpolation. References are always computed in-process so the
//! solver and the simulator cannot drift apart silently.

use alloc::vec::Vec;

use super::bounds::phase_cascade;
use super::systems::{phase_red_total, warmup_system};
use super::{integrate, IntegrateOptions};
use crate::error::{Error, Result};

/// Scaled prediction at one time: saturated fraction and total red fraction.
#[derive(Clone, Copy, Debug)]
pub struct RefPoint {
    pub x: f64,
    pub r: f64,
}

struct Segment {
    /// Phase index for red-total reconstruction; 0 for the warm-up curve.
    q: u32,
    samples: Vec<(f64, [f64; 2])>,
}

/// A piecewise-dense reference curve over `[0, s_end]`.
pub struct OdeReference {
    segments: Vec<Segment>,
    s_end: f64,
}

const DENSE_EVERY: u64 = 500;

impl OdeReference {
    /// Warm-up reference from the empty state until `x` reaches `x_stop`.
    pub fn warmup(h: f64, x_stop: f64) -> Result<Self> {
        let sys = warmup_system();
        let mut opts = IntegrateOptions::new(h, 3.0);
        opts.dense_every = DENSE_EVERY;
        let sol = integrate(
            &sys,
            0.0,
            [0.0, 0.0],
            &move |_s, y: &[f64; 2]| y[0] - x_stop,
            &opts,
        );
        let s_end = sol.event_time()?;
        let mut samples = sol.samples;
        samples.push(sol.event.expect("event recorded"));
        Ok(Self {
            segments: alloc::vec![Segment { q: 0, samples }],
            s_end,
        })
    }

    /// Phased reference through the first `k` phases.
    pub fn phased(h: f64, k: u32) -> Result<Self> {
        let cascade = phase_cascade(k, h, k, DENSE_EVERY)?;
        if cascade.dense.len() != k as usize {
            return Err(Error::StateCorruption(
                "cascade kept fewer dense phases than asked",
            ));
        }
        let mut segments = Vec::with_capacity(k as usize);
        for (i, sol) in cascade.dense.into_iter().enumerate() {
            let mut samples = sol.samples;
            samples.push(sol.event.expect("cascade phases end in events"));
            segments.push(Segment {
                q: i as u32 + 1,
                samples,
            });
        }
        let s_end = cascade.records.last().expect("nonempty").c;
        Ok(Self { segments, s_end })
    }

    pub fn s_end(&self) -> f64 {
        self.s_end
    }

    /// Prediction at `s`, or `None` outside the covered range.
    pub fn eval(&self, s: f64) -> Option<RefPoint> {
        if s < 0.0 || s > self.s_end {
            return None;
        }
        let seg = self.segments.iter().find(|seg| {
            let last = seg.samples.last().expect("segments are nonempty").0;
            s <= last
        })?;
        let samples = &seg.samples;
        // Binary search for the bracketing grid pair.
        let mut lo = 0usize;
        let mut hi = samples.len() - 1;
        if s <= samples[0].0 {
            hi = 0;
        } else {
            while hi - lo > 1 {
                let mid = (lo + hi) / 2;
                if samples[mid].0 <= s {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
        }
        let (s0, v0) = samples[lo];
        let (s1, v1) = samples[hi];
        let v = if hi == lo || s1 == s0 {
            v0
        } else {
            let w = (s - s0) / (s1 - s0);
            [v0[0] + w * (v1[0] - v0[0]), v0[1] + w * (v1[1] - v0[1])]
        };
        let r = if seg.q == 0 {
            v[1]
        } else {
            phase_red_total(seg.q, v[0], v[1])
        };
        Some(RefPoint { x: v[0], r })
    }
}
