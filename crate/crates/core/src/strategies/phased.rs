//! The circle-minimizing player.
//!
//! Same case analysis as the warm-up, but every circle that matters goes to
//! an unsaturated vertex carrying the *minimum* number of circles (ties
//! broken toward the lowest vertex index). Thrown-away rounds place their
//! circle on a saturated vertex so unsaturated circle counts stay exact.
//!
//! The run then organizes itself into phases: during phase `q` every
//! unsaturated vertex carries `q-1` or `q` circles, and phase `q` ends at the
//! first step where none carries fewer than `q`.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::process::{Action, Arc, Color, Decision, ProcessState, RoundEffect, Strategy, VertexId};
use crate::rng::GameRng;

use super::throwaway_circle;

/// Bucket queue over circle counts, restricted to unsaturated vertices.
/// Counts only ever step up by one and vertices leave for good on
/// saturation, so the minimum bucket index is monotone.
struct MinCircleBuckets {
    buckets: Vec<BTreeSet<u32>>,
    /// Bucket each live vertex currently sits in.
    key: Vec<u32>,
    min_bucket: u32,
    live: u32,
}

impl MinCircleBuckets {
    fn new(n: u32) -> Self {
        Self {
            buckets: vec![(0..n).collect()],
            key: vec![0; n as usize],
            min_bucket: 0,
            live: n,
        }
    }

    fn advance_min(&mut self) {
        while (self.min_bucket as usize) < self.buckets.len()
            && self.buckets[self.min_bucket as usize].is_empty()
        {
            self.min_bucket += 1;
        }
    }

    fn remove(&mut self, v: u32) {
        let k = self.key[v as usize] as usize;
        let removed = self.buckets[k].remove(&v);
        debug_assert!(removed, "vertex {v} missing from bucket {k}");
        self.live -= 1;
        self.advance_min();
    }

    fn bump(&mut self, v: u32) {
        let k = self.key[v as usize] as usize;
        let removed = self.buckets[k].remove(&v);
        debug_assert!(removed, "vertex {v} missing from bucket {k}");
        if k + 1 >= self.buckets.len() {
            self.buckets.push(BTreeSet::new());
        }
        self.buckets[k + 1].insert(v);
        self.key[v as usize] = k as u32 + 1;
        self.advance_min();
    }

    /// Lowest-index vertex in the lowest nonempty bucket, skipping `exclude`.
    fn min_vertex(&self, exclude: Option<u32>) -> Option<u32> {
        for bucket in &self.buckets[self.min_bucket as usize..] {
            for &v in bucket {
                if Some(v) != exclude {
                    return Some(v);
                }
            }
        }
        None
    }

    /// Minimum circle count among live vertices; `None` when all are gone.
    fn min_count(&self) -> Option<u32> {
        (self.live > 0).then_some(self.min_bucket)
    }
}

pub struct PhasedStrategy {
    buckets: MinCircleBuckets,
    /// `tau[q-1]` = step at which phase `q` completed.
    tau: Vec<u64>,
    /// Phases worth recording; once the unsaturated set empties, every
    /// remaining phase up to this completes vacuously at that step.
    phase_cap: u32,
}

impl PhasedStrategy {
    pub fn new(n: u32, phase_cap: u32) -> Self {
        Self {
            buckets: MinCircleBuckets::new(n),
            tau: Vec::new(),
            phase_cap,
        }
    }

    /// Number of completed phases: every unsaturated vertex carries at least
    /// this many circles.
    pub fn completed_phases(&self) -> u32 {
        self.tau.len() as u32
    }

    /// Steps at which phases 1, 2, ... completed so far.
    pub fn phase_boundaries(&self) -> &[u64] {
        &self.tau
    }

    fn record_phases(&mut self, step: u64, up_to: u32) {
        while (self.tau.len() as u32) < up_to {
            self.tau.push(step);
        }
    }
}

impl Strategy for PhasedStrategy {
    fn decide(
        &mut self,
        state: &ProcessState,
        square: VertexId,
        rng: &mut GameRng,
    ) -> Result<Decision> {
        if state.is_unsaturated(square) {
            let circle = self
                .buckets
                .min_vertex(Some(square))
                .ok_or(Error::NoUnsaturatedVertex)?;
            return Ok(Decision {
                circle,
                action: Action::GreedyMatch,
            });
        }
        match state.color(square) {
            Color::Red => {
                let x = state
                    .mate(square)
                    .ok_or(Error::StateCorruption("red vertex without a mate"))?;
                let y = state.green_link(x).ok_or(Error::StateCorruption(
                    "red vertex's mate has no green link",
                ))?;
                let circle = self
                    .buckets
                    .min_vertex(Some(y))
                    .ok_or(Error::NoUnsaturatedVertex)?;
                Ok(Decision {
                    circle,
                    action: Action::Augment,
                })
            }
            Color::Uncolored => {
                let circle = self
                    .buckets
                    .min_vertex(None)
                    .ok_or(Error::NoUnsaturatedVertex)?;
                Ok(Decision {
                    circle,
                    action: Action::GreenPair,
                })
            }
            Color::Green => {
                let circle = throwaway_circle(state, rng, square, true)?;
                Ok(Decision {
                    circle,
                    action: Action::Unused,
                })
            }
        }
    }

    fn on_applied(&mut self, state: &ProcessState, _arc: &Arc, effect: &RoundEffect) {
        if let Some((a, b)) = effect.newly_saturated {
            self.buckets.remove(a);
            self.buckets.remove(b);
        }
        if let Some(v) = effect.circle_kept_unsaturated {
            self.buckets.bump(v);
        }
        let completed = match self.buckets.min_count() {
            Some(m) => m,
            // Nothing unsaturated left: every remaining phase is vacuously done.
            None => self.phase_cap,
        };
        if completed > self.completed_phases() {
            self.record_phases(state.step(), completed.min(self.phase_cap));
        }
    }

    fn name(&self) -> &'static str {
        "phased"
    }
}
