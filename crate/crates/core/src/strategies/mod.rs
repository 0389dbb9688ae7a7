//! The bundled players.
//!
//! * [`WarmupStrategy`] — greedy matching with uniform circles and one stored
//!   augmenting path per matched edge.
//! * [`PhasedStrategy`] — the same structure, but circles go to unsaturated
//!   vertices carrying the fewest circles, which organizes the run into
//!   phases.
//! * [`UniformCircleStrategy`] — circles uniform over all vertices; builds no
//!   matching. Used for the lower-bound observables.
//! * [`cleanup_run`] — the two-stage sprinkle-then-augment finisher that
//!   saturates the last few vertices.
//! * [`upper_bound_pipeline`] — phased player, then warm-up continuation,
//!   then clean-up, end to end.

mod cleanup;
mod phased;
mod pipeline;
mod warmup;

pub use cleanup::{cleanup_run, CleanupConfig, CleanupIteration, CleanupOutcome};
pub use phased::PhasedStrategy;
pub use pipeline::{
    upper_bound_pipeline, PhasedSwitch, PipelineConfig, PipelineReport, PipelineStage,
};
pub use warmup::{ThrowawayCircles, WarmupStrategy};

use crate::error::{Error, Result};
use crate::process::{Action, Decision, ProcessState, Strategy, VertexId};
use crate::rng::GameRng;

/// Circle for a round the player will not use: a legal vertex that keeps the
/// graph simple, preferring saturated targets so unsaturated circle counts
/// stay meaningful.
pub(crate) fn throwaway_circle(
    state: &ProcessState,
    rng: &mut GameRng,
    square: VertexId,
    prefer_saturated: bool,
) -> Result<VertexId> {
    let pick = if prefer_saturated {
        state
            .pick_uniform_saturated(rng, square, None)
            .or_else(|| state.pick_uniform_any(rng, square))
    } else {
        state.pick_uniform_any(rng, square)
    };
    pick.ok_or(Error::NoLegalCircle { square })
}

/// Circles uniform over `[n]` (minus the square and its neighbours); no
/// matching is built. This is the reference player for the lower-bound
/// counters, whose drifts do not depend on where circles go.
pub struct UniformCircleStrategy;

impl Strategy for UniformCircleStrategy {
    fn decide(
        &mut self,
        state: &ProcessState,
        square: VertexId,
        rng: &mut GameRng,
    ) -> Result<Decision> {
        let circle = state
            .pick_uniform_any(rng, square)
            .ok_or(Error::NoLegalCircle { square })?;
        Ok(Decision {
            circle,
            action: Action::Unused,
        })
    }

    fn name(&self) -> &'static str {
        "uniform"
    }
}
