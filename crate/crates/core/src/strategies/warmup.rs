//! The randomized warm-up player.
//!
//! Case analysis on where the square lands:
//!
//! * unsaturated — match it with a uniformly random unsaturated vertex;
//! * red — augment along the stored 3-edge path, closing it with a uniformly
//!   random unsaturated vertex;
//! * uncoloured saturated — store a green link to a uniformly random
//!   unsaturated vertex and colour the mate red;
//! * green — the round is thrown away.
//!
//! Uniform picks exclude the square's neighbours (and, when augmenting, the
//! stored path end), so the graph stays simple; collisions the analysis
//! absorbs as O(1/n) terms simply never happen. If no legal unsaturated
//! target exists the round is thrown away instead.

use crate::error::{Error, Result};
use crate::process::{Action, Color, Decision, ProcessState, Strategy, VertexId};
use crate::rng::GameRng;

use super::throwaway_circle;

/// Where circles of thrown-away rounds go.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ThrowawayCircles {
    /// Anywhere in `[n]`. The standalone player's choice.
    AnyVertex,
    /// Restricted to saturated vertices, so unsaturated circle counts stay
    /// clean. Used when the warm-up runs inside the pipeline.
    SaturatedOnly,
}

pub struct WarmupStrategy {
    throwaway: ThrowawayCircles,
}

impl WarmupStrategy {
    pub fn new() -> Self {
        Self {
            throwaway: ThrowawayCircles::AnyVertex,
        }
    }

    pub fn with_throwaway(throwaway: ThrowawayCircles) -> Self {
        Self { throwaway }
    }

    fn wasted(
        &self,
        state: &ProcessState,
        rng: &mut GameRng,
        square: VertexId,
    ) -> Result<Decision> {
        let prefer_saturated = self.throwaway == ThrowawayCircles::SaturatedOnly;
        let circle = throwaway_circle(state, rng, square, prefer_saturated)?;
        Ok(Decision {
            circle,
            action: Action::Unused,
        })
    }
}

impl Default for WarmupStrategy {
    fn default() -> Self {
        Self::new()
    }
}

impl Strategy for WarmupStrategy {
    fn decide(
        &mut self,
        state: &ProcessState,
        square: VertexId,
        rng: &mut GameRng,
    ) -> Result<Decision> {
        if state.is_unsaturated(square) {
            return match state.pick_uniform_unsaturated(rng, square, None) {
                Some(circle) => Ok(Decision {
                    circle,
                    action: Action::GreedyMatch,
                }),
                None => self.wasted(state, rng, square),
            };
        }
        match state.color(square) {
            Color::Red => {
                let x = state
                    .mate(square)
                    .ok_or(Error::StateCorruption("red vertex without a mate"))?;
                let y = state.green_link(x).ok_or(Error::StateCorruption(
                    "red vertex's mate has no green link",
                ))?;
                match state.pick_uniform_unsaturated(rng, square, Some(y)) {
                    Some(circle) => Ok(Decision {
                        circle,
                        action: Action::Augment,
                    }),
                    None => self.wasted(state, rng, square),
                }
            }
            Color::Uncolored => {
                if state.unsaturated_count() == 0 {
                    return Err(Error::NoUnsaturatedVertex);
                }
                match state.pick_uniform_unsaturated(rng, square, None) {
                    Some(circle) => Ok(Decision {
                        circle,
                        action: Action::GreenPair,
                    }),
                    None => self.wasted(state, rng, square),
                }
            }
            Color::Green => self.wasted(state, rng, square),
        }
    }

    fn name(&self) -> &'static str {
        "warmup"
    }
}
