//! Two-stage clean-up: saturates the last few unsaturated vertices.
//!
//! With `j_0 = |U|` at entry and the schedule `j_k = floor((3/4)^k j_0)`,
//! iteration `k` uncolours everything, sprinkles `floor(sqrt(3 j_{k-1} n)/4)`
//! rounds to rebuild a red set, then augments until at most `j_k` unsaturated
//! vertices remain. The schedule hits zero, so the loop ends with a perfect
//! matching unless the round cap runs out first.

use alloc::vec::Vec;

use libm::{floor, sqrt};

use crate::error::{Error, Result};
use crate::process::{Action, Color, Decision, ProcessState};
use crate::rng::GameRng;

use super::throwaway_circle;

#[derive(Clone, Copy, Debug)]
pub struct CleanupConfig {
    /// Entry scale: the caller stops its previous stage at `|U| <= eps n`.
    /// Also sets the default round cap `10 ceil(100 sqrt(eps) n)`.
    pub eps: f64,
    /// Override for the round cap.
    pub round_cap: Option<u64>,
}

impl CleanupConfig {
    pub fn new(eps: f64) -> Self {
        assert!(eps > 0.0 && eps < 1.0);
        Self {
            eps,
            round_cap: None,
        }
    }

    pub fn cap_for(&self, n: u32) -> u64 {
        self.round_cap
            .unwrap_or_else(|| libm::ceil(100.0 * sqrt(self.eps) * n as f64) as u64 * 10)
    }
}

/// Per-iteration accounting.
#[derive(Clone, Copy, Debug)]
pub struct CleanupIteration {
    pub k: u32,
    /// Unsaturated target `j_k` for this iteration.
    pub target: u64,
    pub sprinkle_rounds: u64,
    pub augment_rounds: u64,
}

#[derive(Clone, Debug)]
pub struct CleanupOutcome {
    pub rounds_used: u64,
    pub iterations: Vec<CleanupIteration>,
}

/// `floor((3/4)^k j_0)`, forced strictly below the previous target so the
/// schedule never stalls (bare flooring can repeat small values like 1).
fn schedule(j0: u64, k: u32, j_prev: u64) -> u64 {
    let raw = floor(libm::pow(0.75, k as f64) * j0 as f64) as u64;
    raw.min(j_prev.saturating_sub(1))
}

/// Runs the clean-up to a perfect matching. Returns the rounds consumed, or
/// an error carrying the remaining unsaturated count if the cap ran out.
pub fn cleanup_run(
    state: &mut ProcessState,
    rng: &mut GameRng,
    cfg: &CleanupConfig,
) -> Result<CleanupOutcome> {
    let n = state.n();
    let cap = cfg.cap_for(n);
    let j0 = state.unsaturated_count() as u64;
    let mut used = 0u64;
    let mut iterations = Vec::new();
    let mut k = 1u32;
    let mut j_prev = j0;

    let spend = |state: &mut ProcessState, rng: &mut GameRng, used: &mut u64| -> Result<()> {
        if *used >= cap {
            return Err(Error::RoundCapExhausted {
                cap,
                unsaturated: state.unsaturated_count(),
            });
        }
        let square = rng.below_u32(n);
        let decision = if state.is_unsaturated(square) {
            // Sprinkled edge on an unsaturated square is never used.
            Decision {
                circle: throwaway_circle(state, rng, square, true)?,
                action: Action::Unused,
            }
        } else {
            match state.pick_uniform_unsaturated(rng, square, None) {
                Some(circle) => Decision {
                    circle,
                    action: Action::SprinkleRed,
                },
                None => Decision {
                    circle: throwaway_circle(state, rng, square, true)?,
                    action: Action::Unused,
                },
            }
        };
        state.apply_decision(square, decision)?;
        *used += 1;
        Ok(())
    };

    while state.unsaturated_count() > 0 {
        let target = schedule(j0, k, j_prev);
        if (state.unsaturated_count() as u64) <= target {
            // Earlier augmentations overshot this target already.
            j_prev = target;
            k += 1;
            continue;
        }
        state.uncolor_all();

        let sprinkles = floor(sqrt(3.0 * j_prev as f64 * n as f64) / 4.0) as u64;
        let sprinkle_start = used;
        for _ in 0..sprinkles {
            spend(state, rng, &mut used)?;
        }
        let augment_start = used;

        while state.unsaturated_count() as u64 > target {
            if used >= cap {
                return Err(Error::RoundCapExhausted {
                    cap,
                    unsaturated: state.unsaturated_count(),
                });
            }
            let square = rng.below_u32(n);
            let decision = if state.is_unsaturated(square) {
                match state.pick_uniform_unsaturated(rng, square, None) {
                    Some(circle) => Decision {
                        circle,
                        action: Action::GreedyMatch,
                    },
                    None => Decision {
                        circle: throwaway_circle(state, rng, square, true)?,
                        action: Action::Unused,
                    },
                }
            } else if matches!(state.color(square), Color::Red) {
                let x = state
                    .mate(square)
                    .ok_or(Error::StateCorruption("red vertex without a mate"))?;
                let y = state.green_link(x).ok_or(Error::StateCorruption(
                    "red vertex's mate has no green link",
                ))?;
                match state.pick_uniform_unsaturated(rng, square, Some(y)) {
                    Some(circle) => Decision {
                        circle,
                        action: Action::Augment,
                    },
                    None => Decision {
                        circle: throwaway_circle(state, rng, square, true)?,
                        action: Action::Unused,
                    },
                }
            } else if matches!(state.color(square), Color::Uncolored) {
                // First-stage behaviour: an uncoloured saturated hit stores a
                // fresh green link, growing the red set while we wait.
                match state.pick_uniform_unsaturated(rng, square, None) {
                    Some(circle) => Decision {
                        circle,
                        action: Action::GreenPair,
                    },
                    None => Decision {
                        circle: throwaway_circle(state, rng, square, true)?,
                        action: Action::Unused,
                    },
                }
            } else {
                Decision {
                    circle: throwaway_circle(state, rng, square, true)?,
                    action: Action::Unused,
                }
            };
            state.apply_decision(square, decision)?;
            used += 1;
        }

        iterations.push(CleanupIteration {
            k,
            target,
            sprinkle_rounds: augment_start - sprinkle_start,
            augment_rounds: used - augment_start,
        });
        j_prev = target;
        k += 1;
    }

    Ok(CleanupOutcome {
        rounds_used: used,
        iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schedule_decreases_to_zero() {
        for j0 in [1u64, 2, 3, 10, 100, 12345] {
            let mut prev = j0;
            let mut k = 1;
            loop {
                let j = schedule(j0, k, prev);
                assert!(j < prev, "schedule must strictly decrease while positive");
                if j == 0 {
                    break;
                }
                prev = j;
                k += 1;
                assert!(k < 128);
            }
        }
    }

    #[test]
    fn empty_unsaturated_set_costs_nothing() {
        use crate::process::ProcessConfig;
        use crate::strategies::WarmupStrategy;

        // Drive a tiny instance to a perfect matching, then clean-up is free.
        let (mut state, mut rng) = ProcessState::new_run(8, 11, ProcessConfig::default()).unwrap();
        let mut warmup = WarmupStrategy::new();
        while state.unsaturated_count() > 0 {
            state.play_round(&mut warmup, &mut rng).unwrap();
        }
        let out = cleanup_run(&mut state, &mut rng, &CleanupConfig::new(0.5)).unwrap();
        assert_eq!(out.rounds_used, 0);
        assert!(out.iterations.is_empty());
    }
}
