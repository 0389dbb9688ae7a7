//! End-to-end upper-bound pipeline: phased player, warm-up continuation,
//! clean-up.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::process::{ProcessConfig, ProcessState};

use super::{cleanup_run, CleanupConfig, PhasedStrategy, ThrowawayCircles, WarmupStrategy};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PipelineStage {
    Phased,
    Continuation,
    Cleanup,
}

/// When the phased stage hands over to the warm-up continuation.
///
/// The phase count and the continuation threshold are designed to coincide
/// (`k` is chosen so the cascade's terminal unsaturated fraction sits at the
/// threshold), but at desk scale a loose threshold can be crossed mid-cascade
/// where restarting the warm-up, with its red set rebuilt from scratch, is
/// strictly more expensive than letting the remaining phases run. Completing
/// the phases is therefore the default; the threshold always remains a bail
/// once phases cannot progress.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PhasedSwitch {
    /// Hand over once all `phases` are complete (or the unsaturated set
    /// empties).
    AfterPhases,
    /// Hand over at the first of: phases complete, or
    /// `|U| <= continuation_eps * n`.
    FirstThresholdHit,
}

#[derive(Clone, Copy, Debug)]
pub struct PipelineConfig {
    /// Phases to complete before switching (0 skips the phased stage).
    pub phases: u32,
    /// Saturation the phased stage is meant to deliver; the continuation
    /// stops being a no-op below it. See [`PhasedSwitch`].
    pub continuation_eps: f64,
    /// Run the warm-up continuation until `|U| <= cleanup_eps * n`.
    pub cleanup_eps: f64,
    /// Round cap for each of the first two stages, as a multiple of `n`.
    pub stage_cap_factor: f64,
    pub switch: PhasedSwitch,
}

impl PipelineConfig {
    /// Desk-scale defaults; the full-scale thresholds (`k = 1100`,
    /// `continuation_eps = 1e-6`, `cleanup_eps = 1e-14`) are meaningless for
    /// any simulable `n` and live only in the bounds report.
    pub fn desk(phases: u32, continuation_eps: f64, cleanup_eps: f64) -> Self {
        Self {
            phases,
            continuation_eps,
            cleanup_eps,
            stage_cap_factor: 4.0,
            switch: PhasedSwitch::AfterPhases,
        }
    }
}

#[derive(Clone, Debug)]
pub struct PipelineReport {
    pub n: u32,
    pub seed: u64,
    /// Rounds consumed by [phased, continuation, cleanup].
    pub stage_rounds: [u64; 3],
    pub total_rounds: u64,
    /// True when the run ended with every vertex matched.
    pub perfect: bool,
    /// Steps at which phases 1..=k completed (shorter if the stage switched early).
    pub phase_boundaries: Vec<u64>,
    /// Set when a stage exhausted its round cap; the report is then partial.
    pub failed_stage: Option<PipelineStage>,
}

/// Runs the three stages and reports per-stage rounds. Cap exhaustion in a
/// stage stops the pipeline and marks the report partial rather than erroring,
/// so sweeps can keep going.
pub fn upper_bound_pipeline(
    n: u32,
    seed: u64,
    cfg: &PipelineConfig,
    process_cfg: ProcessConfig,
) -> Result<(ProcessState, PipelineReport)> {
    let (mut state, mut rng) = ProcessState::new_run(n, seed, process_cfg)?;
    let stage_cap = (cfg.stage_cap_factor * n as f64) as u64;
    let continuation_target = (cfg.continuation_eps * n as f64) as u32;
    let cleanup_target = (cfg.cleanup_eps * n as f64) as u32;
    let mut report = PipelineReport {
        n,
        seed,
        stage_rounds: [0; 3],
        total_rounds: 0,
        perfect: false,
        phase_boundaries: Vec::new(),
        failed_stage: None,
    };

    // Stage 1: phased play.
    if cfg.phases > 0 {
        let mut phased = PhasedStrategy::new(n, cfg.phases);
        let start = state.step();
        loop {
            let done = match cfg.switch {
                PhasedSwitch::AfterPhases => {
                    phased.completed_phases() >= cfg.phases || state.unsaturated_count() == 0
                }
                PhasedSwitch::FirstThresholdHit => {
                    phased.completed_phases() >= cfg.phases
                        || state.unsaturated_count() <= continuation_target
                        || state.unsaturated_count() == 0
                }
            };
            if done {
                break;
            }
            if state.step() - start >= stage_cap {
                report.failed_stage = Some(PipelineStage::Phased);
                break;
            }
            state.play_round(&mut phased, &mut rng)?;
        }
        report.stage_rounds[0] = state.step() - start;
        report.phase_boundaries = phased.phase_boundaries().to_vec();
    }

    // Stage 2: uncolour everything, then warm-up continuation.
    if report.failed_stage.is_none() {
        state.uncolor_all();
        let mut warmup = WarmupStrategy::with_throwaway(ThrowawayCircles::SaturatedOnly);
        let start = state.step();
        while state.unsaturated_count() > cleanup_target {
            if state.step() - start >= stage_cap {
                report.failed_stage = Some(PipelineStage::Continuation);
                break;
            }
            state.play_round(&mut warmup, &mut rng)?;
        }
        report.stage_rounds[1] = state.step() - start;
    }

    // Stage 3: clean-up to perfection.
    if report.failed_stage.is_none() && state.unsaturated_count() > 0 {
        let start = state.step();
        match cleanup_run(
            &mut state,
            &mut rng,
            &CleanupConfig::new(cfg.cleanup_eps.max(1e-12)),
        ) {
            Ok(_) => {}
            Err(Error::RoundCapExhausted { .. }) => {
                report.failed_stage = Some(PipelineStage::Cleanup);
            }
            Err(e) => return Err(e),
        }
        report.stage_rounds[2] = state.step() - start;
    }

    state.validate()?;
    report.total_rounds = state.step();
    report.perfect = state.unsaturated_count() == 0;
    Ok((state, report))
}
