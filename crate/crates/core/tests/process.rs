//! Engine-level behavior: determinism, conservation, transition semantics,
//! and the tie between simulated runs and the ODE predictions.

use semirandom_core::ode;
use semirandom_core::process::{
    run_until, Action, Decision, NullObserver, ProcessConfig, ProcessState, RunOptions, StopReason,
};
use semirandom_core::strategies::WarmupStrategy;
use semirandom_core::GameRng;

fn default_state(n: u32, seed: u64) -> (ProcessState, GameRng) {
    ProcessState::new_run(n, seed, ProcessConfig::default()).unwrap()
}

#[test]
fn n2_first_round_must_match() {
    let (mut state, mut rng) = default_state(2, 99);
    let arc = state
        .play_round(&mut WarmupStrategy::new(), &mut rng)
        .unwrap();
    assert_eq!(state.matching_size(), 1);
    assert_eq!(state.unsaturated_count(), 0);
    assert!((arc.square == 0 && arc.circle == 1) || (arc.square == 1 && arc.circle == 0));
    state.validate().unwrap();
}

#[test]
fn replay_determinism_same_seed_same_arcs() {
    let run = |seed: u64| {
        let (mut state, mut rng) = default_state(200, seed);
        let mut strategy = WarmupStrategy::new();
        for _ in 0..400 {
            if state.unsaturated_count() == 0 {
                break;
            }
            state.play_round(&mut strategy, &mut rng).unwrap();
        }
        state.arcs().to_vec()
    };
    assert_eq!(run(7), run(7));
    assert_ne!(run(7), run(8));
}

#[test]
fn counter_conservation_over_many_rounds() {
    let n = 10_000u32;
    let (mut state, mut rng) = default_state(n, 5);
    let mut strategy = WarmupStrategy::new();
    let traj = run_until(
        &mut state,
        &mut strategy,
        &mut rng,
        |_| false,
        &RunOptions {
            sample_every: 0,
            round_cap: n as u64,
        },
        &mut NullObserver,
    )
    .unwrap();
    assert_eq!(traj.stop, StopReason::RoundCapReached);
    let circles: u64 = (0..n).map(|v| state.circle_count_of(v) as u64).sum();
    let squares: u64 = (0..n).map(|v| state.square_count_of(v) as u64).sum();
    assert_eq!(circles, n as u64);
    assert_eq!(squares, n as u64);
    state.validate().unwrap();
}

#[test]
fn augment_flips_the_stored_path() {
    // Build the configuration by hand: matching {0,1}, green 0 with link 2,
    // red 1. A square on the red vertex then augments along 2-0-1-circle.
    let mut state = ProcessState::new(6, ProcessConfig::default()).unwrap();
    state
        .apply_decision(
            0,
            Decision {
                circle: 1,
                action: Action::GreedyMatch,
            },
        )
        .unwrap();
    state
        .apply_decision(
            0,
            Decision {
                circle: 2,
                action: Action::GreenPair,
            },
        )
        .unwrap();
    assert_eq!(state.green_link(0), Some(2));
    assert_eq!(state.red_count(), 1);

    state
        .apply_decision(
            1,
            Decision {
                circle: 3,
                action: Action::Augment,
            },
        )
        .unwrap();
    assert_eq!(state.matching_size(), 2);
    assert_eq!(state.mate(0), Some(2));
    assert_eq!(state.mate(1), Some(3));
    assert_eq!(state.green_count(), 0);
    assert_eq!(state.red_count(), 0);
    state.validate().unwrap();
}

#[test]
fn sprinkle_keeps_the_first_link() {
    // A second sprinkle square on an already-green vertex adds only the
    // edge; the stored augmenting path stays the first one.
    let mut state = ProcessState::new(6, ProcessConfig::default()).unwrap();
    state
        .apply_decision(
            0,
            Decision {
                circle: 1,
                action: Action::GreedyMatch,
            },
        )
        .unwrap();
    state
        .apply_decision(
            0,
            Decision {
                circle: 2,
                action: Action::SprinkleRed,
            },
        )
        .unwrap();
    assert_eq!(state.green_link(0), Some(2));
    state
        .apply_decision(
            0,
            Decision {
                circle: 3,
                action: Action::SprinkleRed,
            },
        )
        .unwrap();
    assert_eq!(state.green_link(0), Some(2), "first link must survive");
    assert_eq!(state.red_count(), 1);
    assert!(state.edge_exists(0, 3));
    // A sprinkle square on the red mate changes nothing colour-wise either.
    state
        .apply_decision(
            1,
            Decision {
                circle: 4,
                action: Action::SprinkleRed,
            },
        )
        .unwrap();
    assert_eq!(state.red_count(), 1);
    assert_eq!(state.green_count(), 1);
    // The stored path still augments: 2-0-1-circle.
    state
        .apply_decision(
            1,
            Decision {
                circle: 5,
                action: Action::Augment,
            },
        )
        .unwrap();
    assert_eq!(state.mate(0), Some(2));
    assert_eq!(state.mate(1), Some(5));
    state.validate().unwrap();
}

#[test]
fn greedy_match_uncolours_links_into_both_endpoints() {
    // Greens 4 and 6 point at the unsaturated 2 and 3; matching 2-3 must
    // uncolour both pairs.
    let mut state = ProcessState::new(8, ProcessConfig::default()).unwrap();
    state
        .apply_decision(
            4,
            Decision {
                circle: 5,
                action: Action::GreedyMatch,
            },
        )
        .unwrap();
    state
        .apply_decision(
            6,
            Decision {
                circle: 7,
                action: Action::GreedyMatch,
            },
        )
        .unwrap();
    state
        .apply_decision(
            4,
            Decision {
                circle: 2,
                action: Action::GreenPair,
            },
        )
        .unwrap();
    state
        .apply_decision(
            6,
            Decision {
                circle: 3,
                action: Action::GreenPair,
            },
        )
        .unwrap();
    assert_eq!(state.green_count(), 2);

    state
        .apply_decision(
            2,
            Decision {
                circle: 3,
                action: Action::GreedyMatch,
            },
        )
        .unwrap();
    assert_eq!(state.green_count(), 0);
    assert_eq!(state.red_count(), 0);
    assert_eq!(state.matching_size(), 3);
    state.validate().unwrap();
}

#[test]
fn per_round_validation_at_small_n() {
    // Exhaustive bookkeeping check after every round, warm-up at n = 300.
    let n = 300u32;
    let (mut state, mut rng) = default_state(n, 3);
    let mut strategy = WarmupStrategy::new();
    let mut rounds = 0u64;
    while state.unsaturated_count() > 0 && rounds < 5 * n as u64 {
        state.play_round(&mut strategy, &mut rng).unwrap();
        rounds += 1;
        state.validate().unwrap();
    }
    assert_eq!(
        state.unsaturated_count(),
        0,
        "warm-up failed to finish at small n"
    );
}

#[test]
fn run_until_exit_matches_ode_prediction() {
    // Stop at |U| <= 0.1 n; the ODE says that happens at s*(x = 0.9).
    let n = 100_000u32;
    let (expect, _) = ode::warmup_event_time(0.0, 0.0, 0.9, 1e-5).unwrap();
    let (mut state, mut rng) =
        ProcessState::new_run(n, 12, ProcessConfig { keep_arcs: false }).unwrap();
    let mut strategy = WarmupStrategy::new();
    let traj = run_until(
        &mut state,
        &mut strategy,
        &mut rng,
        |s| s.unsaturated_count() <= n / 10,
        &RunOptions {
            sample_every: 0,
            round_cap: 3 * n as u64,
        },
        &mut NullObserver,
    )
    .unwrap();
    assert_eq!(traj.stop, StopReason::StopSatisfied);
    let s_exit = state.step() as f64 / n as f64;
    assert!(
        (s_exit - expect).abs() <= 0.01,
        "exit at s = {s_exit}, ODE predicts {expect}"
    );
}

#[test]
fn uniform_picks_respect_exclusions_and_adjacency() {
    // After some play, every uniform pick must avoid the square, the
    // explicit exclusion, and existing neighbours.
    let (mut state, mut rng) = default_state(100, 13);
    let mut strategy = WarmupStrategy::new();
    for _ in 0..60 {
        state.play_round(&mut strategy, &mut rng).unwrap();
    }
    for square in 0..state.n() {
        let exclude = state.iter_unsaturated().next();
        if let Some(v) = state.pick_uniform_unsaturated(&mut rng, square, exclude) {
            assert!(state.is_unsaturated(v));
            assert_ne!(v, square);
            assert_ne!(Some(v), exclude);
            assert!(!state.edge_exists(square, v));
        }
        if let Some(v) = state.pick_uniform_saturated(&mut rng, square, None) {
            assert!(!state.is_unsaturated(v));
            assert_ne!(v, square);
            assert!(!state.edge_exists(square, v));
        }
        if let Some(v) = state.pick_uniform_any(&mut rng, square) {
            assert_ne!(v, square);
            assert!(!state.edge_exists(square, v));
        }
    }
}

#[test]
fn trajectory_rows_carry_colour_counts() {
    let (mut state, mut rng) = default_state(1000, 21);
    let mut strategy = WarmupStrategy::new();
    let traj = run_until(
        &mut state,
        &mut strategy,
        &mut rng,
        |s| s.unsaturated_count() <= 100,
        &RunOptions {
            sample_every: 50,
            round_cap: 10_000,
        },
        &mut NullObserver,
    )
    .unwrap();
    assert!(traj.rows.len() > 3);
    for row in &traj.rows {
        assert_eq!(
            row.green, row.red,
            "green and red counts must track each other"
        );
        assert_eq!(row.unsaturated, 1000 - 2 * row.matched);
    }
    let last = traj.rows.last().unwrap();
    assert_eq!(last.step, state.step());
}
