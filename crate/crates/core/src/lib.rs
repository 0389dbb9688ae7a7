//! Core library for the semi-random graph process.
//!
//! The semi-random process is a one-player game on `n` vertices: each round a
//! uniformly random vertex (the *square*) is presented, the player answers with
//! a vertex of her choice (the *circle*), and the edge square–circle is added.
//! This crate provides
//!
//! * [`process`] — the game engine: state, random squares, strategy-chosen
//!   circles, matching/colour bookkeeping, trajectory sampling;
//! * [`strategies`] — players that build a perfect matching: the randomized
//!   warm-up, the two-stage clean-up, the circle-minimizing phased player, and
//!   the composite pipeline;
//! * [`observables`] — square-coverage counters (X, Y, U, D, W) layered over
//!   any run, with the counting certificate that rules out near-perfect
//!   matchings;
//! * [`ode`] — the numerical lab: fixed-step integration with event detection,
//!   the warm-up and phase ODE systems, closed forms, and the bound constants
//!   alpha and beta;
//! * [`matching`] — ground truth: an exact maximum-matching oracle (blossom
//!   contraction), perfect-matching checks, and approximate-matching
//!   certificates.
//!
//! The crate is `no_std` + `alloc`; all IO lives in the companion CLI crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod error;
pub mod matching;
pub mod observables;
pub mod ode;
pub mod process;
pub mod rng;
pub mod strategies;

pub use error::Error;
pub use process::{Arc, ProcessState, Strategy, Trajectory, VertexId};
pub use rng::GameRng;
