//! The game engine for the semi-random process.
//!
//! One round: a square lands on a uniformly random vertex, the strategy
//! answers with a circle, the edge is added, and the matching/colour
//! bookkeeping is updated. The engine owns all shared state (matching,
//! unsaturated set, green/red colours, per-vertex square and circle counts);
//! strategies only choose circles and name the structural action to apply.
//!
//! Colour bookkeeping encodes ready augmenting paths of length 3: when a
//! square lands on a saturated uncoloured vertex `g`, the answered circle goes
//! to an unsaturated vertex `w`, the edge `g–w` is remembered as `g`'s green
//! link, and `g`'s matching mate is coloured red. A later square on that red
//! vertex augments along `w – g – red – circle`.

mod edge_set;
mod index_set;

pub use edge_set::EdgeSet;
pub use index_set::SplitIndexSet;

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::rng::GameRng;

/// Dense 0-based vertex index, valid in `[0, n)`.
pub type VertexId = u32;

pub(crate) const NONE: u32 = u32::MAX;

/// One played round: the edge from the random square to the chosen circle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Arc {
    pub square: VertexId,
    pub circle: VertexId,
    /// 1-based round index.
    pub round: u64,
    /// False for throwaway placements the strategy will never use for the
    /// matching. Verifiers still see the edge.
    pub usable: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Color {
    Uncolored,
    Green,
    Red,
}

/// Structural effect a strategy requests for the current round.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Action {
    /// Square on an unsaturated vertex: match it with the circle.
    GreedyMatch,
    /// Square on a red vertex: augment along the stored 3-edge path.
    Augment,
    /// Square on an uncoloured saturated vertex: store a green link, colour
    /// its mate red.
    GreenPair,
    /// Clean-up sprinkle on a saturated vertex: like `GreenPair` but tolerant
    /// of already-coloured targets (first link is kept).
    SprinkleRed,
    /// Edge recorded, no matching effect.
    Unused,
}

/// A strategy's answer for one round.
#[derive(Clone, Copy, Debug)]
pub struct Decision {
    pub circle: VertexId,
    pub action: Action,
}

/// What a round changed, for strategy-side bookkeeping.
#[derive(Clone, Copy, Debug)]
pub struct RoundEffect {
    pub action: Action,
    /// The two vertices that left the unsaturated set, if any.
    pub newly_saturated: Option<(VertexId, VertexId)>,
    /// The circle target, when it is still unsaturated after the round.
    pub circle_kept_unsaturated: Option<VertexId>,
}

/// A player: sees the read-only state and the incoming square, answers with a
/// circle placement. Private auxiliary state is kept in sync via
/// [`Strategy::on_applied`]; the engine never looks inside.
pub trait Strategy {
    fn decide(
        &mut self,
        state: &ProcessState,
        square: VertexId,
        rng: &mut GameRng,
    ) -> Result<Decision>;

    fn on_applied(&mut self, state: &ProcessState, arc: &Arc, effect: &RoundEffect) {
        let _ = (state, arc, effect);
    }

    fn name(&self) -> &'static str;
}

/// Per-round hook for observables layered over a run.
pub trait RoundObserver {
    fn on_round(&mut self, state: &ProcessState, arc: &Arc) -> Result<()>;

    /// Current `(X, Y, U, D, W)` snapshot; zeros when not tracked.
    fn counts(&self) -> [u64; 5] {
        [0; 5]
    }
}

/// Observer that tracks nothing.
pub struct NullObserver;

impl RoundObserver for NullObserver {
    fn on_round(&mut self, _state: &ProcessState, _arc: &Arc) -> Result<()> {
        Ok(())
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ProcessConfig {
    /// Retain the arc list. Required when the run will be verified or
    /// exported; counters and trajectories work without it.
    pub keep_arcs: bool,
}

impl Default for ProcessConfig {
    fn default() -> Self {
        Self { keep_arcs: true }
    }
}

/// Full mutable state of one run.
#[derive(Clone, Debug)]
pub struct ProcessState {
    n: u32,
    step: u64,
    keep_arcs: bool,
    arcs: Vec<Arc>,
    edges: EdgeSet,
    /// Matching mate per vertex, `NONE` when unsaturated.
    mate: Vec<u32>,
    color: Vec<Color>,
    /// Unsaturated end of the green edge, valid iff the vertex is green.
    green_link: Vec<u32>,
    /// Intrusive lists of green vertices keyed by their link target.
    green_in_head: Vec<u32>,
    green_in_next: Vec<u32>,
    split: SplitIndexSet,
    square_count: Vec<u32>,
    circle_count: Vec<u32>,
    max_circle_count: u32,
    green_count: u32,
    red_count: u32,
    matched_pairs: u32,
}

impl ProcessState {
    /// Fresh empty state. `n` must be even and positive; odd counts are
    /// rejected outright (the odd case reduces to the even one and is out of
    /// scope here).
    pub fn new(n: u32, config: ProcessConfig) -> Result<Self> {
        if n == 0 || !n.is_multiple_of(2) {
            return Err(Error::OddOrZeroN(n));
        }
        let nu = n as usize;
        Ok(Self {
            n,
            step: 0,
            keep_arcs: config.keep_arcs,
            arcs: Vec::new(),
            edges: EdgeSet::with_capacity(2 * nu),
            mate: vec![NONE; nu],
            color: vec![Color::Uncolored; nu],
            green_link: vec![NONE; nu],
            green_in_head: vec![NONE; nu],
            green_in_next: vec![NONE; nu],
            split: SplitIndexSet::new(n),
            square_count: vec![0; nu],
            circle_count: vec![0; nu],
            max_circle_count: 0,
            green_count: 0,
            red_count: 0,
            matched_pairs: 0,
        })
    }

    /// State plus a seeded RNG for the run.
    pub fn new_run(n: u32, seed: u64, config: ProcessConfig) -> Result<(Self, GameRng)> {
        Ok((Self::new(n, config)?, GameRng::new(seed)))
    }

    // ----- read-only views -----

    #[inline]
    pub fn n(&self) -> u32 {
        self.n
    }

    #[inline]
    pub fn step(&self) -> u64 {
        self.step
    }

    #[inline]
    pub fn matching_size(&self) -> u32 {
        self.matched_pairs
    }

    #[inline]
    pub fn unsaturated_count(&self) -> u32 {
        self.split.unsat_len()
    }

    #[inline]
    pub fn saturated_count(&self) -> u32 {
        self.split.sat_len()
    }

    #[inline]
    pub fn green_count(&self) -> u32 {
        self.green_count
    }

    #[inline]
    pub fn red_count(&self) -> u32 {
        self.red_count
    }

    #[inline]
    pub fn is_unsaturated(&self, v: VertexId) -> bool {
        self.split.is_unsaturated(v)
    }

    #[inline]
    pub fn color(&self, v: VertexId) -> Color {
        self.color[v as usize]
    }

    #[inline]
    pub fn mate(&self, v: VertexId) -> Option<VertexId> {
        let m = self.mate[v as usize];
        (m != NONE).then_some(m)
    }

    #[inline]
    pub fn green_link(&self, v: VertexId) -> Option<VertexId> {
        let w = self.green_link[v as usize];
        (w != NONE).then_some(w)
    }

    #[inline]
    pub fn square_count_of(&self, v: VertexId) -> u32 {
        self.square_count[v as usize]
    }

    #[inline]
    pub fn circle_count_of(&self, v: VertexId) -> u32 {
        self.circle_count[v as usize]
    }

    /// Largest number of circles on any single vertex so far.
    #[inline]
    pub fn max_circle_count(&self) -> u32 {
        self.max_circle_count
    }

    #[inline]
    pub fn edge_exists(&self, u: VertexId, v: VertexId) -> bool {
        self.edges.contains(u, v)
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn keeps_arcs(&self) -> bool {
        self.keep_arcs
    }

    pub fn iter_unsaturated(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.split.iter_unsat()
    }

    /// The matching as a pair list, each pair ordered low-high.
    pub fn matching_pairs(&self) -> Vec<(VertexId, VertexId)> {
        let mut out = Vec::with_capacity(self.matched_pairs as usize);
        for v in 0..self.n {
            let m = self.mate[v as usize];
            if m != NONE && v < m {
                out.push((v, m));
            }
        }
        out
    }

    // ----- circle pickers -----
    //
    // All uniform picks exclude the square itself, an optional extra vertex,
    // and anything already adjacent to the square, so the constructed graph
    // stays simple. Rejection sampling keeps the draw uniform over the legal
    // candidates; a deterministic scan takes over if rejections pile up.

    const PICK_TRIES: u32 = 64;

    pub fn pick_uniform_unsaturated(
        &self,
        rng: &mut GameRng,
        square: VertexId,
        exclude: Option<VertexId>,
    ) -> Option<VertexId> {
        let len = self.split.unsat_len();
        self.pick_from(rng, square, exclude, len, |i| self.split.unsat_at(i))
    }

    pub fn pick_uniform_saturated(
        &self,
        rng: &mut GameRng,
        square: VertexId,
        exclude: Option<VertexId>,
    ) -> Option<VertexId> {
        let len = self.split.sat_len();
        self.pick_from(rng, square, exclude, len, |i| self.split.sat_at(i))
    }

    pub fn pick_uniform_any(&self, rng: &mut GameRng, square: VertexId) -> Option<VertexId> {
        self.pick_from(rng, square, None, self.n, |i| i)
    }

    fn pick_from(
        &self,
        rng: &mut GameRng,
        square: VertexId,
        exclude: Option<VertexId>,
        len: u32,
        at: impl Fn(u32) -> VertexId,
    ) -> Option<VertexId> {
        if len == 0 {
            return None;
        }
        let legal =
            |v: VertexId| v != square && Some(v) != exclude && !self.edges.contains(square, v);
        for _ in 0..Self::PICK_TRIES {
            let v = at(rng.below_u32(len));
            if legal(v) {
                return Some(v);
            }
        }
        (0..len).map(at).find(|&v| legal(v))
    }

    // ----- mutation -----

    /// Resets every colour and green link; matching and graph are untouched.
    pub fn uncolor_all(&mut self) {
        self.color.fill(Color::Uncolored);
        self.green_link.fill(NONE);
        self.green_in_head.fill(NONE);
        self.green_in_next.fill(NONE);
        self.green_count = 0;
        self.red_count = 0;
    }

    fn push_green(&mut self, green: u32, target: u32) {
        self.green_in_next[green as usize] = self.green_in_head[target as usize];
        self.green_in_head[target as usize] = green;
    }

    /// Uncolours every green vertex whose link points at `w` (and its red
    /// partner). Must run before any mate re-pairing in the same round, so
    /// the red partner is still the green vertex's current mate.
    fn sweep_green_list(&mut self, w: u32) {
        let mut g = self.green_in_head[w as usize];
        self.green_in_head[w as usize] = NONE;
        while g != NONE {
            let next = self.green_in_next[g as usize];
            self.green_in_next[g as usize] = NONE;
            debug_assert!(matches!(self.color[g as usize], Color::Green));
            debug_assert_eq!(self.green_link[g as usize], w);
            self.color[g as usize] = Color::Uncolored;
            self.green_link[g as usize] = NONE;
            self.green_count -= 1;
            let r = self.mate[g as usize];
            debug_assert_ne!(r, NONE);
            debug_assert!(matches!(self.color[r as usize], Color::Red));
            self.color[r as usize] = Color::Uncolored;
            self.red_count -= 1;
            g = next;
        }
    }

    fn make_green_pair(&mut self, g: u32, target: u32) -> Result<()> {
        let m = self.mate[g as usize];
        if m == NONE {
            return Err(Error::StateCorruption("green pair on unmatched vertex"));
        }
        debug_assert!(matches!(self.color[g as usize], Color::Uncolored));
        debug_assert!(matches!(self.color[m as usize], Color::Uncolored));
        self.color[g as usize] = Color::Green;
        self.green_link[g as usize] = target;
        self.push_green(g, target);
        self.color[m as usize] = Color::Red;
        self.green_count += 1;
        self.red_count += 1;
        Ok(())
    }

    /// Applies one round with the given square and the strategy's decision.
    /// Validates legality (range, no self-loop, no duplicate edge, action
    /// preconditions), then updates all bookkeeping.
    pub fn apply_decision(
        &mut self,
        square: VertexId,
        decision: Decision,
    ) -> Result<(Arc, RoundEffect)> {
        let circle = decision.circle;
        if square >= self.n {
            return Err(Error::VertexOutOfRange {
                vertex: square,
                n: self.n,
            });
        }
        if circle >= self.n {
            return Err(Error::VertexOutOfRange {
                vertex: circle,
                n: self.n,
            });
        }
        if circle == square {
            return Err(Error::SelfLoop { vertex: square });
        }
        if !self.edges.insert(square, circle) {
            return Err(Error::DuplicateEdge { square, circle });
        }

        let effect = match decision.action {
            Action::GreedyMatch => {
                if !self.is_unsaturated(square) || !self.is_unsaturated(circle) {
                    return Err(Error::StateCorruption(
                        "greedy match needs two unsaturated ends",
                    ));
                }
                self.sweep_green_list(square);
                self.sweep_green_list(circle);
                self.mate[square as usize] = circle;
                self.mate[circle as usize] = square;
                self.matched_pairs += 1;
                self.split.saturate(square);
                self.split.saturate(circle);
                RoundEffect {
                    action: decision.action,
                    newly_saturated: Some((square, circle)),
                    circle_kept_unsaturated: None,
                }
            }
            Action::Augment => {
                if !matches!(self.color[square as usize], Color::Red) {
                    return Err(Error::StateCorruption("augment on a non-red square"));
                }
                let x = self.mate[square as usize];
                if x == NONE || !matches!(self.color[x as usize], Color::Green) {
                    return Err(Error::StateCorruption("red vertex without green mate"));
                }
                let y = self.green_link[x as usize];
                if y == NONE || !self.is_unsaturated(y) {
                    return Err(Error::StateCorruption("green link missing or saturated"));
                }
                if !self.is_unsaturated(circle) || circle == y {
                    return Err(Error::StateCorruption(
                        "augment circle must be unsaturated, distinct from the link end",
                    ));
                }
                // The sweeps uncolour x and, through x's pair, the red square.
                self.sweep_green_list(y);
                self.sweep_green_list(circle);
                debug_assert!(matches!(self.color[square as usize], Color::Uncolored));
                // Flip the path y–x–square–circle: drop {x,square}, add {y,x} and {square,circle}.
                self.mate[x as usize] = y;
                self.mate[y as usize] = x;
                self.mate[square as usize] = circle;
                self.mate[circle as usize] = square;
                self.matched_pairs += 1;
                self.split.saturate(y);
                self.split.saturate(circle);
                RoundEffect {
                    action: decision.action,
                    newly_saturated: Some((y, circle)),
                    circle_kept_unsaturated: None,
                }
            }
            Action::GreenPair => {
                if self.is_unsaturated(square)
                    || !matches!(self.color[square as usize], Color::Uncolored)
                {
                    return Err(Error::StateCorruption(
                        "green pair needs an uncoloured saturated square",
                    ));
                }
                if !self.is_unsaturated(circle) {
                    return Err(Error::StateCorruption(
                        "green link must point at an unsaturated vertex",
                    ));
                }
                self.make_green_pair(square, circle)?;
                RoundEffect {
                    action: decision.action,
                    newly_saturated: None,
                    circle_kept_unsaturated: Some(circle),
                }
            }
            Action::SprinkleRed => {
                if self.is_unsaturated(square) {
                    return Err(Error::StateCorruption("sprinkle on an unsaturated square"));
                }
                if !self.is_unsaturated(circle) {
                    return Err(Error::StateCorruption(
                        "sprinkle circle must be unsaturated",
                    ));
                }
                // Only the first square on a vertex installs a link; repeats
                // (green square) or hits on red vertices add the edge alone.
                if matches!(self.color[square as usize], Color::Uncolored) {
                    self.make_green_pair(square, circle)?;
                }
                RoundEffect {
                    action: decision.action,
                    newly_saturated: None,
                    circle_kept_unsaturated: Some(circle),
                }
            }
            Action::Unused => RoundEffect {
                action: decision.action,
                newly_saturated: None,
                circle_kept_unsaturated: self.is_unsaturated(circle).then_some(circle),
            },
        };

        self.step += 1;
        self.square_count[square as usize] += 1;
        let c = self.circle_count[circle as usize] + 1;
        self.circle_count[circle as usize] = c;
        self.max_circle_count = self.max_circle_count.max(c);
        let arc = Arc {
            square,
            circle,
            round: self.step,
            usable: !matches!(decision.action, Action::Unused),
        };
        if self.keep_arcs {
            self.arcs.push(arc);
        }
        Ok((arc, effect))
    }

    /// One round with the square injected by the caller (replays, tests).
    pub fn play_round_with_square<S: Strategy + ?Sized>(
        &mut self,
        square: VertexId,
        strategy: &mut S,
        rng: &mut GameRng,
    ) -> Result<Arc> {
        let decision = strategy.decide(self, square, rng)?;
        let (arc, effect) = self.apply_decision(square, decision)?;
        strategy.on_applied(self, &arc, &effect);
        Ok(arc)
    }

    /// One full round: uniform square, strategy circle, bookkeeping.
    pub fn play_round<S: Strategy + ?Sized>(
        &mut self,
        strategy: &mut S,
        rng: &mut GameRng,
    ) -> Result<Arc> {
        let square = rng.below_u32(self.n);
        self.play_round_with_square(square, strategy, rng)
    }

    /// Exhaustive consistency check, intended for tests at small `n`.
    pub fn validate(&self) -> Result<()> {
        let n = self.n as usize;
        let fail = |what: &'static str| Err(Error::StateCorruption(what));
        let mut matched = 0u32;
        for v in 0..n {
            let m = self.mate[v];
            if m != NONE {
                if m as usize >= n || self.mate[m as usize] != v as u32 || m as usize == v {
                    return fail("mate array is not an involution");
                }
                matched += 1;
                if self.split.is_unsaturated(v as u32) {
                    return fail("matched vertex marked unsaturated");
                }
            } else if !self.split.is_unsaturated(v as u32) {
                return fail("unmatched vertex marked saturated");
            }
        }
        if matched != 2 * self.matched_pairs {
            return fail("matching size counter off");
        }
        if self.split.unsat_len() != self.n - 2 * self.matched_pairs {
            return fail("unsaturated count off");
        }
        let mut greens = 0u32;
        let mut reds = 0u32;
        for v in 0..n {
            match self.color[v] {
                Color::Green => {
                    greens += 1;
                    let w = self.green_link[v];
                    if w == NONE || !self.split.is_unsaturated(w) {
                        return fail("green vertex without live link");
                    }
                    let m = self.mate[v];
                    if m == NONE || !matches!(self.color[m as usize], Color::Red) {
                        return fail("green vertex's mate is not red");
                    }
                    if !self.edges.contains(v as u32, w) {
                        return fail("green link edge missing from graph");
                    }
                }
                Color::Red => {
                    reds += 1;
                    let m = self.mate[v];
                    if m == NONE || !matches!(self.color[m as usize], Color::Green) {
                        return fail("red vertex's mate is not green");
                    }
                }
                Color::Uncolored => {
                    if self.green_link[v] != NONE {
                        return fail("uncoloured vertex holds a green link");
                    }
                }
            }
        }
        if greens != self.green_count || reds != self.red_count || greens != reds {
            return fail("green/red counts off");
        }
        // Green membership lists must exactly mirror the links.
        let mut listed = 0u32;
        for w in 0..n {
            let mut g = self.green_in_head[w];
            while g != NONE {
                if !matches!(self.color[g as usize], Color::Green)
                    || self.green_link[g as usize] != w as u32
                {
                    return fail("stale entry in green membership list");
                }
                listed += 1;
                g = self.green_in_next[g as usize];
            }
        }
        if listed != greens {
            return fail("green membership lists incomplete");
        }
        let sq: u64 = self.square_count.iter().map(|&c| c as u64).sum();
        let ci: u64 = self.circle_count.iter().map(|&c| c as u64).sum();
        if sq != self.step || ci != self.step {
            return fail("square/circle count conservation violated");
        }
        if self.keep_arcs {
            if self.arcs.len() as u64 != self.step {
                return fail("arc list length off");
            }
            let mut sq2 = vec![0u32; n];
            let mut ci2 = vec![0u32; n];
            for (i, a) in self.arcs.iter().enumerate() {
                if a.round != i as u64 + 1 || a.square == a.circle {
                    return fail("bad arc record");
                }
                sq2[a.square as usize] += 1;
                ci2[a.circle as usize] += 1;
            }
            if sq2 != self.square_count || ci2 != self.circle_count {
                return fail("per-vertex counts disagree with arc list");
            }
            // Matching edges must exist in the graph.
            for v in 0..n {
                let m = self.mate[v];
                if m != NONE && v < m as usize && !self.edges.contains(v as u32, m) {
                    return fail("matching pair is not a graph edge");
                }
            }
        }
        Ok(())
    }
}

/// Why a run loop exited.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StopReason {
    StopSatisfied,
    RoundCapReached,
}

/// One sampled trajectory row. Observable counts are zeros unless an observer
/// is attached.
#[derive(Clone, Copy, Debug)]
pub struct TrajectoryRow {
    pub step: u64,
    pub matched: u32,
    pub unsaturated: u32,
    pub green: u32,
    pub red: u32,
    /// `(X, Y, U, D, W)` from the attached observer.
    pub observables: [u64; 5],
}

/// Sampled time series of one run.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub rows: Vec<TrajectoryRow>,
    pub stop: StopReason,
}

#[derive(Clone, Copy, Debug)]
pub struct RunOptions {
    /// Sample a row every this many rounds (0 means only first and last).
    pub sample_every: u64,
    /// Hard cap on rounds played by this call.
    pub round_cap: u64,
}

fn sample_row<O: RoundObserver + ?Sized>(state: &ProcessState, observer: &O) -> TrajectoryRow {
    TrajectoryRow {
        step: state.step(),
        matched: state.matching_size(),
        unsaturated: state.unsaturated_count(),
        green: state.green_count(),
        red: state.red_count(),
        observables: observer.counts(),
    }
}

/// Plays rounds until `stop` holds or the round cap is reached, sampling as it
/// goes. The first and final states are always sampled.
pub fn run_until<S, O>(
    state: &mut ProcessState,
    strategy: &mut S,
    rng: &mut GameRng,
    stop: impl Fn(&ProcessState) -> bool,
    opts: &RunOptions,
    observer: &mut O,
) -> Result<Trajectory>
where
    S: Strategy + ?Sized,
    O: RoundObserver + ?Sized,
{
    let mut rows = Vec::new();
    rows.push(sample_row(state, observer));
    let mut played = 0u64;
    let mut last_sampled = state.step();
    let stop_reason = loop {
        if stop(state) {
            break StopReason::StopSatisfied;
        }
        if played >= opts.round_cap {
            break StopReason::RoundCapReached;
        }
        let arc = state.play_round(strategy, rng)?;
        observer.on_round(state, &arc)?;
        played += 1;
        if opts.sample_every > 0 && state.step().is_multiple_of(opts.sample_every) {
            rows.push(sample_row(state, observer));
            last_sampled = state.step();
        }
    };
    if last_sampled != state.step() {
        rows.push(sample_row(state, observer));
    }
    Ok(Trajectory {
        rows,
        stop: stop_reason,
    })
}
