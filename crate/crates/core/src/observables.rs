//! Lower-bound observables layered over any run.
//!
//! Counted over the arc stream, per vertex:
//!
//! * `X` — vertices covered by at least one square;
//! * `Y` — vertices covered by exactly one square;
//! * `U` — *redundant* vertices: singly covered, and the circle answered to
//!   that single square later received a square of its own;
//! * `D` — *dangerous* vertices: heads of a live chain `j1 -> j2 -> j3`:
//!   `j1` is singly covered with its circle on `j2`; the first square to
//!   land on `j2` afterwards (at `t2`) sent its circle to `j3 ∉ {j1, j2}`;
//!   and neither `j2` nor `j3` has been squared since `t2`. A chain is born
//!   at every redundancy creation and dies at rate 3/n, which is exactly
//!   what makes `D` the one-step precursor of `W`: squares on `j2` earlier
//!   than `j1`'s round are invisible to the chain;
//! * `W` — *well-positioned* vertices: redundant with a redundant circle
//!   target.
//!
//! `W <= U <= Y <= X` always. The tracker also keeps per-vertex circle
//! counts for the well-behavedness check, and insists the arc stream stays
//! simple (no self-loops or repeated edges) — the chain accounting is only
//! correct on simple graphs, so a violation aborts rather than approximates.
//!
//! Every update is local to the square's vertex: listener lists keyed by the
//! circle target make promotion, chain birth, and chain death O(1) amortized.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::process::{Arc, EdgeSet, ProcessState, RoundObserver};

const NONE: u32 = u32::MAX;

/// Running counts `(X, Y, U, D, W)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Counts {
    pub x: u64,
    pub y: u64,
    pub u: u64,
    pub d: u64,
    pub w: u64,
}

impl Counts {
    pub fn as_array(&self) -> [u64; 5] {
        [self.x, self.y, self.u, self.d, self.w]
    }
}

/// The certificate of one state: a near-perfect matching can exist at time
/// `t` only if `X - U + W >= n/2 - 3t/mu`.
#[derive(Clone, Copy, Debug)]
pub struct Certificate {
    pub t: u64,
    pub mu: f64,
    pub lhs: i64,
    pub rhs: f64,
    /// False means the counting argument already rules a matching out.
    pub matching_possible: bool,
}

/// Incremental tracker for the five lower-bound observables.
#[derive(Clone, Debug)]
pub struct LowerBoundTracker {
    n: u32,
    rounds: u64,
    counts: Counts,

    square_count: Vec<u32>,
    circle_count: Vec<u32>,
    max_circles: u32,

    /// Round and circle target of the vertex's first square (valid while
    /// singly covered).
    first_round: Vec<u64>,
    first_target: Vec<u32>,

    redundant: Vec<bool>,
    well_positioned: Vec<bool>,
    dangerous: Vec<bool>,

    /// Doubly linked membership lists: `single_in[v]` holds the singly
    /// covered vertices whose first square's circle landed on `v`.
    single_head: Vec<u32>,
    single_next: Vec<u32>,
    single_prev: Vec<u32>,

    /// Singly linked lists of chain heads keyed by the chain's `j3`.
    /// Entries go stale when a chain dies some other way; the `dangerous`
    /// flag disambiguates. A vertex enters at most one such list, once.
    chain_head: Vec<u32>,
    chain_next: Vec<u32>,

    edges: EdgeSet,
}

impl LowerBoundTracker {
    pub fn new(n: u32) -> Self {
        let nu = n as usize;
        Self {
            n,
            rounds: 0,
            counts: Counts {
                x: 0,
                y: 0,
                u: 0,
                d: 0,
                w: 0,
            },
            square_count: vec![0; nu],
            circle_count: vec![0; nu],
            max_circles: 0,
            first_round: vec![0; nu],
            first_target: vec![NONE; nu],
            redundant: vec![false; nu],
            well_positioned: vec![false; nu],
            dangerous: vec![false; nu],
            single_head: vec![NONE; nu],
            single_next: vec![NONE; nu],
            single_prev: vec![NONE; nu],
            chain_head: vec![NONE; nu],
            chain_next: vec![NONE; nu],
            edges: EdgeSet::with_capacity(nu),
        }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn rounds(&self) -> u64 {
        self.rounds
    }

    pub fn counts(&self) -> Counts {
        self.counts
    }

    pub fn max_circle_count(&self) -> u32 {
        self.max_circles
    }

    fn single_in_push(&mut self, target: u32, j: u32) {
        let head = self.single_head[target as usize];
        self.single_next[j as usize] = head;
        self.single_prev[j as usize] = NONE;
        if head != NONE {
            self.single_prev[head as usize] = j;
        }
        self.single_head[target as usize] = j;
    }

    fn single_in_remove(&mut self, target: u32, j: u32) {
        let prev = self.single_prev[j as usize];
        let next = self.single_next[j as usize];
        if prev == NONE {
            debug_assert_eq!(self.single_head[target as usize], j);
            self.single_head[target as usize] = next;
        } else {
            self.single_next[prev as usize] = next;
        }
        if next != NONE {
            self.single_prev[next as usize] = prev;
        }
        self.single_next[j as usize] = NONE;
        self.single_prev[j as usize] = NONE;
    }

    /// `j` just became redundant: well-positionedness may switch on for `j`
    /// itself and for the singly covered vertices targeting `j`.
    fn after_redundant_on(&mut self, j: u32) {
        debug_assert!(self.redundant[j as usize]);
        let target = self.first_target[j as usize];
        if self.redundant[target as usize] && !self.well_positioned[j as usize] {
            self.well_positioned[j as usize] = true;
            self.counts.w += 1;
        }
        let mut i = self.single_head[j as usize];
        while i != NONE {
            if self.redundant[i as usize] && !self.well_positioned[i as usize] {
                self.well_positioned[i as usize] = true;
                self.counts.w += 1;
            }
            i = self.single_next[i as usize];
        }
    }

    fn observe_square(&mut self, z: u32, circle: u32, round: u64) {
        let z_us = z as usize;
        let had = self.square_count[z_us];
        self.square_count[z_us] = had + 1;

        // Chains whose tail is z are no longer square-free.
        self.kill_chains_through_j3(z);
        // Chains whose middle is z (born at the previous square on z) see a
        // further square on it.
        let mut j = self.single_head[z_us];
        while j != NONE {
            if self.dangerous[j as usize] {
                self.dangerous[j as usize] = false;
                self.counts.d -= 1;
            }
            j = self.single_next[j as usize];
        }

        match had {
            0 => {
                self.counts.x += 1;
                self.counts.y += 1;
                self.first_round[z_us] = round;
                self.first_target[z_us] = circle;
                self.single_in_push(circle, z);
            }
            1 => {
                self.counts.y -= 1;
                let target = self.first_target[z_us];
                self.single_in_remove(target, z);

                // z stops being redundant (and well-positioned).
                if self.redundant[z_us] {
                    self.redundant[z_us] = false;
                    self.counts.u -= 1;
                    if self.well_positioned[z_us] {
                        self.well_positioned[z_us] = false;
                        self.counts.w -= 1;
                    }
                    // Vertices whose circle target was z lose well-positionedness.
                    let mut i = self.single_head[z_us];
                    while i != NONE {
                        if self.well_positioned[i as usize] {
                            self.well_positioned[i as usize] = false;
                            self.counts.w -= 1;
                        }
                        i = self.single_next[i as usize];
                    }
                }
                // z's own chain dies with its second square.
                if self.dangerous[z_us] {
                    self.dangerous[z_us] = false;
                    self.counts.d -= 1;
                }
            }
            _ => {}
        }

        // This square is the first on z since every unpromoted listener
        // registered: each becomes redundant, and a fresh chain
        // j -> z -> circle comes alive.
        let mut j = self.single_head[z_us];
        while j != NONE {
            let j_us = j as usize;
            if !self.redundant[j_us] {
                self.redundant[j_us] = true;
                self.counts.u += 1;
                self.after_redundant_on(j);
                debug_assert!(!self.dangerous[j_us]);
                if circle != j {
                    self.dangerous[j_us] = true;
                    self.counts.d += 1;
                    self.chain_next[j_us] = self.chain_head[circle as usize];
                    self.chain_head[circle as usize] = j;
                }
            }
            j = self.single_next[j_us];
        }
    }

    fn kill_chains_through_j3(&mut self, z: u32) {
        let mut j1 = self.chain_head[z as usize];
        self.chain_head[z as usize] = NONE;
        while j1 != NONE {
            if self.dangerous[j1 as usize] {
                self.dangerous[j1 as usize] = false;
                self.counts.d -= 1;
            }
            let next = self.chain_next[j1 as usize];
            self.chain_next[j1 as usize] = NONE;
            j1 = next;
        }
    }

    /// Folds one arc in. Arcs must arrive in round order on a simple graph.
    pub fn observe(&mut self, arc: &Arc) -> Result<()> {
        if arc.round != self.rounds + 1 {
            return Err(Error::OutOfOrderRound {
                expected: self.rounds + 1,
                got: arc.round,
            });
        }
        if arc.square >= self.n {
            return Err(Error::VertexOutOfRange {
                vertex: arc.square,
                n: self.n,
            });
        }
        if arc.circle >= self.n {
            return Err(Error::VertexOutOfRange {
                vertex: arc.circle,
                n: self.n,
            });
        }
        if arc.square == arc.circle {
            return Err(Error::SelfLoop { vertex: arc.square });
        }
        if !self.edges.insert(arc.square, arc.circle) {
            return Err(Error::DuplicateEdge {
                square: arc.square,
                circle: arc.circle,
            });
        }
        self.rounds += 1;
        self.observe_square(arc.square, arc.circle, arc.round);
        let c = self.circle_count[arc.circle as usize] + 1;
        self.circle_count[arc.circle as usize] = c;
        self.max_circles = self.max_circles.max(c);
        Ok(())
    }

    /// One-round increment of `U` if the next square were to land on `z`,
    /// without mutating anything. Averaging this over uniform `z` gives the
    /// exact expected drift `(Y - U)/n - U/n`.
    pub fn delta_u_for_square(&self, z: u32) -> i64 {
        let mut delta = 0i64;
        let mut j = self.single_head[z as usize];
        while j != NONE {
            if !self.redundant[j as usize] {
                delta += 1;
            }
            j = self.single_next[j as usize];
        }
        if self.square_count[z as usize] == 1 && self.redundant[z as usize] {
            delta -= 1;
        }
        delta
    }

    /// True iff no vertex carries more than `omega` circles.
    pub fn well_behaved(&self, omega: u32) -> bool {
        self.max_circles <= omega
    }

    /// The counting certificate at round `t` with in-degree scale `mu`.
    pub fn certificate(&self, t: u64, mu: f64) -> Certificate {
        assert!(mu > 0.0);
        let lhs = self.counts.x as i64 - self.counts.u as i64 + self.counts.w as i64;
        let rhs = self.n as f64 / 2.0 - 3.0 * t as f64 / mu;
        Certificate {
            t,
            mu,
            lhs,
            rhs,
            matching_possible: lhs as f64 >= rhs,
        }
    }

    pub fn square_count_of(&self, v: u32) -> u32 {
        self.square_count[v as usize]
    }

    pub fn circle_count_of(&self, v: u32) -> u32 {
        self.circle_count[v as usize]
    }
}

impl RoundObserver for LowerBoundTracker {
    fn on_round(&mut self, _state: &ProcessState, arc: &Arc) -> Result<()> {
        self.observe(arc)
    }

    fn counts(&self) -> [u64; 5] {
        self.counts.as_array()
    }
}

/// Reference implementation recomputing every observable from scratch.
///
/// Works straight off the definitions with no shared code or state with the
/// incremental tracker; tests compare the two after every round.
pub mod brute {
    use super::Counts;
    use crate::process::Arc;
    use alloc::vec;

    /// Counts at time `t` (arcs with `round <= t` are considered).
    pub fn counts_at(n: u32, arcs: &[Arc], t: u64) -> Counts {
        let nu = n as usize;
        let mut square_rounds = vec![alloc::vec::Vec::new(); nu];
        let mut first_circle = vec![u32::MAX; nu];
        let mut circle_of_round = alloc::collections::BTreeMap::new();
        for arc in arcs.iter().filter(|a| a.round <= t) {
            square_rounds[arc.square as usize].push(arc.round);
            if square_rounds[arc.square as usize].len() == 1 {
                first_circle[arc.square as usize] = arc.circle;
            }
            circle_of_round.insert(arc.round, arc.circle);
        }
        let squares_after =
            |v: u32, s: u64| -> bool { square_rounds[v as usize].iter().any(|&r| r > s && r <= t) };
        let redundant = |j: usize| -> bool {
            if square_rounds[j].len() != 1 {
                return false;
            }
            squares_after(first_circle[j], square_rounds[j][0])
        };
        let mut c = Counts {
            x: 0,
            y: 0,
            u: 0,
            d: 0,
            w: 0,
        };
        for j in 0..nu {
            let k = square_rounds[j].len();
            if k >= 1 {
                c.x += 1;
            }
            if k == 1 {
                c.y += 1;
            }
            if redundant(j) {
                c.u += 1;
                if redundant(first_circle[j] as usize) {
                    c.w += 1;
                }
            }
            // Dangerous: j singly covered at t1 with circle on j2; exactly
            // one square landed on j2 after t1 (at t2), its circle went to
            // j3 outside {j, j2}, and j3 is square-free on (t2, t]. Squares
            // on j2 from before t1 are invisible to the chain.
            if k == 1 {
                let t1 = square_rounds[j][0];
                let j2 = first_circle[j];
                let post: alloc::vec::Vec<u64> = square_rounds[j2 as usize]
                    .iter()
                    .copied()
                    .filter(|&r| r > t1)
                    .collect();
                if post.len() == 1 {
                    let t2 = post[0];
                    let j3 = circle_of_round[&t2];
                    if j3 != j as u32 && j3 != j2 && !squares_after(j3, t2) {
                        c.d += 1;
                    }
                }
            }
        }
        c
    }
}
