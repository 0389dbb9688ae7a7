//! Ground-truth matching verification.
//!
//! * [`is_perfect_matching`] — validity and perfection of a claimed matching;
//! * [`max_matching`] — exact maximum matching on general graphs via
//!   augmenting-path search with blossom contraction, O(V^3); capped to
//!   desk-scale instances;
//! * [`check_certificate`] / [`construct_s`] — approximate-perfect-matching
//!   certificates: a perfect matching on an induced subgraph that avoids
//!   high-in-degree vertices and misses few vertices.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::process::{Arc, EdgeSet};

const NONE: u32 = u32::MAX;

/// Arc list viewed as a directed graph (square -> circle).
#[derive(Clone, Debug)]
pub struct Digraph {
    n: u32,
    arcs: Vec<(u32, u32)>,
}

impl Digraph {
    pub fn new(n: u32, arcs: Vec<(u32, u32)>) -> Result<Self> {
        for &(u, v) in &arcs {
            if u >= n {
                return Err(Error::VertexOutOfRange { vertex: u, n });
            }
            if v >= n {
                return Err(Error::VertexOutOfRange { vertex: v, n });
            }
            if u == v {
                return Err(Error::SelfLoop { vertex: u });
            }
        }
        Ok(Self { n, arcs })
    }

    /// Includes every recorded arc, also the ones flagged unusable: in-degree
    /// counts and induced subgraphs concern the whole digraph.
    pub fn from_arcs(n: u32, arcs: &[Arc]) -> Result<Self> {
        Self::new(n, arcs.iter().map(|a| (a.square, a.circle)).collect())
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn arc_count(&self) -> u64 {
        self.arcs.len() as u64
    }

    pub fn arcs(&self) -> &[(u32, u32)] {
        &self.arcs
    }

    /// In-degree = number of circles on the vertex.
    pub fn in_degrees(&self) -> Vec<u32> {
        let mut deg = vec![0u32; self.n as usize];
        for &(_, v) in &self.arcs {
            deg[v as usize] += 1;
        }
        deg
    }

    /// True when no edge repeats as an undirected pair.
    pub fn is_simple_undirected(&self) -> bool {
        let mut seen = EdgeSet::with_capacity(self.arcs.len());
        self.arcs.iter().all(|&(u, v)| seen.insert(u, v))
    }

    fn edge_set(&self) -> EdgeSet {
        let mut set = EdgeSet::with_capacity(self.arcs.len());
        for &(u, v) in &self.arcs {
            set.insert(u, v);
        }
        set
    }

    fn adjacency(&self) -> Vec<Vec<u32>> {
        let mut adj = vec![Vec::new(); self.n as usize];
        for &(u, v) in &self.arcs {
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }
        adj
    }
}

/// True iff the pairs are vertex-disjoint existing edges saturating all `n`
/// vertices.
pub fn is_perfect_matching(graph: &Digraph, matching: &[(u32, u32)]) -> bool {
    let n = graph.n as usize;
    if matching.len() * 2 != n {
        return false;
    }
    let edges = graph.edge_set();
    let mut hit = vec![false; n];
    for &(u, v) in matching {
        if u >= graph.n || v >= graph.n || u == v || !edges.contains(u, v) {
            return false;
        }
        if hit[u as usize] || hit[v as usize] {
            return false;
        }
        hit[u as usize] = true;
        hit[v as usize] = true;
    }
    true
}

/// Default size cap for the exact oracle (O(V^3) wants desk-scale inputs).
pub const MAX_MATCHING_CAP: u32 = 2000;

/// Exact maximum matching via blossom contraction. Returns matched pairs.
pub fn max_matching(graph: &Digraph, cap: u32) -> Result<Vec<(u32, u32)>> {
    let n = graph.n as usize;
    if graph.n > cap {
        return Err(Error::OracleCapExceeded { n: graph.n, cap });
    }
    let adj = graph.adjacency();
    let mut mate = vec![NONE; n];

    // Cheap greedy seed cuts down augmenting-path searches.
    for u in 0..n {
        if mate[u] == NONE {
            for &v in &adj[u] {
                if mate[v as usize] == NONE && v as usize != u {
                    mate[u] = v;
                    mate[v as usize] = u as u32;
                    break;
                }
            }
        }
    }

    let mut parent = vec![NONE; n];
    let mut base: Vec<u32> = (0..n as u32).collect();

    for root in 0..n {
        if mate[root] != NONE {
            continue;
        }
        // BFS for an augmenting path from this free root.
        for i in 0..n {
            parent[i] = NONE;
            base[i] = i as u32;
        }
        let mut used = vec![false; n];
        used[root] = true;
        let mut queue = VecDeque::new();
        queue.push_back(root as u32);
        let mut finish = NONE;

        'bfs: while let Some(v) = queue.pop_front() {
            for &to in &adj[v as usize] {
                if base[v as usize] == base[to as usize] || mate[v as usize] == to {
                    continue;
                }
                if to as usize == root
                    || (mate[to as usize] != NONE && parent[mate[to as usize] as usize] != NONE)
                {
                    // Odd cycle: contract the blossom at the common ancestor.
                    let cur = lca(&mate, &parent, &base, v, to);
                    let mut in_blossom = vec![false; n];
                    mark_path(&mate, &mut parent, &base, &mut in_blossom, v, cur, to);
                    mark_path(&mate, &mut parent, &base, &mut in_blossom, to, cur, v);
                    for i in 0..n {
                        if in_blossom[base[i] as usize] {
                            base[i] = cur;
                            if !used[i] {
                                used[i] = true;
                                queue.push_back(i as u32);
                            }
                        }
                    }
                } else if parent[to as usize] == NONE {
                    parent[to as usize] = v;
                    if mate[to as usize] == NONE {
                        finish = to;
                        break 'bfs;
                    }
                    let m = mate[to as usize] as usize;
                    used[m] = true;
                    queue.push_back(m as u32);
                }
            }
        }

        if finish != NONE {
            // Flip matched/unmatched along root..finish.
            let mut v = finish;
            while v != NONE {
                let pv = parent[v as usize];
                let next = if pv == NONE { NONE } else { mate[pv as usize] };
                mate[v as usize] = pv;
                if pv != NONE {
                    mate[pv as usize] = v;
                }
                v = next;
            }
        }
    }

    let pairs = mate
        .iter()
        .enumerate()
        .filter(|&(v, &m)| m != NONE && (v as u32) < m)
        .map(|(v, &m)| (v as u32, m))
        .collect();
    Ok(pairs)
}

fn lca(mate: &[u32], parent: &[u32], base: &[u32], mut a: u32, mut b: u32) -> u32 {
    let mut visited = vec![false; base.len()];
    loop {
        a = base[a as usize];
        visited[a as usize] = true;
        if mate[a as usize] == NONE {
            break;
        }
        a = parent[mate[a as usize] as usize];
    }
    loop {
        b = base[b as usize];
        if visited[b as usize] {
            return b;
        }
        b = parent[mate[b as usize] as usize];
    }
}

fn mark_path(
    mate: &[u32],
    parent: &mut [u32],
    base: &[u32],
    in_blossom: &mut [bool],
    mut v: u32,
    stop: u32,
    mut child: u32,
) {
    while base[v as usize] != stop {
        in_blossom[base[v as usize] as usize] = true;
        in_blossom[base[mate[v as usize] as usize] as usize] = true;
        parent[v as usize] = child;
        child = mate[v as usize];
        v = parent[child as usize];
    }
}

/// A subset `S`, a matching on `D[S]`, and the parameters it certifies.
#[derive(Clone, Debug)]
pub struct ApproxPmCertificate {
    /// Vertices of `S`, strictly increasing.
    pub subset: Vec<u32>,
    pub matching: Vec<(u32, u32)>,
    pub mu: f64,
    pub delta: f64,
}

/// Verifies the three conditions exactly: the matching is perfect on `D[S]`,
/// every vertex of `S` has in-degree at most `mu`, and
/// `|S| >= n - 2 m delta`.
pub fn check_certificate(graph: &Digraph, cert: &ApproxPmCertificate) -> bool {
    let n = graph.n as usize;
    let mut in_s = vec![false; n];
    for &v in &cert.subset {
        if v >= graph.n || in_s[v as usize] {
            return false;
        }
        in_s[v as usize] = true;
    }
    // Perfect matching on the induced subgraph.
    if cert.matching.len() * 2 != cert.subset.len() {
        return false;
    }
    let edges = graph.edge_set();
    let mut hit = vec![false; n];
    for &(u, v) in &cert.matching {
        if u >= graph.n || v >= graph.n || u == v {
            return false;
        }
        if !in_s[u as usize] || !in_s[v as usize] {
            return false;
        }
        if hit[u as usize] || hit[v as usize] || !edges.contains(u, v) {
            return false;
        }
        hit[u as usize] = true;
        hit[v as usize] = true;
    }
    // In-degree bound on S.
    let deg = graph.in_degrees();
    if cert
        .subset
        .iter()
        .any(|&v| deg[v as usize] as f64 > cert.mu)
    {
        return false;
    }
    // Size bound.
    cert.subset.len() as f64 >= graph.n as f64 - 2.0 * graph.arc_count() as f64 * cert.delta
}

/// Builds the canonical certificate from a perfect matching: drop the
/// vertices with in-degree above `mu` and the mates this isolates, keep the
/// rest. The result always satisfies [`check_certificate`] with
/// `delta = 1/mu`.
pub fn construct_s(
    graph: &Digraph,
    matching: &[(u32, u32)],
    mu: f64,
) -> Result<ApproxPmCertificate> {
    assert!(mu > 0.0);
    if !is_perfect_matching(graph, matching) {
        return Err(Error::StateCorruption(
            "construct_s needs a perfect matching",
        ));
    }
    let n = graph.n as usize;
    let deg = graph.in_degrees();
    let mut mate = vec![NONE; n];
    for &(u, v) in matching {
        mate[u as usize] = v;
        mate[v as usize] = u;
    }
    let heavy: Vec<bool> = deg.iter().map(|&d| d as f64 > mu).collect();
    let mut dropped = vec![false; n];
    for v in 0..n {
        if heavy[v] {
            dropped[v] = true;
            // The mate loses its partner; unless it is heavy itself it
            // becomes isolated in the matching and leaves S too.
            dropped[mate[v] as usize] = true;
        }
    }
    let subset: Vec<u32> = (0..n as u32).filter(|&v| !dropped[v as usize]).collect();
    let kept: Vec<(u32, u32)> = matching
        .iter()
        .copied()
        .filter(|&(u, v)| !dropped[u as usize] && !dropped[v as usize])
        .collect();
    Ok(ApproxPmCertificate {
        subset,
        matching: kept,
        mu,
        delta: 1.0 / mu,
    })
}
