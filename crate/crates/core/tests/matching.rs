//! Matching oracle against exhaustive search, and certificate round trips on
//! simulated runs.

use semirandom_core::matching::{
    check_certificate, construct_s, is_perfect_matching, max_matching, Digraph, MAX_MATCHING_CAP,
};
use semirandom_core::process::ProcessConfig;
use semirandom_core::strategies::{upper_bound_pipeline, PipelineConfig};
use semirandom_core::GameRng;

/// Exhaustive maximum-matching size by branching on the lowest-index free
/// vertex, memoized on the free-vertex bitmask. Independent of the blossom
/// path entirely.
fn brute_matching_size(n: u32, edges: &[(u32, u32)]) -> u32 {
    use std::collections::HashMap;
    let mut adj = vec![0u64; n as usize];
    for &(u, v) in edges {
        adj[u as usize] |= 1 << v;
        adj[v as usize] |= 1 << u;
    }
    fn rec(mask: u64, adj: &[u64], memo: &mut HashMap<u64, u32>) -> u32 {
        if mask == 0 {
            return 0;
        }
        if let Some(&v) = memo.get(&mask) {
            return v;
        }
        let v = mask.trailing_zeros() as usize;
        let rest = mask & !(1 << v);
        let mut best = rec(rest, adj, memo); // leave v unmatched
        let mut nbrs = adj[v] & rest;
        while nbrs != 0 {
            let u = nbrs.trailing_zeros();
            nbrs &= nbrs - 1;
            best = best.max(1 + rec(rest & !(1 << u), adj, memo));
        }
        memo.insert(mask, best);
        best
    }
    let mut memo = HashMap::new();
    rec((1u64 << n) - 1, &adj, &mut memo)
}

fn random_graph(rng: &mut GameRng, n: u32, edge_prob_percent: u64) -> Vec<(u32, u32)> {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.below(100) < edge_prob_percent {
                edges.push((u, v));
            }
        }
    }
    edges
}

#[test]
fn blossom_equals_exhaustive_on_random_small_graphs() {
    let mut rng = GameRng::new(2024);
    for trial in 0..200 {
        let n = 2 + rng.below_u32(11); // 2..=12
        let p = 10 + rng.below(80);
        let edges = random_graph(&mut rng, n, p);
        let g = Digraph::new(n, edges.clone()).unwrap();
        let ours = max_matching(&g, MAX_MATCHING_CAP).unwrap().len() as u32;
        let brute = brute_matching_size(n, &edges);
        assert_eq!(ours, brute, "trial {trial}: n={n}, edges={edges:?}");
    }
}

#[test]
fn planted_perfect_matchings_are_found() {
    // Plant a perfect matching among noise edges; the oracle must reach n/2.
    let mut rng = GameRng::new(55);
    for _ in 0..20 {
        let n = 50u32;
        let mut edges = Vec::new();
        // Random planted pairing via a shuffled identity.
        let mut perm: Vec<u32> = (0..n).collect();
        for i in (1..n as usize).rev() {
            let j = rng.below((i + 1) as u64) as usize;
            perm.swap(i, j);
        }
        for i in (0..n as usize).step_by(2) {
            edges.push((perm[i], perm[i + 1]));
        }
        for _ in 0..40 {
            let u = rng.below_u32(n);
            let v = rng.below_u32(n);
            if u != v && !edges.contains(&(u.min(v), u.max(v))) {
                edges.push((u.min(v), u.max(v)));
            }
        }
        let g = Digraph::new(n, edges).unwrap();
        let m = max_matching(&g, MAX_MATCHING_CAP).unwrap();
        assert_eq!(m.len() as u32, n / 2);
        assert!(is_perfect_matching(&g, &m));
    }
}

#[test]
fn pipeline_output_is_certified_perfect() {
    let cfg = PipelineConfig::desk(10, 1e-2, 1e-2);
    let (state, report) =
        upper_bound_pipeline(400, 123, &cfg, ProcessConfig { keep_arcs: true }).unwrap();
    assert!(report.perfect);
    let g = Digraph::from_arcs(400, state.arcs()).unwrap();
    assert!(g.is_simple_undirected());
    let matching = state.matching_pairs();
    assert!(is_perfect_matching(&g, &matching));
    // The exact oracle agrees that n/2 is attainable.
    let m = max_matching(&g, MAX_MATCHING_CAP).unwrap();
    assert_eq!(m.len(), 200);
}

#[test]
fn constructed_certificates_verify_on_simulated_runs() {
    let n = 200u32;
    let mu = (n as f64).sqrt();
    for seed in 0..10u64 {
        let cfg = PipelineConfig::desk(8, 1e-2, 1e-2);
        let (state, report) =
            upper_bound_pipeline(n, seed, &cfg, ProcessConfig { keep_arcs: true }).unwrap();
        assert!(report.perfect, "seed {seed}");
        let g = Digraph::from_arcs(n, state.arcs()).unwrap();
        let matching = state.matching_pairs();
        let cert = construct_s(&g, &matching, mu).unwrap();
        assert!(check_certificate(&g, &cert), "seed {seed}");
        assert!(
            cert.subset.len() as f64 >= n as f64 - 2.0 * g.arc_count() as f64 / mu,
            "seed {seed}: subset too small"
        );
    }
}
