//! `semirandom verify`: ground-truth checks on an exported run.

use std::path::PathBuf;

use anyhow::Result;
use clap::Args;
use serde_json::json;

use semirandom_core::matching::{
    check_certificate, construct_s, is_perfect_matching, max_matching, Digraph, MAX_MATCHING_CAP,
};

use crate::io::read_numeric_csv;
use crate::{CmdOutcome, ConfigError};

#[derive(Args)]
pub struct VerifyArgs {
    /// Arc list CSV: round,square,circle.
    #[arg(long)]
    arcs: PathBuf,
    /// Matching CSV: u,v.
    #[arg(long)]
    matching: PathBuf,
    /// Vertex count (default: largest vertex + 1, rounded up to even).
    #[arg(long)]
    n: Option<u32>,
    /// Certificate in-degree scale (default sqrt(n)).
    #[arg(long)]
    mu: Option<f64>,
    /// Exit 4 unless the matching is perfect.
    #[arg(long)]
    assert: bool,
}

pub fn run(args: VerifyArgs) -> Result<CmdOutcome> {
    let arc_rows = read_numeric_csv(&args.arcs, 3)?;
    let matching_rows = read_numeric_csv(&args.matching, 2)?;

    let arcs: Vec<(u32, u32)> = arc_rows
        .iter()
        .map(|r| (r[1] as u32, r[2] as u32))
        .collect();
    let matching: Vec<(u32, u32)> = matching_rows
        .iter()
        .map(|r| (r[0] as u32, r[1] as u32))
        .collect();

    let max_vertex = arcs
        .iter()
        .flat_map(|&(u, v)| [u, v])
        .chain(matching.iter().flat_map(|&(u, v)| [u, v]))
        .max()
        .unwrap_or(0);
    let n = match args.n {
        Some(n) => {
            if max_vertex >= n {
                return Err(
                    ConfigError(format!("vertex {max_vertex} out of range for --n {n}")).into(),
                );
            }
            n
        }
        None => (max_vertex + 1).next_multiple_of(2),
    };

    let graph = Digraph::new(n, arcs)?;
    let simple = graph.is_simple_undirected();
    let perfect = is_perfect_matching(&graph, &matching);
    let mu = args.mu.unwrap_or_else(|| (n as f64).sqrt());

    let certificate_ok = perfect.then(|| {
        construct_s(&graph, &matching, mu)
            .map(|cert| check_certificate(&graph, &cert))
            .unwrap_or(false)
    });
    // Diagnostic for imperfect matchings on oracle-sized instances: what the
    // graph actually supports.
    let max_matching_size = (!perfect && n <= MAX_MATCHING_CAP)
        .then(|| max_matching(&graph, MAX_MATCHING_CAP).map(|m| m.len()))
        .transpose()?;

    let verdict = json!({
        "n": n,
        "arcs": graph.arc_count(),
        "matching_edges": matching.len(),
        "simple": simple,
        "perfect": perfect,
        "mu": mu,
        "certificate_ok": certificate_ok,
        "max_matching_size": max_matching_size,
    });
    println!("{}", serde_json::to_string_pretty(&verdict)?);

    if args.assert && !perfect {
        return Ok(CmdOutcome::AssertFailed("matching is not perfect".into()));
    }
    Ok(CmdOutcome::Ok)
}
