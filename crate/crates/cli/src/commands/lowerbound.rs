//! `semirandom lowerbound`: certificate sweep along a uniform-circle run.

use std::path::PathBuf;

use anyhow::Result;
use clap::Args;
use serde_json::json;

use semirandom_core::observables::LowerBoundTracker;
use semirandom_core::process::{ProcessConfig, ProcessState};
use semirandom_core::rng::GENERATOR_NAME;
use semirandom_core::strategies::UniformCircleStrategy;

use crate::config::{load_file, LowerboundConfig};
use crate::io::{config_hash, git_describe, timestamp, CsvBuilder, OutDir};
use crate::CmdOutcome;

#[derive(Args)]
pub struct LowerboundArgs {
    #[arg(long)]
    n: Option<u32>,
    #[arg(long)]
    seed: Option<u64>,
    /// In-degree scale of the certificate (default sqrt(n)).
    #[arg(long)]
    mu: Option<f64>,
    /// Well-behavedness threshold (default 2 sqrt(n)).
    #[arg(long)]
    omega: Option<f64>,
    /// Sweep until t = frac * n.
    #[arg(long)]
    t_max_frac: Option<f64>,
    /// Evaluate the certificate every frac * n rounds.
    #[arg(long)]
    grid_frac: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    config: Option<PathBuf>,
    /// Exit 4 unless a flip point was found.
    #[arg(long)]
    assert: bool,
}

pub fn run(args: LowerboundArgs) -> Result<CmdOutcome> {
    let base: Option<LowerboundConfig> = match &args.config {
        Some(path) => Some(load_file(path)?),
        None => None,
    };
    let cfg = LowerboundConfig {
        n: args
            .n
            .or(base.as_ref().map(|b| b.n))
            .ok_or_else(|| crate::ConfigError("--n is required".into()))?,
        seed: args.seed.or(base.as_ref().map(|b| b.seed)).unwrap_or(0),
        mu: args.mu.or(base.as_ref().and_then(|b| b.mu)),
        omega: args.omega.or(base.as_ref().and_then(|b| b.omega)),
        t_max_frac: args
            .t_max_frac
            .or(base.as_ref().map(|b| b.t_max_frac))
            .unwrap_or(1.0),
        grid_frac: args
            .grid_frac
            .or(base.as_ref().map(|b| b.grid_frac))
            .unwrap_or(0.01),
    };
    cfg.validate()?;
    let hash = config_hash(&cfg);
    let out = OutDir::new(args.out)?;

    let n = cfg.n;
    let mu = cfg.mu_value();
    let omega = cfg.omega_value();
    let (mut state, mut rng) =
        ProcessState::new_run(n, cfg.seed, ProcessConfig { keep_arcs: false })?;
    let mut tracker = LowerBoundTracker::new(n);
    let mut strategy = UniformCircleStrategy;

    let t_max = (cfg.t_max_frac * n as f64) as u64;
    let stride = ((cfg.grid_frac * n as f64) as u64).max(1);

    let mut csv = CsvBuilder::new(
        &hash,
        Some(cfg.seed),
        "t_frac,x,u,w,lhs,rhs,matching_possible",
    );
    let mut flip: Option<(u64, semirandom_core::observables::Certificate)> = None;
    let mut emit = |t: u64, tracker: &LowerBoundTracker, flip: &mut Option<_>| {
        let cert = tracker.certificate(t, mu);
        let c = tracker.counts();
        let nf = n as f64;
        csv.row(format_args!(
            "{:.6},{:.6},{:.6},{:.6},{},{:.3},{}",
            t as f64 / nf,
            c.x as f64 / nf,
            c.u as f64 / nf,
            c.w as f64 / nf,
            cert.lhs,
            cert.rhs,
            cert.matching_possible
        ));
        if flip.is_none() && cert.matching_possible {
            *flip = Some((t, cert));
        }
    };

    emit(0, &tracker, &mut flip);
    while state.step() < t_max {
        let arc = state.play_round(&mut strategy, &mut rng)?;
        tracker.observe(&arc)?;
        if state.step() % stride == 0 {
            emit(state.step(), &tracker, &mut flip);
        }
    }
    if state.step() % stride != 0 {
        emit(state.step(), &tracker, &mut flip);
    }

    out.write_text(&format!("certificate_seed{}.csv", cfg.seed), &csv.finish())?;
    out.write_json(
        &format!("meta_seed{}.json", cfg.seed),
        &json!({
            "n": n,
            "seed": cfg.seed,
            "strategy": "uniform",
            "generator": GENERATOR_NAME,
            "git_describe": git_describe(),
            "config_hash": hash,
            "timestamp": timestamp(),
        }),
    )?;

    let small_n_warning = (n < 100_000).then(|| {
        format!(
            "n = {n} is small: the certificate flip point fluctuates at the O(n^-1/2) scale; \
             expect a wide flip band"
        )
    });
    let summary = json!({
        "config": cfg,
        "config_hash": hash,
        "mu": mu,
        "omega": omega,
        "well_behaved": tracker.well_behaved(omega as u32),
        "max_circles": tracker.max_circle_count(),
        "flip": flip.as_ref().map(|(t, cert)| json!({
            "t": t,
            "t_frac": *t as f64 / n as f64,
            "lhs": cert.lhs,
            "rhs": cert.rhs,
            "mu": cert.mu,
            "omega": omega,
            "matching_possible": cert.matching_possible,
        })),
        "small_n_warning": small_n_warning,
    });
    out.write_json("summary.json", &summary)?;
    println!("{}", serde_json::to_string_pretty(&summary)?);

    if args.assert && flip.is_none() {
        return Ok(CmdOutcome::AssertFailed(
            "no certificate flip in the sweep range".into(),
        ));
    }
    Ok(CmdOutcome::Ok)
}
