//! `semirandom bounds`: the numerical constants from the ODE lab.

use std::path::PathBuf;

use anyhow::Result;
use clap::Args;
use serde_json::json;

use semirandom_core::ode::{compute_bounds, phase_cascade, BoundsOptions};

use crate::config::{load_file, BoundsConfig};
use crate::io::{config_hash, CsvBuilder, OutDir};
use crate::CmdOutcome;

#[derive(Args)]
pub struct BoundsArgs {
    /// Cascade depth (1100 reproduces the headline constant).
    #[arg(long)]
    k: Option<u32>,
    /// Integration step.
    #[arg(long)]
    h: Option<f64>,
    /// Bisection tolerance for alpha.
    #[arg(long)]
    alpha_tol: Option<f64>,
    /// Skip the h/2 convergence rerun.
    #[arg(long)]
    no_half_step: bool,
    /// Write a per-phase CSV (q, c_q, x, y).
    #[arg(long)]
    phases_csv: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    config: Option<PathBuf>,
}

pub fn run(args: BoundsArgs) -> Result<CmdOutcome> {
    let base: Option<BoundsConfig> = match &args.config {
        Some(path) => Some(load_file(path)?),
        None => None,
    };
    let cfg = BoundsConfig {
        k: args.k.or(base.as_ref().map(|b| b.k)).unwrap_or(1100),
        h: args.h.or(base.as_ref().map(|b| b.h)).unwrap_or(1e-6),
        alpha_tol: args
            .alpha_tol
            .or(base.as_ref().map(|b| b.alpha_tol))
            .unwrap_or(1e-9),
        half_step: !args.no_half_step && base.as_ref().map(|b| b.half_step).unwrap_or(true),
    };
    cfg.validate()?;
    let hash = config_hash(&cfg);
    let out = OutDir::new(args.out)?;

    let report = compute_bounds(&BoundsOptions {
        k: cfg.k,
        h: cfg.h,
        alpha_tol: cfg.alpha_tol,
        half_step_check: cfg.half_step,
    })?;

    if let Some(path) = &args.phases_csv {
        let cascade = phase_cascade(cfg.k, cfg.h, 0, 0)?;
        let mut csv = CsvBuilder::new(&hash, None, "q,c_q,x,y");
        for rec in &cascade.records {
            csv.row(format_args!(
                "{},{:.12},{:.12},{:.12}",
                rec.q, rec.c, rec.x, rec.y
            ));
        }
        std::fs::write(path, csv.finish())?;
    }

    let value = json!({
        "alpha": report.alpha,
        "beta": report.beta,
        "continuation_time": report.components.continuation_time,
        "beta_components": {
            "cascade": report.components.cascade_time,
            "continuation": report.components.continuation_time,
            "cleanup": report.components.cleanup_time,
        },
        "c_q": report.phase_times,
        "cascade_unsat": report.cascade_unsat,
        "warmup_only_time": report.warmup_only_time,
        "solver": { "h": report.h, "event_tol": report.event_tol, "alpha_tol": report.alpha_tol },
        "half_step_deltas": report.half_step.map(|d| json!({
            "cascade": d.cascade_time,
            "continuation": d.continuation_time,
            "warmup_only": d.warmup_only_time,
        })),
        "partial": cfg.k != 1100,
        "config_hash": hash,
    });
    out.write_json("bounds.json", &value)?;
    println!("{}", serde_json::to_string_pretty(&value)?);
    Ok(CmdOutcome::Ok)
}
