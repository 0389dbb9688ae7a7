//! Resolved command configurations: JSON config file merged under CLI flags,
//! then validated. Flags always win over the file.

use std::path::Path;

use anyhow::Result;
use serde::{Deserialize, Serialize};

use crate::ConfigError;

pub fn load_file<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ConfigError(format!("reading {}: {e}", path.display())))?;
    let value =
        serde_json::from_str(&text).map_err(|e| ConfigError(format!("{}: {e}", path.display())))?;
    Ok(value)
}

/// Strategy selector shared by `simulate` and friends.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StrategyName {
    Warmup,
    Phased,
    Uniform,
    /// Full three-stage run: phased, warm-up continuation, clean-up.
    Pipeline,
}

impl std::str::FromStr for StrategyName {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "warmup" => Ok(Self::Warmup),
            "phased" => Ok(Self::Phased),
            "uniform" => Ok(Self::Uniform),
            "pipeline" => Ok(Self::Pipeline),
            other => Err(format!(
                "unknown strategy '{other}' (warmup|phased|uniform|pipeline)"
            )),
        }
    }
}

impl std::fmt::Display for StrategyName {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            Self::Warmup => "warmup",
            Self::Phased => "phased",
            Self::Uniform => "uniform",
            Self::Pipeline => "pipeline",
        };
        write!(f, "{name}")
    }
}

/// Fully resolved `simulate` run description; this is what gets hashed into
/// outputs.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SimulateConfig {
    pub strategy: StrategyName,
    pub n: u32,
    pub seeds: u32,
    pub seed_base: u64,
    /// Hard round cap (defaults to 3n).
    pub rounds: Option<u64>,
    /// Stop once `|U| <= frac * n`.
    pub stop_unsat_frac: Option<f64>,
    /// Phased: stop once this many phases complete. Pipeline: the phase
    /// count of its first stage.
    pub phases: Option<u32>,
    /// Pipeline: saturation the phased stage is designed to deliver.
    pub continuation_eps: Option<f64>,
    /// Pipeline: warm-up continuation runs until `|U| <= eps * n`.
    pub cleanup_eps: Option<f64>,
    pub sample_every: u64,
    pub compare_ode: bool,
    /// Tolerance for `--assert` on ODE deviation.
    pub tol: f64,
    pub export_arcs: bool,
}

impl SimulateConfig {
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(ConfigError(msg).into());
        if self.n == 0 || !self.n.is_multiple_of(2) {
            return fail(format!("n must be even and positive, got {}", self.n));
        }
        if self.seeds == 0 {
            return fail("seeds must be positive".into());
        }
        if let Some(f) = self.stop_unsat_frac {
            if !(0.0..=1.0).contains(&f) {
                return fail(format!("stop-unsat-frac must be in [0,1], got {f}"));
            }
        }
        if let Some(q) = self.phases {
            if q == 0 {
                return fail("phases must be positive when given".into());
            }
        }
        if self.tol <= 0.0 {
            return fail(format!("tol must be positive, got {}", self.tol));
        }
        if self.strategy == StrategyName::Uniform
            && self.rounds.is_none()
            && self.stop_unsat_frac.is_some()
        {
            return fail(
                "the uniform strategy builds no matching; use --rounds, not --stop-unsat-frac"
                    .into(),
            );
        }
        if !matches!(self.strategy, StrategyName::Phased | StrategyName::Pipeline)
            && self.phases.is_some()
        {
            return fail("--phases only applies to the phased strategy and the pipeline".into());
        }
        if self.strategy == StrategyName::Pipeline {
            if self.compare_ode {
                return fail("--compare-ode does not apply to the pipeline".into());
            }
            if self.rounds.is_some() || self.stop_unsat_frac.is_some() {
                return fail("the pipeline runs to a perfect matching; --rounds and --stop-unsat-frac do not apply".into());
            }
            for (name, eps) in [
                ("continuation-eps", self.continuation_eps),
                ("cleanup-eps", self.cleanup_eps),
            ] {
                if let Some(e) = eps {
                    if !(e > 0.0 && e <= 1.0) {
                        return fail(format!("{name} must be in (0, 1], got {e}"));
                    }
                }
            }
        } else if self.continuation_eps.is_some() || self.cleanup_eps.is_some() {
            return fail("--continuation-eps/--cleanup-eps only apply to the pipeline".into());
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BoundsConfig {
    pub k: u32,
    pub h: f64,
    pub alpha_tol: f64,
    pub half_step: bool,
}

impl BoundsConfig {
    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(ConfigError("k must be at least 1".into()).into());
        }
        if !(self.h > 0.0 && self.h <= 1e-2) {
            return Err(ConfigError(format!("h must be in (0, 1e-2], got {}", self.h)).into());
        }
        if self.alpha_tol <= 0.0 {
            return Err(ConfigError("alpha-tol must be positive".into()).into());
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LowerboundConfig {
    pub n: u32,
    pub seed: u64,
    /// In-degree scale; defaults to sqrt(n).
    pub mu: Option<f64>,
    /// Well-behavedness threshold; defaults to 2 sqrt(n).
    pub omega: Option<f64>,
    pub t_max_frac: f64,
    pub grid_frac: f64,
}

impl LowerboundConfig {
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(ConfigError(msg).into());
        if self.n == 0 || !self.n.is_multiple_of(2) {
            return fail(format!("n must be even and positive, got {}", self.n));
        }
        if !(self.t_max_frac > 0.0 && self.t_max_frac <= 3.0) {
            return fail(format!(
                "t-max-frac must be in (0, 3], got {}",
                self.t_max_frac
            ));
        }
        if !(self.grid_frac > 0.0 && self.grid_frac <= self.t_max_frac) {
            return fail(format!(
                "grid-frac must be in (0, t-max-frac], got {}",
                self.grid_frac
            ));
        }
        if let Some(mu) = self.mu {
            if mu <= 0.0 {
                return fail(format!("mu must be positive, got {mu}"));
            }
        }
        Ok(())
    }

    pub fn mu_value(&self) -> f64 {
        self.mu.unwrap_or_else(|| (self.n as f64).sqrt())
    }

    pub fn omega_value(&self) -> f64 {
        self.omega.unwrap_or_else(|| 2.0 * (self.n as f64).sqrt())
    }
}
