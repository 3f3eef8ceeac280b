use anyhow::{bail, Context, Result};
use serde::Deserialize;

use curveclose_core::solver::SolverConfig;

/// Runtime configuration assembled from defaults, an optional JSON config
/// file, and command-line overrides (flags win).
#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub resolution: usize,
    pub h_grid: usize,
    pub residual_tol: f64,
    pub k_residual_tol: f64,
    pub dedupe: f64,
    pub bisect_width: f64,
    pub fd_step: f64,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        let s = SolverConfig::default();
        RunConfig {
            resolution: s.resolution,
            h_grid: s.h_grid,
            residual_tol: s.residual_tol,
            k_residual_tol: s.k_residual_tol,
            dedupe: s.dedupe,
            bisect_width: s.bisect_width,
            fd_step: s.fd_step,
            seed: 0,
        }
    }
}

impl RunConfig {
    pub fn load(
        config_path: Option<&str>,
        resolution: Option<usize>,
        tol: Option<f64>,
        seed: Option<u64>,
    ) -> Result<Self> {
        let mut cfg = match config_path {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .with_context(|| format!("reading config {path}"))?;
                serde_json::from_str(&text).with_context(|| format!("parsing config {path}"))?
            }
            None => RunConfig::default(),
        };
        if let Some(n) = resolution {
            cfg.resolution = n;
        }
        if let Some(t) = tol {
            cfg.residual_tol = t;
            cfg.k_residual_tol = t.max(cfg.k_residual_tol);
        }
        if let Some(s) = seed {
            cfg.seed = s;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.resolution < 64 || !self.resolution.is_power_of_two() {
            bail!(
                "resolution must be a power of two >= 64, got {}",
                self.resolution
            );
        }
        for (name, v) in [
            ("residual_tol", self.residual_tol),
            ("k_residual_tol", self.k_residual_tol),
            ("dedupe", self.dedupe),
            ("bisect_width", self.bisect_width),
            ("fd_step", self.fd_step),
        ] {
            if !(v > 0.0) {
                bail!("{name} must be positive, got {v}");
            }
        }
        if self.h_grid < 2 {
            bail!("h_grid must be at least 2, got {}", self.h_grid);
        }
        Ok(())
    }

    pub fn solver(&self) -> SolverConfig {
        let mut s = SolverConfig::default();
        s.resolution = self.resolution;
        s.h_grid = self.h_grid;
        s.residual_tol = self.residual_tol;
        s.k_residual_tol = self.k_residual_tol;
        s.dedupe = self.dedupe;
        s.bisect_width = self.bisect_width;
        s.fd_step = self.fd_step;
        s
    }
}
