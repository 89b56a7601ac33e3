use std::f64::consts::PI;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::config::QMetaConfig;
use crate::error::{Error, Result};

/// Per-path state carried across episodes: performance score `J`, usage
/// counter `C`, and the fixed rotation angles of each path.
///
/// Serializes to the JSON checkpoint used for warm starts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathRegistry {
    pub layers: usize,
    pub paths: usize,
    pub gamma: f64,
    pub eta: f64,
    pub scores: Vec<Vec<f64>>,
    pub usage: Vec<Vec<u64>>,
    /// `path_params[l][p]` has one angle per path qubit.
    pub path_params: Vec<Vec<Vec<f64>>>,
}

impl PathRegistry {
    /// Fresh registry: every score at `J0`, every counter at zero, path
    /// angles drawn uniformly from [−π, π) with `cfg.path_seed`.
    pub fn new(cfg: &QMetaConfig) -> Result<Self> {
        cfg.validate()?;
        let q = cfg.path_qubits();
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.path_seed);
        let path_params = (0..cfg.layers)
            .map(|_| {
                (0..cfg.paths)
                    .map(|_| (0..q).map(|_| rng.gen_range(-PI..PI)).collect())
                    .collect()
            })
            .collect();
        Ok(PathRegistry {
            layers: cfg.layers,
            paths: cfg.paths,
            gamma: cfg.gamma,
            eta: cfg.eta,
            scores: vec![vec![cfg.j0; cfg.paths]; cfg.layers],
            usage: vec![vec![0; cfg.paths]; cfg.layers],
            path_params,
        })
    }

    pub fn check_shape(&self) -> Result<()> {
        let ok = |lens: Vec<usize>| lens.len() == self.layers && lens.iter().all(|&n| n == self.paths);
        if !ok(self.scores.iter().map(Vec::len).collect())
            || !ok(self.usage.iter().map(Vec::len).collect())
            || !ok(self.path_params.iter().map(Vec::len).collect())
        {
            return Err(Error::param(
                "registry",
                format!("tables are not {}×{}", self.layers, self.paths),
            ));
        }
        Ok(())
    }

    /// Check that the registry fits `cfg`'s layout.
    pub fn check_compatible(&self, cfg: &QMetaConfig) -> Result<()> {
        self.check_shape()?;
        if self.layers != cfg.layers || self.paths != cfg.paths {
            return Err(Error::param(
                "registry",
                format!(
                    "registry is {}×{} but the configuration is {}×{}",
                    self.layers, self.paths, cfg.layers, cfg.paths
                ),
            ));
        }
        let q = cfg.path_qubits();
        if self.path_params.iter().flatten().any(|p| p.len() != q) {
            return Err(Error::param("path_params", format!("each path needs {q} angles")));
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let reg: PathRegistry = serde_json::from_str(text)?;
        reg.check_shape()?;
        Ok(reg)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_json()?).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }
}

/// Exponential moving average, `J ← η·J + (1−η)·observed`, elementwise.
pub fn update_scores(mut registry: PathRegistry, observed: &[Vec<f64>]) -> Result<PathRegistry> {
    let eta = registry.eta;
    if !(eta > 0.0 && eta < 1.0) {
        return Err(Error::param("eta", format!("{eta} is not in (0, 1)")));
    }
    if observed.len() != registry.layers || observed.iter().any(|r| r.len() != registry.paths) {
        return Err(Error::Shape {
            expected: registry.layers * registry.paths,
            actual: observed.iter().map(Vec::len).sum(),
        });
    }
    for (row, obs) in registry.scores.iter_mut().zip(observed) {
        for (j, o) in row.iter_mut().zip(obs) {
            *j = eta * *j + (1.0 - eta) * o;
        }
    }
    Ok(registry)
}
