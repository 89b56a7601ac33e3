use serde::{Deserialize, Serialize};

use super::registry::PathRegistry;
use crate::error::{Error, Result};

/// Per-layer selection amplitudes; each layer sums to one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathAmplitudes {
    pub per_layer: Vec<Vec<f64>>,
}

impl PathAmplitudes {
    pub fn layer(&self, l: usize) -> &[f64] {
        &self.per_layer[l]
    }
}

/// `A_lp = √J_lp·e^{−γC_lp} / Σ_q √J_lq·e^{−γC_lq}`.
///
/// Evaluated in the log domain so large usage counts underflow gracefully
/// instead of producing 0/0.
pub fn path_amplitudes(registry: &PathRegistry) -> Result<PathAmplitudes> {
    registry.check_shape()?;
    let gamma = registry.gamma;
    let per_layer = registry
        .scores
        .iter()
        .zip(&registry.usage)
        .map(|(scores, usage)| {
            if scores.iter().any(|&j| !(j > 0.0 && j.is_finite())) {
                return Err(Error::Numeric("path score (must be positive and finite)"));
            }
            let logw: Vec<f64> = scores
                .iter()
                .zip(usage)
                .map(|(&j, &c)| 0.5 * j.ln() - gamma * c as f64)
                .collect();
            let max = logw.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let w: Vec<f64> = logw.iter().map(|lw| (lw - max).exp()).collect();
            let total: f64 = w.iter().sum();
            if !total.is_finite() || total <= 0.0 {
                return Err(Error::Numeric("path amplitude normalizer"));
            }
            Ok(w.into_iter().map(|x| x / total).collect())
        })
        .collect::<Result<_>>()?;
    Ok(PathAmplitudes { per_layer })
}

/// Indices of the `k_top` largest amplitudes per layer, ascending. Ties go
/// to the lower index.
pub fn select_top_k(amps: &PathAmplitudes, k_top: usize) -> Result<Vec<Vec<usize>>> {
    amps.per_layer
        .iter()
        .map(|layer| {
            if k_top == 0 || k_top > layer.len() {
                return Err(Error::param(
                    "k_top",
                    format!("{k_top} is not in 1..={}", layer.len()),
                ));
            }
            let mut order: Vec<usize> = (0..layer.len()).collect();
            order.sort_by(|&a, &b| layer[b].total_cmp(&layer[a]).then(a.cmp(&b)));
            order.truncate(k_top);
            order.sort_unstable();
            Ok(order)
        })
        .collect()
}
