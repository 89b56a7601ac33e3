use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::model::ChannelSet;
use super::phase::PhaseVector;
use crate::error::{Error, Result};

/// Per-user transmit power and receiver noise power, both in watts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinkBudget {
    pub tx_power: Vec<f64>,
    pub noise_power: f64,
}

impl LinkBudget {
    pub fn new(tx_power: Vec<f64>, noise_power: f64) -> Result<Self> {
        if tx_power.iter().any(|&p| !(p > 0.0 && p.is_finite())) {
            return Err(Error::param("tx_power", "every user power must be positive"));
        }
        if !(noise_power > 0.0 && noise_power.is_finite()) {
            return Err(Error::param("noise_power", "must be positive"));
        }
        Ok(LinkBudget {
            tx_power,
            noise_power,
        })
    }

    /// Same power for `users` users.
    pub fn uniform(users: usize, tx_power: f64, noise_power: f64) -> Result<Self> {
        Self::new(vec![tx_power; users], noise_power)
    }
}

pub fn dbm_to_watts(dbm: f64) -> f64 {
    10f64.powf((dbm - 30.0) / 10.0)
}

/// Weights of the rate and energy terms in the objective.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ObjectiveWeights {
    pub alpha1: f64,
    pub alpha2: f64,
}

impl Default for ObjectiveWeights {
    fn default() -> Self {
        ObjectiveWeights {
            alpha1: 1.0,
            alpha2: 0.1,
        }
    }
}

/// Effective channel of user `k` at the AP:
/// `h_ris_apᴴ · C · diag(e^{jφ}) · h_ue_ris[k]`, a Q-length vector.
pub fn effective_channel(chs: &ChannelSet, phases: &PhaseVector, k: usize) -> Result<Vec<Complex64>> {
    let n = chs.n_elements();
    if phases.len() != n {
        return Err(Error::Shape {
            expected: n,
            actual: phases.len(),
        });
    }
    let h_ue = chs.h_ue_ris.get(k).ok_or(Error::Shape {
        expected: chs.n_users(),
        actual: k,
    })?;
    if h_ue.len() != n || chs.h_ris_ap.len() != n {
        return Err(Error::Shape {
            expected: n,
            actual: h_ue.len().min(chs.h_ris_ap.len()),
        });
    }
    let reflected: Vec<Complex64> = h_ue
        .iter()
        .zip(phases.as_slice())
        .map(|(h, &phi)| h * Complex64::from_polar(1.0, phi))
        .collect();
    let coupled = chs.coupling.apply(&reflected);
    let mut out = vec![Complex64::new(0.0, 0.0); chs.n_antennas()];
    for (row, x) in chs.h_ris_ap.iter().zip(&coupled) {
        for (o, g) in out.iter_mut().zip(row) {
            *o += g.conj() * x;
        }
    }
    Ok(out)
}

/// ‖h_k‖² for every user.
pub fn user_gains(chs: &ChannelSet, phases: &PhaseVector) -> Result<Vec<f64>> {
    (0..chs.n_users())
        .map(|k| Ok(effective_channel(chs, phases, k)?.iter().map(|h| h.norm_sqr()).sum()))
        .collect()
}

fn sinr_from_gains(gains: &[f64], budget: &LinkBudget, k: usize) -> f64 {
    let signal = gains[k] * budget.tx_power[k];
    let interference: f64 = gains
        .iter()
        .zip(&budget.tx_power)
        .enumerate()
        .filter(|&(i, _)| i != k)
        .map(|(_, (g, p))| g * p)
        .sum();
    signal / (interference + budget.noise_power)
}

fn check_budget(chs: &ChannelSet, budget: &LinkBudget) -> Result<()> {
    if budget.tx_power.len() != chs.n_users() {
        return Err(Error::Shape {
            expected: chs.n_users(),
            actual: budget.tx_power.len(),
        });
    }
    Ok(())
}

pub fn sinr(chs: &ChannelSet, phases: &PhaseVector, budget: &LinkBudget, k: usize) -> Result<f64> {
    check_budget(chs, budget)?;
    let gains = user_gains(chs, phases)?;
    if k >= gains.len() {
        return Err(Error::Shape {
            expected: gains.len(),
            actual: k,
        });
    }
    Ok(sinr_from_gains(&gains, budget, k))
}

/// Σ_k log₂(1 + SINR_k) in bps/Hz.
pub fn spectral_efficiency(chs: &ChannelSet, phases: &PhaseVector, budget: &LinkBudget) -> Result<f64> {
    check_budget(chs, budget)?;
    let gains = user_gains(chs, phases)?;
    Ok(se_from_gains(&gains, budget))
}

pub(crate) fn se_from_gains(gains: &[f64], budget: &LinkBudget) -> f64 {
    (0..gains.len())
        .map(|k| (1.0 + sinr_from_gains(gains, budget, k)).log2())
        .sum()
}

/// Mean of `1 − cos φ_n`; 0 for all-zero phases, 2 for all-π.
pub fn energy_cost(phases: &PhaseVector) -> f64 {
    if phases.is_empty() {
        return 0.0;
    }
    phases.as_slice().iter().map(|p| 1.0 - p.cos()).sum::<f64>() / phases.len() as f64
}

/// Spectral efficiency, energy cost and the weighted objective together.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub spectral_efficiency: f64,
    pub energy: f64,
    pub objective: f64,
}

pub fn evaluate(
    chs: &ChannelSet,
    phases: &PhaseVector,
    budget: &LinkBudget,
    weights: ObjectiveWeights,
) -> Result<Evaluation> {
    let se = spectral_efficiency(chs, phases, budget)?;
    let energy = energy_cost(phases);
    Ok(Evaluation {
        spectral_efficiency: se,
        energy,
        objective: weights.alpha1 * se - weights.alpha2 * energy,
    })
}

/// `α₁·SE − α₂·E`.
pub fn objective(
    chs: &ChannelSet,
    phases: &PhaseVector,
    budget: &LinkBudget,
    weights: ObjectiveWeights,
) -> Result<f64> {
    Ok(evaluate(chs, phases, budget, weights)?.objective)
}
