//! Classical reference optimizers on the same objective.
//!
//! All three return a [`BaselineResult`] whose `trace` holds the objective
//! after each accepted iteration (or once, for random phases), so callers
//! can check monotonicity.

use std::f64::consts::TAU;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::channel::{
    energy_cost, quantize_phases, se_from_gains, user_gains, wrap_phase, ChannelSet, LinkBudget,
    ObjectiveWeights, PhaseVector,
};
use crate::error::{Error, Result};

/// Central finite-difference step in radians.
pub const FD_STEP: f64 = 1e-4;
/// Phase grid used by each coordinate update of alternating optimization.
pub const AO_GRID: usize = 64;
/// Backtracking halvings tried per gradient step before giving up on it.
const MAX_HALVINGS: usize = 40;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaselineResult {
    pub phases: PhaseVector,
    pub objective: f64,
    pub iterations: usize,
    pub wall_time: f64,
    pub trace: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Baseline {
    Random,
    Gradient,
    Ao,
}

impl Baseline {
    pub fn label(&self) -> &'static str {
        match self {
            Baseline::Random => "random",
            Baseline::Gradient => "gradient",
            Baseline::Ao => "ao",
        }
    }

    pub fn parse(name: &str) -> Option<Baseline> {
        match name.trim().to_ascii_lowercase().as_str() {
            "random" => Some(Baseline::Random),
            "gradient" => Some(Baseline::Gradient),
            "ao" => Some(Baseline::Ao),
            _ => None,
        }
    }
}

struct Objective<'a> {
    chs: &'a ChannelSet,
    budget: &'a LinkBudget,
    weights: ObjectiveWeights,
}

impl Objective<'_> {
    fn eval(&self, phases: &[f64]) -> Result<f64> {
        let pv = PhaseVector::new(phases.to_vec());
        let gains = user_gains(self.chs, &pv)?;
        let value = self.weights.alpha1 * se_from_gains(&gains, self.budget)
            - self.weights.alpha2 * energy_cost(&pv);
        if value.is_finite() {
            Ok(value)
        } else {
            Err(Error::Numeric("objective"))
        }
    }
}

fn finish(
    obj: &Objective<'_>,
    phases: Vec<f64>,
    bits: Option<u32>,
    iterations: usize,
    trace: Vec<f64>,
    clock: Instant,
) -> Result<BaselineResult> {
    let mut pv = PhaseVector::new(phases);
    if let Some(b) = bits {
        pv = quantize_phases(&pv, b)?;
    }
    let objective = obj.eval(pv.as_slice())?;
    Ok(BaselineResult {
        phases: pv,
        objective,
        iterations,
        wall_time: clock.elapsed().as_secs_f64(),
        trace,
    })
}

/// Uniform iid phases on [0, 2π), scored once.
pub fn random_phases(
    chs: &ChannelSet,
    budget: &LinkBudget,
    weights: ObjectiveWeights,
    bits: Option<u32>,
    seed: u64,
) -> Result<BaselineResult> {
    let clock = Instant::now();
    let n = chs.n_elements();
    if n == 0 {
        return Err(Error::param("n_elements", "must be at least 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let phases: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..TAU)).collect();
    let obj = Objective { chs, budget, weights };
    let value = obj.eval(&phases)?;
    finish(&obj, phases, bits, 0, vec![value], clock)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GradientSettings {
    pub steps: usize,
    /// Initial step size in radians per unit gradient.
    pub lr: f64,
}

impl Default for GradientSettings {
    fn default() -> Self {
        GradientSettings { steps: 60, lr: 1.0 }
    }
}

/// Finite-difference gradient ascent from a seeded random start.
///
/// Each step tries `φ + lr·∇f`. A step that lowers the objective is
/// rejected and `lr` halved until one is accepted; after an accepted step
/// `lr` grows by 1.5×. The accepted trace is therefore non-decreasing.
pub fn gradient_ascent(
    chs: &ChannelSet,
    budget: &LinkBudget,
    weights: ObjectiveWeights,
    settings: GradientSettings,
    bits: Option<u32>,
    seed: u64,
) -> Result<BaselineResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let start: Vec<f64> = (0..chs.n_elements()).map(|_| rng.gen_range(0.0..TAU)).collect();
    gradient_ascent_from(chs, budget, weights, settings, bits, start)
}

/// [`gradient_ascent`] from a given starting point.
pub fn gradient_ascent_from(
    chs: &ChannelSet,
    budget: &LinkBudget,
    weights: ObjectiveWeights,
    settings: GradientSettings,
    bits: Option<u32>,
    start: Vec<f64>,
) -> Result<BaselineResult> {
    let clock = Instant::now();
    if settings.steps == 0 {
        return Err(Error::param("steps", "must be at least 1"));
    }
    if !(settings.lr > 0.0 && settings.lr.is_finite()) {
        return Err(Error::param("lr", "must be positive"));
    }
    if start.len() != chs.n_elements() {
        return Err(Error::Shape {
            expected: chs.n_elements(),
            actual: start.len(),
        });
    }
    let obj = Objective { chs, budget, weights };
    let mut phases = start;
    let mut value = obj.eval(&phases)?;
    let mut lr = settings.lr;
    let mut trace = vec![value];

    let mut probe = phases.clone();
    for _ in 0..settings.steps {
        let mut grad = vec![0.0; phases.len()];
        for n in 0..phases.len() {
            probe[n] = phases[n] + FD_STEP;
            let up = obj.eval(&probe)?;
            probe[n] = phases[n] - FD_STEP;
            let down = obj.eval(&probe)?;
            probe[n] = phases[n];
            grad[n] = (up - down) / (2.0 * FD_STEP);
        }
        if grad.iter().all(|g| g.abs() < 1e-12) {
            break;
        }
        let mut accepted = false;
        for _ in 0..MAX_HALVINGS {
            let candidate: Vec<f64> = phases
                .iter()
                .zip(&grad)
                .map(|(p, g)| wrap_phase(p + lr * g))
                .collect();
            let cand_value = obj.eval(&candidate)?;
            if cand_value >= value {
                phases = candidate;
                value = cand_value;
                accepted = true;
                break;
            }
            lr *= 0.5;
        }
        if !accepted {
            break;
        }
        probe.copy_from_slice(&phases);
        trace.push(value);
        lr *= 1.5;
    }
    let iterations = trace.len() - 1;
    finish(&obj, phases, bits, iterations, trace, clock)
}

/// Coordinate sweeps from all-zero phases: each element in turn is set to
/// the best point of a 64-level grid (keeping its current value if that is
/// better), all others held fixed. `trace` records the objective after
/// every coordinate update.
pub fn alternating_opt(
    chs: &ChannelSet,
    budget: &LinkBudget,
    weights: ObjectiveWeights,
    sweeps: usize,
    bits: Option<u32>,
) -> Result<BaselineResult> {
    let clock = Instant::now();
    if sweeps == 0 {
        return Err(Error::param("sweeps", "must be at least 1"));
    }
    let obj = Objective { chs, budget, weights };
    let mut phases = vec![0.0; chs.n_elements()];
    let mut value = obj.eval(&phases)?;
    let mut trace = vec![value];
    for _ in 0..sweeps {
        for n in 0..phases.len() {
            let current = phases[n];
            let mut best = (value, current);
            for g in 0..AO_GRID {
                phases[n] = g as f64 * TAU / AO_GRID as f64;
                let v = obj.eval(&phases)?;
                if v > best.0 {
                    best = (v, phases[n]);
                }
            }
            phases[n] = best.1;
            value = best.0;
            trace.push(value);
        }
    }
    finish(&obj, phases, bits, sweeps, trace, clock)
}
