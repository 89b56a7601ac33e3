use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::config::QMetaConfig;
use super::features::encode_scenario;
use super::passes::{build_active_superposition, evolve, extract_phases, scoring_pass};
use super::registry::{update_scores, PathRegistry};
use super::selection::{path_amplitudes, select_top_k};
use crate::channel::{evaluate, quantize_phases, ChannelSet, LinkBudget, PhaseVector};
use crate::error::Result;
use crate::quantum::{census, GateCensus};

/// Observed scores are floored here before the EMA so `J` stays strictly
/// positive even when the objective of a trial goes negative.
pub const SCORE_FLOOR: f64 = 1e-6;

/// One row of benchmark output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpisodeRecord {
    pub method: String,
    pub seed: u64,
    pub episode: usize,
    pub spectral_efficiency: f64,
    pub objective: f64,
    pub energy: f64,
    /// Selected path indices per layer; empty for classical baselines.
    pub selected_paths: Vec<Vec<usize>>,
    pub latency_ms: f64,
}

/// Instrumentation gathered while running one episode.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PassTrace {
    /// Ids of every state the scoring pass created or touched.
    pub scoring_states: Vec<u64>,
    /// Ids of every state the inference pass created or touched.
    pub inference_states: Vec<u64>,
    pub scoring_census: GateCensus,
    /// Census of encode → superposition → evolution → readout.
    pub inference_census: GateCensus,
    /// Expectation evaluations performed while evolving (must be zero).
    pub evolve_expectations: u64,
    /// Weighted-sum norms before renormalization, one per layer.
    pub pre_norms: Vec<f64>,
}

impl PassTrace {
    /// True when no state id appears in both passes.
    pub fn passes_disjoint(&self) -> bool {
        // both lists are sorted
        let (mut i, mut j) = (0, 0);
        while i < self.scoring_states.len() && j < self.inference_states.len() {
            match self.scoring_states[i].cmp(&self.inference_states[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return false,
            }
        }
        true
    }
}

#[derive(Debug, Clone)]
pub struct EpisodeOutcome {
    pub phases: PhaseVector,
    pub record: EpisodeRecord,
    pub registry: PathRegistry,
    pub trace: PassTrace,
}

/// The inference pass alone: fresh encode, superposition, evolution, readout.
pub fn inference_pass(
    features: &[f64],
    selected: &[Vec<usize>],
    amps: &super::selection::PathAmplitudes,
    registry: &PathRegistry,
    cfg: &QMetaConfig,
    n_elements: usize,
) -> Result<(PhaseVector, PassTrace)> {
    let mut trace = PassTrace::default();
    let start = census::snapshot();
    census::start_touch_log();
    let mut run = || -> Result<PhaseVector> {
        let psi = encode_scenario(features, cfg)?;
        let active = build_active_superposition(&psi, selected, amps, cfg)?;
        let before_evolve = census::snapshot();
        let evolution = evolve(active, features, selected, amps, registry, cfg)?;
        trace.evolve_expectations = (census::snapshot() - before_evolve).expectations;
        trace.pre_norms = evolution.pre_norms;
        extract_phases(&evolution.state, n_elements)
    };
    let result = run();
    trace.inference_states = census::take_touch_log();
    trace.inference_census = census::snapshot() - start;
    Ok((result?, trace))
}

/// One full episode: scoring pass, EMA update, amplitudes, top-k selection,
/// inference pass, optional quantization, usage update.
///
/// The returned record carries metrics on `chs`; `method`, `seed` and
/// `episode` are left for the caller to fill in. The census touch log of the
/// current thread is used internally and cleared.
pub fn run_episode(
    features: &[f64],
    registry: PathRegistry,
    cfg: &QMetaConfig,
    chs: &ChannelSet,
    budget: &LinkBudget,
) -> Result<EpisodeOutcome> {
    let clock = Instant::now();

    let start = census::snapshot();
    census::start_touch_log();
    let observed = encode_scenario(features, cfg)
        .and_then(|psi| scoring_pass(&psi, features, &registry, cfg, chs, budget));
    let scoring_states = census::take_touch_log();
    let scoring_census = census::snapshot() - start;
    let observed: Vec<Vec<f64>> = observed?
        .into_iter()
        .map(|row| row.into_iter().map(|o| o.max(SCORE_FLOOR)).collect())
        .collect();

    let mut registry = update_scores(registry, &observed)?;
    let amps = path_amplitudes(&registry)?;
    let selected = select_top_k(&amps, cfg.k_top)?;

    let (mut phases, mut trace) =
        inference_pass(features, &selected, &amps, &registry, cfg, chs.n_elements())?;
    if let Some(bits) = cfg.quantize_bits {
        phases = quantize_phases(&phases, bits)?;
    }
    for (usage, set) in registry.usage.iter_mut().zip(&selected) {
        for &p in set {
            usage[p] += 1;
        }
    }
    let latency_ms = clock.elapsed().as_secs_f64() * 1e3;

    let eval = evaluate(chs, &phases, budget, cfg.weights)?;
    trace.scoring_states = scoring_states;
    trace.scoring_census = scoring_census;
    Ok(EpisodeOutcome {
        record: EpisodeRecord {
            method: "qmetapath".into(),
            seed: 0,
            episode: 0,
            spectral_efficiency: eval.spectral_efficiency,
            objective: eval.objective,
            energy: eval.energy,
            selected_paths: selected,
            latency_ms,
        },
        phases,
        registry,
        trace,
    })
}
