use std::borrow::Cow;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{validate_sweep, ExperimentConfig, SweepAxis, SweepSpec, Timing};
use super::scenario::{
    derive_seed, generate_scenario, scenario_features, STREAM_BASELINE, STREAM_CSI,
};
use crate::baselines::{alternating_opt, gradient_ascent, random_phases, Baseline};
use crate::channel::{evaluate, inject_csi_error};
use crate::engine::{run_episode, EpisodeRecord, PathRegistry};
use crate::error::{Error, Result};

pub const QMETAPATH_LABEL: &str = "qmetapath";
const TRAILING_WINDOW: usize = 10;
const CONVERGENCE_FRACTION: f64 = 0.95;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodSummary {
    pub method: String,
    pub records: usize,
    pub mean_se: f64,
    /// Sample standard deviation over all records of the method.
    pub std_se: f64,
    pub mean_objective: f64,
    pub mean_energy: f64,
    pub mean_latency_ms: f64,
    /// First episode index whose trailing-10 average of the seed-averaged SE
    /// reaches 95% of the final trailing-10 average.
    pub convergence_episode: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Benchmark {
    pub records: Vec<EpisodeRecord>,
    pub summaries: Vec<MethodSummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub axis: SweepAxis,
    pub value: f64,
    pub summaries: Vec<MethodSummary>,
    #[serde(skip)]
    pub records: Vec<EpisodeRecord>,
}

fn run_seed(cfg: &ExperimentConfig, seed: u64, start: &PathRegistry) -> Result<Vec<EpisodeRecord>> {
    let methods = cfg.baselines.methods()?;
    let qcfg = &cfg.qmetapath;
    let weights = qcfg.weights;
    let bits = qcfg.quantize_bits;
    let timed = cfg.run.timing == Timing::Wall;
    let latency = |ms: f64| if timed { ms } else { 0.0 };

    let mut registry = start.clone();
    let mut records = Vec::with_capacity(cfg.run.episodes * (1 + methods.len()));
    for episode in 0..cfg.run.episodes {
        let ep = episode as u64;
        let sc = generate_scenario(cfg, episode, seed)?;
        let csi = cfg.system.csi_error;
        let (estimate, features) = if csi > 0.0 {
            let est = inject_csi_error(&sc.channels, csi, derive_seed(seed, ep, STREAM_CSI))?;
            let features = scenario_features(cfg, &sc.geometry, &est, &sc.budget)?;
            (Cow::Owned(est), features)
        } else {
            (Cow::Borrowed(&sc.channels), sc.features.clone())
        };

        let outcome = run_episode(&features.values(), registry, qcfg, &estimate, &sc.budget)?;
        registry = outcome.registry;
        let truth = evaluate(&sc.channels, &outcome.phases, &sc.budget, weights)?;
        records.push(EpisodeRecord {
            method: QMETAPATH_LABEL.into(),
            seed,
            episode,
            spectral_efficiency: truth.spectral_efficiency,
            objective: truth.objective,
            energy: truth.energy,
            selected_paths: outcome.record.selected_paths,
            latency_ms: latency(outcome.record.latency_ms),
        });

        let bseed = derive_seed(seed, ep, STREAM_BASELINE);
        for method in &methods {
            let result = match method {
                Baseline::Random => random_phases(&estimate, &sc.budget, weights, bits, bseed)?,
                Baseline::Gradient => gradient_ascent(
                    &estimate,
                    &sc.budget,
                    weights,
                    cfg.baselines.gradient(),
                    bits,
                    bseed,
                )?,
                Baseline::Ao => alternating_opt(
                    &estimate,
                    &sc.budget,
                    weights,
                    cfg.baselines.ao_sweeps,
                    bits,
                )?,
            };
            let truth = evaluate(&sc.channels, &result.phases, &sc.budget, weights)?;
            records.push(EpisodeRecord {
                method: method.label().into(),
                seed,
                episode,
                spectral_efficiency: truth.spectral_efficiency,
                objective: truth.objective,
                energy: truth.energy,
                selected_paths: Vec::new(),
                latency_ms: latency(result.wall_time * 1e3),
            });
        }
    }
    Ok(records)
}

/// Run every seed (in parallel) and summarize per method.
///
/// Each seed starts from a fresh registry (or the warm-start checkpoint)
/// and runs its episodes in order, carrying the scores over. Baselines see
/// the same scenarios. With CSI error enabled, every optimizer works on the
/// perturbed estimate while the recorded metrics use the true channels.
/// Records are ordered by seed, then episode, then method.
pub fn run_benchmark(cfg: &ExperimentConfig) -> Result<Benchmark> {
    cfg.validate()?;
    let start = match &cfg.run.warm_start {
        Some(path) => {
            let reg = PathRegistry::load(path)?;
            reg.check_compatible(&cfg.qmetapath)?;
            reg
        }
        None => PathRegistry::new(&cfg.qmetapath)?,
    };
    let per_seed = (0..cfg.run.seeds as u64)
        .into_par_iter()
        .map(|i| run_seed(cfg, cfg.run.base_seed + i, &start))
        .collect::<Result<Vec<_>>>()?;
    let records: Vec<EpisodeRecord> = per_seed.into_iter().flatten().collect();
    let summaries = summarize(&records, &method_labels(cfg)?);
    Ok(Benchmark { records, summaries })
}

fn method_labels(cfg: &ExperimentConfig) -> Result<Vec<String>> {
    let mut labels = vec![QMETAPATH_LABEL.to_string()];
    labels.extend(cfg.baselines.methods()?.iter().map(|m| m.label().to_string()));
    Ok(labels)
}

fn mean(xs: impl Iterator<Item = f64>) -> f64 {
    let (sum, n) = xs.fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
    if n == 0 {
        0.0
    } else {
        sum / n as f64
    }
}

fn convergence_episode(curve: &[f64]) -> Option<usize> {
    let trailing: Vec<f64> = (0..curve.len())
        .map(|e| mean(curve[e.saturating_sub(TRAILING_WINDOW - 1)..=e].iter().copied()))
        .collect();
    let target = CONVERGENCE_FRACTION * trailing.last()?;
    trailing.iter().position(|&t| t >= target)
}

/// Per-method statistics over `records`, in the order of `methods`.
pub fn summarize(records: &[EpisodeRecord], methods: &[String]) -> Vec<MethodSummary> {
    methods
        .iter()
        .map(|method| {
            let rows: Vec<&EpisodeRecord> = records.iter().filter(|r| &r.method == method).collect();
            let n = rows.len();
            let mean_se = mean(rows.iter().map(|r| r.spectral_efficiency));
            let std_se = if n > 1 {
                let ss: f64 = rows.iter().map(|r| (r.spectral_efficiency - mean_se).powi(2)).sum();
                (ss / (n - 1) as f64).sqrt()
            } else {
                0.0
            };
            let episodes = rows.iter().map(|r| r.episode + 1).max().unwrap_or(0);
            let curve: Vec<f64> = (0..episodes)
                .map(|e| mean(rows.iter().filter(|r| r.episode == e).map(|r| r.spectral_efficiency)))
                .collect();
            MethodSummary {
                method: method.clone(),
                records: n,
                mean_se,
                std_se,
                mean_objective: mean(rows.iter().map(|r| r.objective)),
                mean_energy: mean(rows.iter().map(|r| r.energy)),
                mean_latency_ms: mean(rows.iter().map(|r| r.latency_ms)),
                convergence_episode: convergence_episode(&curve),
            }
        })
        .collect()
}

/// [`run_benchmark`] once per value of one axis, with the same seeds.
pub fn run_sweep(cfg: &ExperimentConfig, sweep: &SweepSpec) -> Result<Vec<SweepRow>> {
    validate_sweep(sweep)?;
    sweep
        .values
        .iter()
        .map(|&value| {
            let mut point = cfg.clone();
            point.run.sweep = None;
            match sweep.axis {
                SweepAxis::CsiError => point.system.csi_error = value,
                SweepAxis::NElements => point.system.n_elements = value as usize,
            }
            let bench = run_benchmark(&point).map_err(|e| match e {
                Error::Validation { field, reason } => {
                    Error::validation(field, format!("{reason} (sweep value {value})"))
                }
                other => other,
            })?;
            Ok(SweepRow {
                axis: sweep.axis,
                value,
                summaries: bench.summaries,
                records: bench.records,
            })
        })
        .collect()
}
