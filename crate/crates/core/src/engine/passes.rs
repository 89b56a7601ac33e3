//! The two circuit passes of one episode.
//!
//! The scoring pass runs one small circuit per (layer, path) on its own
//! copy of the scenario state and reduces each to a classical scalar. The
//! inference pass prepares the top-k superposition, evolves it through all
//! layers with no measurement, and only then reads out one ⟨Z⟩ per qubit.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::config::QMetaConfig;
use super::features::encoding_angle;
use super::registry::PathRegistry;
use super::selection::PathAmplitudes;
use crate::channel::{evaluate, ChannelSet, LinkBudget, PhaseVector};
use crate::error::{Error, Result};
use crate::quantum::{Observable, StateVector};

fn reupload_angles(features: &[f64]) -> Result<Vec<f64>> {
    features.iter().map(|&x| encoding_angle(x)).collect()
}

fn check_scenario(psi: &StateVector, features: &[f64], cfg: &QMetaConfig) -> Result<()> {
    if psi.n_qubits() != cfg.feature_qubits || features.len() != cfg.feature_qubits {
        return Err(Error::Shape {
            expected: cfg.feature_qubits,
            actual: if psi.n_qubits() != cfg.feature_qubits {
                psi.n_qubits()
            } else {
                features.len()
            },
        });
    }
    Ok(())
}

/// Map per-qubit ⟨Z⟩ values to `n` element phases.
///
/// Each `z` becomes a raw phase `π(1 − z)` in [0, 2π]; the raw vector is
/// linearly interpolated over the element index (first qubit at element 0,
/// last at element n−1) and wrapped into [0, 2π). A raw 2π, i.e. a qubit
/// exactly in |1⟩, therefore decodes to 0.
pub fn decode_phases(z: &[f64], n: usize) -> PhaseVector {
    let raw: Vec<f64> = z.iter().map(|&z| PI * (1.0 - z.clamp(-1.0, 1.0))).collect();
    let m = raw.len();
    if m == 0 {
        return PhaseVector::zeros(n);
    }
    let phases: Vec<f64> = (0..n)
        .map(|i| {
            if m == 1 || n == 1 {
                return raw[0];
            }
            let t = i as f64 * (m - 1) as f64 / (n - 1) as f64;
            let lo = (t.floor() as usize).min(m - 2);
            let frac = t - lo as f64;
            raw[lo] * (1.0 - frac) + raw[lo + 1] * frac
        })
        .collect();
    PhaseVector::new(phases)
}

/// Decode phases from the terminal ⟨Z⟩ of every qubit.
pub fn extract_phases(evolved: &StateVector, n_elements: usize) -> Result<PhaseVector> {
    let z = (0..evolved.n_qubits())
        .map(|m| evolved.expectation(&Observable::PauliZ(m)))
        .collect::<Result<Vec<_>>>()?;
    Ok(decode_phases(&z, n_elements))
}

/// Observed score of every (layer, path) on the current scenario.
///
/// For path p of layer l a fresh copy of ψ is joined with a path register
/// holding |p⟩, the layer's entangler, re-upload and rotations are applied,
/// and the phases decoded from it are scored with the classical objective.
/// Path registers of the other layers sit in |0⟩ throughout, so their
/// ⟨Z⟩ is exactly 1 and they are not simulated.
pub fn scoring_pass(
    psi: &StateVector,
    features: &[f64],
    registry: &PathRegistry,
    cfg: &QMetaConfig,
    chs: &ChannelSet,
    budget: &LinkBudget,
) -> Result<Vec<Vec<f64>>> {
    check_scenario(psi, features, cfg)?;
    registry.check_compatible(cfg)?;
    let f = cfg.feature_qubits;
    let q = cfg.path_qubits();
    let angles = reupload_angles(features)?;
    let n = chs.n_elements();

    (0..cfg.layers)
        .map(|l| {
            (0..cfg.paths)
                .map(|p| {
                    let register = StateVector::basis(q, p)?;
                    let mut circuit = cfg.entangler(l, f);
                    if l > 0 {
                        circuit.extend(cfg.reupload(&angles));
                    }
                    circuit.extend(cfg.path_rotations(&registry.path_params[l][p], f));
                    let trial = psi
                        .tensor_within(&register, cfg.qubit_capacity)?
                        .apply_circuit(&circuit)?;

                    let mut z = vec![1.0; cfg.total_qubits()];
                    for m in 0..f {
                        z[m] = trial.expectation(&Observable::PauliZ(m))?;
                    }
                    for j in 0..q {
                        z[cfg.path_qubit(l, j)] = trial.expectation(&Observable::PauliZ(f + j))?;
                    }
                    let phases = decode_phases(&z, n);
                    let score = evaluate(chs, &phases, budget, cfg.weights)?.objective;
                    if !score.is_finite() {
                        return Err(Error::Numeric("path score"));
                    }
                    Ok(score)
                })
                .collect()
        })
        .collect()
}

/// Feature register ⊗ one register per layer holding Σ_{p∈S_l} A_lp|p⟩
/// (renormalized), followed by every layer's feature↔path entangler.
pub fn build_active_superposition(
    psi: &StateVector,
    selected: &[Vec<usize>],
    amps: &PathAmplitudes,
    cfg: &QMetaConfig,
) -> Result<StateVector> {
    if psi.n_qubits() != cfg.feature_qubits {
        return Err(Error::Shape {
            expected: cfg.feature_qubits,
            actual: psi.n_qubits(),
        });
    }
    check_selection(selected, amps, cfg)?;
    let q = cfg.path_qubits();
    let mut state = psi.clone();
    for (l, set) in selected.iter().enumerate() {
        let mut reg = vec![Complex64::new(0.0, 0.0); 1 << q];
        for &p in set {
            reg[p] = Complex64::new(amps.per_layer[l][p], 0.0);
        }
        if reg.iter().all(|a| a.norm_sqr() == 0.0) {
            return Err(Error::DegenerateSuperposition { layer: l });
        }
        let reg = StateVector::from_amplitudes(reg)?.normalize()?;
        state = state.tensor_within(&reg, cfg.qubit_capacity)?;
    }
    for l in 0..cfg.layers {
        state = state.apply_circuit(&cfg.entangler(l, cfg.path_qubit(l, 0)))?;
    }
    state.normalize()
}

fn check_selection(selected: &[Vec<usize>], amps: &PathAmplitudes, cfg: &QMetaConfig) -> Result<()> {
    if selected.len() != cfg.layers || amps.per_layer.len() != cfg.layers {
        return Err(Error::Shape {
            expected: cfg.layers,
            actual: selected.len().min(amps.per_layer.len()),
        });
    }
    for set in selected {
        if set.is_empty() {
            return Err(Error::param("selected", "every layer needs at least one path"));
        }
        if let Some(&p) = set.iter().find(|&&p| p >= cfg.paths) {
            return Err(Error::Shape {
                expected: cfg.paths,
                actual: p,
            });
        }
    }
    Ok(())
}

/// Output of [`evolve`].
#[derive(Debug)]
pub struct Evolution {
    pub state: StateVector,
    /// Norm of each layer's weighted sum before renormalization.
    pub pre_norms: Vec<f64>,
}

/// Layer-by-layer evolution `Π_l Σ_{p∈S_l} A_lp U_lp` with no measurement.
///
/// Layer l > 0 first re-uploads the features on the feature register
/// (layer 0's upload is the scenario encoding itself), then applies the
/// coherent weighted sum of the selected paths' rotations.
pub fn evolve(
    active: StateVector,
    features: &[f64],
    selected: &[Vec<usize>],
    amps: &PathAmplitudes,
    registry: &PathRegistry,
    cfg: &QMetaConfig,
) -> Result<Evolution> {
    if active.n_qubits() != cfg.total_qubits() {
        return Err(Error::Shape {
            expected: cfg.total_qubits(),
            actual: active.n_qubits(),
        });
    }
    if features.len() != cfg.feature_qubits {
        return Err(Error::Shape {
            expected: cfg.feature_qubits,
            actual: features.len(),
        });
    }
    check_selection(selected, amps, cfg)?;
    registry.check_compatible(cfg)?;
    let angles = reupload_angles(features)?;

    let mut state = active;
    let mut pre_norms = Vec::with_capacity(cfg.layers);
    for (l, set) in selected.iter().enumerate() {
        if l > 0 {
            state = state.apply_circuit(&cfg.reupload(&angles))?;
        }
        let offset = cfg.path_qubit(l, 0);
        let terms: Vec<_> = set
            .iter()
            .map(|&p| {
                (
                    amps.per_layer[l][p],
                    cfg.path_rotations(&registry.path_params[l][p], offset),
                )
            })
            .collect();
        let sum = state.apply_weighted_sum(&terms)?;
        pre_norms.push(sum.pre_norm);
        state = sum.state;
    }
    Ok(Evolution { state, pre_norms })
}
