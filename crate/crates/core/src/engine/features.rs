use serde::{Deserialize, Serialize};

use super::config::QMetaConfig;
use crate::error::{Error, Result};
use crate::quantum::{GateOp, GateRole, StateVector};

/// Normalized scenario descriptors, each in [0, 1].
///
/// `loc` holds the location features (one qubit each); the remaining three
/// fields take one qubit each. Qubit order is `loc…, interference,
/// pathloss, rate`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioFeatures {
    pub loc: Vec<f64>,
    pub interference: f64,
    pub pathloss: f64,
    pub rate: f64,
}

impl ScenarioFeatures {
    pub fn values(&self) -> Vec<f64> {
        let mut v = self.loc.clone();
        v.extend([self.interference, self.pathloss, self.rate]);
        v
    }

    pub fn len(&self) -> usize {
        self.loc.len() + 3
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// Scenario measurements in physical units, same layout as
/// [`ScenarioFeatures`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawScenario {
    pub loc: Vec<f64>,
    pub interference: f64,
    pub pathloss: f64,
    pub rate: f64,
}

/// Inclusive `(min, max)` range for one raw measurement.
pub type Bounds = (f64, f64);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureBounds {
    pub loc: Vec<Bounds>,
    pub interference: Bounds,
    pub pathloss: Bounds,
    pub rate: Bounds,
}

fn scale(value: f64, (lo, hi): Bounds, feature: &'static str) -> Result<f64> {
    if lo == hi {
        return Err(Error::DegenerateBounds { feature, bound: lo });
    }
    if !value.is_finite() {
        return Err(Error::Numeric(feature));
    }
    Ok(((value - lo) / (hi - lo)).clamp(0.0, 1.0))
}

/// Affine map of each measurement onto [0, 1] using its bounds, clamped.
pub fn normalize_features(raw: &RawScenario, bounds: &FeatureBounds) -> Result<ScenarioFeatures> {
    if raw.loc.len() != bounds.loc.len() {
        return Err(Error::Shape {
            expected: bounds.loc.len(),
            actual: raw.loc.len(),
        });
    }
    let loc = raw
        .loc
        .iter()
        .zip(&bounds.loc)
        .map(|(&v, &b)| scale(v, b, "loc"))
        .collect::<Result<_>>()?;
    Ok(ScenarioFeatures {
        loc,
        interference: scale(raw.interference, bounds.interference, "interference")?,
        pathloss: scale(raw.pathloss, bounds.pathloss, "pathloss")?,
        rate: scale(raw.rate, bounds.rate, "rate")?,
    })
}

/// R_Y angle that loads `x` as the |1⟩ probability: `2·asin(√x)`.
pub fn encoding_angle(x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Range { value: x });
    }
    Ok(2.0 * x.sqrt().asin())
}

/// `√(1−x)|0⟩ + √x|1⟩`, prepared by one feature R_Y on |0⟩.
pub fn encode_feature(x: f64) -> Result<StateVector> {
    let angle = encoding_angle(x)?;
    StateVector::zero(1)?.apply(&GateOp::ry(0, angle).with_role(GateRole::Feature))
}

// sub-state index (loc, int, pl, rate) for feature wire i of F
fn feature_group(i: usize, f: usize) -> usize {
    let offset = f.saturating_sub(3);
    if i < offset {
        0
    } else {
        1 + i - offset
    }
}

/// Tensor product of the per-feature encodings, feature 0 on qubit 0.
pub fn encode_scenario(features: &[f64], cfg: &QMetaConfig) -> Result<StateVector> {
    if features.len() != cfg.feature_qubits {
        return Err(Error::Shape {
            expected: cfg.feature_qubits,
            actual: features.len(),
        });
    }
    let f = features.len();
    let mut state: Option<StateVector> = None;
    let mut last_group = usize::MAX;
    for (i, &x) in features.iter().enumerate() {
        let mut qubit = encode_feature(x)?;
        let group = feature_group(i, f).min(3);
        if group != last_group {
            let w = cfg.feature_weights[group];
            if w != 1.0 {
                let amps = qubit.into_amplitudes().into_iter().map(|a| a * w).collect();
                qubit = StateVector::from_amplitudes(amps)?;
            }
            last_group = group;
        }
        state = Some(match state {
            None => qubit,
            Some(s) => s.tensor_within(&qubit, cfg.qubit_capacity)?,
        });
    }
    state.ok_or(Error::Shape { expected: 1, actual: 0 })?.normalize()
}
