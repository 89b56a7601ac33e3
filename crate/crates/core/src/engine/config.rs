use serde::{Deserialize, Serialize};

use crate::channel::ObjectiveWeights;
use crate::error::{Error, Result};
use crate::quantum::{GateOp, GateRole, DEFAULT_QUBIT_CAPACITY};

/// Optimizer hyper-parameters and the qubit layout they imply.
///
/// Qubits are laid out as the feature register (`feature_qubits` wires)
/// followed by one `⌈log₂ P⌉`-qubit path register per layer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QMetaConfig {
    pub layers: usize,
    pub paths: usize,
    pub k_top: usize,
    /// EMA smoothing factor, strictly inside (0, 1).
    pub eta: f64,
    /// Overuse penalty on the usage counter.
    pub gamma: f64,
    /// Initial score, strictly positive.
    pub j0: f64,
    pub weights: ObjectiveWeights,
    pub feature_qubits: usize,
    pub quantize_bits: Option<u32>,
    pub qubit_capacity: usize,
    /// Sub-state weights for location, interference, path loss and rate.
    /// The scenario state is renormalized after scaling, so only their
    /// relative effect inside a shared register could matter; with one
    /// qubit per feature they are unobservable.
    pub feature_weights: [f64; 4],
    /// Seed of the fixed path-rotation angles.
    pub path_seed: u64,
}

impl Default for QMetaConfig {
    /// Full layout: L=6, P=8, k=3 on 24 qubits.
    fn default() -> Self {
        QMetaConfig {
            layers: 6,
            paths: 8,
            k_top: 3,
            eta: 0.9,
            gamma: 0.1,
            j0: 0.1,
            weights: ObjectiveWeights::default(),
            feature_qubits: 6,
            quantize_bits: None,
            qubit_capacity: DEFAULT_QUBIT_CAPACITY,
            feature_weights: [1.0; 4],
            path_seed: 7,
        }
    }
}

impl QMetaConfig {
    /// Desk-scale layout: L=3, P=4, k=2 on 12 qubits.
    pub fn desk() -> Self {
        QMetaConfig {
            layers: 3,
            paths: 4,
            k_top: 2,
            ..Self::default()
        }
    }

    pub fn path_qubits(&self) -> usize {
        if self.paths <= 1 {
            0
        } else {
            (usize::BITS - (self.paths - 1).leading_zeros()) as usize
        }
    }

    pub fn total_qubits(&self) -> usize {
        self.feature_qubits + self.layers * self.path_qubits()
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("layers", self.layers),
            ("paths", self.paths),
            ("k_top", self.k_top),
            ("feature_qubits", self.feature_qubits),
        ];
        for (name, v) in positive {
            if v == 0 {
                return Err(Error::param(name, "must be at least 1"));
            }
        }
        if self.k_top > self.paths {
            return Err(Error::param(
                "k_top",
                format!("{} exceeds paths per layer ({})", self.k_top, self.paths),
            ));
        }
        if !(self.eta > 0.0 && self.eta < 1.0) {
            return Err(Error::param("eta", format!("{} is not in (0, 1)", self.eta)));
        }
        if !(self.gamma >= 0.0 && self.gamma.is_finite()) {
            return Err(Error::param("gamma", "must be non-negative"));
        }
        if !(self.j0 > 0.0 && self.j0.is_finite()) {
            return Err(Error::param("j0", "must be positive"));
        }
        if !(self.weights.alpha1 >= 0.0 && self.weights.alpha2 >= 0.0) {
            return Err(Error::param("weights", "alpha1 and alpha2 must be non-negative"));
        }
        if self.feature_weights.iter().any(|&w| !(w > 0.0 && w.is_finite())) {
            return Err(Error::param("feature_weights", "must be positive"));
        }
        if let Some(b) = self.quantize_bits {
            if b == 0 || b > 30 {
                return Err(Error::param("quantize_bits", format!("{b} is not in 1..=30")));
            }
        }
        if self.total_qubits() > self.qubit_capacity {
            return Err(Error::Capacity {
                requested: self.total_qubits(),
                capacity: self.qubit_capacity,
            });
        }
        Ok(())
    }

    /// Index of qubit `j` of layer `layer`'s path register in the full layout.
    pub fn path_qubit(&self, layer: usize, j: usize) -> usize {
        self.feature_qubits + layer * self.path_qubits() + j
    }

    /// Feature↔path CNOTs for one layer: feature wire `(l·q + j) mod F`
    /// controls path wire `j` of the register starting at `offset`.
    pub(crate) fn entangler(&self, layer: usize, offset: usize) -> Vec<GateOp> {
        let q = self.path_qubits();
        (0..q)
            .map(|j| {
                let control = (layer * q + j) % self.feature_qubits;
                GateOp::cnot(control, offset + j).with_role(GateRole::Entangler)
            })
            .collect()
    }

    /// Feature re-upload: one R_Y per feature wire with the encoding angles.
    pub(crate) fn reupload(&self, angles: &[f64]) -> Vec<GateOp> {
        angles
            .iter()
            .enumerate()
            .map(|(i, &a)| GateOp::ry(i, a).with_role(GateRole::Feature))
            .collect()
    }

    /// One path's parameterized rotations on the register starting at `offset`.
    pub(crate) fn path_rotations(&self, params: &[f64], offset: usize) -> Vec<GateOp> {
        params
            .iter()
            .enumerate()
            .map(|(j, &a)| GateOp::ry(offset + j, a).with_role(GateRole::Path))
            .collect()
    }
}
