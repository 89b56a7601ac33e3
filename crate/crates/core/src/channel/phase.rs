use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Map any finite angle into [0, 2π).
pub fn wrap_phase(phi: f64) -> f64 {
    let w = phi.rem_euclid(TAU);
    // rem_euclid can round up to exactly 2π for tiny negative inputs
    if w >= TAU {
        0.0
    } else {
        w
    }
}

/// RIS phase configuration, one entry per element, each in [0, 2π).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseVector {
    phases: Vec<f64>,
    bits: Option<u32>,
}

impl PhaseVector {
    /// Wraps every entry into [0, 2π).
    pub fn new(phases: impl Into<Vec<f64>>) -> Self {
        let phases = phases.into().into_iter().map(wrap_phase).collect();
        PhaseVector { phases, bits: None }
    }

    pub fn zeros(n: usize) -> Self {
        PhaseVector {
            phases: vec![0.0; n],
            bits: None,
        }
    }

    pub fn len(&self) -> usize {
        self.phases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phases.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.phases
    }

    pub fn bit_depth(&self) -> Option<u32> {
        self.bits
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.phases
    }

    pub fn quantized(&self, bits: u32) -> Result<PhaseVector> {
        quantize_phases(self, bits)
    }
}

/// Round each phase to the nearest level of a uniform `2^bits` grid:
/// `φ_b = (2π/2^b)·⌊2^b·φ/2π + 1/2⌋`. The top level (φ just below 2π) wraps
/// back to 0, so every output stays in [0, 2π) and the wrapped error is at
/// most π/2^b.
pub fn quantize_phases(phases: &PhaseVector, bits: u32) -> Result<PhaseVector> {
    if bits == 0 || bits > 30 {
        return Err(Error::param("bits", format!("{bits} is not in 1..=30")));
    }
    let levels = (1u64 << bits) as f64;
    let step = TAU / levels;
    let quantized = phases
        .phases
        .iter()
        .map(|&phi| {
            let level = (levels * phi / TAU + 0.5).floor();
            let level = if level >= levels { 0.0 } else { level };
            step * level
        })
        .collect();
    Ok(PhaseVector {
        phases: quantized,
        bits: Some(bits),
    })
}

/// Smallest distance between two angles on the circle, in [0, π].
pub fn circular_distance(a: f64, b: f64) -> f64 {
    let d = wrap_phase(a - b);
    d.min(TAU - d)
}

/// Worst-case error of a `bits`-bit grid.
pub fn quantization_bound(bits: u32) -> f64 {
    PI / (1u64 << bits) as f64
}
