use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GateKind {
    Ry,
    Cnot,
}

/// What a gate is for inside a larger circuit. Only used for bookkeeping
/// in the [`census`](super::census); the kernels ignore it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum GateRole {
    /// Amplitude encoding or re-upload of a scenario feature.
    Feature,
    /// Parameterized rotation on a layer's path register.
    Path,
    /// Fixed entangling pattern between feature and path registers.
    Entangler,
    #[default]
    Other,
}

/// A single gate. `angle` is only meaningful for [`GateKind::Ry`],
/// `control` only for [`GateKind::Cnot`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GateOp {
    pub kind: GateKind,
    pub target: usize,
    pub control: Option<usize>,
    pub angle: f64,
    pub role: GateRole,
}

impl GateOp {
    pub fn ry(target: usize, angle: f64) -> Self {
        GateOp {
            kind: GateKind::Ry,
            target,
            control: None,
            angle,
            role: GateRole::Other,
        }
    }

    pub fn cnot(control: usize, target: usize) -> Self {
        GateOp {
            kind: GateKind::Cnot,
            target,
            control: Some(control),
            angle: 0.0,
            role: GateRole::Other,
        }
    }

    pub fn with_role(mut self, role: GateRole) -> Self {
        self.role = role;
        self
    }

    /// The inverse gate. R_Y(θ)⁻¹ = R_Y(−θ); CNOT is self-inverse.
    pub fn inverse(&self) -> Self {
        let mut inv = *self;
        if self.kind == GateKind::Ry {
            inv.angle = -self.angle;
        }
        inv
    }

    /// Wires and kind without the angle. Two gates with the same slot are the
    /// same physical gate position with possibly different parameters.
    pub(crate) fn slot(&self) -> (GateKind, GateRole, usize, Option<usize>) {
        (self.kind, self.role, self.target, self.control)
    }
}
