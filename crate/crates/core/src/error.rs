use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("qubit {qubit} out of range for a {n_qubits}-qubit state")]
    InvalidQubit { qubit: usize, n_qubits: usize },

    #[error("invalid gate: {0}")]
    InvalidGate(String),

    #[error("state of {requested} qubits exceeds the capacity of {capacity}")]
    Capacity { requested: usize, capacity: usize },

    #[error("shape mismatch: expected {expected}, got {actual}")]
    Shape { expected: usize, actual: usize },

    #[error("cannot normalize a zero-norm state")]
    DegenerateState,

    #[error("weighted sum cancelled destructively (norm {norm:e})")]
    DestructiveCancellation { norm: f64 },

    #[error("selected path amplitudes are all zero in layer {layer}")]
    DegenerateSuperposition { layer: usize },

    #[error("invalid parameter `{name}`: {reason}")]
    Parameter { name: &'static str, reason: String },

    #[error("value {value} outside [0, 1]")]
    Range { value: f64 },

    #[error("feature `{feature}` has equal min and max bounds ({bound})")]
    DegenerateBounds { feature: &'static str, bound: f64 },

    #[error("non-finite value in {0}")]
    Numeric(&'static str),

    #[error("invalid configuration: `{field}` {reason}")]
    Validation { field: String, reason: String },

    #[error("failed to parse {path}: {message}")]
    Parse { path: PathBuf, message: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::Parameter {
            name,
            reason: reason.into(),
        }
    }

    pub(crate) fn validation(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Validation {
            field: field.into(),
            reason: reason.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
