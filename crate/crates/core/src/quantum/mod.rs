//! Dense state-vector simulation of shallow R_Y/CNOT circuits.

pub mod census;
mod gate;
mod observable;
mod state;

pub use census::GateCensus;
pub use gate::{GateKind, GateOp, GateRole};
pub use observable::Observable;
pub use state::{StateVector, WeightedSum, DEFAULT_QUBIT_CAPACITY};
