//! Rician channel generation, RIS coupling, and link-level metrics.

mod geometry;
mod metrics;
mod model;
mod phase;

pub use geometry::{bearing, distance, NetworkGeometry, Point, SPEED_OF_LIGHT};
pub use metrics::{
    dbm_to_watts, effective_channel, energy_cost, evaluate, objective, sinr, spectral_efficiency,
    user_gains, Evaluation, LinkBudget, ObjectiveWeights,
};
pub(crate) use metrics::se_from_gains;
pub use model::{
    coupling_matrix, generate_channels, inject_csi_error, pathloss, steering_vector, ChannelSet,
    Coupling, PathGains, RicianFactors,
};
pub use phase::{circular_distance, quantization_bound, quantize_phases, wrap_phase, PhaseVector};
