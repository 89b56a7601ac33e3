//! The path-scoring optimizer.
//!
//! One episode runs two passes over the same scenario. The scoring pass
//! evaluates every (layer, path) circuit on its own copy of the encoded
//! scenario and folds the results into the path scores `J` with an
//! exponential moving average. Amplitudes `A ∝ √J·e^{−γC}` then pick the
//! top-k paths per layer, and the inference pass superposes them, evolves
//! the register through all layers without measuring, and decodes the RIS
//! phases from one terminal ⟨Z⟩ per qubit.

mod config;
mod episode;
mod features;
mod passes;
mod registry;
mod selection;

pub use config::QMetaConfig;
pub use episode::{inference_pass, run_episode, EpisodeOutcome, EpisodeRecord, PassTrace, SCORE_FLOOR};
pub use features::{
    encode_feature, encode_scenario, encoding_angle, normalize_features, Bounds, FeatureBounds,
    RawScenario, ScenarioFeatures,
};
pub use passes::{
    build_active_superposition, decode_phases, evolve, extract_phases, scoring_pass, Evolution,
};
pub use registry::{update_scores, PathRegistry};
pub use selection::{path_amplitudes, select_top_k, PathAmplitudes};
