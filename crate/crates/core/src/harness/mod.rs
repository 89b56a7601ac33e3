//! Configuration, seeded scenarios, benchmark runs and result files.

mod bench;
mod config;
mod output;
mod scenario;

pub use bench::{run_benchmark, run_sweep, summarize, Benchmark, MethodSummary, SweepRow};
pub use config::{
    load_config, parse_config, BaselineConfig, ExperimentConfig, Placement, RunConfig,
    ScenarioConfig, SweepAxis, SweepSpec, SystemConfig, Timing,
};
pub use output::{emit_results, emit_sweep, format_paths, ResultFiles, CSV_HEADER};
pub use scenario::{
    derive_seed, generate_scenario, network_geometry, scenario_features, Scenario,
};
