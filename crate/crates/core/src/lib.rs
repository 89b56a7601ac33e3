//! Path-scored quantum meta-learning for RIS phase configuration.
//!
//! The crate is organised bottom-up:
//!
//! - [`quantum`]: a dense state-vector simulator for shallow R_Y/CNOT
//!   circuits, with coherent weighted sums and per-thread gate census.
//! - [`channel`]: Rician UE→RIS→AP channels with element coupling, and
//!   SINR / spectral efficiency / energy metrics for a phase vector.
//! - [`engine`]: the path-scoring optimizer itself: scenario encoding,
//!   score updates, path amplitudes, top-k superposition, evolution and
//!   phase decoding.
//! - [`baselines`]: random, finite-difference gradient and alternating
//!   optimization on the same objective.
//! - [`harness`]: configuration, seeded scenarios, benchmarks, sweeps and
//!   CSV/JSON output.

pub mod baselines;
pub mod channel;
pub mod engine;
mod error;
pub mod harness;
pub mod quantum;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/quantum.md")]
    mod quantum {}
    #[doc = include_str!("../../../book/src/channel.md")]
    mod channel {}
    #[doc = include_str!("../../../book/src/engine.md")]
    mod engine {}
    #[doc = include_str!("../../../book/src/baselines.md")]
    mod baselines {}
    #[doc = include_str!("../../../book/src/harness.md")]
    mod harness {}
    #[doc = include_str!("../../../book/src/acceptance.md")]
    mod acceptance {}
}
