//! Per-thread instrumentation for the simulator.
//!
//! Every gate kernel, expectation value and state construction reports here.
//! Counts are thread-local, so parallel tests and parallel benchmark seeds
//! never see each other's traffic. Callers take a [`snapshot`] before and
//! after a region of interest and diff the two.
//!
//! Gates are counted twice. `kernel_*` counts every kernel invocation, while
//! the per-role counts are *logical* gate slots: the branches of a weighted
//! sum that drive the same wires with different angles are one multiplexed
//! gate in the circuit layout and are counted once.

use std::cell::RefCell;
use std::ops::Sub;

use super::gate::{GateKind, GateOp, GateRole};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct GateCensus {
    pub feature_ry: u64,
    pub path_ry: u64,
    pub other_ry: u64,
    pub cnot: u64,
    pub expectations: u64,
    pub kernel_ry: u64,
    pub kernel_cnot: u64,
}

impl GateCensus {
    pub fn total_ry(&self) -> u64 {
        self.feature_ry + self.path_ry + self.other_ry
    }
}

impl Sub for GateCensus {
    type Output = GateCensus;

    fn sub(self, rhs: Self) -> Self {
        GateCensus {
            feature_ry: self.feature_ry - rhs.feature_ry,
            path_ry: self.path_ry - rhs.path_ry,
            other_ry: self.other_ry - rhs.other_ry,
            cnot: self.cnot - rhs.cnot,
            expectations: self.expectations - rhs.expectations,
            kernel_ry: self.kernel_ry - rhs.kernel_ry,
            kernel_cnot: self.kernel_cnot - rhs.kernel_cnot,
        }
    }
}

#[derive(Default)]
struct Tracker {
    counts: GateCensus,
    // >0 while inside a weighted sum; logical counts are recorded by the caller
    muted: u32,
    touched: Option<Vec<u64>>,
}

thread_local! {
    static TRACKER: RefCell<Tracker> = RefCell::new(Tracker::default());
}

pub fn snapshot() -> GateCensus {
    TRACKER.with(|t| t.borrow().counts)
}

pub fn reset() {
    TRACKER.with(|t| t.borrow_mut().counts = GateCensus::default());
}

/// Start recording the ids of every state touched on this thread.
/// Any log already in progress is discarded.
pub fn start_touch_log() {
    TRACKER.with(|t| t.borrow_mut().touched = Some(Vec::new()));
}

/// Stop recording and return the ids seen since [`start_touch_log`],
/// sorted and deduplicated.
pub fn take_touch_log() -> Vec<u64> {
    let mut ids = TRACKER
        .with(|t| t.borrow_mut().touched.take())
        .unwrap_or_default();
    ids.sort_unstable();
    ids.dedup();
    ids
}

pub(crate) fn touch(id: u64) {
    TRACKER.with(|t| {
        if let Some(log) = t.borrow_mut().touched.as_mut() {
            log.push(id);
        }
    });
}

pub(crate) fn kernel(gate: &GateOp) {
    TRACKER.with(|t| {
        let mut t = t.borrow_mut();
        match gate.kind {
            GateKind::Ry => t.counts.kernel_ry += 1,
            GateKind::Cnot => t.counts.kernel_cnot += 1,
        }
        if t.muted == 0 {
            record(&mut t.counts, gate);
        }
    });
}

pub(crate) fn logical(gate: &GateOp) {
    TRACKER.with(|t| record(&mut t.borrow_mut().counts, gate));
}

pub(crate) fn expectation() {
    TRACKER.with(|t| t.borrow_mut().counts.expectations += 1);
}

pub(crate) fn mute() {
    TRACKER.with(|t| t.borrow_mut().muted += 1);
}

pub(crate) fn unmute() {
    TRACKER.with(|t| t.borrow_mut().muted -= 1);
}

fn record(counts: &mut GateCensus, gate: &GateOp) {
    match (gate.kind, gate.role) {
        (GateKind::Cnot, _) => counts.cnot += 1,
        (GateKind::Ry, GateRole::Feature) => counts.feature_ry += 1,
        (GateKind::Ry, GateRole::Path) => counts.path_ry += 1,
        (GateKind::Ry, _) => counts.other_ry += 1,
    }
}
