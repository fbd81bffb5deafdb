//! Circuit-evaluation accounting.
//!
//! One energy evaluation is one simulated-circuit expectation estimate,
//! regardless of how many Pauli terms the observable has. One metric
//! evaluation is one metric circuit: a Y-basis measurement of a whole
//! rotation block, or one ancilla overlap circuit.

use core::sync::atomic::{AtomicU64, Ordering};

#[derive(Debug, Default)]
pub struct CircuitLedger {
    energy: AtomicU64,
    metric: AtomicU64,
    draws: AtomicU64,
}

/// Counter values at a point in time.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LedgerSnapshot {
    pub energy: u64,
    pub metric: u64,
}

impl LedgerSnapshot {
    pub fn total(&self) -> u64 {
        self.energy + self.metric
    }

    pub fn since(&self, earlier: &LedgerSnapshot) -> LedgerSnapshot {
        LedgerSnapshot {
            energy: self.energy - earlier.energy,
            metric: self.metric - earlier.metric,
        }
    }
}

impl CircuitLedger {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn record_energy(&self, n: u64) {
        self.energy.fetch_add(n, Ordering::Relaxed);
    }

    pub fn record_metric(&self, n: u64) {
        self.metric.fetch_add(n, Ordering::Relaxed);
    }

    /// Hands out a fresh index for deriving shot-sampling seeds.
    pub(crate) fn next_draw(&self) -> u64 {
        self.draws.fetch_add(1, Ordering::Relaxed)
    }

    pub fn snapshot(&self) -> LedgerSnapshot {
        LedgerSnapshot {
            energy: self.energy.load(Ordering::Relaxed),
            metric: self.metric.load(Ordering::Relaxed),
        }
    }

    pub fn reset(&self) {
        self.energy.store(0, Ordering::Relaxed);
        self.metric.store(0, Ordering::Relaxed);
        self.draws.store(0, Ordering::Relaxed);
    }
}
