use super::{AdmissionRng, MonitoredTable};
use crate::stream::FlowId;

/// Randomized Admission Policy over a fully associative table.
///
/// A flow that misses a full table replaces the minimal entry `m` with
/// probability `1/(c_m + 1)` and inherits `c_m + 1`; otherwise the arrival
/// leaves no trace. Estimates satisfy `f̂ <= f + c_min` at all times and
/// `E[f̂] <= f`.
#[derive(Debug, Clone)]
pub struct Rap {
    table: MonitoredTable,
    rng: AdmissionRng,
}

impl Rap {
    /// # Panics
    /// When `capacity` is zero.
    pub fn new(capacity: usize, seed: u64) -> Self {
        Self {
            table: MonitoredTable::new(capacity),
            rng: AdmissionRng::new(seed),
        }
    }

    #[inline]
    pub fn add(&mut self, flow: FlowId) {
        if self.table.increment(flow) {
            return;
        }
        if !self.table.is_full() {
            self.table.insert(flow, 1);
            return;
        }
        let min = self.table.min().expect("full table has a minimum");
        if self.rng.admit_over(min.count) {
            self.table.replace_min(flow, min.count + 1);
        }
    }

    /// `c_x` if monitored, else 0.
    #[inline]
    pub fn estimate(&self, flow: FlowId) -> u64 {
        self.table.get(flow).unwrap_or(0)
    }

    pub fn top_k_report(&self, m: usize) -> Vec<(FlowId, u64)> {
        super::sort_report(self.table.iter().map(|e| (e.flow, e.count)).collect(), m)
    }

    pub fn table(&self) -> &MonitoredTable {
        &self.table
    }

    /// Smallest resident counter, 0 when the table is empty.
    pub fn min_count(&self) -> u64 {
        self.table.min().map_or(0, |e| e.count)
    }
}
