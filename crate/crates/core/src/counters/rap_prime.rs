use super::{AdmissionRng, MonitoredTable};
use crate::stream::FlowId;
use crate::{Error, Result};

/// Constant admission probability for [`RapPrime`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RapPrimeConfig {
    admission_probability: f64,
}

impl RapPrimeConfig {
    pub fn new(admission_probability: f64) -> Result<Self> {
        if !(admission_probability > 0.0 && admission_probability <= 1.0) {
            return Err(Error::invalid(
                "admission_probability",
                format!("must lie in (0, 1], got {admission_probability}"),
            ));
        }
        Ok(Self {
            admission_probability,
        })
    }

    pub fn admission_probability(&self) -> f64 {
        self.admission_probability
    }
}

/// RAP with a constant admission probability `P` instead of `1/(c_m + 1)`.
/// When several entries share the minimal count the arrival is admitted
/// unconditionally. With `P = 1` this is Space Saving.
#[derive(Debug, Clone)]
pub struct RapPrime {
    table: MonitoredTable,
    rng: AdmissionRng,
    config: RapPrimeConfig,
}

impl RapPrime {
    pub fn new(capacity: usize, config: RapPrimeConfig, seed: u64) -> Self {
        Self {
            table: MonitoredTable::new(capacity),
            rng: AdmissionRng::new(seed),
            config,
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
        let p = self.config.admission_probability;
        let admit = self.table.min_is_shared() || p >= 1.0 || self.rng.uniform() < p;
        if admit {
            self.table.replace_min(flow, min.count + 1);
        }
    }

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

    pub fn config(&self) -> RapPrimeConfig {
        self.config
    }
}
