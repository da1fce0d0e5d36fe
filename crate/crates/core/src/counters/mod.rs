//! Counter-based estimators: a bounded table of `(flow, counter)` entries
//! with an explicit flow-to-counter mapping.
//!
//! [`Rap`] admits an unmonitored flow into a full table with probability
//! `1/(c_min + 1)`, [`SpaceSaving`] always admits, [`Frequent`] decrements
//! every entry instead, and [`RapPrime`] admits with a constant probability.

mod frequent;
mod rap;
mod rap_prime;
mod space_saving;
mod table;

pub use frequent::Frequent;
pub use rap::Rap;
pub use rap_prime::{RapPrime, RapPrimeConfig};
pub use space_saving::SpaceSaving;
pub use table::MonitoredTable;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::stream::{ExactCounter, FlowId};

/// Identity of the admission generator, recorded in experiment metadata.
pub const ADMISSION_PRNG: &str = "ChaCha8 (rand_chacha 0.9), u64 seed via seed_from_u64";

/// A table-resident `(flow, count)` pair. Resident counts are always >= 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CounterEntry {
    pub flow: FlowId,
    pub count: u64,
}

/// Common interface for anything that ingests a stream and answers point
/// frequency queries.
pub trait FrequencyEstimator {
    fn insert(&mut self, flow: FlowId);
    fn query(&self, flow: FlowId) -> i64;
}

/// Estimators that can report their heaviest candidates.
pub trait TopKReport {
    /// The `m` largest counters, descending, ties by ascending flow id.
    fn top_k(&self, m: usize) -> Vec<(FlowId, u64)>;
}

/// Seeded source of uniform `[0, 1)` draws for admission decisions.
#[derive(Debug, Clone)]
pub struct AdmissionRng {
    seed: u64,
    rng: ChaCha8Rng,
}

impl AdmissionRng {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    #[inline]
    pub fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    /// True with probability `1/(min_count + 1)`.
    #[inline]
    pub fn admit_over(&mut self, min_count: u64) -> bool {
        self.uniform() < 1.0 / (min_count as f64 + 1.0)
    }
}

/// Sorts `(flow, count)` pairs by descending count then ascending flow and
/// keeps the first `m`.
pub fn sort_report(mut entries: Vec<(FlowId, u64)>, m: usize) -> Vec<(FlowId, u64)> {
    entries.sort_unstable_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    entries.truncate(m);
    entries
}

impl FrequencyEstimator for ExactCounter {
    fn insert(&mut self, flow: FlowId) {
        self.add(flow);
    }

    fn query(&self, flow: FlowId) -> i64 {
        self.count(flow) as i64
    }
}

impl TopKReport for ExactCounter {
    fn top_k(&self, m: usize) -> Vec<(FlowId, u64)> {
        ExactCounter::top_k(self, m)
    }
}

macro_rules! impl_counter_traits {
    ($($ty:ty),*) => {$(
        impl FrequencyEstimator for $ty {
            #[inline]
            fn insert(&mut self, flow: FlowId) {
                self.add(flow);
            }

            #[inline]
            fn query(&self, flow: FlowId) -> i64 {
                self.estimate(flow) as i64
            }
        }

        impl TopKReport for $ty {
            fn top_k(&self, m: usize) -> Vec<(FlowId, u64)> {
                self.top_k_report(m)
            }
        }
    )*};
}

impl_counter_traits!(Rap, SpaceSaving, Frequent, RapPrime, crate::dway::DWayRap);
