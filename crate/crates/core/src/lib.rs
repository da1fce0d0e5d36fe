//! Streaming frequency estimation and top-k identification with randomized
//! admission.
//!
//! * [`stream`]: flow ids, seeded Zipf workloads, trace files and the exact oracle
//! * [`counters`]: RAP, Space Saving, Frequent and constant-probability RAP
//! * [`dway`]: set-associative RAP
//! * [`sketch`]: Count-Min and Count Sketch baselines
//! * [`analysis`]: counter requirements for top-k on Zipf streams
//! * [`metrics`]: on-arrival MSE and top-k recall/precision

pub mod analysis;
pub mod counters;
pub mod dway;
mod error;
pub mod hash;
pub mod metrics;
pub mod sketch;
pub mod stream;

pub use counters::{
    AdmissionRng, CounterEntry, Frequent, FrequencyEstimator, MonitoredTable, Rap, RapPrime, RapPrimeConfig,
    SpaceSaving, TopKReport,
};
pub use dway::{DWayRap, SetAssociativeTable, VictimTieBreak};
pub use error::{Error, Result};
pub use sketch::{CountMinSketch, CountSketch, SketchMatrix};
pub use stream::{ExactCounter, FlowId, ZipfParams, ZipfSampler};
