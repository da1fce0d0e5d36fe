//! Batch construction shared by every algorithm in a run.

use rap_core::hash::{derive_seed, fmix64};
use rap_core::metrics::on_arrival_truth;
use rap_core::stream::{read_trace, ExactCounter, FlowId, ZipfParams, ZipfSampler};

use crate::config::{Metric, Workload};
use crate::error::{BenchError, Result};

/// Seeds for batch `b` of a run with master seed `master`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BatchSeeds {
    pub stream: u64,
    pub estimator: u64,
}

pub const SEED_DERIVATION: &str = "batch_seed = splitmix64(master ^ splitmix64(b * 0x9E3779B97F4A7C15)); \
stream = derive(batch_seed, 0); estimator = derive(batch_seed, 1)";

pub fn batch_seeds(master: u64, batch: usize) -> BatchSeeds {
    let batch_seed = derive_seed(master, batch as u64);
    BatchSeeds {
        stream: derive_seed(batch_seed, 0),
        estimator: derive_seed(batch_seed, 1),
    }
}

/// Zipf ranks are mapped through the `fmix64` bijection so that flow ids
/// carry no popularity information, as in real traces.
#[inline]
pub fn opaque_id(rank: FlowId) -> FlowId {
    FlowId(fmix64(rank.0))
}

/// Draws an opaque-id Zipf stream.
pub fn zipf_stream(alpha: f64, domain: u64, seed: u64, events: usize) -> Result<Vec<FlowId>> {
    let mut sampler = ZipfSampler::new(ZipfParams::new(alpha, domain, seed))?;
    Ok((0..events).map(|_| opaque_id(sampler.next_flow())).collect())
}

/// One batch with its ground truth.
pub struct Batch {
    pub index: usize,
    pub stream: Vec<FlowId>,
    /// Exact count of each event's flow at arrival (MSE runs only).
    pub arrival_truth: Vec<u64>,
    pub exact: ExactCounter,
}

impl Batch {
    pub fn new(index: usize, stream: Vec<FlowId>, metric: Metric) -> Self {
        let arrival_truth = if metric == Metric::Mse {
            on_arrival_truth(&stream)
        } else {
            Vec::new()
        };
        let exact = ExactCounter::from_stream(&stream);
        Self {
            index,
            stream,
            arrival_truth,
            exact,
        }
    }
}

/// Builds `batches` disjoint batches of `events` each.
///
/// Zipf batches are independent seeded draws; trace batches are consecutive
/// slices of the file.
pub fn build_batches(
    workload: &Workload,
    events: usize,
    batches: usize,
    master_seed: u64,
    metric: Metric,
) -> Result<Vec<Batch>> {
    match workload {
        Workload::Zipf { alpha, domain } => (0..batches)
            .map(|b| {
                let stream = zipf_stream(*alpha, *domain, batch_seeds(master_seed, b).stream, events)?;
                Ok(Batch::new(b, stream, metric))
            })
            .collect(),
        Workload::Trace { path } => {
            let trace = read_trace(path)?;
            let needed = events.saturating_mul(batches);
            if trace.flows.len() < needed {
                return Err(BenchError::usage(
                    "batches",
                    format!(
                        "trace {} holds {} events, fewer than {batches} x {events}",
                        path.display(),
                        trace.flows.len()
                    ),
                ));
            }
            Ok(trace
                .flows
                .chunks(events)
                .take(batches)
                .enumerate()
                .map(|(b, chunk)| Batch::new(b, chunk.to_vec(), metric))
                .collect())
        }
    }
}
