use rap_core::{
    CountMinSketch, CountSketch, DWayRap, ExactCounter, FlowId, Frequent, FrequencyEstimator, Rap, RapPrime,
    RapPrimeConfig, SpaceSaving, TopKReport,
};

use crate::config::{Algorithm, ExperimentConfig};
use crate::error::Result;

/// Closed set of estimators a run can drive.
pub enum AnyEstimator {
    Rap(Rap),
    DwayRap(DWayRap),
    RapPrime(RapPrime),
    SpaceSaving(SpaceSaving),
    Frequent(Frequent),
    Cms(CountMinSketch),
    Cs(CountSketch),
    Exact(ExactCounter),
}

impl AnyEstimator {
    /// Builds a fresh estimator for `cfg` with the given seed. Sketches are
    /// sized to 4 rows of `2 * counters` cells.
    pub fn build(cfg: &ExperimentConfig, seed: u64) -> Result<Self> {
        let m = cfg.counters;
        Ok(match cfg.algorithm {
            Algorithm::Rap => AnyEstimator::Rap(Rap::new(m, seed)),
            Algorithm::DwayRap => AnyEstimator::DwayRap(DWayRap::new(m, cfg.ways, seed)?),
            Algorithm::RapPrime => {
                let p = RapPrimeConfig::new(cfg.admission_p.unwrap_or(1.0))?;
                AnyEstimator::RapPrime(RapPrime::new(m, p, seed))
            }
            Algorithm::SpaceSaving => AnyEstimator::SpaceSaving(SpaceSaving::new(m)),
            Algorithm::Frequent => AnyEstimator::Frequent(Frequent::new(m)),
            Algorithm::Cms => AnyEstimator::Cms(CountMinSketch::with_budget(m, seed)?),
            Algorithm::Cs => AnyEstimator::Cs(CountSketch::with_budget(m, seed)?),
            Algorithm::Exact => AnyEstimator::Exact(ExactCounter::new()),
        })
    }

    /// Top candidates, or `None` for sketches.
    pub fn report(&self, m: usize) -> Option<Vec<(FlowId, u64)>> {
        match self {
            AnyEstimator::Rap(e) => Some(e.top_k(m)),
            AnyEstimator::DwayRap(e) => Some(e.top_k(m)),
            AnyEstimator::RapPrime(e) => Some(e.top_k(m)),
            AnyEstimator::SpaceSaving(e) => Some(e.top_k(m)),
            AnyEstimator::Frequent(e) => Some(e.top_k(m)),
            AnyEstimator::Exact(e) => Some(TopKReport::top_k(e, m)),
            AnyEstimator::Cms(_) | AnyEstimator::Cs(_) => None,
        }
    }
}

impl FrequencyEstimator for AnyEstimator {
    #[inline]
    fn insert(&mut self, flow: FlowId) {
        match self {
            AnyEstimator::Rap(e) => e.add(flow),
            AnyEstimator::DwayRap(e) => e.add(flow),
            AnyEstimator::RapPrime(e) => e.add(flow),
            AnyEstimator::SpaceSaving(e) => e.add(flow),
            AnyEstimator::Frequent(e) => e.add(flow),
            AnyEstimator::Cms(e) => e.add(flow),
            AnyEstimator::Cs(e) => e.add(flow),
            AnyEstimator::Exact(e) => {
                e.add(flow);
            }
        }
    }

    #[inline]
    fn query(&self, flow: FlowId) -> i64 {
        match self {
            AnyEstimator::Rap(e) => e.estimate(flow) as i64,
            AnyEstimator::DwayRap(e) => e.estimate(flow) as i64,
            AnyEstimator::RapPrime(e) => e.estimate(flow) as i64,
            AnyEstimator::SpaceSaving(e) => e.estimate(flow) as i64,
            AnyEstimator::Frequent(e) => e.estimate(flow) as i64,
            AnyEstimator::Cms(e) => e.estimate(flow) as i64,
            AnyEstimator::Cs(e) => e.estimate(flow),
            AnyEstimator::Exact(e) => e.count(flow) as i64,
        }
    }
}
