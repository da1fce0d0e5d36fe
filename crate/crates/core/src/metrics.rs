//! On-arrival mean square error and top-k recall/precision.

use rustc_hash::FxHashMap;

use crate::counters::FrequencyEstimator;
use crate::stream::{ExactCounter, FlowId};
use crate::{Error, Result};

/// Running sum of squared errors.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct MetricAccumulator {
    sum_sq_err: f64,
    n: u64,
}

impl MetricAccumulator {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn record(&mut self, estimate: f64, truth: f64) {
        let err = estimate - truth;
        self.sum_sq_err += err * err;
        self.n += 1;
    }

    pub fn count(&self) -> u64 {
        self.n
    }

    pub fn sum_sq_err(&self) -> f64 {
        self.sum_sq_err
    }

    pub fn mse(&self) -> Result<f64> {
        if self.n == 0 {
            return Err(Error::UndefinedMetric("MSE of an empty stream"));
        }
        Ok(self.sum_sq_err / self.n as f64)
    }
}

/// Feeds every event to `alg` and `oracle`, then compares the estimate for
/// the arriving flow with its exact count. Both sides include the arrival.
pub fn on_arrival_run<E>(alg: &mut E, stream: &[FlowId], oracle: &mut ExactCounter) -> Result<f64>
where
    E: FrequencyEstimator + ?Sized,
{
    let mut acc = MetricAccumulator::new();
    for &x in stream {
        alg.insert(x);
        let truth = oracle.add(x);
        acc.record(alg.query(x) as f64, truth as f64);
    }
    acc.mse()
}

/// Exact count of each event's flow at its arrival, arrival included.
/// Lets several estimators be scored against one pass of ground truth.
pub fn on_arrival_truth(stream: &[FlowId]) -> Vec<u64> {
    let mut counts: FxHashMap<FlowId, u64> = FxHashMap::default();
    stream
        .iter()
        .map(|&x| {
            let c = counts.entry(x).or_insert(0);
            *c += 1;
            *c
        })
        .collect()
}

/// [`on_arrival_run`] against precomputed [`on_arrival_truth`].
pub fn on_arrival_mse<E>(alg: &mut E, stream: &[FlowId], truth: &[u64]) -> Result<f64>
where
    E: FrequencyEstimator + ?Sized,
{
    assert_eq!(stream.len(), truth.len(), "truth must align with the stream");
    let mut acc = MetricAccumulator::new();
    for (&x, &t) in stream.iter().zip(truth) {
        alg.insert(x);
        acc.record(alg.query(x) as f64, t as f64);
    }
    acc.mse()
}

/// Candidate set scored against the exact top-k threshold.
#[derive(Debug, Clone, PartialEq)]
pub struct TopKResult {
    pub reported: Vec<FlowId>,
    pub k: usize,
    /// The k-th largest exact frequency. Flows at or above it are hits.
    pub true_topk_threshold: u64,
}

impl TopKResult {
    pub fn new(reported: Vec<FlowId>, k: usize, exact: &ExactCounter) -> Result<Self> {
        if k == 0 {
            return Err(Error::invalid("k", "must be at least 1"));
        }
        Ok(Self {
            reported,
            k,
            true_topk_threshold: exact.kth_largest(k),
        })
    }

    fn hits(&self, exact: &ExactCounter) -> usize {
        self.reported.iter().filter(|&&e| self.is_hit(exact.count(e))).count()
    }

    #[inline]
    fn is_hit(&self, frequency: u64) -> bool {
        // A flow that never appeared is never a hit, even when fewer than k
        // flows exist and the threshold is 0.
        frequency >= self.true_topk_threshold && frequency > 0
    }

    /// Hits over `k`, capped at 1 when ties at the threshold produce more
    /// than `k` hits.
    pub fn recall(&self, exact: &ExactCounter) -> f64 {
        (self.hits(exact) as f64 / self.k as f64).min(1.0)
    }

    /// Hits over the number of reported flows.
    pub fn precision(&self, exact: &ExactCounter) -> Result<f64> {
        if self.reported.is_empty() {
            return Err(Error::UndefinedMetric("precision of an empty report"));
        }
        Ok(self.hits(exact) as f64 / self.reported.len() as f64)
    }
}

/// `(recall, precision)` after each prefix of `report`, which must be in the
/// estimator's own descending order.
pub fn precision_recall_curve(report: &[FlowId], exact: &ExactCounter, k: usize) -> Result<Vec<(f64, f64)>> {
    let scorer = TopKResult::new(Vec::new(), k, exact)?;
    let mut hits = 0usize;
    Ok(report
        .iter()
        .enumerate()
        .map(|(i, &flow)| {
            if scorer.is_hit(exact.count(flow)) {
                hits += 1;
            }
            let recall = (hits as f64 / k as f64).min(1.0);
            (recall, hits as f64 / (i + 1) as f64)
        })
        .collect())
}

/// Arithmetic mean and sample standard deviation.
pub fn mean_and_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counters::Rap;
    use crate::sketch::{CountMinSketch, SketchMatrix};

    fn exact_from(pairs: &[(u64, u64)]) -> ExactCounter {
        let mut o = ExactCounter::new();
        for &(f, n) in pairs {
            for _ in 0..n {
                o.add(FlowId(f));
            }
        }
        o
    }

    const A: FlowId = FlowId(1);
    const B: FlowId = FlowId(2);
    const C: FlowId = FlowId(3);
    const D: FlowId = FlowId(4);

    #[test]
    fn empty_stream_is_undefined() {
        let mut rap = Rap::new(2, 0);
        assert!(matches!(
            on_arrival_run(&mut rap, &[], &mut ExactCounter::new()),
            Err(Error::UndefinedMetric(_))
        ));
        assert!(MetricAccumulator::new().mse().is_err());
    }

    #[test]
    fn exact_oracle_scores_zero() {
        let stream: Vec<FlowId> = (0..500u64).map(|i| FlowId(i * 7 % 13)).collect();
        let mut alg = ExactCounter::new();
        assert_eq!(on_arrival_run(&mut alg, &stream, &mut ExactCounter::new()).unwrap(), 0.0);
    }

    #[test]
    fn small_rap_run_is_exact() {
        let mut rap = Rap::new(2, 1);
        assert_eq!(on_arrival_run(&mut rap, &[A, A, B], &mut ExactCounter::new()).unwrap(), 0.0);
    }

    #[test]
    fn one_cell_cms_mse() {
        let mut cms = CountMinSketch::new(SketchMatrix::new(1, 1, 0).unwrap());
        assert_eq!(on_arrival_run(&mut cms, &[A, B], &mut ExactCounter::new()).unwrap(), 0.5);
    }

    #[test]
    fn precomputed_truth_agrees() {
        let stream: Vec<FlowId> = (0..2000u64).map(|i| FlowId(i * i % 37)).collect();
        let truth = on_arrival_truth(&stream);
        let a = on_arrival_run(&mut Rap::new(8, 5), &stream, &mut ExactCounter::new()).unwrap();
        let b = on_arrival_mse(&mut Rap::new(8, 5), &stream, &truth).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn recall_precision_with_ties() {
        let exact = exact_from(&[(1, 5), (2, 3), (3, 3), (4, 1)]);
        let r = TopKResult::new(vec![A, C, D], 2, &exact).unwrap();
        assert_eq!(r.true_topk_threshold, 3);
        assert_eq!(r.recall(&exact), 1.0);
        assert!((r.precision(&exact).unwrap() - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn perfect_and_empty_reports() {
        let exact = exact_from(&[(1, 5), (2, 4), (3, 2), (4, 1)]);
        let perfect = TopKResult::new(vec![A, B], 2, &exact).unwrap();
        assert_eq!((perfect.recall(&exact), perfect.precision(&exact).unwrap()), (1.0, 1.0));
        let misses = TopKResult::new(vec![C, D], 2, &exact).unwrap();
        assert_eq!((misses.recall(&exact), misses.precision(&exact).unwrap()), (0.0, 0.0));
        let empty = TopKResult::new(vec![], 2, &exact).unwrap();
        assert!(empty.precision(&exact).is_err());
        assert_eq!(empty.recall(&exact), 0.0);
        assert!(TopKResult::new(vec![A], 0, &exact).is_err());
    }

    #[test]
    fn recall_is_capped_by_ties() {
        let exact = exact_from(&[(1, 3), (2, 3), (3, 3)]);
        let r = TopKResult::new(vec![A, B, C], 1, &exact).unwrap();
        assert_eq!(r.recall(&exact), 1.0);
        assert_eq!(r.precision(&exact).unwrap(), 1.0);
    }

    #[test]
    fn curve_prefixes() {
        let exact = exact_from(&[(1, 5), (2, 3), (3, 3), (4, 1)]);
        let curve = precision_recall_curve(&[A, C, D], &exact, 2).unwrap();
        assert_eq!(curve[0], (0.5, 1.0));
        assert_eq!(curve[1], (1.0, 1.0));
        assert_eq!(curve[2].0, 1.0);
        assert!((curve[2].1 - 2.0 / 3.0).abs() < 1e-15);

        let misses = precision_recall_curve(&[D, FlowId(99)], &exact, 2).unwrap();
        assert!(misses.iter().all(|&(_, p)| p == 0.0));
    }

    #[test]
    fn curve_identities() {
        let exact = exact_from(&[(1, 9), (2, 8), (3, 7), (4, 6), (5, 5), (6, 4), (7, 3)]);
        let report: Vec<FlowId> = [6u64, 1, 7, 3, 2, 5, 4].iter().map(|&f| FlowId(f)).collect();
        let k = 3;
        let curve = precision_recall_curve(&report, &exact, k).unwrap();
        for (p, w) in curve.iter().enumerate() {
            let (recall, precision) = *w;
            assert!(precision + 1e-12 >= recall * k as f64 / (p + 1) as f64);
            if p > 0 {
                assert!(recall >= curve[p - 1].0);
            }
        }
        let perfect = precision_recall_curve(&report[..0], &exact, k).unwrap();
        assert!(perfect.is_empty());
    }

    #[test]
    fn mean_std() {
        let (m, s) = mean_and_std(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(m, 2.5);
        assert!((s - (5.0f64 / 3.0).sqrt()).abs() < 1e-12);
        assert_eq!(mean_and_std(&[2.0]), (2.0, 0.0));
    }
}
