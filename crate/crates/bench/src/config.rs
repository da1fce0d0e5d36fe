use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{BenchError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Rap,
    DwayRap,
    RapPrime,
    SpaceSaving,
    Frequent,
    Cms,
    Cs,
    Exact,
}

impl Algorithm {
    pub const ALL: [Algorithm; 8] = [
        Algorithm::Rap,
        Algorithm::DwayRap,
        Algorithm::RapPrime,
        Algorithm::SpaceSaving,
        Algorithm::Frequent,
        Algorithm::Cms,
        Algorithm::Cs,
        Algorithm::Exact,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Rap => "rap",
            Algorithm::DwayRap => "dway_rap",
            Algorithm::RapPrime => "rap_prime",
            Algorithm::SpaceSaving => "space_saving",
            Algorithm::Frequent => "frequent",
            Algorithm::Cms => "cms",
            Algorithm::Cs => "cs",
            Algorithm::Exact => "exact",
        }
    }

    pub fn is_sketch(self) -> bool {
        matches!(self, Algorithm::Cms | Algorithm::Cs)
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let normalized = s.trim().to_ascii_lowercase().replace('-', "_");
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == normalized)
            .or(match normalized.as_str() {
                "ss" => Some(Algorithm::SpaceSaving),
                "fr" => Some(Algorithm::Frequent),
                "dway" | "dwrap" => Some(Algorithm::DwayRap),
                _ => None,
            })
            .ok_or_else(|| {
                let names: Vec<_> = Algorithm::ALL.iter().map(|a| a.name()).collect();
                format!("unknown algorithm `{s}` (expected one of {})", names.join(", "))
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Metric {
    /// On-arrival mean square error.
    Mse,
    /// Recall and precision of the top `m_report` candidates.
    Topk,
    /// Precision-recall curve over report prefixes.
    Pr,
}

impl Metric {
    pub fn name(self) -> &'static str {
        match self {
            Metric::Mse => "mse",
            Metric::Topk => "topk",
            Metric::Pr => "pr",
        }
    }
}

impl FromStr for Metric {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "mse" => Ok(Metric::Mse),
            "topk" | "top-k" | "top_k" => Ok(Metric::Topk),
            "pr" | "pr-curve" | "pr_curve" => Ok(Metric::Pr),
            _ => Err(format!("unknown metric `{s}` (expected mse, topk or pr)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Workload {
    Zipf { alpha: f64, domain: u64 },
    Trace { path: PathBuf },
}

impl fmt::Display for Workload {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Workload::Zipf { alpha, domain } => write!(f, "zipf(alpha={alpha}, domain={domain})"),
            Workload::Trace { path } => write!(f, "trace({})", path.display()),
        }
    }
}

/// One cell of the experimental grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub algorithm: Algorithm,
    /// Counter budget M; sketches get 8M cells in 4 rows.
    pub counters: usize,
    pub ways: usize,
    pub admission_p: Option<f64>,
    pub workload: Workload,
    pub events_per_batch: usize,
    pub batches: usize,
    pub seed: u64,
    pub metric: Metric,
    pub k: usize,
    pub m_report: usize,
}

pub const DEFAULT_EVENTS_PER_BATCH: usize = 1_000_000;
pub const DEFAULT_BATCHES: usize = 10;
pub const DEFAULT_SWEEP_COUNTERS: [usize; 7] = [32, 64, 128, 256, 512, 1024, 2048];

impl ExperimentConfig {
    pub fn new(algorithm: Algorithm, counters: usize, workload: Workload) -> Self {
        Self {
            algorithm,
            counters,
            ways: rap_core::dway::DEFAULT_WAYS,
            admission_p: None,
            workload,
            events_per_batch: DEFAULT_EVENTS_PER_BATCH,
            batches: DEFAULT_BATCHES,
            seed: 1,
            metric: Metric::Mse,
            k: 32,
            m_report: 32,
        }
    }

    pub fn zipf(algorithm: Algorithm, counters: usize, alpha: f64, domain: u64) -> Self {
        Self::new(algorithm, counters, Workload::Zipf { alpha, domain })
    }

    pub fn validate(&self) -> Result<()> {
        if self.counters == 0 {
            return Err(BenchError::usage("counters", "must be at least 1"));
        }
        if self.batches == 0 {
            return Err(BenchError::usage("batches", "must be at least 1"));
        }
        if self.events_per_batch == 0 {
            return Err(BenchError::usage("events-per-batch", "must be at least 1"));
        }
        if self.algorithm == Algorithm::DwayRap {
            if self.ways == 0 {
                return Err(BenchError::usage("ways", "must be at least 1"));
            }
            if !self.counters.is_multiple_of(self.ways) {
                return Err(BenchError::usage(
                    "counters",
                    format!("{} is not divisible by ways {}", self.counters, self.ways),
                ));
            }
        }
        if self.algorithm == Algorithm::RapPrime {
            match self.admission_p {
                None => return Err(BenchError::usage("admission-p", "required for rap_prime")),
                Some(p) if !(p > 0.0 && p <= 1.0) => {
                    return Err(BenchError::usage("admission-p", format!("must lie in (0, 1], got {p}")))
                }
                _ => {}
            }
        }
        if let Workload::Zipf { alpha, domain } = self.workload {
            if domain == 0 {
                return Err(BenchError::usage("domain", "must be at least 1"));
            }
            if !(alpha.is_finite() && alpha >= 0.0) {
                return Err(BenchError::usage("alpha", format!("must be finite and >= 0, got {alpha}")));
            }
        }
        if self.metric != Metric::Mse {
            if self.algorithm.is_sketch() {
                return Err(BenchError::usage(
                    "metric",
                    format!("{} keeps no flow identifiers and cannot report top-k", self.algorithm),
                ));
            }
            if self.k == 0 {
                return Err(BenchError::usage("k", "must be at least 1"));
            }
            if self.m_report == 0 {
                return Err(BenchError::usage("m-report", "must be at least 1"));
            }
        }
        Ok(())
    }
}

/// Parses counts written as `1048576`, `2^20` or `1e6`.
pub fn parse_quantity(s: &str) -> Result<f64, String> {
    let s = s.trim();
    let value = if let Some((base, exp)) = s.split_once('^') {
        let base: f64 = base.trim().parse().map_err(|_| format!("bad base in `{s}`"))?;
        let exp: f64 = exp.trim().parse().map_err(|_| format!("bad exponent in `{s}`"))?;
        base.powf(exp)
    } else {
        s.parse::<f64>().map_err(|_| format!("cannot parse `{s}` as a number"))?
    };
    if !value.is_finite() || value < 0.0 {
        return Err(format!("`{s}` is not a finite non-negative number"));
    }
    Ok(value)
}

/// [`parse_quantity`] restricted to integers representable as `u64`.
pub fn parse_count(s: &str) -> Result<u64, String> {
    let v = parse_quantity(s)?;
    if v.fract() != 0.0 || v >= 18_446_744_073_709_551_616.0 {
        return Err(format!("`{s}` is not an integer in u64 range"));
    }
    Ok(v as u64)
}
