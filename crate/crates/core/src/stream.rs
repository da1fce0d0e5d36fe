//! Stream elements, Zipf workloads, trace files and the exact-count oracle.

use std::fmt;
use std::fs;
use std::hash::Hasher;
use std::io::Write;
use std::path::Path;

use fnv::FnvHasher;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustc_hash::FxHashMap;

use crate::{Error, Result};

/// Opaque 64-bit stream element identifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FlowId(pub u64);

impl fmt::Display for FlowId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:x}", self.0)
    }
}

impl From<u64> for FlowId {
    fn from(v: u64) -> Self {
        FlowId(v)
    }
}

/// Largest domain served by the exact inverse-CDF table.
pub const INVERSE_CDF_MAX_DOMAIN: u64 = 10_000_000;

/// Default domain size of synthetic workloads.
pub const DEFAULT_DOMAIN: u64 = 1 << 20;

/// Parameters of an i.i.d. Zipf stream over ranks `1..=domain`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZipfParams {
    pub alpha: f64,
    pub domain: u64,
    pub seed: u64,
}

impl ZipfParams {
    pub fn new(alpha: f64, domain: u64, seed: u64) -> Self {
        Self {
            alpha,
            domain,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.domain == 0 {
            return Err(Error::invalid("domain", "must be at least 1"));
        }
        if !(self.alpha.is_finite() && self.alpha >= 0.0) {
            return Err(Error::invalid("alpha", format!("must be finite and >= 0, got {}", self.alpha)));
        }
        Ok(())
    }

    /// The normalizer `Γ_alpha(domain)`.
    pub fn normalizer(&self) -> f64 {
        crate::analysis::gamma_alpha(self.alpha, self.domain as f64)
    }

    /// Probability of drawing rank `i`: `i^-alpha / Γ_alpha(domain)`.
    ///
    /// Recomputes the normalizer on every call; use [`Self::normalizer`]
    /// when evaluating many ranks.
    pub fn probability(&self, rank: u64) -> f64 {
        if rank == 0 || rank > self.domain {
            return 0.0;
        }
        (rank as f64).powf(-self.alpha) / self.normalizer()
    }
}

enum Sampler {
    /// Cumulative probabilities of ranks 1..=D; last entry is exactly 1.
    InverseCdf(Vec<f64>),
    /// Rejection-inversion against the continuous power-law envelope.
    /// Expected trials per draw stay below ~1.1 for every alpha >= 0.
    Rejection(rand_distr::Zipf<f64>),
}

/// Seeded Zipf generator. Rank 1 is the most frequent item.
pub struct ZipfSampler {
    params: ZipfParams,
    sampler: Sampler,
    rng: ChaCha8Rng,
}

impl ZipfSampler {
    pub fn new(params: ZipfParams) -> Result<Self> {
        params.validate()?;
        let sampler = if params.domain <= INVERSE_CDF_MAX_DOMAIN {
            Sampler::InverseCdf(cumulative_table(params.alpha, params.domain))
        } else {
            let dist = rand_distr::Zipf::new(params.domain as f64, params.alpha)
                .map_err(|e| Error::invalid("alpha", e.to_string()))?;
            Sampler::Rejection(dist)
        };
        Ok(Self {
            params,
            sampler,
            rng: ChaCha8Rng::seed_from_u64(params.seed),
        })
    }

    pub fn params(&self) -> &ZipfParams {
        &self.params
    }

    pub fn next_flow(&mut self) -> FlowId {
        let rank = match &self.sampler {
            Sampler::InverseCdf(cdf) => {
                let u: f64 = self.rng.random();
                let idx = cdf.partition_point(|&c| c <= u);
                idx.min(cdf.len() - 1) as u64 + 1
            }
            Sampler::Rejection(dist) => (dist.sample(&mut self.rng) as u64).clamp(1, self.params.domain),
        };
        FlowId(rank)
    }

    pub fn take(&mut self, n: usize) -> Vec<FlowId> {
        (0..n).map(|_| self.next_flow()).collect()
    }
}

fn cumulative_table(alpha: f64, domain: u64) -> Vec<f64> {
    let mut cdf = Vec::with_capacity(domain as usize);
    let mut acc = 0.0;
    for i in 1..=domain {
        acc += (i as f64).powf(-alpha);
        cdf.push(acc);
    }
    let total = acc;
    for c in cdf.iter_mut() {
        *c /= total;
    }
    if let Some(last) = cdf.last_mut() {
        *last = 1.0;
    }
    cdf
}

/// Draws `n` i.i.d. Zipf ranks. Identical `(params, n)` yield identical output.
pub fn zipf_sample(params: ZipfParams, n: usize) -> Result<Vec<FlowId>> {
    Ok(ZipfSampler::new(params)?.take(n))
}

/// Flows parsed from a trace file together with the number of skipped lines.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Trace {
    pub flows: Vec<FlowId>,
    pub skipped: usize,
}

/// Identity of the hash applied to non-hex trace tokens.
pub const TOKEN_HASH_IDENTITY: &str = "FNV-1a 64";

/// Parses a single trace record.
///
/// Hex tokens (optionally `0x`-prefixed, at most 16 digits) become their
/// value; any other token is hashed with FNV-1a 64. Returns `None` for blank
/// lines and for hex tokens that overflow 64 bits.
pub fn parse_record(line: &str) -> Option<Result<FlowId, ()>> {
    let token = line.trim();
    if token.is_empty() {
        return None;
    }
    let digits = token
        .strip_prefix("0x")
        .or_else(|| token.strip_prefix("0X"))
        .unwrap_or(token);
    if !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_hexdigit()) {
        return Some(u64::from_str_radix(digits, 16).map(FlowId).map_err(|_| ()));
    }
    let mut hasher = FnvHasher::default();
    hasher.write(token.as_bytes());
    Some(Ok(FlowId(hasher.finish())))
}

/// Reads a newline-delimited trace. Malformed lines (invalid UTF-8 or
/// overlong hex) are skipped and counted.
pub fn read_trace(path: impl AsRef<Path>) -> Result<Trace> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut trace = Trace::default();
    for raw in bytes.split(|&b| b == b'\n') {
        let Ok(line) = std::str::from_utf8(raw) else {
            trace.skipped += 1;
            continue;
        };
        match parse_record(line) {
            None => {}
            Some(Ok(flow)) => trace.flows.push(flow),
            Some(Err(())) => trace.skipped += 1,
        }
    }
    Ok(trace)
}

/// Writes flows one hex id per line, the format accepted by [`read_trace`].
pub fn write_trace<W: Write>(mut out: W, flows: &[FlowId]) -> std::io::Result<()> {
    for flow in flows {
        writeln!(out, "{:x}", flow.0)?;
    }
    out.flush()
}

/// Exact per-flow frequencies, the ground truth for every metric.
#[derive(Debug, Clone, Default)]
pub struct ExactCounter {
    counts: FxHashMap<FlowId, u64>,
    total: u64,
}

impl ExactCounter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_stream(stream: &[FlowId]) -> Self {
        let mut oracle = Self::new();
        for &x in stream {
            oracle.add(x);
        }
        oracle
    }

    /// Increments `flow` and returns its new count.
    #[inline]
    pub fn add(&mut self, flow: FlowId) -> u64 {
        self.total += 1;
        let c = self.counts.entry(flow).or_insert(0);
        *c += 1;
        *c
    }

    #[inline]
    pub fn count(&self, flow: FlowId) -> u64 {
        self.counts.get(&flow).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn distinct(&self) -> usize {
        self.counts.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (FlowId, u64)> + '_ {
        self.counts.iter().map(|(&f, &c)| (f, c))
    }

    /// The `k`-th largest exact frequency, or 0 when fewer than `k` flows
    /// have been seen.
    pub fn kth_largest(&self, k: usize) -> u64 {
        if k == 0 || k > self.counts.len() {
            return 0;
        }
        let mut counts: Vec<u64> = self.counts.values().copied().collect();
        let (_, kth, _) = counts.select_nth_unstable_by(k - 1, |a, b| b.cmp(a));
        *kth
    }

    /// Flows sorted by descending count, ties by ascending id.
    pub fn top_k(&self, k: usize) -> Vec<(FlowId, u64)> {
        crate::counters::sort_report(self.iter().collect(), k)
    }

    pub fn clear(&mut self) {
        self.counts.clear();
        self.total = 0;
    }
}
