//! Count-Min and Count Sketch baselines.
//!
//! Counter-based algorithms are compared against sketches holding eight
//! times as many counters arranged in four rows; see
//! [`SketchMatrix::for_counter_budget`].

use crate::counters::FrequencyEstimator;
use crate::hash::{derive_seed, hash64, reduce};
use crate::stream::FlowId;
use crate::{Error, Result};

/// Rows used under the comparison convention.
pub const COMPARISON_ROWS: usize = 4;
/// Sketch-to-counter-algorithm memory ratio under the comparison convention.
pub const COMPARISON_COUNTER_RATIO: usize = 8;

/// `rows × width` grid of signed counters with per-row seeded hashes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SketchMatrix {
    rows: usize,
    width: usize,
    cells: Vec<i64>,
    row_seeds: Vec<u64>,
    sign_seeds: Vec<u64>,
}

impl SketchMatrix {
    pub fn new(rows: usize, width: usize, seed: u64) -> Result<Self> {
        if rows == 0 {
            return Err(Error::invalid("rows", "must be at least 1"));
        }
        if width == 0 {
            return Err(Error::invalid("width", "must be at least 1"));
        }
        let row_seeds = (0..rows as u64).map(|r| derive_seed(seed, 2 * r)).collect();
        let sign_seeds = (0..rows as u64).map(|r| derive_seed(seed, 2 * r + 1)).collect();
        Ok(Self {
            rows,
            width,
            cells: vec![0; rows * width],
            row_seeds,
            sign_seeds,
        })
    }

    /// Geometry matching a counter-algorithm budget of `counters` entries:
    /// 4 rows of `2 * counters` cells, 8× the counters in total.
    pub fn for_counter_budget(counters: usize, seed: u64) -> Result<Self> {
        if counters == 0 {
            return Err(Error::invalid("counters", "must be at least 1"));
        }
        let width = counters * COMPARISON_COUNTER_RATIO / COMPARISON_ROWS;
        Self::new(COMPARISON_ROWS, width, seed)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn cells(&self) -> &[i64] {
        &self.cells
    }

    #[inline]
    fn slot(&self, row: usize, flow: FlowId) -> usize {
        row * self.width + reduce(hash64(self.row_seeds[row], flow.0), self.width)
    }

    #[inline]
    fn sign(&self, row: usize, flow: FlowId) -> i64 {
        if hash64(self.sign_seeds[row], flow.0) >> 63 == 0 {
            1
        } else {
            -1
        }
    }
}

/// Count-Min Sketch: increments one cell per row, answers the row minimum.
/// Never underestimates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountMinSketch {
    matrix: SketchMatrix,
}

impl CountMinSketch {
    pub fn new(matrix: SketchMatrix) -> Self {
        Self { matrix }
    }

    pub fn with_budget(counters: usize, seed: u64) -> Result<Self> {
        Ok(Self::new(SketchMatrix::for_counter_budget(counters, seed)?))
    }

    #[inline]
    pub fn add(&mut self, flow: FlowId) {
        for row in 0..self.matrix.rows {
            let i = self.matrix.slot(row, flow);
            self.matrix.cells[i] += 1;
        }
    }

    #[inline]
    pub fn estimate(&self, flow: FlowId) -> u64 {
        (0..self.matrix.rows)
            .map(|row| self.matrix.cells[self.matrix.slot(row, flow)])
            .min()
            .expect("at least one row") as u64
    }

    pub fn matrix(&self) -> &SketchMatrix {
        &self.matrix
    }
}

/// Count Sketch: signed updates, answers the median of the signed row
/// readings. With an even row count the two central readings are averaged
/// and rounded toward zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountSketch {
    matrix: SketchMatrix,
}

impl CountSketch {
    pub fn new(matrix: SketchMatrix) -> Self {
        Self { matrix }
    }

    pub fn with_budget(counters: usize, seed: u64) -> Result<Self> {
        Ok(Self::new(SketchMatrix::for_counter_budget(counters, seed)?))
    }

    #[inline]
    pub fn add(&mut self, flow: FlowId) {
        for row in 0..self.matrix.rows {
            let i = self.matrix.slot(row, flow);
            self.matrix.cells[i] += self.matrix.sign(row, flow);
        }
    }

    pub fn estimate(&self, flow: FlowId) -> i64 {
        let m = &self.matrix;
        let mut readings: Vec<i64> = (0..m.rows)
            .map(|row| m.sign(row, flow) * m.cells[m.slot(row, flow)])
            .collect();
        median_toward_zero(&mut readings)
    }

    pub fn matrix(&self) -> &SketchMatrix {
        &self.matrix
    }
}

fn median_toward_zero(values: &mut [i64]) -> i64 {
    values.sort_unstable();
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        // i64 division truncates toward zero.
        (values[n / 2 - 1] + values[n / 2]) / 2
    }
}

impl FrequencyEstimator for CountMinSketch {
    #[inline]
    fn insert(&mut self, flow: FlowId) {
        self.add(flow);
    }

    #[inline]
    fn query(&self, flow: FlowId) -> i64 {
        self.estimate(flow) as i64
    }
}

impl FrequencyEstimator for CountSketch {
    #[inline]
    fn insert(&mut self, flow: FlowId) {
        self.add(flow);
    }

    #[inline]
    fn query(&self, flow: FlowId) -> i64 {
        self.estimate(flow)
    }
}
