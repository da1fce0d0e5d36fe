//! d-way set-associative RAP.
//!
//! Each flow may live only in the set selected by a seeded hash. A miss on
//! a full set picks the set's minimal entry as the victim and admits the
//! newcomer with probability `1/(c_min + 1)`. The newcomer takes the victim's
//! counter and the access update then adds one. Operations touch exactly one
//! set, so cost depends on `d` and not on the total capacity.

use crate::counters::{sort_report, AdmissionRng, CounterEntry};
use crate::hash::{derive_seed, hash64};
use crate::stream::FlowId;
use crate::{Error, Result};

/// Associativity used when none is given.
pub const DEFAULT_WAYS: usize = 16;

/// `num_sets` sets of `ways` optional entries each.
#[derive(Debug, Clone)]
pub struct SetAssociativeTable {
    num_sets: usize,
    ways: usize,
    slots: Vec<Option<CounterEntry>>,
    set_hash_seed: u64,
}

impl SetAssociativeTable {
    /// `capacity` must be a positive multiple of `ways`.
    pub fn new(capacity: usize, ways: usize, set_hash_seed: u64) -> Result<Self> {
        if ways == 0 {
            return Err(Error::invalid("ways", "must be at least 1"));
        }
        if capacity == 0 || !capacity.is_multiple_of(ways) {
            return Err(Error::invalid(
                "counters",
                format!("capacity {capacity} must be a positive multiple of ways {ways}"),
            ));
        }
        Ok(Self {
            num_sets: capacity / ways,
            ways,
            slots: vec![None; capacity],
            set_hash_seed,
        })
    }

    pub fn num_sets(&self) -> usize {
        self.num_sets
    }

    pub fn ways(&self) -> usize {
        self.ways
    }

    pub fn capacity(&self) -> usize {
        self.slots.len()
    }

    /// The set a flow maps to.
    #[inline]
    pub fn set_of(&self, flow: FlowId) -> usize {
        (hash64(self.set_hash_seed, flow.0) % self.num_sets as u64) as usize
    }

    #[inline]
    pub fn set(&self, index: usize) -> &[Option<CounterEntry>] {
        &self.slots[index * self.ways..(index + 1) * self.ways]
    }

    #[inline]
    fn set_mut(&mut self, index: usize) -> &mut [Option<CounterEntry>] {
        &mut self.slots[index * self.ways..(index + 1) * self.ways]
    }

    #[inline]
    pub fn get(&self, flow: FlowId) -> Option<u64> {
        self.set(self.set_of(flow))
            .iter()
            .flatten()
            .find(|e| e.flow == flow)
            .map(|e| e.count)
    }

    pub fn entries(&self) -> impl Iterator<Item = CounterEntry> + '_ {
        self.slots.iter().flatten().copied()
    }

    /// Resident entries with the set each one occupies.
    pub fn placements(&self) -> impl Iterator<Item = (usize, CounterEntry)> + '_ {
        self.slots
            .iter()
            .enumerate()
            .filter_map(|(i, e)| e.map(|e| (i / self.ways, e)))
    }

    /// Smallest counter in a set, 0 if the set has a free way.
    pub fn set_min(&self, index: usize) -> u64 {
        let set = self.set(index);
        if set.iter().any(Option::is_none) {
            return 0;
        }
        set.iter().flatten().map(|e| e.count).min().unwrap_or(0)
    }
}

/// How a victim is chosen among entries sharing a set's minimal count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum VictimTieBreak {
    #[default]
    LowestWay,
    /// The fully associative table's convention.
    SmallestFlow,
}

/// RAP as a cache policy on a [`SetAssociativeTable`].
#[derive(Debug, Clone)]
pub struct DWayRap {
    table: SetAssociativeTable,
    rng: AdmissionRng,
    tie_break: VictimTieBreak,
}

impl DWayRap {
    /// The set hash and the admission generator are both derived from `seed`.
    pub fn new(capacity: usize, ways: usize, seed: u64) -> Result<Self> {
        Self::with_seeds(capacity, ways, derive_seed(seed, 0), derive_seed(seed, 1))
    }

    pub fn with_seeds(capacity: usize, ways: usize, set_hash_seed: u64, admission_seed: u64) -> Result<Self> {
        Ok(Self {
            table: SetAssociativeTable::new(capacity, ways, set_hash_seed)?,
            rng: AdmissionRng::new(admission_seed),
            tie_break: VictimTieBreak::default(),
        })
    }

    pub fn with_tie_break(mut self, tie_break: VictimTieBreak) -> Self {
        self.tie_break = tie_break;
        self
    }

    pub fn add(&mut self, flow: FlowId) {
        let set_index = self.table.set_of(flow);
        let set = self.table.set_mut(set_index);

        let mut free = None;
        let mut victim: Option<(usize, CounterEntry)> = None;
        for (way, slot) in set.iter_mut().enumerate() {
            match slot {
                Some(e) if e.flow == flow => {
                    e.count += 1;
                    return;
                }
                Some(e) => {
                    let better = match (victim, self.tie_break) {
                        (None, _) => true,
                        (Some((_, v)), VictimTieBreak::LowestWay) => e.count < v.count,
                        (Some((_, v)), VictimTieBreak::SmallestFlow) => (e.count, e.flow) < (v.count, v.flow),
                    };
                    if better {
                        victim = Some((way, *e));
                    }
                }
                None => {
                    if free.is_none() {
                        free = Some(way);
                    }
                }
            }
        }

        if let Some(way) = free {
            // Admitted at 0, then the access update.
            set[way] = Some(CounterEntry { flow, count: 1 });
            return;
        }
        let (way, min) = victim.expect("a full set has a victim");
        let min_count = min.count;
        if self.rng.admit_over(min_count) {
            set[way] = Some(CounterEntry {
                flow,
                count: min_count + 1,
            });
        }
    }

    #[inline]
    pub fn estimate(&self, flow: FlowId) -> u64 {
        self.table.get(flow).unwrap_or(0)
    }

    /// Global report over the union of all sets.
    pub fn top_k_report(&self, m: usize) -> Vec<(FlowId, u64)> {
        sort_report(self.table.entries().map(|e| (e.flow, e.count)).collect(), m)
    }

    pub fn table(&self) -> &SetAssociativeTable {
        &self.table
    }
}
