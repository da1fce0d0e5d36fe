use rustc_hash::FxHashMap;

use super::CounterEntry;
use crate::stream::FlowId;

/// Bounded set of counters with O(log M) access to the minimum.
///
/// Entries live in a binary min-heap ordered by `(count, flow)`, so the
/// minimum is unique and ties resolve to the smallest flow id. A hash index
/// maps each flow to its heap slot.
#[derive(Debug, Clone)]
pub struct MonitoredTable {
    capacity: usize,
    heap: Vec<CounterEntry>,
    index: FxHashMap<FlowId, usize>,
}

#[inline]
fn key(e: &CounterEntry) -> (u64, FlowId) {
    (e.count, e.flow)
}

impl MonitoredTable {
    /// # Panics
    /// When `capacity` is zero.
    pub fn new(capacity: usize) -> Self {
        assert!(capacity >= 1, "table capacity must be at least 1");
        let mut index = FxHashMap::default();
        index.reserve(capacity);
        Self {
            capacity,
            heap: Vec::with_capacity(capacity),
            index,
        }
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn len(&self) -> usize {
        self.heap.len()
    }

    pub fn is_empty(&self) -> bool {
        self.heap.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.heap.len() >= self.capacity
    }

    #[inline]
    pub fn get(&self, flow: FlowId) -> Option<u64> {
        self.index.get(&flow).map(|&i| self.heap[i].count)
    }

    pub fn contains(&self, flow: FlowId) -> bool {
        self.index.contains_key(&flow)
    }

    /// The entry with the smallest count, smallest flow among ties.
    #[inline]
    pub fn min(&self) -> Option<CounterEntry> {
        self.heap.first().copied()
    }

    /// Whether another entry shares the minimal count. Any such entry has a
    /// root-to-leaf path of minimal counts, so checking the root's children
    /// suffices.
    pub fn min_is_shared(&self) -> bool {
        let Some(root) = self.heap.first() else {
            return false;
        };
        self.heap[1..self.heap.len().min(3)]
            .iter()
            .any(|e| e.count == root.count)
    }

    /// Adds one to `flow`'s counter. Returns false if `flow` is not resident.
    #[inline]
    pub fn increment(&mut self, flow: FlowId) -> bool {
        match self.index.get(&flow) {
            Some(&i) => {
                self.heap[i].count += 1;
                self.sift_down(i);
                true
            }
            None => false,
        }
    }

    /// Inserts a new entry.
    ///
    /// # Panics
    /// When the table is full or `flow` is already resident.
    pub fn insert(&mut self, flow: FlowId, count: u64) {
        assert!(!self.is_full(), "insert into a full table");
        let pos = self.heap.len();
        let prev = self.index.insert(flow, pos);
        assert!(prev.is_none(), "flow {flow} already resident");
        self.heap.push(CounterEntry { flow, count });
        self.sift_up(pos);
    }

    /// Replaces the minimal entry with `(flow, count)` and returns the
    /// evicted entry. `count` must not be below the evicted count.
    pub fn replace_min(&mut self, flow: FlowId, count: u64) -> CounterEntry {
        let old = self.heap[0];
        debug_assert!(count >= old.count);
        debug_assert!(!self.index.contains_key(&flow));
        self.index.remove(&old.flow);
        self.index.insert(flow, 0);
        self.heap[0] = CounterEntry { flow, count };
        self.sift_down(0);
        old
    }

    pub fn pop_min(&mut self) -> Option<CounterEntry> {
        let last = self.heap.len().checked_sub(1)?;
        self.heap.swap(0, last);
        let min = self.heap.pop()?;
        self.index.remove(&min.flow);
        if !self.heap.is_empty() {
            self.index.insert(self.heap[0].flow, 0);
            self.sift_down(0);
        }
        Some(min)
    }

    pub fn iter(&self) -> impl Iterator<Item = CounterEntry> + '_ {
        self.heap.iter().copied()
    }

    pub fn sum_counts(&self) -> u64 {
        self.heap.iter().map(|e| e.count).sum()
    }

    pub fn clear(&mut self) {
        self.heap.clear();
        self.index.clear();
    }

    fn sift_up(&mut self, mut i: usize) {
        while i > 0 {
            let parent = (i - 1) / 2;
            if key(&self.heap[i]) >= key(&self.heap[parent]) {
                break;
            }
            self.swap(i, parent);
            i = parent;
        }
        self.index.insert(self.heap[i].flow, i);
    }

    fn sift_down(&mut self, mut i: usize) {
        let n = self.heap.len();
        loop {
            let l = 2 * i + 1;
            if l >= n {
                break;
            }
            let r = l + 1;
            let child = if r < n && key(&self.heap[r]) < key(&self.heap[l]) { r } else { l };
            if key(&self.heap[child]) >= key(&self.heap[i]) {
                break;
            }
            self.swap(i, child);
            i = child;
        }
    }

    #[inline]
    fn swap(&mut self, a: usize, b: usize) {
        self.heap.swap(a, b);
        *self.index.get_mut(&self.heap[a].flow).expect("indexed") = a;
        *self.index.get_mut(&self.heap[b].flow).expect("indexed") = b;
    }

    #[cfg(test)]
    fn check(&self) {
        assert_eq!(self.heap.len(), self.index.len());
        for (i, e) in self.heap.iter().enumerate() {
            assert_eq!(self.index[&e.flow], i);
            if i > 0 {
                assert!(key(&self.heap[(i - 1) / 2]) <= key(e));
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[derive(Debug, Clone)]
    enum Op {
        Increment(u64),
        Insert(u64, u64),
        ReplaceMin(u64, u64),
        PopMin,
    }

    fn op() -> impl Strategy<Value = Op> {
        prop_oneof![
            (0u64..40).prop_map(Op::Increment),
            (0u64..40, 1u64..20).prop_map(|(f, c)| Op::Insert(f, c)),
            (0u64..40, 0u64..5).prop_map(|(f, d)| Op::ReplaceMin(f, d)),
            Just(Op::PopMin),
        ]
    }

    proptest! {
        #[test]
        fn min_agrees_with_linear_scan(cap in 1usize..12, ops in prop::collection::vec(op(), 0..200)) {
            let mut t = MonitoredTable::new(cap);
            for op in ops {
                match op {
                    Op::Increment(f) => { t.increment(FlowId(f)); }
                    Op::Insert(f, c) => {
                        if !t.is_full() && !t.contains(FlowId(f)) {
                            t.insert(FlowId(f), c);
                        }
                    }
                    Op::ReplaceMin(f, d) => {
                        if let Some(m) = t.min() {
                            if !t.contains(FlowId(f)) {
                                t.replace_min(FlowId(f), m.count + d);
                            }
                        }
                    }
                    Op::PopMin => { t.pop_min(); }
                }
                t.check();
                prop_assert!(t.len() <= cap);
                let scan = t.iter().min_by_key(|e| (e.count, e.flow));
                prop_assert_eq!(t.min(), scan);
                let shared = t.iter().filter(|e| Some(e.count) == scan.map(|m| m.count)).count() > 1;
                prop_assert_eq!(t.min_is_shared(), shared);
            }
        }
    }

    #[test]
    fn ties_resolve_to_smallest_flow() {
        let mut t = MonitoredTable::new(3);
        t.insert(FlowId(9), 2);
        t.insert(FlowId(4), 2);
        t.insert(FlowId(7), 5);
        assert_eq!(t.min(), Some(CounterEntry { flow: FlowId(4), count: 2 }));
        assert!(t.min_is_shared());
        assert_eq!(t.replace_min(FlowId(1), 3).flow, FlowId(4));
        assert_eq!(t.min().unwrap().flow, FlowId(9));
        assert!(!t.min_is_shared());
    }

    #[test]
    #[should_panic(expected = "full table")]
    fn insert_past_capacity_panics() {
        let mut t = MonitoredTable::new(1);
        t.insert(FlowId(1), 1);
        t.insert(FlowId(2), 1);
    }
}
