use super::MonitoredTable;
use crate::stream::FlowId;

/// Frequent (Misra–Gries): a miss on a full table decrements every counter
/// and drops entries that reach zero; the arriving flow is not inserted.
///
/// The decrement-all step is a global offset. Resident entries store
/// `count + offset`, so the step is O(1) plus O(log M) per evicted entry.
#[derive(Debug, Clone)]
pub struct Frequent {
    table: MonitoredTable,
    offset: u64,
}

impl Frequent {
    pub fn new(capacity: usize) -> Self {
        Self {
            table: MonitoredTable::new(capacity),
            offset: 0,
        }
    }

    #[inline]
    pub fn add(&mut self, flow: FlowId) {
        if self.table.increment(flow) {
            return;
        }
        if !self.table.is_full() {
            self.table.insert(flow, self.offset + 1);
            return;
        }
        self.offset += 1;
        while let Some(min) = self.table.min() {
            if min.count > self.offset {
                break;
            }
            self.table.pop_min();
        }
    }

    #[inline]
    pub fn estimate(&self, flow: FlowId) -> u64 {
        self.table.get(flow).map_or(0, |stored| stored - self.offset)
    }

    pub fn top_k_report(&self, m: usize) -> Vec<(FlowId, u64)> {
        super::sort_report(
            self.table.iter().map(|e| (e.flow, e.count - self.offset)).collect(),
            m,
        )
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    pub fn sum_counts(&self) -> u64 {
        self.table.sum_counts() - self.offset * self.table.len() as u64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stream::ExactCounter;
    use proptest::prelude::*;

    #[test]
    fn decrement_all_evicts_zeroes() {
        let (a, b, c) = (FlowId(1), FlowId(2), FlowId(3));
        let mut fr = Frequent::new(2);
        fr.add(a);
        for _ in 0..3 {
            fr.add(b);
        }
        fr.add(c);
        assert_eq!(fr.top_k_report(10), vec![(b, 2)]);
        assert_eq!(fr.estimate(a), 0);
        assert_eq!(fr.estimate(c), 0);
        // Freed slot is reusable.
        fr.add(c);
        assert_eq!(fr.estimate(c), 1);
        assert_eq!(fr.len(), 2);
    }

    #[test]
    fn repeated_flow_is_exact() {
        let mut fr = Frequent::new(1);
        for _ in 0..50 {
            fr.add(FlowId(7));
        }
        assert_eq!(fr.estimate(FlowId(7)), 50);
    }

    /// Direct O(M) reference for the lazy-offset implementation.
    fn naive(stream: &[u64], cap: usize) -> std::collections::BTreeMap<u64, u64> {
        let mut t = std::collections::BTreeMap::new();
        for &x in stream {
            if let Some(c) = t.get_mut(&x) {
                *c += 1;
            } else if t.len() < cap {
                t.insert(x, 1);
            } else {
                t.values_mut().for_each(|c| *c -= 1);
                t.retain(|_, c| *c > 0);
            }
        }
        t
    }

    proptest! {
        #[test]
        fn matches_naive_and_never_overestimates(
            stream in prop::collection::vec(0u64..25, 0..400),
            cap in 1usize..8,
        ) {
            let mut fr = Frequent::new(cap);
            let mut oracle = ExactCounter::new();
            for &x in &stream {
                fr.add(FlowId(x));
                oracle.add(FlowId(x));
                for y in 0..25 {
                    prop_assert!(fr.estimate(FlowId(y)) <= oracle.count(FlowId(y)));
                }
            }
            let reference = naive(&stream, cap);
            let mut got: Vec<(u64, u64)> = fr.top_k_report(cap).into_iter().map(|(f, c)| (f.0, c)).collect();
            got.sort();
            prop_assert_eq!(got, reference.into_iter().collect::<Vec<_>>());
        }
    }
}
