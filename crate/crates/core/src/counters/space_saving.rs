use super::MonitoredTable;
use crate::stream::FlowId;

/// Space Saving: a missing flow always takes over the minimal counter and
/// increments it. Stores only `(flow, count)`; the per-entry error field of
/// the original structure is not kept.
#[derive(Debug, Clone)]
pub struct SpaceSaving {
    table: MonitoredTable,
}

impl SpaceSaving {
    pub fn new(capacity: usize) -> Self {
        Self {
            table: MonitoredTable::new(capacity),
        }
    }

    #[inline]
    pub fn add(&mut self, flow: FlowId) {
        if self.table.increment(flow) {
            return;
        }
        if !self.table.is_full() {
            self.table.insert(flow, 1);
            return;
        }
        let min = self.table.min().expect("full table has a minimum");
        self.table.replace_min(flow, min.count + 1);
    }

    #[inline]
    pub fn estimate(&self, flow: FlowId) -> u64 {
        self.table.get(flow).unwrap_or(0)
    }

    pub fn top_k_report(&self, m: usize) -> Vec<(FlowId, u64)> {
        super::sort_report(self.table.iter().map(|e| (e.flow, e.count)).collect(), m)
    }

    pub fn table(&self) -> &MonitoredTable {
        &self.table
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stream::ExactCounter;
    use proptest::prelude::*;

    #[test]
    fn takeover_inherits_min_plus_one() {
        let mut ss = SpaceSaving::new(1);
        for _ in 0..5 {
            ss.add(FlowId(1));
        }
        ss.add(FlowId(2));
        assert_eq!(ss.estimate(FlowId(1)), 0);
        assert_eq!(ss.estimate(FlowId(2)), 6);
        assert_eq!(ss.top_k_report(5), vec![(FlowId(2), 6)]);
    }

    #[test]
    fn empty_add() {
        let mut ss = SpaceSaving::new(3);
        ss.add(FlowId(4));
        assert_eq!(ss.estimate(FlowId(4)), 1);
    }

    proptest! {
        #[test]
        fn sum_equals_n_and_never_underestimates(
            stream in prop::collection::vec(0u64..30, 0..500),
            cap in 1usize..10,
        ) {
            let mut ss = SpaceSaving::new(cap);
            let mut oracle = ExactCounter::new();
            for &x in &stream {
                ss.add(FlowId(x));
                oracle.add(FlowId(x));
                prop_assert_eq!(ss.table().sum_counts(), oracle.total());
            }
            for e in ss.table().iter() {
                prop_assert!(e.count >= oracle.count(e.flow));
            }
            if let Some(min) = ss.table().min() {
                prop_assert!(min.count <= oracle.total() / cap as u64 || !ss.table().is_full());
            }
        }
    }
}
