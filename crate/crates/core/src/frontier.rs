//! The R worklists and the deferred-update set Q shared by SP1 to SP3.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

use crate::cost::Cost;

/// FIFO queue of fixed-but-unexplored vertices that also reports the
/// smallest key among its members in O(1) amortized time.
#[derive(Debug, Default)]
pub(crate) struct Worklist {
    items: VecDeque<(usize, Cost)>,
    // Keys of a nondecreasing subsequence of `items`; front is the minimum.
    mins: VecDeque<Cost>,
}

impl Worklist {
    pub(crate) fn new() -> Worklist {
        Worklist::default()
    }

    pub(crate) fn push(&mut self, v: usize, key: Cost) {
        while self.mins.back().is_some_and(|&b| b > key) {
            self.mins.pop_back();
        }
        self.mins.push_back(key);
        self.items.push_back((v, key));
    }

    pub(crate) fn pop(&mut self) -> Option<usize> {
        let (v, key) = self.items.pop_front()?;
        if self.mins.front() == Some(&key) {
            self.mins.pop_front();
        }
        Some(v)
    }

    pub(crate) fn min_key(&self) -> Cost {
        self.mins.front().copied().unwrap_or(Cost::INFINITY)
    }

    pub(crate) fn contains(&self, v: usize) -> bool {
        self.items.iter().any(|&(x, _)| x == v)
    }
}

/// Fixed-but-unexplored vertices popped in increasing key order, ties by
/// vertex id.
#[derive(Debug, Default)]
pub(crate) struct KeyedWorklist {
    heap: BinaryHeap<Reverse<(Cost, usize)>>,
}

impl KeyedWorklist {
    pub(crate) fn new() -> KeyedWorklist {
        KeyedWorklist::default()
    }

    pub(crate) fn push(&mut self, v: usize, key: Cost) {
        self.heap.push(Reverse((key, v)));
    }

    pub(crate) fn pop(&mut self) -> Option<usize> {
        self.heap.pop().map(|Reverse((_, v))| v)
    }

    pub(crate) fn min_key(&self) -> Cost {
        self.heap.peek().map_or(Cost::INFINITY, |e| e.0 .0)
    }

    pub(crate) fn is_empty(&self) -> bool {
        self.heap.is_empty()
    }

    /// Members in key order.
    pub(crate) fn drain_all(&mut self) -> Vec<usize> {
        let mut all = std::mem::take(&mut self.heap).into_sorted_vec();
        all.reverse();
        all.into_iter().map(|Reverse((_, v))| v).collect()
    }
}

/// Vertices whose heap entry must be inserted or lowered once the current
/// R phase is over. Membership is a bit per vertex.
///
/// `floor` is a running minimum of every upper bound lowered during the
/// phase. It never rises until the flush, so it may be smaller than the
/// true minimum over the members that are still non-fixed.
#[derive(Debug)]
pub(crate) struct Deferred {
    members: Vec<usize>,
    present: Vec<bool>,
    floor: Cost,
}

impl Deferred {
    pub(crate) fn new(n: usize) -> Deferred {
        Deferred {
            members: Vec::new(),
            present: vec![false; n],
            floor: Cost::INFINITY,
        }
    }

    pub(crate) fn contains(&self, v: usize) -> bool {
        self.present[v]
    }

    pub(crate) fn insert(&mut self, v: usize) {
        if !self.present[v] {
            self.present[v] = true;
            self.members.push(v);
        }
    }

    /// Records a lowered upper bound of a non-fixed vertex.
    pub(crate) fn note_lowered(&mut self, d: Cost) {
        self.floor = self.floor.min(d);
    }

    pub(crate) fn floor(&self) -> Cost {
        self.floor
    }

    /// Empties the set and resets the floor.
    pub(crate) fn take(&mut self) -> Vec<usize> {
        for &v in &self.members {
            self.present[v] = false;
        }
        self.floor = Cost::INFINITY;
        std::mem::take(&mut self.members)
    }
}
