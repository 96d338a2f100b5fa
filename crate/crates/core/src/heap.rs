//! Addressable binary min-heap with lazy removal of fixed vertices.
//!
//! The heap does not own the solver's `fixed` array. Operations that need to
//! know whether a vertex is fixed take a predicate, and the solver calls
//! [`IndexedHeap::mark_fixed`] whenever it fixes a vertex so that the count of
//! live (non-fixed) entries stays exact. A fixed entry stays in the array
//! until it reaches the root and is popped.

use thiserror::Error;

use crate::cost::Cost;

const ABSENT: usize = usize::MAX;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HeapError {
    #[error("key of vertex {vertex} would increase from {from} to {to}")]
    KeyIncrease { vertex: usize, from: Cost, to: Cost },
    #[error("removeMin on an empty heap")]
    EmptyHeap,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct HeapStats {
    pub inserts: u64,
    pub adjusts: u64,
    /// Physical pops, including fixed entries discarded at the root.
    pub remove_mins: u64,
}

impl HeapStats {
    pub fn total(&self) -> u64 {
        self.inserts + self.adjusts + self.remove_mins
    }
}

/// What `insert_or_adjust` did.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HeapUpdate {
    Inserted,
    Adjusted,
    Unchanged,
}

#[derive(Debug, Clone)]
pub struct IndexedHeap {
    entries: Vec<(Cost, usize)>,
    position: Vec<usize>,
    nonfixed: usize,
    stats: HeapStats,
}

impl IndexedHeap {
    /// Heap over vertices `0..n`.
    pub fn new(n: usize) -> IndexedHeap {
        IndexedHeap {
            entries: Vec::new(),
            position: vec![ABSENT; n],
            nonfixed: 0,
            stats: HeapStats::default(),
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.position[v] != ABSENT
    }

    pub fn key(&self, v: usize) -> Option<Cost> {
        self.contains(v).then(|| self.entries[self.position[v]].0)
    }

    pub fn stats(&self) -> HeapStats {
        self.stats
    }

    pub fn nonfixed_count(&self) -> usize {
        self.nonfixed
    }

    /// True when every remaining entry belongs to a fixed vertex.
    pub fn is_effectively_empty(&self) -> bool {
        self.nonfixed == 0
    }

    /// Root key without touching the heap. May belong to a fixed entry, in
    /// which case it is still a lower bound on every live key.
    pub fn peek_key(&self) -> Cost {
        self.entries.first().map_or(Cost::INFINITY, |e| e.0)
    }

    /// Inserts a non-fixed vertex or lowers its key.
    pub fn insert_or_adjust(&mut self, v: usize, key: Cost) -> Result<HeapUpdate, HeapError> {
        let pos = self.position[v];
        if pos == ABSENT {
            self.entries.push((key, v));
            self.position[v] = self.entries.len() - 1;
            self.sift_up(self.entries.len() - 1);
            self.nonfixed += 1;
            self.stats.inserts += 1;
            return Ok(HeapUpdate::Inserted);
        }
        let current = self.entries[pos].0;
        if key > current {
            return Err(HeapError::KeyIncrease {
                vertex: v,
                from: current,
                to: key,
            });
        }
        if key == current {
            return Ok(HeapUpdate::Unchanged);
        }
        self.entries[pos].0 = key;
        self.sift_up(pos);
        self.stats.adjusts += 1;
        Ok(HeapUpdate::Adjusted)
    }

    /// Records that `v` became fixed. A no-op if `v` is not in the heap.
    /// Must be called at most once per fixing.
    pub fn mark_fixed(&mut self, v: usize) {
        if self.contains(v) {
            debug_assert!(self.nonfixed > 0);
            self.nonfixed -= 1;
        }
    }

    /// Pops the minimum entry. `is_fixed` reports the owner's fixed flags as
    /// they stand before the pop.
    pub fn remove_min(&mut self, is_fixed: impl Fn(usize) -> bool) -> Result<(usize, Cost), HeapError> {
        if self.entries.is_empty() {
            return Err(HeapError::EmptyHeap);
        }
        let last = self.entries.len() - 1;
        self.swap(0, last);
        let (key, v) = self.entries.pop().expect("non-empty");
        self.position[v] = ABSENT;
        if !self.entries.is_empty() {
            self.sift_down(0);
        }
        if !is_fixed(v) {
            self.nonfixed -= 1;
        }
        self.stats.remove_mins += 1;
        Ok((v, key))
    }

    /// Discards fixed entries at the root and returns the smallest live key,
    /// or `INFINITY` if none remain.
    pub fn get_min_nonfixed(&mut self, is_fixed: impl Fn(usize) -> bool) -> Cost {
        while let Some(&(key, v)) = self.entries.first() {
            if !is_fixed(v) {
                return key;
            }
            let _ = self.remove_min(&is_fixed);
        }
        Cost::INFINITY
    }

    /// Full scan of the structural invariants; used by tests and debug runs.
    pub fn check_invariants(&self, is_fixed: impl Fn(usize) -> bool) -> Result<(), String> {
        for (i, &(_, v)) in self.entries.iter().enumerate() {
            if self.position[v] != i {
                return Err(format!("position of vertex {v} is stale"));
            }
            if i > 0 && self.less(i, (i - 1) / 2) {
                return Err(format!("heap order violated at slot {i}"));
            }
        }
        let placed = self.position.iter().filter(|&&p| p != ABSENT).count();
        if placed != self.entries.len() {
            return Err("position table lists vertices that are not in the heap".into());
        }
        let live = self.entries.iter().filter(|&&(_, v)| !is_fixed(v)).count();
        if live != self.nonfixed {
            return Err(format!("non-fixed count {} but {live} live entries", self.nonfixed));
        }
        Ok(())
    }

    // Ties are broken by the smaller vertex id.
    #[inline]
    fn less(&self, a: usize, b: usize) -> bool {
        self.entries[a] < self.entries[b]
    }

    #[inline]
    fn swap(&mut self, a: usize, b: usize) {
        self.entries.swap(a, b);
        self.position[self.entries[a].1] = a;
        self.position[self.entries[b].1] = b;
    }

    fn sift_up(&mut self, mut i: usize) {
        while i > 0 {
            let parent = (i - 1) / 2;
            if !self.less(i, parent) {
                break;
            }
            self.swap(i, parent);
            i = parent;
        }
    }

    fn sift_down(&mut self, mut i: usize) {
        let len = self.entries.len();
        loop {
            let left = 2 * i + 1;
            if left >= len {
                break;
            }
            let right = left + 1;
            let child = if right < len && self.less(right, left) { right } else { left };
            if !self.less(child, i) {
                break;
            }
            self.swap(i, child);
            i = child;
        }
    }
}
