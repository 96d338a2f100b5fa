//! IndexedHeap against a plain vector scanned for its minimum.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sssp_lab::heap::{HeapError, HeapUpdate};
use sssp_lab::{Cost, IndexedHeap};

const N: usize = 300;
const OPS: usize = 200_000;

#[derive(Default)]
struct Naive {
    entries: Vec<(Cost, usize)>,
    inserts: u64,
    adjusts: u64,
    remove_mins: u64,
}

impl Naive {
    fn key(&self, v: usize) -> Option<Cost> {
        self.entries.iter().find(|e| e.1 == v).map(|e| e.0)
    }

    fn min_slot(&self) -> Option<usize> {
        (0..self.entries.len()).min_by_key(|&i| self.entries[i])
    }

    fn pop(&mut self) -> Option<(usize, Cost)> {
        let i = self.min_slot()?;
        let (k, v) = self.entries.swap_remove(i);
        self.remove_mins += 1;
        Some((v, k))
    }
}

#[test]
fn matches_naive_model() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut heap = IndexedHeap::new(N);
    let mut model = Naive::default();
    let mut fixed = vec![false; N];

    for step in 0..OPS {
        match rng.gen_range(0..100) {
            0..=44 => {
                let v = rng.gen_range(0..N);
                if fixed[v] {
                    continue;
                }
                let key = Cost::new(rng.gen_range(0..1_000));
                let got = heap.insert_or_adjust(v, key);
                match model.key(v) {
                    None => {
                        assert_eq!(got, Ok(HeapUpdate::Inserted), "step {step}");
                        model.entries.push((key, v));
                        model.inserts += 1;
                    }
                    Some(cur) if key > cur => {
                        assert_eq!(
                            got,
                            Err(HeapError::KeyIncrease {
                                vertex: v,
                                from: cur,
                                to: key
                            })
                        );
                    }
                    Some(cur) if key == cur => assert_eq!(got, Ok(HeapUpdate::Unchanged)),
                    Some(_) => {
                        assert_eq!(got, Ok(HeapUpdate::Adjusted), "step {step}");
                        model.entries.iter_mut().find(|e| e.1 == v).unwrap().0 = key;
                        model.adjusts += 1;
                    }
                }
            }
            45..=59 => {
                let v = rng.gen_range(0..N);
                if !fixed[v] {
                    fixed[v] = true;
                    heap.mark_fixed(v);
                } else if model.key(v).is_none() {
                    // A fixed vertex that has left the heap may be reused.
                    fixed[v] = false;
                }
            }
            60..=84 => {
                let got = heap.remove_min(|v| fixed[v]);
                match model.pop() {
                    Some(expect) => assert_eq!(got, Ok(expect), "step {step}"),
                    None => assert_eq!(got, Err(HeapError::EmptyHeap)),
                }
            }
            _ => {
                let got = heap.get_min_nonfixed(|v| fixed[v]);
                let expect = loop {
                    match model.min_slot() {
                        Some(i) if fixed[model.entries[i].1] => {
                            model.pop();
                        }
                        Some(i) => break model.entries[i].0,
                        None => break Cost::INFINITY,
                    }
                };
                assert_eq!(got, expect, "step {step}");
            }
        }

        assert_eq!(heap.len(), model.entries.len());
        let live = model.entries.iter().filter(|e| !fixed[e.1]).count();
        assert_eq!(heap.nonfixed_count(), live);
        assert_eq!(heap.is_effectively_empty(), live == 0);
        let root = model.min_slot().map_or(Cost::INFINITY, |i| model.entries[i].0);
        assert_eq!(heap.peek_key(), root);
        if step % 1000 == 0 {
            heap.check_invariants(|v| fixed[v]).unwrap();
            for v in 0..N {
                assert_eq!(heap.key(v), model.key(v));
            }
        }
    }

    let stats = heap.stats();
    assert_eq!((stats.inserts, stats.adjusts, stats.remove_mins), (model.inserts, model.adjusts, model.remove_mins));
    assert!(stats.total() > 50_000);
}
