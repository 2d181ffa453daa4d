//! Fiduccia-Mattheyses bisection refinement: pass-based single-node moves
//! drawn from per-direction gain queues, with rollback to the best prefix.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, Partition};
use crate::metrics;

use super::initial::BisectionBounds;

pub const DEFAULT_FM_PASSES: usize = 10;

#[derive(Debug, PartialEq)]
struct GainEntry {
    gain: f64,
    node: Reverse<usize>,
    version: u64,
}

impl Eq for GainEntry {}

impl PartialOrd for GainEntry {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for GainEntry {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        // Highest gain first, then lowest node id.
        self.gain
            .total_cmp(&other.gain)
            .then(self.node.cmp(&other.node))
    }
}

struct PassState<'h> {
    h: &'h Hypergraph,
    blocks: Vec<usize>,
    counts: Vec<[usize; 2]>,
    cut: f64,
    locked: Vec<bool>,
    version: Vec<u64>,
    heaps: [BinaryHeap<GainEntry>; 2],
}

impl<'h> PassState<'h> {
    fn new(h: &'h Hypergraph, blocks: &[usize]) -> Self {
        let mut counts = vec![[0usize; 2]; h.num_edges()];
        for e in 0..h.num_edges() {
            for &v in h.pins_of(e) {
                counts[e][blocks[v]] += 1;
            }
        }
        let cut = counts
            .iter()
            .enumerate()
            .filter(|(_, c)| c[0] > 0 && c[1] > 0)
            .map(|(e, _)| h.edge_weight(e))
            .sum();
        let mut state = PassState {
            h,
            blocks: blocks.to_vec(),
            counts,
            cut,
            locked: vec![false; h.num_nodes()],
            version: vec![0; h.num_nodes()],
            heaps: [BinaryHeap::new(), BinaryHeap::new()],
        };
        for v in 0..h.num_nodes() {
            state.push_gain(v);
        }
        state
    }

    fn gain(&self, v: usize) -> f64 {
        let from = self.blocks[v];
        let to = 1 - from;
        let mut g = 0.0;
        for &e in self.h.edges_of(v) {
            let c = &self.counts[e];
            if c[to] >= 1 && c[from] == 1 {
                g += self.h.edge_weight(e);
            } else if c[to] == 0 && c[from] >= 2 {
                g -= self.h.edge_weight(e);
            }
        }
        g
    }

    fn push_gain(&mut self, v: usize) {
        if self.locked[v] {
            return;
        }
        self.version[v] += 1;
        let entry = GainEntry {
            gain: self.gain(v),
            node: Reverse(v),
            version: self.version[v],
        };
        self.heaps[self.blocks[v]].push(entry);
    }

    /// Pop the current best valid entry of one heap without removing it.
    fn peek_valid(&mut self, side: usize) -> Option<(f64, usize)> {
        loop {
            let top = self.heaps[side].peek()?;
            let v = top.node.0;
            if self.locked[v] || top.version != self.version[v] || self.blocks[v] != side {
                self.heaps[side].pop();
                continue;
            }
            return Some((top.gain, v));
        }
    }

    fn apply_move(&mut self, v: usize) {
        let from = self.blocks[v];
        let to = 1 - from;
        self.cut -= self.gain(v);
        self.blocks[v] = to;
        self.locked[v] = true;
        for e in self.h.edges_of(v).to_vec() {
            self.counts[e][from] -= 1;
            self.counts[e][to] += 1;
            for &u in self.h.pins_of(e) {
                if !self.locked[u] {
                    self.push_gain(u);
                }
            }
        }
    }
}

/// One FM pass; returns the blocks after rollback and the resulting cutsize.
fn fm_pass(
    h: &Hypergraph,
    blocks: &[usize],
    bounds: &BisectionBounds,
) -> (Vec<usize>, f64) {
    let mut state = PassState::new(h, blocks);
    let mut weight0: f64 = (0..h.num_nodes())
        .filter(|&v| state.blocks[v] == 0)
        .map(|v| h.node_weight(v))
        .sum();
    let mut count0 = state.blocks.iter().filter(|&&b| b == 0).count();

    let mut moves: Vec<usize> = Vec::new();
    let mut best_prefix = 0usize;
    let mut best_cut = state.cut;
    let n = h.num_nodes();

    loop {
        let c0 = state.peek_valid(0);
        let c1 = state.peek_valid(1);
        // Feasibility after the prospective move; a block never empties.
        let ok0 = count0 > 1
            && c0.is_some_and(|(_, v)| bounds.contains(weight0 - h.node_weight(v)));
        let ok1 = count0 < n - 1
            && c1.is_some_and(|(_, v)| bounds.contains(weight0 + h.node_weight(v)));
        let pick = match (ok0.then_some(c0).flatten(), ok1.then_some(c1).flatten()) {
            (Some((g0, v0)), Some((g1, v1))) => {
                if g0 > g1 || (g0 == g1 && v0 < v1) {
                    Some(v0)
                } else {
                    Some(v1)
                }
            }
            (Some((_, v0)), None) => Some(v0),
            (None, Some((_, v1))) => Some(v1),
            (None, None) => None,
        };
        let Some(v) = pick else { break };
        let from = state.blocks[v];
        state.apply_move(v);
        if from == 0 {
            weight0 -= h.node_weight(v);
            count0 -= 1;
        } else {
            weight0 += h.node_weight(v);
            count0 += 1;
        }
        moves.push(v);
        if state.cut < best_cut - 1e-12 {
            best_cut = state.cut;
            best_prefix = moves.len();
        }
    }

    // Roll back everything after the best prefix.
    let mut out = state.blocks;
    for &v in moves.iter().skip(best_prefix).rev() {
        out[v] = 1 - out[v];
    }
    (out, best_cut)
}

/// Run FM passes until a pass yields no improvement or the pass limit is
/// reached. The cutsize never increases and every accepted move keeps the
/// block-0 weight inside `bounds`.
pub fn fm_refine_bisection(
    h: &Hypergraph,
    blocks: &mut Vec<usize>,
    bounds: &BisectionBounds,
    max_passes: usize,
) -> f64 {
    let mut current_cut = {
        let mut c = 0.0;
        for (pins, w) in h.edges() {
            let first = blocks[pins[0]];
            if pins[1..].iter().any(|&v| blocks[v] != first) {
                c += w;
            }
        }
        c
    };
    for _ in 0..max_passes {
        let (next, cut) = fm_pass(h, blocks, bounds);
        if cut < current_cut - 1e-12 {
            *blocks = next;
            current_cut = cut;
        } else {
            break;
        }
    }
    current_cut
}

/// Spec-shaped FM over a `k = 2` [`Partition`], using its own epsilon bounds.
pub fn fm_refine(h: &Hypergraph, p: &Partition, max_passes: usize) -> Result<Partition> {
    if p.k() != 2 {
        return Err(Error::invalid("FM refinement is defined for k = 2"));
    }
    let report = metrics::check_balance(h, p);
    if !report.balanced {
        return Err(Error::Infeasible(
            "FM refinement requires a balanced input partition".into(),
        ));
    }
    let bounds = BisectionBounds::additive(h.total_node_weight(), p.epsilon());
    let mut blocks = p.blocks().to_vec();
    fm_refine_bisection(h, &mut blocks, &bounds, max_passes);
    // Moves preserved balance, so the partition invariants still hold.
    Partition::new(blocks, 2, p.epsilon())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    #[test]
    fn local_optimum_unchanged() {
        let h = Hypergraph::unit(4, vec![vec![0, 1], vec![2, 3], vec![1, 2]]).unwrap();
        let p = Partition::new(vec![0, 0, 1, 1], 2, 0.5).unwrap();
        let refined = fm_refine(&h, &p, DEFAULT_FM_PASSES).unwrap();
        assert_eq!(refined.blocks(), p.blocks());
    }

    #[test]
    fn misplaced_node_moves_and_gain_realized() {
        // Node 2 belongs with block 1: it shares two hyperedges with it.
        let h = Hypergraph::unit(
            6,
            vec![
                vec![0, 1],
                vec![2, 3],
                vec![2, 4],
                vec![3, 4, 5],
                vec![0, 5],
            ],
        )
        .unwrap();
        let p = Partition::new(vec![0, 0, 0, 1, 1, 1], 2, 1.0 / 2.0).unwrap();
        let before = metrics::cutsize(&h, &p);
        let refined = fm_refine(&h, &p, DEFAULT_FM_PASSES).unwrap();
        let after = metrics::cutsize(&h, &refined);
        assert_eq!(refined.block_of(2), 1);
        assert_eq!(before - after, 2.0);
    }

    #[test]
    fn never_worse_and_bounded_by_bruteforce() {
        let mut rng = StdRng::seed_from_u64(13);
        for case in 0..30 {
            let n = rng.random_range(4..10);
            let m = rng.random_range(2..10);
            let edges: Vec<Vec<usize>> = (0..m)
                .map(|_| {
                    let size = rng.random_range(2..=n.min(4));
                    let mut ids: Vec<usize> = (0..n).collect();
                    for i in 0..size {
                        let j = rng.random_range(i..n);
                        ids.swap(i, j);
                    }
                    ids.truncate(size);
                    ids
                })
                .collect();
            let h = Hypergraph::unit(n, edges).unwrap();
            let epsilon = 0.45_f64;
            let blocks: Vec<usize> = (0..n).map(|v| v % 2).collect();
            let p = match Partition::new(blocks, 2, epsilon) {
                Ok(p) => p,
                Err(_) => continue,
            };
            if !metrics::check_balance(&h, &p).balanced {
                continue;
            }
            let before = metrics::cutsize(&h, &p);
            let refined = fm_refine(&h, &p, DEFAULT_FM_PASSES).unwrap();
            let after = metrics::cutsize(&h, &refined);
            assert!(after <= before + 1e-12, "case {case}: cut increased");
            assert!(metrics::check_balance(&h, &refined).balanced);
            let (_, optimal) = oracle::brute_best_bipartition(&h, epsilon).unwrap();
            assert!(after + 1e-12 >= optimal, "case {case}: below brute-force optimum");
        }
    }

    #[test]
    fn unbalanced_input_rejected() {
        let h = Hypergraph::unit(4, vec![vec![0, 1]]).unwrap();
        let p = Partition::new(vec![0, 1, 1, 1], 2, 0.05).unwrap();
        assert!(fm_refine(&h, &p, 4).is_err());
    }
}
