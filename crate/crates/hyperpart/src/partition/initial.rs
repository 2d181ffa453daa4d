//! Randomized greedy hyperedge-growth initial bipartitioning.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, Partition};

/// Admissible weight interval for block 0 of a bisection.
#[derive(Debug, Clone, Copy)]
pub struct BisectionBounds {
    pub lo: f64,
    pub hi: f64,
}

impl BisectionBounds {
    /// Two-sided bounds `(1/2 +- eps) W` from the balance definition.
    pub fn additive(total_weight: f64, epsilon: f64) -> Self {
        BisectionBounds {
            lo: (0.5 - epsilon) * total_weight,
            hi: (0.5 + epsilon) * total_weight,
        }
    }

    pub fn contains(&self, w: f64) -> bool {
        w >= self.lo && w <= self.hi
    }

    /// Distance of `w` from the interval (zero when inside).
    pub fn violation(&self, w: f64) -> f64 {
        if w < self.lo {
            self.lo - w
        } else if w > self.hi {
            w - self.hi
        } else {
            0.0
        }
    }
}

/// Best-of-`tries` greedy growth bipartition.
#[derive(Debug, Clone)]
pub struct GrownBipartition {
    pub blocks: Vec<usize>,
    pub cutsize: f64,
    pub feasible: bool,
}

/// Grow block 0 from a random start node, absorbing the frontier node that
/// minimizes the cut increase until the lower bound is met. The best
/// feasible try by cutsize wins; when no try is feasible the one with the
/// smallest violation is returned, flagged.
pub fn grow_bipartition(
    h: &Hypergraph,
    bounds: BisectionBounds,
    seed: u64,
    tries: usize,
) -> Result<GrownBipartition> {
    let n = h.num_nodes();
    if n < 2 {
        return Err(Error::Infeasible("need at least 2 nodes to bisect".into()));
    }
    let total = h.total_node_weight();
    // A node too heavy for either side makes every bipartition infeasible.
    for v in 0..n {
        let w = h.node_weight(v);
        if w > bounds.hi && w > total - bounds.lo {
            return Err(Error::Infeasible(format!(
                "node {v} (weight {w}) exceeds both block capacities"
            )));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<(GrownBipartition, f64)> = None;
    for _ in 0..tries.max(1) {
        let start = rng.random_range(0..n);
        let blocks = grow_once(h, bounds, start, &mut rng);
        let weight0: f64 = (0..n)
            .filter(|&v| blocks[v] == 0)
            .map(|v| h.node_weight(v))
            .sum();
        let viol = bounds.violation(weight0).max(bounds.violation(total - weight0));
        let cutsize = raw_cutsize(h, &blocks);
        let feasible = viol == 0.0;
        let tuple = GrownBipartition {
            blocks,
            cutsize,
            feasible,
        };
        let better = match &best {
            None => true,
            Some((b, bviol)) => match (feasible, b.feasible) {
                (true, false) => true,
                (false, true) => false,
                (true, true) => cutsize < b.cutsize,
                (false, false) => viol < *bviol,
            },
        };
        if better {
            best = Some((tuple, viol));
        }
    }
    Ok(best.expect("at least one try ran").0)
}

fn raw_cutsize(h: &Hypergraph, blocks: &[usize]) -> f64 {
    let mut total = 0.0;
    for (pins, w) in h.edges() {
        let first = blocks[pins[0]];
        if pins[1..].iter().any(|&v| blocks[v] != first) {
            total += w;
        }
    }
    total
}

fn absorb(
    h: &Hypergraph,
    v: usize,
    in_block: &mut [bool],
    pin_count: &mut [usize],
    weight0: &mut f64,
) {
    in_block[v] = true;
    *weight0 += h.node_weight(v);
    for &e in h.edges_of(v) {
        pin_count[e] += 1;
    }
}

fn grow_once(h: &Hypergraph, bounds: BisectionBounds, start: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let n = h.num_nodes();
    let mut in_block = vec![false; n];
    let mut pin_count = vec![0usize; h.num_edges()];
    let mut weight0 = 0.0;
    absorb(h, start, &mut in_block, &mut pin_count, &mut weight0);

    while weight0 < bounds.lo {
        // Frontier: nodes sharing an edge with the block.
        let mut candidate: Option<(f64, usize)> = None;
        for v in 0..n {
            if in_block[v] {
                continue;
            }
            let mut adjacent = false;
            let mut delta = 0.0;
            for &e in h.edges_of(v) {
                let cnt = pin_count[e];
                if cnt > 0 {
                    adjacent = true;
                }
                if cnt == 0 && h.edge_size(e) > 1 {
                    delta += h.edge_weight(e); // newly cut
                } else if cnt + 1 == h.edge_size(e) && cnt > 0 {
                    delta -= h.edge_weight(e); // becomes interior
                }
            }
            if !adjacent {
                continue;
            }
            if candidate.is_none_or(|(d, u)| delta < d || (delta == d && v < u)) {
                candidate = Some((delta, v));
            }
        }
        match candidate {
            Some((_, v)) => absorb(h, v, &mut in_block, &mut pin_count, &mut weight0),
            None => {
                // Block saturated its component; jump to a random unassigned node.
                let free: Vec<usize> = (0..n).filter(|&v| !in_block[v]).collect();
                if free.is_empty() {
                    break;
                }
                let v = free[rng.random_range(0..free.len())];
                absorb(h, v, &mut in_block, &mut pin_count, &mut weight0);
            }
        }
    }
    in_block.iter().map(|&b| usize::from(!b)).collect()
}

/// Spec-shaped wrapper for `k = 2`: balance per the two-sided epsilon bounds.
pub fn initial_partition(
    h: &Hypergraph,
    k: usize,
    epsilon: f64,
    seed: u64,
    tries: usize,
) -> Result<Partition> {
    if k != 2 {
        return Err(Error::invalid(
            "initial partitioning is defined for k = 2; larger k uses recursive bisection",
        ));
    }
    let bounds = BisectionBounds::additive(h.total_node_weight(), epsilon);
    let grown = grow_bipartition(h, bounds, seed, tries)?;
    Partition::new(grown.blocks, 2, epsilon)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics;

    #[test]
    fn two_nodes_split_apart() {
        let h = Hypergraph::unit(2, vec![vec![0, 1]]).unwrap();
        let p = initial_partition(&h, 2, 0.3, 1, 4).unwrap();
        assert_ne!(p.block_of(0), p.block_of(1));
        assert_eq!(metrics::cutsize(&h, &p), 1.0);
    }

    #[test]
    fn disconnected_components_found_with_zero_cut() {
        let h = Hypergraph::unit(
            8,
            vec![
                vec![0, 1],
                vec![1, 2],
                vec![2, 3],
                vec![4, 5],
                vec![5, 6],
                vec![6, 7],
            ],
        )
        .unwrap();
        let mut zero_cut = 0;
        for seed in 0..10 {
            let p = initial_partition(&h, 2, 0.05, seed, 8).unwrap();
            if metrics::cutsize(&h, &p) == 0.0 {
                zero_cut += 1;
            }
        }
        assert!(zero_cut >= 9, "zero-cut split found only {zero_cut}/10 times");
    }

    #[test]
    fn deterministic_per_seed() {
        let h = Hypergraph::unit(6, vec![vec![0, 1, 2], vec![2, 3], vec![3, 4, 5]]).unwrap();
        let a = grow_bipartition(&h, BisectionBounds::additive(6.0, 0.2), 9, 1).unwrap();
        let b = grow_bipartition(&h, BisectionBounds::additive(6.0, 0.2), 9, 1).unwrap();
        assert_eq!(a.blocks, b.blocks);
    }

    #[test]
    fn overweight_node_is_infeasible() {
        let h = Hypergraph::new(3, vec![vec![0, 1, 2]], vec![1.0], vec![10.0, 1.0, 1.0])
            .unwrap();
        assert!(matches!(
            initial_partition(&h, 2, 0.05, 0, 4),
            Err(Error::Infeasible(_))
        ));
    }
}
