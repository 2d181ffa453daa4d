//! Pairwise (matching-based) multilevel coarsening with contraction
//! mementos, and the project-and-refine uncoarsening walk.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::coarsening::contract;
use crate::embedding;
use crate::error::{Error, Result};
use crate::hypergraph::{ClusterMap, Hypergraph};
use crate::resistance::estimate_resistances;

use super::fm::fm_refine_bisection;
use super::initial::BisectionBounds;
use super::rating::{heavy_edge_rating, normalize_resistances, resistance_rating_normalized};
use super::RatingKind;

/// One matching level: the fine hypergraph, the contracted pairs, the
/// fine-to-coarse map, and the coarse result.
#[derive(Debug, Clone)]
pub struct PairLevel {
    pub fine: Hypergraph,
    pub pairs: Vec<(usize, usize)>,
    pub map: ClusterMap,
    pub coarse: Hypergraph,
    /// Community id per fine node (all zero when the constraint is off).
    pub communities: Vec<usize>,
}

/// Finest-first contraction hierarchy for one bisection run.
#[derive(Debug, Clone, Default)]
pub struct MultilevelState {
    pub levels: Vec<PairLevel>,
}

impl MultilevelState {
    pub fn coarsest<'a>(&'a self, finest: &'a Hypergraph) -> &'a Hypergraph {
        self.levels.last().map_or(finest, |l| &l.coarse)
    }

    /// Re-run each recorded contraction and compare against the stored coarse
    /// hypergraphs; the finest level must equal `finest` exactly.
    pub fn replay_reconstructs(&self, finest: &Hypergraph) -> bool {
        let mut current = finest;
        for level in &self.levels {
            if &level.fine != current {
                return false;
            }
            if contract(&level.fine, &level.map) != level.coarse {
                return false;
            }
            current = &level.coarse;
        }
        true
    }
}

#[derive(Debug, Clone)]
pub struct PairwiseParams {
    pub rating: RatingKind,
    pub target_nodes: usize,
    pub seed: u64,
    pub rho: usize,
    pub m: usize,
    /// Coarse nodes may not exceed `cap_factor * W / target_nodes`.
    pub cap_factor: f64,
}

impl Default for PairwiseParams {
    fn default() -> Self {
        PairwiseParams {
            rating: RatingKind::Resistance,
            target_nodes: 160,
            seed: 0,
            rho: embedding::DEFAULT_RHO,
            m: 2,
            cap_factor: 1.5,
        }
    }
}

/// Repeatedly match each vertex with its best-rated unmatched neighbor in
/// the same community and contract all pairs, level by level, until the
/// node count reaches `target_nodes` or no contraction is possible.
///
/// Resistances are recomputed per level, so estimates refresh at least every
/// time the node count halves.
pub fn coarsen_pairwise(
    h: &Hypergraph,
    communities: Option<&ClusterMap>,
    params: &PairwiseParams,
) -> Result<MultilevelState> {
    if params.target_nodes < 1 {
        return Err(Error::invalid("target node count must be positive"));
    }
    if let Some(c) = communities {
        if c.num_nodes() != h.num_nodes() {
            return Err(Error::invalid("community map does not cover the hypergraph"));
        }
    }
    let total_weight = h.total_node_weight();
    let cap = params.cap_factor * total_weight / params.target_nodes as f64;
    let mut community_of: Vec<usize> = match communities {
        Some(c) => c.assignments().to_vec(),
        None => vec![0; h.num_nodes()],
    };
    let mut state = MultilevelState::default();
    let mut current = h.clone();
    let mut level = 0usize;
    while current.num_nodes() > params.target_nodes {
        let n = current.num_nodes();
        let rhat: Option<Vec<f64>> = match params.rating {
            RatingKind::HeavyEdge => None,
            RatingKind::Resistance => {
                match embedding::embed(&current, params.rho, params.seed ^ (level as u64 + 1).wrapping_mul(0x9E3779B97F4A7C15)) {
                    Ok(emb) => {
                        let m = params.m.min(emb.rho());
                        let r = estimate_resistances(&current, &emb, m)?;
                        Some(normalize_resistances(&r))
                    }
                    // Degenerate embeddings (tiny or edgeless levels) fall
                    // back to the heavy-edge rating for this level.
                    Err(Error::DegenerateSubspace(_)) | Err(Error::DegenerateInput(_)) => None,
                    Err(e) => return Err(e),
                }
            }
        };

        let mut order: Vec<usize> = (0..n).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(params.seed.wrapping_add(level as u64));
        order.shuffle(&mut rng);

        let mut matched = vec![false; n];
        let mut pairs: Vec<(usize, usize)> = Vec::new();
        let max_pairs = n - params.target_nodes;
        for &p in &order {
            if pairs.len() >= max_pairs {
                break;
            }
            if matched[p] {
                continue;
            }
            let mut best: Option<(f64, usize)> = None;
            for &e in current.edges_of(p) {
                for &q in current.pins_of(e) {
                    if q == p || matched[q] || community_of[q] != community_of[p] {
                        continue;
                    }
                    if current.node_weight(p) + current.node_weight(q) > cap {
                        continue;
                    }
                    let score = match &rhat {
                        Some(rhat) => resistance_rating_normalized(&current, rhat, p, q),
                        None => heavy_edge_rating(&current, p, q),
                    };
                    if best.is_none_or(|(s, u)| score > s || (score == s && q < u)) {
                        best = Some((score, q));
                    }
                }
            }
            if let Some((_, q)) = best {
                debug_assert_eq!(community_of[p], community_of[q]);
                matched[p] = true;
                matched[q] = true;
                pairs.push((p, q));
            }
        }
        if pairs.is_empty() {
            break;
        }
        let mut labels: Vec<usize> = (0..n).collect();
        for &(p, q) in &pairs {
            labels[q] = p;
        }
        let map = ClusterMap::from_labels(&labels);
        let coarse = contract(&current, &map);
        let mut next_comm = vec![0usize; map.num_clusters()];
        for v in 0..n {
            next_comm[map.cluster_of(v)] = community_of[v];
        }
        state.levels.push(PairLevel {
            fine: current.clone(),
            pairs,
            map,
            coarse: coarse.clone(),
            communities: community_of.clone(),
        });
        current = coarse;
        community_of = next_comm;
        level += 1;
    }
    Ok(state)
}

/// Project a coarse bisection to the fine level of one recorded contraction.
pub fn project_blocks(level: &PairLevel, coarse_blocks: &[usize]) -> Vec<usize> {
    (0..level.fine.num_nodes())
        .map(|v| coarse_blocks[level.map.cluster_of(v)])
        .collect()
}

/// Move nodes out of the violating side until the block-0 weight re-enters
/// `bounds`, preferring moves with the smallest cut damage. Used when a
/// fallback initial partition starts infeasible.
pub fn rebalance(h: &Hypergraph, blocks: &mut [usize], bounds: &BisectionBounds) {
    let mut weight0: f64 = (0..h.num_nodes())
        .filter(|&v| blocks[v] == 0)
        .map(|v| h.node_weight(v))
        .sum();
    let mut guard = h.num_nodes() * 2;
    while !bounds.contains(weight0) && guard > 0 {
        guard -= 1;
        let from = if weight0 > bounds.hi { 0 } else { 1 };
        // Smallest node-weight change that improves the violation, best gain first.
        let mut best: Option<(f64, usize)> = None;
        for v in 0..h.num_nodes() {
            if blocks[v] != from {
                continue;
            }
            let w = h.node_weight(v);
            let new_weight0 = if from == 0 { weight0 - w } else { weight0 + w };
            if bounds.violation(new_weight0) >= bounds.violation(weight0) {
                continue;
            }
            let mut delta = 0.0;
            for &e in h.edges_of(v) {
                let pins = h.pins_of(e);
                let same = pins.iter().filter(|&&u| blocks[u] == from).count();
                let other = pins.len() - same;
                if same == pins.len() {
                    delta += h.edge_weight(e);
                } else if same == 1 && other > 0 {
                    delta -= h.edge_weight(e);
                }
            }
            if best.is_none_or(|(d, u)| delta < d || (delta == d && v < u)) {
                best = Some((delta, v));
            }
        }
        match best {
            Some((_, v)) => {
                let w = h.node_weight(v);
                blocks[v] = 1 - from;
                weight0 = if from == 0 { weight0 - w } else { weight0 + w };
            }
            None => break,
        }
    }
}

/// Walk the hierarchy coarsest-to-finest: project, restore balance if the
/// projection is infeasible, and run FM at every level.
pub fn uncoarsen_and_refine(
    state: &MultilevelState,
    coarse_blocks: Vec<usize>,
    bounds: &BisectionBounds,
    fm_passes: usize,
) -> Vec<usize> {
    let mut blocks = coarse_blocks;
    for level in state.levels.iter().rev() {
        blocks = project_blocks(level, &blocks);
        let weight0: f64 = (0..level.fine.num_nodes())
            .filter(|&v| blocks[v] == 0)
            .map(|v| level.fine.node_weight(v))
            .sum();
        if !bounds.contains(weight0) {
            rebalance(&level.fine, &mut blocks, bounds);
        }
        fm_refine_bisection(&level.fine, &mut blocks, bounds, fm_passes);
    }
    blocks
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics;
    use crate::hypergraph::Partition;

    fn ladder(n: usize) -> Hypergraph {
        let mut edges = Vec::new();
        for v in 0..n - 1 {
            edges.push(vec![v, v + 1]);
        }
        for v in 0..n.saturating_sub(2) {
            edges.push(vec![v, v + 2]);
        }
        Hypergraph::unit(n, edges).unwrap()
    }

    #[test]
    fn target_equal_to_size_means_no_levels() {
        let h = ladder(10);
        let params = PairwiseParams {
            target_nodes: 10,
            ..PairwiseParams::default()
        };
        let state = coarsen_pairwise(&h, None, &params).unwrap();
        assert!(state.levels.is_empty());
        assert!(state.replay_reconstructs(&h));
    }

    #[test]
    fn coarsens_to_target_and_replays() {
        let h = ladder(32);
        let params = PairwiseParams {
            target_nodes: 8,
            ..PairwiseParams::default()
        };
        let state = coarsen_pairwise(&h, None, &params).unwrap();
        assert!(!state.levels.is_empty());
        assert!(state.coarsest(&h).num_nodes() >= 8);
        assert!(state.replay_reconstructs(&h));
        // Pair contraction only: every coarse node holds at most 2 fine nodes.
        for level in &state.levels {
            let mut sizes = vec![0usize; level.map.num_clusters()];
            for v in 0..level.fine.num_nodes() {
                sizes[level.map.cluster_of(v)] += 1;
            }
            assert!(sizes.iter().all(|&s| s <= 2));
        }
    }

    #[test]
    fn community_constraint_respected() {
        // Two halves as communities; all contractions must stay inside.
        let h = ladder(16);
        let comm = ClusterMap::from_labels(
            &(0..16).map(|v| usize::from(v >= 8)).collect::<Vec<_>>(),
        );
        let params = PairwiseParams {
            target_nodes: 4,
            ..PairwiseParams::default()
        };
        let state = coarsen_pairwise(&h, Some(&comm), &params).unwrap();
        for level in &state.levels {
            for &(p, q) in &level.pairs {
                assert_eq!(level.communities[p], level.communities[q]);
            }
        }
    }

    #[test]
    fn weight_cap_respected() {
        let h = ladder(40);
        let params = PairwiseParams {
            target_nodes: 10,
            cap_factor: 1.5,
            ..PairwiseParams::default()
        };
        let state = coarsen_pairwise(&h, None, &params).unwrap();
        let cap = 1.5 * h.total_node_weight() / 10.0;
        for level in &state.levels {
            for v in 0..level.coarse.num_nodes() {
                assert!(level.coarse.node_weight(v) <= cap + 1e-12);
            }
        }
    }

    #[test]
    fn projection_preserves_cutsize() {
        let h = ladder(24);
        let params = PairwiseParams {
            target_nodes: 6,
            ..PairwiseParams::default()
        };
        let state = coarsen_pairwise(&h, None, &params).unwrap();
        let coarsest = state.coarsest(&h).clone();
        let nc = coarsest.num_nodes();
        let coarse_blocks: Vec<usize> = (0..nc).map(|v| usize::from(v >= nc / 2)).collect();
        let coarse_p = Partition::new(coarse_blocks.clone(), 2, 0.5).unwrap();
        let coarse_cut = metrics::cutsize(&coarsest, &coarse_p);

        let mut blocks = coarse_blocks;
        for level in state.levels.iter().rev() {
            blocks = project_blocks(level, &blocks);
            let p = Partition::new(blocks.clone(), 2, 0.5).unwrap();
            assert_eq!(metrics::cutsize(&level.fine, &p), coarse_cut);
        }
    }

    #[test]
    fn uncoarsen_never_increases_cut() {
        let h = ladder(24);
        let params = PairwiseParams {
            target_nodes: 6,
            seed: 3,
            ..PairwiseParams::default()
        };
        let state = coarsen_pairwise(&h, None, &params).unwrap();
        let coarsest = state.coarsest(&h).clone();
        let bounds = BisectionBounds::additive(h.total_node_weight(), 0.25);
        let grown =
            super::super::initial::grow_bipartition(&coarsest, bounds, 3, 4).unwrap();
        let coarse_p = Partition::new(grown.blocks.clone(), 2, 0.5).unwrap();
        let coarse_cut = metrics::cutsize(&coarsest, &coarse_p);
        let fine_blocks = uncoarsen_and_refine(&state, grown.blocks, &bounds, 10);
        let fine_p = Partition::new(fine_blocks, 2, 0.5).unwrap();
        assert!(metrics::cutsize(&h, &fine_p) <= coarse_cut + 1e-12);
    }
}
