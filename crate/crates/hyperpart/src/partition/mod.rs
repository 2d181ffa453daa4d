//! Multilevel epsilon-balanced k-way partitioning: flow-based communities,
//! resistance-rated pairwise coarsening, greedy initial bisection, FM
//! refinement during uncoarsening, and recursive bisection for `k > 2`.

pub mod community;
pub mod fm;
pub mod initial;
pub mod multilevel;
pub mod rating;

pub use community::{detect_communities, CommunityParams};
pub use fm::{fm_refine, fm_refine_bisection, DEFAULT_FM_PASSES};
pub use initial::{grow_bipartition, initial_partition, BisectionBounds};
pub use multilevel::{coarsen_pairwise, uncoarsen_and_refine, MultilevelState, PairwiseParams};
pub use rating::{heavy_edge_rating, resistance_rating};

use crate::embedding;
use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, Partition};
use crate::metrics;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RatingKind {
    HeavyEdge,
    Resistance,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommunityMode {
    Off,
    Flow,
}

#[derive(Debug, Clone)]
pub struct PartitionConfig {
    pub rho: usize,
    pub m: usize,
    pub seed: u64,
    pub rating: RatingKind,
    pub community: CommunityMode,
    /// Stop pairwise coarsening at this many nodes per bisection.
    pub coarsen_target: usize,
    pub initial_tries: usize,
    pub fm_passes: usize,
    pub beta: f64,
    pub xi: f64,
    pub max_expansions: usize,
    /// Community count; `None` scales with the hypergraph.
    pub community_target: Option<usize>,
}

impl Default for PartitionConfig {
    fn default() -> Self {
        PartitionConfig {
            rho: embedding::DEFAULT_RHO,
            m: 2,
            seed: 0,
            rating: RatingKind::Resistance,
            community: CommunityMode::Flow,
            coarsen_target: 160,
            initial_tries: 10,
            fm_passes: DEFAULT_FM_PASSES,
            beta: 1.0,
            xi: 1e-3,
            max_expansions: 3,
            community_target: None,
        }
    }
}

/// A partition plus its quality facts.
#[derive(Debug, Clone)]
pub struct PartitionOutcome {
    pub partition: Partition,
    pub cutsize: f64,
    pub feasible: bool,
}

/// Partition into `k` epsilon-balanced blocks; errors when the result
/// cannot satisfy the balance contract.
pub fn partition(h: &Hypergraph, k: usize, epsilon: f64, config: &PartitionConfig) -> Result<Partition> {
    let outcome = partition_detailed(h, k, epsilon, config)?;
    if !outcome.feasible {
        return Err(Error::Infeasible(format!(
            "no epsilon-balanced {k}-way partition found (cutsize {})",
            outcome.cutsize
        )));
    }
    Ok(outcome.partition)
}

/// As [`partition`], returning the result even when the balance contract is
/// violated so callers can report the violation.
pub fn partition_detailed(
    h: &Hypergraph,
    k: usize,
    epsilon: f64,
    config: &PartitionConfig,
) -> Result<PartitionOutcome> {
    if k < 2 {
        return Err(Error::invalid("k must be at least 2"));
    }
    if !(epsilon > 0.0 && epsilon <= 1.0 / k as f64) {
        return Err(Error::invalid(format!("epsilon {epsilon} outside (0, 1/{k}]")));
    }
    let n = h.num_nodes();
    if n < k {
        return Err(Error::Infeasible(format!("{n} nodes cannot form {k} blocks")));
    }
    let total = h.total_node_weight();
    let upper = (1.0 / k as f64 + epsilon) * total;
    if let Some(v) = (0..n).find(|&v| h.node_weight(v) > upper) {
        return Err(Error::Infeasible(format!(
            "node {v} (weight {}) exceeds the block capacity {upper}",
            h.node_weight(v)
        )));
    }

    // Per-level imbalance so that composed bisections keep every leaf block
    // within the global (1/k +- eps) bounds.
    let depth = (k as f64).log2().ceil().max(1.0);
    let eps_level = (1.0 + epsilon).powf(1.0 / depth) - 1.0;

    let ids: Vec<usize> = (0..n).collect();
    let mut blocks = vec![0usize; n];
    let mut next_block = 0usize;
    recursive_bisect(
        h,
        &ids,
        k,
        eps_level,
        config,
        config.seed,
        &mut blocks,
        &mut next_block,
    )?;
    debug_assert_eq!(next_block, k);

    let p = Partition::new(blocks, k, epsilon)?;
    let report = metrics::check_balance(h, &p);
    Ok(PartitionOutcome {
        cutsize: metrics::cutsize(h, &p),
        feasible: report.balanced,
        partition: p,
    })
}

/// Induce the sub-hypergraph on `ids`: pins outside are dropped, hyperedges
/// with fewer than two remaining pins vanish.
fn induce(h: &Hypergraph, ids: &[usize]) -> Hypergraph {
    let mut pos = vec![usize::MAX; h.num_nodes()];
    for (i, &v) in ids.iter().enumerate() {
        pos[v] = i;
    }
    let mut edges = Vec::new();
    let mut weights = Vec::new();
    for e in 0..h.num_edges() {
        let mapped: Vec<usize> = h
            .pins_of(e)
            .iter()
            .filter_map(|&v| (pos[v] != usize::MAX).then(|| pos[v]))
            .collect();
        if mapped.len() >= 2 {
            edges.push(mapped);
            weights.push(h.edge_weight(e));
        }
    }
    let node_weights = ids.iter().map(|&v| h.node_weight(v)).collect();
    Hypergraph::new(ids.len(), edges, weights, node_weights)
        .expect("induced sub-hypergraph is valid")
}

#[allow(clippy::too_many_arguments)]
fn recursive_bisect(
    h: &Hypergraph,
    ids: &[usize],
    k: usize,
    eps_level: f64,
    config: &PartitionConfig,
    seed: u64,
    blocks: &mut [usize],
    next_block: &mut usize,
) -> Result<()> {
    if k == 1 {
        let b = *next_block;
        *next_block += 1;
        for &v in ids {
            blocks[v] = b;
        }
        return Ok(());
    }
    let sub = induce(h, ids);
    let k1 = k.div_ceil(2);
    let k2 = k - k1;
    let f = k1 as f64 / k as f64;
    let w = sub.total_node_weight();
    let lo = (f * w / (1.0 + eps_level)).max(w - (1.0 - f) * w * (1.0 + eps_level));
    let hi = (f * w * (1.0 + eps_level)).min(w - (1.0 - f) * w / (1.0 + eps_level));
    let bounds = BisectionBounds { lo, hi };

    let side = bisect(&sub, bounds, config, seed)?;

    let left: Vec<usize> = ids
        .iter()
        .enumerate()
        .filter(|&(i, _)| side[i] == 0)
        .map(|(_, &v)| v)
        .collect();
    let right: Vec<usize> = ids
        .iter()
        .enumerate()
        .filter(|&(i, _)| side[i] == 1)
        .map(|(_, &v)| v)
        .collect();
    if left.is_empty() || right.is_empty() {
        return Err(Error::Infeasible("bisection produced an empty side".into()));
    }
    recursive_bisect(h, &left, k1, eps_level, config, seed.wrapping_mul(6364136223846793005).wrapping_add(1), blocks, next_block)?;
    recursive_bisect(h, &right, k2, eps_level, config, seed.wrapping_mul(6364136223846793005).wrapping_add(2), blocks, next_block)
}

/// One full multilevel bisection of `h` under the given block-0 bounds.
fn bisect(
    h: &Hypergraph,
    bounds: BisectionBounds,
    config: &PartitionConfig,
    seed: u64,
) -> Result<Vec<usize>> {
    let communities = match config.community {
        CommunityMode::Off => None,
        CommunityMode::Flow => {
            let mut params = CommunityParams::auto(h, seed);
            if let Some(t) = config.community_target {
                params.target = t;
            }
            params.rho = config.rho;
            params.m = config.m;
            params.beta = config.beta;
            params.xi = config.xi;
            params.max_expansions = config.max_expansions;
            Some(detect_communities(h, &params)?)
        }
    };
    let params = PairwiseParams {
        rating: config.rating,
        target_nodes: config.coarsen_target.max(2),
        seed,
        rho: config.rho,
        m: config.m,
        cap_factor: 1.5,
    };
    let state = coarsen_pairwise(h, communities.as_ref(), &params)?;
    let coarsest = state.coarsest(h).clone();
    let grown = grow_bipartition(&coarsest, bounds, seed, config.initial_tries)?;
    let mut coarse_blocks = grown.blocks;
    if !grown.feasible {
        multilevel::rebalance(&coarsest, &mut coarse_blocks, &bounds);
    }
    fm_refine_bisection(&coarsest, &mut coarse_blocks, &bounds, config.fm_passes);
    Ok(uncoarsen_and_refine(&state, coarse_blocks, &bounds, config.fm_passes))
}
