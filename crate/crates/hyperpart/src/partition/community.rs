//! Flow-based community detection: multilevel resistance coarsening down to
//! a target community count, then local-flow refinement of the leftover
//! singleton clusters.

use crate::coarsening::{coarsen, CoarsenParams, DeltaPolicy};
use crate::embedding::{self, ExpansionKind};
use crate::error::Result;
use crate::hypergraph::{ClusterMap, Hypergraph};
use crate::localflow::{refine_seed, select_seeds};

#[derive(Debug, Clone)]
pub struct CommunityParams {
    /// Desired number of communities; coarsening stops at this node count.
    pub target: usize,
    pub rho: usize,
    pub m: usize,
    pub seed: u64,
    pub beta: f64,
    pub xi: f64,
    pub max_expansions: usize,
    /// Cap on coarsening levels while approaching the target.
    pub max_levels: usize,
    /// Cap on how many singleton seeds get flow-refined.
    pub seed_limit: usize,
    pub expansion: ExpansionKind,
}

impl CommunityParams {
    /// Defaults scaled to the hypergraph: about one community per 64 nodes,
    /// clamped to `[2, 256]`.
    pub fn auto(h: &Hypergraph, seed: u64) -> Self {
        let target = (h.num_nodes() / 64).clamp(2, 256);
        CommunityParams {
            target,
            rho: embedding::DEFAULT_RHO,
            m: 2,
            seed,
            // At beta = 1 a singleton seed can never legally grow (the
            // denominator of its local conductance goes nonpositive); a
            // softer penalty keeps the flow refinement able to merge
            // leftover singletons into their clusters.
            beta: 0.2,
            xi: 1e-3,
            max_expansions: 3,
            max_levels: 16,
            seed_limit: usize::MAX,
            expansion: ExpansionKind::Star,
        }
    }
}

/// Detect communities: run the resistance coarsening toward the target
/// count, then reassign each unmerged singleton to the community its
/// flow-refined local cluster overlaps most.
pub fn detect_communities(h: &Hypergraph, params: &CommunityParams) -> Result<ClusterMap> {
    let n = h.num_nodes();
    if n == 0 {
        return Ok(ClusterMap::identity(0));
    }
    let target = params.target.clamp(1, n);
    let reduction_target = 1.0 - target as f64 / n as f64;
    let coarsen_params = CoarsenParams {
        levels: params.max_levels,
        rho: params.rho,
        m: params.m,
        seed: params.seed,
        delta: DeltaPolicy::Percentile(0.5),
        reduction_target,
        max_contraction_pins: 300,
        expansion: params.expansion,
    };
    let hier = coarsen(h, &coarsen_params)?;
    let composite = hier.composite_map();
    let mut labels: Vec<usize> = composite.assignments().to_vec();

    for seed_set in select_seeds(&hier, params.seed_limit) {
        let seed_node = seed_set.members()[0];
        let refined = refine_seed(h, &seed_set, params.beta, params.xi, params.max_expansions)?;
        if refined.len() <= 1 {
            continue;
        }
        // Majority community among the other members; ties take the smaller id.
        let mut votes: Vec<(usize, usize)> = Vec::new();
        for v in refined.iter().filter(|&v| v != seed_node) {
            let c = labels[v];
            match votes.iter_mut().find(|(id, _)| *id == c) {
                Some((_, count)) => *count += 1,
                None => votes.push((c, 1)),
            }
        }
        if let Some(&(winner, _)) = votes
            .iter()
            .max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0)))
        {
            labels[seed_node] = winner;
        }
    }
    Ok(ClusterMap::from_labels(&labels))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn disconnected_components_never_share_a_community() {
        let h = Hypergraph::unit(
            8,
            vec![
                vec![0, 1],
                vec![1, 2],
                vec![2, 3],
                vec![0, 3],
                vec![4, 5],
                vec![5, 6],
                vec![6, 7],
                vec![4, 7],
            ],
        )
        .unwrap();
        let params = CommunityParams {
            target: 2,
            ..CommunityParams::auto(&h, 1)
        };
        let c = detect_communities(&h, &params).unwrap();
        assert!(c.num_clusters() >= 2);
        for v in 0..4 {
            for u in 4..8 {
                assert_ne!(c.cluster_of(v), c.cluster_of(u));
            }
        }
    }

    #[test]
    fn single_clique_collapses_to_one_community() {
        let mut edges = Vec::new();
        for u in 0..6 {
            for v in (u + 1)..6 {
                edges.push(vec![u, v]);
            }
        }
        let h = Hypergraph::unit(6, edges).unwrap();
        let params = CommunityParams {
            target: 1,
            max_levels: 8,
            ..CommunityParams::auto(&h, 2)
        };
        let c = detect_communities(&h, &params).unwrap();
        assert_eq!(c.num_clusters(), 1);
    }

    #[test]
    fn deterministic_per_seed() {
        let h = Hypergraph::unit(
            10,
            vec![
                vec![0, 1, 2],
                vec![2, 3],
                vec![3, 4],
                vec![5, 6, 7],
                vec![7, 8],
                vec![8, 9],
                vec![4, 5],
            ],
        )
        .unwrap();
        let params = CommunityParams {
            target: 2,
            ..CommunityParams::auto(&h, 7)
        };
        let a = detect_communities(&h, &params).unwrap();
        let b = detect_communities(&h, &params).unwrap();
        assert_eq!(a, b);
    }
}
