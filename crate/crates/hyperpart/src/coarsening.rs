//! Multilevel resistance-based coarsening: estimate hyperedge effective
//! resistances per level, propagate accumulated supernode weights into them,
//! and greedily contract low-resistance hyperedges below a threshold.

use std::collections::HashMap;

use crate::embedding::{self, ExpansionKind};
use crate::error::{Error, Result};
use crate::hypergraph::{ClusterMap, Hypergraph};
use crate::resistance::{estimate_resistances, ResistanceVector};

/// How the per-level contraction threshold is chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DeltaPolicy {
    /// Threshold at the R-value whose rank marks this fraction of hyperedges
    /// as contraction candidates.
    Percentile(f64),
    /// A fixed threshold applied at every level.
    Fixed(f64),
}

#[derive(Debug, Clone)]
pub struct CoarsenParams {
    /// Maximum number of coarsening levels (L).
    pub levels: usize,
    /// Krylov order for the per-level embeddings.
    pub rho: usize,
    /// Top-m ratios summed into each resistance estimate.
    pub m: usize,
    pub seed: u64,
    pub delta: DeltaPolicy,
    /// Target node-reduction ratio; coarsening stops once the coarse node
    /// count drops to `(1 - reduction_target) * |V|`.
    pub reduction_target: f64,
    /// Hyperedges with more pins than this are never contraction candidates.
    pub max_contraction_pins: usize,
    pub expansion: ExpansionKind,
}

impl Default for CoarsenParams {
    fn default() -> Self {
        CoarsenParams {
            levels: 4,
            rho: embedding::DEFAULT_RHO,
            m: 2,
            seed: 0,
            delta: DeltaPolicy::Percentile(0.5),
            reduction_target: 0.5,
            max_contraction_pins: 300,
            expansion: ExpansionKind::Star,
        }
    }
}

/// One coarsening step: the coarse hypergraph, the fine-to-coarse map, the
/// accumulated supernode weights, and the (propagated) resistances that
/// drove the contraction, indexed by the fine hyperedges.
#[derive(Debug, Clone)]
pub struct CoarseningLevel {
    pub hypergraph: Hypergraph,
    pub cluster_map: ClusterMap,
    pub eta: Vec<f64>,
    pub resistances: ResistanceVector,
}

/// Finest-first sequence of coarsening levels.
#[derive(Debug, Clone)]
pub struct CoarseningHierarchy {
    levels: Vec<CoarseningLevel>,
    params: CoarsenParams,
}

impl CoarseningHierarchy {
    pub fn levels(&self) -> &[CoarseningLevel] {
        &self.levels
    }

    pub fn params(&self) -> &CoarsenParams {
        &self.params
    }

    pub fn coarsest(&self) -> &Hypergraph {
        &self.levels.last().expect("hierarchy has at least one level").hypergraph
    }

    /// Supernode weights at the coarsest level.
    pub fn final_eta(&self) -> &[f64] {
        &self.levels.last().expect("hierarchy has at least one level").eta
    }

    /// Composition of all per-level maps: finest node -> coarsest node.
    pub fn composite_map(&self) -> ClusterMap {
        let mut levels = self.levels.iter();
        let first = levels.next().expect("hierarchy has at least one level");
        let mut map = first.cluster_map.clone();
        for level in levels {
            map = map
                .compose(&level.cluster_map)
                .expect("adjacent levels compose");
        }
        map
    }
}

/// Add the summed node weights of each hyperedge to its resistance:
/// `r'[e] = r[e] + sum_{v in e} eta[v]`.
pub fn apply_nwp(h: &Hypergraph, r: &ResistanceVector, eta: &[f64]) -> Result<ResistanceVector> {
    if eta.len() != h.num_nodes() {
        return Err(Error::invalid(format!(
            "{} node weights for {} nodes",
            eta.len(),
            h.num_nodes()
        )));
    }
    if r.len() != h.num_edges() {
        return Err(Error::invalid(format!(
            "{} resistances for {} hyperedges",
            r.len(),
            h.num_edges()
        )));
    }
    let values = (0..h.num_edges())
        .map(|e| r.get(e) + h.pins_of(e).iter().map(|&v| eta[v]).sum::<f64>())
        .collect();
    Ok(ResistanceVector::new(values, r.m_used(), r.rho_used()))
}

/// Greedy disjoint selection: scan hyperedges in ascending resistance order
/// (ties by index) and contract each hyperedge with `R_e < delta` whose pins
/// are all still unclaimed. Unclaimed nodes stay singletons.
pub fn select_contractions(h: &Hypergraph, r: &ResistanceVector, delta: f64) -> ClusterMap {
    select_contractions_opts(h, r, delta, 300, usize::MAX).0
}

/// As [`select_contractions`], with an explicit pin cap and a limit on how
/// many nodes may disappear. Also reports which hyperedge formed each
/// cluster (`None` for singletons).
pub fn select_contractions_opts(
    h: &Hypergraph,
    r: &ResistanceVector,
    delta: f64,
    max_pins: usize,
    max_removed: usize,
) -> (ClusterMap, Vec<Option<usize>>) {
    select_contractions_impl(h, r, delta, max_pins, max_removed, None)
}

fn select_contractions_impl(
    h: &Hypergraph,
    r: &ResistanceVector,
    delta: f64,
    max_pins: usize,
    max_removed: usize,
    // Straggler absorption plus a cluster-weight cap; `None` is the plain
    // disjoint pass.
    absorb_cap: Option<f64>,
) -> (ClusterMap, Vec<Option<usize>>) {
    let n = h.num_nodes();
    let mut order: Vec<usize> = (0..h.num_edges()).collect();
    order.sort_by(|&a, &b| r.get(a).total_cmp(&r.get(b)).then(a.cmp(&b)));

    let cap = absorb_cap.unwrap_or(f64::INFINITY);
    let mut claimed = vec![false; n];
    let mut labels: Vec<usize> = (0..n).collect();
    let mut creator: Vec<Option<usize>> = vec![None; n];
    let mut weight: Vec<f64> = (0..n).map(|v| h.node_weight(v)).collect();
    let mut removed = 0usize;
    let candidate = |e: usize| -> bool {
        r.get(e) < delta && h.edge_size(e) >= 2 && h.edge_size(e) <= max_pins
    };
    for &e in &order {
        if !(r.get(e) < delta) {
            break;
        }
        let pins = h.pins_of(e);
        if pins.len() < 2 || pins.len() > max_pins {
            continue;
        }
        if pins.iter().any(|&v| claimed[v]) {
            continue;
        }
        if pins.len() - 1 > max_removed - removed && absorb_cap.is_none() {
            continue;
        }
        // The budgeted coarsening path contracts the hyperedge in chunks
        // when the removal budget or the weight cap cannot take it whole;
        // the disjoint path takes all or nothing.
        let mut offset = 0usize;
        let mut first = true;
        while offset < pins.len() {
            let budget_left = max_removed - removed;
            if budget_left == 0 {
                break;
            }
            let mut take = (pins.len() - offset).min(budget_left.saturating_add(1));
            let mut total: f64 = pins[offset..offset + take]
                .iter()
                .map(|&v| h.node_weight(v))
                .sum();
            while take >= 2 && total > cap {
                take -= 1;
                total -= h.node_weight(pins[offset + take]);
            }
            if take < 2 {
                break;
            }
            let root = pins[offset];
            for &v in &pins[offset..offset + take] {
                claimed[v] = true;
                labels[v] = root;
            }
            if first {
                creator[root] = Some(e);
                first = false;
            }
            weight[root] = total;
            removed += take - 1;
            offset += take;
        }
    }
    if absorb_cap.is_some() && removed < max_removed {
        // Nodes every candidate hyperedge of which lost its pins to an
        // earlier contraction would stay singletons forever under the
        // disjoint pass; fold each into the cluster behind its
        // lowest-resistance candidate hyperedge, capacity permitting.
        for x in 0..n {
            if claimed[x] || removed >= max_removed {
                continue;
            }
            let mut best: Option<(f64, usize, usize)> = None;
            for &e in h.edges_of(x) {
                if !candidate(e) {
                    continue;
                }
                for &v in h.pins_of(e) {
                    if !claimed[v] || v == x {
                        continue;
                    }
                    let root = labels[v];
                    if weight[root] + h.node_weight(x) > cap {
                        continue;
                    }
                    let key = (r.get(e), e);
                    if best.is_none_or(|(br, be, _)| key < (br, be)) {
                        best = Some((key.0, key.1, root));
                    }
                    break;
                }
            }
            if let Some((_, _, root)) = best {
                labels[x] = root;
                claimed[x] = true;
                weight[root] += h.node_weight(x);
                removed += 1;
            }
        }
    }
    let map = ClusterMap::from_labels(&labels);
    let mut creator_of_cluster = vec![None; map.num_clusters()];
    for (v, c) in creator.into_iter().enumerate() {
        if c.is_some() {
            creator_of_cluster[map.cluster_of(v)] = c;
        }
    }
    (map, creator_of_cluster)
}

/// Contract a hypergraph through a cluster map: pins are mapped and
/// deduplicated, hyperedges collapsing to one pin vanish, identical pin sets
/// merge with summed weights, and coarse node weights are the summed member
/// weights.
pub fn contract(h: &Hypergraph, map: &ClusterMap) -> Hypergraph {
    assert_eq!(map.num_nodes(), h.num_nodes(), "cluster map size mismatch");
    let nc = map.num_clusters();
    let mut node_weights = vec![0.0; nc];
    for v in 0..h.num_nodes() {
        node_weights[map.cluster_of(v)] += h.node_weight(v);
    }
    let mut edges: Vec<Vec<usize>> = Vec::new();
    let mut weights: Vec<f64> = Vec::new();
    let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
    for e in 0..h.num_edges() {
        let mut mapped: Vec<usize> = h.pins_of(e).iter().map(|&v| map.cluster_of(v)).collect();
        mapped.sort_unstable();
        mapped.dedup();
        if mapped.len() < 2 {
            continue;
        }
        match index.get(&mapped) {
            Some(&i) => weights[i] += h.edge_weight(e),
            None => {
                index.insert(mapped.clone(), edges.len());
                edges.push(mapped);
                weights.push(h.edge_weight(e));
            }
        }
    }
    Hypergraph::new(nc, edges, weights, node_weights)
        .expect("contraction preserves hypergraph validity")
}

fn level_seed(seed: u64, level: usize) -> u64 {
    seed ^ (level as u64 + 1).wrapping_mul(0x9E3779B97F4A7C15)
}

fn percentile_delta(r: &ResistanceVector, fraction: f64) -> f64 {
    let mut sorted: Vec<f64> = r.values().to_vec();
    sorted.sort_by(f64::total_cmp);
    // Mark `round(fraction * E)` edges (at least one) as candidates; the
    // threshold sits just above the boundary value so boundary ties count.
    let count = ((fraction * sorted.len() as f64).round() as usize).clamp(1, sorted.len());
    sorted[count - 1].next_up()
}

/// Run the full multilevel coarsening loop.
///
/// Per level: embed, estimate resistances, fold in the accumulated node
/// weights, pick the threshold, contract, and update the supernode weights
/// (`eta` of a contracted cluster is the members' sum plus the defining
/// hyperedge's resistance). Stops early on fixpoints, on reaching the
/// reduction target, or when the coarse hypergraph degenerates.
pub fn coarsen(h: &Hypergraph, params: &CoarsenParams) -> Result<CoarseningHierarchy> {
    if h.num_nodes() == 0 {
        return Err(Error::invalid("cannot coarsen an empty hypergraph"));
    }
    if params.levels < 1 {
        return Err(Error::invalid("levels must be at least 1"));
    }
    if !(0.0..1.0).contains(&params.reduction_target) {
        return Err(Error::invalid("reduction target must lie in [0, 1)"));
    }
    let n0 = h.num_nodes();
    let target_min = (((1.0 - params.reduction_target) * n0 as f64).ceil() as usize).max(1);

    let mut levels: Vec<CoarseningLevel> = Vec::new();
    let mut current = h.clone();
    let mut eta = vec![0.0; n0];
    for l in 0..params.levels {
        if current.num_nodes() <= target_min
            || current.num_nodes() < 2
            || current.num_edges() == 0
        {
            break;
        }
        let emb = match embedding::embed_with(
            &current,
            params.rho,
            level_seed(params.seed, l),
            params.expansion,
            embedding::DEFAULT_HYBRID_THRESHOLD,
            embedding::DEFAULT_DROP_TOL,
        ) {
            Ok(emb) => emb,
            Err(Error::DegenerateSubspace(_)) | Err(Error::DegenerateInput(_)) => break,
            Err(e) => return Err(e),
        };
        let m = params.m.min(emb.rho());
        let raw = estimate_resistances(&current, &emb, m)?;
        let r = apply_nwp(&current, &raw, &eta)?;
        let delta = match params.delta {
            DeltaPolicy::Fixed(d) => d,
            DeltaPolicy::Percentile(f) => percentile_delta(&r, f),
        };
        let n_l = current.num_nodes();
        let allowed_removed = (n_l / 2).min(n_l - target_min);
        // The per-level pass absorbs leftover pins of candidate hyperedges
        // into their clusters (a purely disjoint pass starves exactly the
        // nodes whose neighborhoods contract first), under a cluster-weight
        // cap that keeps supernodes comparable.
        let cap = 1.3 * current.total_node_weight() / target_min.max(1) as f64;
        let (map, creators) = select_contractions_impl(
            &current,
            &r,
            delta,
            params.max_contraction_pins,
            allowed_removed,
            Some(cap),
        );
        if map.num_clusters() == n_l {
            // Fixpoint: record the level so callers still see the resistances.
            levels.push(CoarseningLevel {
                hypergraph: current.clone(),
                cluster_map: ClusterMap::identity(n_l),
                eta: eta.clone(),
                resistances: r,
            });
            break;
        }
        let coarse = contract(&current, &map);
        let mut eta_next = vec![0.0; map.num_clusters()];
        for v in 0..n_l {
            eta_next[map.cluster_of(v)] += eta[v];
        }
        for (cluster, creator) in creators.iter().enumerate() {
            if let Some(e) = creator {
                eta_next[cluster] += r.get(*e);
            }
        }
        levels.push(CoarseningLevel {
            hypergraph: coarse.clone(),
            cluster_map: map,
            eta: eta_next.clone(),
            resistances: r,
        });
        current = coarse;
        eta = eta_next;
    }
    if levels.is_empty() {
        levels.push(CoarseningLevel {
            hypergraph: current.clone(),
            cluster_map: ClusterMap::identity(current.num_nodes()),
            eta,
            resistances: ResistanceVector::new(vec![0.0; current.num_edges()], 0, 0),
        });
    }
    Ok(CoarseningHierarchy {
        levels,
        params: params.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn rv(values: Vec<f64>) -> ResistanceVector {
        ResistanceVector::new(values, 1, 1)
    }

    #[test]
    fn nwp_examples() {
        let h = Hypergraph::unit(2, vec![vec![0, 1]]).unwrap();
        let r = rv(vec![0.5]);
        let unchanged = apply_nwp(&h, &r, &[0.0, 0.0]).unwrap();
        assert_eq!(unchanged.values(), &[0.5]);

        let shifted = apply_nwp(&h, &r, &[0.1, 0.2]).unwrap();
        assert!((shifted.get(0) - 0.8).abs() < 1e-15);

        assert!(apply_nwp(&h, &r, &[0.1]).is_err());
    }

    #[test]
    fn nwp_matches_per_edge_oracle_and_is_monotone() {
        let mut rng = StdRng::seed_from_u64(5);
        for _ in 0..20 {
            let n = rng.random_range(3..9);
            let edges: Vec<Vec<usize>> = (0..rng.random_range(1..6))
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
            let r = rv((0..h.num_edges()).map(|_| rng.random::<f64>()).collect());
            let eta: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
            let out = apply_nwp(&h, &r, &eta).unwrap();
            for e in 0..h.num_edges() {
                let expect: f64 = r.get(e) + h.pins_of(e).iter().map(|&v| eta[v]).sum::<f64>();
                assert!((out.get(e) - expect).abs() < 1e-12);
                assert!(out.get(e) >= r.get(e));
            }
        }
    }

    #[test]
    fn select_contractions_examples() {
        let h = Hypergraph::unit(4, vec![vec![0, 1], vec![2, 3]]).unwrap();
        let r = rv(vec![0.1, 0.2]);
        // delta at or below the minimum R: nothing contracts.
        let id = select_contractions(&h, &r, 0.1);
        assert_eq!(id.num_clusters(), 4);

        let both = select_contractions(&h, &r, 1.0);
        assert_eq!(both.num_clusters(), 2);

        let overlap = Hypergraph::unit(3, vec![vec![0, 1], vec![1, 2]]).unwrap();
        let r2 = rv(vec![0.1, 0.2]);
        let map = select_contractions(&overlap, &r2, 1.0);
        assert_eq!(map.num_clusters(), 2);
        assert_eq!(map.cluster_of(0), map.cluster_of(1));
        assert_ne!(map.cluster_of(2), map.cluster_of(0));
    }

    #[test]
    fn select_respects_pin_cap_and_removal_budget() {
        let h = Hypergraph::unit(5, vec![vec![0, 1, 2, 3, 4], vec![0, 1]]).unwrap();
        let r = rv(vec![0.01, 0.02]);
        let (map, _) = select_contractions_opts(&h, &r, 1.0, 3, usize::MAX);
        // The 5-pin hyperedge is skipped; the 2-pin one contracts.
        assert_eq!(map.num_clusters(), 4);

        let (budgeted, _) = select_contractions_opts(&h, &r, 1.0, 10, 2);
        // Contracting the 5-pin edge would remove 4 nodes > budget 2.
        assert_eq!(budgeted.cluster_of(0), budgeted.cluster_of(1));
        assert_eq!(budgeted.num_clusters(), 4);
    }

    #[test]
    fn contract_examples() {
        let h = Hypergraph::unit(3, vec![vec![0, 1], vec![1, 2]]).unwrap();
        let same = contract(&h, &ClusterMap::identity(3));
        assert_eq!(same, h);

        let h2 = Hypergraph::new(2, vec![vec![0, 1]], vec![3.0], vec![1.0, 1.0]).unwrap();
        let merged = contract(&h2, &ClusterMap::from_labels(&[0, 0]));
        assert_eq!(merged.num_nodes(), 1);
        assert_eq!(merged.num_edges(), 0);
        assert_eq!(merged.node_weight(0), 2.0);

        let par = Hypergraph::new(
            2,
            vec![vec![0, 1], vec![1, 0]],
            vec![1.0, 2.0],
            vec![1.0, 1.0],
        )
        .unwrap();
        let dedup = contract(&par, &ClusterMap::identity(2));
        assert_eq!(dedup.num_edges(), 1);
        assert_eq!(dedup.edge_weight(0), 3.0);
    }

    #[test]
    fn contract_has_no_singletons_or_duplicate_pin_sets() {
        let h = Hypergraph::unit(
            6,
            vec![vec![0, 1, 2], vec![2, 3], vec![3, 4, 5], vec![0, 5], vec![1, 2]],
        )
        .unwrap();
        let map = ClusterMap::from_labels(&[0, 0, 1, 1, 2, 2]);
        let c = contract(&h, &map);
        let mut seen = std::collections::HashSet::new();
        for e in 0..c.num_edges() {
            assert!(c.edge_size(e) >= 2);
            let mut pins = c.pins_of(e).to_vec();
            pins.sort_unstable();
            assert!(seen.insert(pins), "duplicate pin set in contraction");
        }
    }

    #[test]
    fn coarsen_identity_when_nothing_below_delta() {
        let h = Hypergraph::unit(4, vec![vec![0, 1], vec![1, 2], vec![2, 3]]).unwrap();
        let params = CoarsenParams {
            levels: 1,
            delta: DeltaPolicy::Fixed(0.0),
            ..CoarsenParams::default()
        };
        let hier = coarsen(&h, &params).unwrap();
        assert_eq!(hier.levels().len(), 1);
        assert_eq!(hier.coarsest(), &h);
        assert_eq!(hier.composite_map(), ClusterMap::identity(4));
    }

    #[test]
    fn coarsen_conserves_node_weight_and_decreases_counts() {
        let mut rng = StdRng::seed_from_u64(11);
        let n = 40;
        let mut edges = Vec::new();
        for v in 0..n - 1 {
            edges.push(vec![v, v + 1]);
        }
        for _ in 0..30 {
            let a = rng.random_range(0..n);
            let b = rng.random_range(0..n);
            if a != b {
                edges.push(vec![a.min(b), a.max(b)]);
            }
        }
        let h = Hypergraph::unit(n, edges).unwrap();
        let params = CoarsenParams {
            levels: 4,
            reduction_target: 0.75,
            ..CoarsenParams::default()
        };
        let hier = coarsen(&h, &params).unwrap();
        let total = h.total_node_weight();
        let mut prev_nodes = h.num_nodes();
        for level in hier.levels() {
            assert!((level.hypergraph.total_node_weight() - total).abs() < 1e-9);
            assert!(level.hypergraph.num_nodes() <= prev_nodes);
            prev_nodes = level.hypergraph.num_nodes();
            assert!(level.eta.iter().all(|&x| x >= 0.0));
        }
        // Deterministic rerun.
        let again = coarsen(&h, &params).unwrap();
        assert_eq!(hier.levels().len(), again.levels().len());
        for (a, b) in hier.levels().iter().zip(again.levels()) {
            assert_eq!(a.hypergraph, b.hypergraph);
            assert_eq!(a.cluster_map, b.cluster_map);
            assert_eq!(a.eta, b.eta);
            assert_eq!(a.resistances, b.resistances);
        }
    }

    #[test]
    fn coarsen_rejects_empty_hypergraph() {
        let empty = Hypergraph::unit(0, vec![]).unwrap();
        assert!(coarsen(&empty, &CoarsenParams::default()).is_err());
    }

    #[test]
    fn eta_accumulates_defining_resistance() {
        // One contraction level; cluster eta must equal member etas (zero)
        // plus the defining hyperedge's resistance.
        let h = Hypergraph::unit(4, vec![vec![0, 1], vec![1, 2], vec![2, 3]]).unwrap();
        let params = CoarsenParams {
            levels: 1,
            delta: DeltaPolicy::Percentile(0.9),
            reduction_target: 0.4,
            ..CoarsenParams::default()
        };
        let hier = coarsen(&h, &params).unwrap();
        let level = &hier.levels()[0];
        if level.cluster_map.num_clusters() < 4 {
            let merged_cluster = (0..4)
                .map(|v| level.cluster_map.cluster_of(v))
                .fold(std::collections::HashMap::new(), |mut acc, c| {
                    *acc.entry(c).or_insert(0) += 1;
                    acc
                })
                .into_iter()
                .find(|&(_, count)| count > 1)
                .map(|(c, _)| c)
                .unwrap();
            assert!(level.eta[merged_cluster] > 0.0);
        }
    }
}
