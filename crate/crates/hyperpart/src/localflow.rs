//! Strongly-local flow-based cluster refinement: grow a seed set by
//! repeatedly solving max s-t flow / min s-t cut problems on a local
//! neighborhood, driving down the hypergraph local conductance.
//!
//! The ratio objective is minimized Dinkelbach-style: at estimate `alpha`
//! the network realizes `cut_H(S) + alpha*vol(C \ S) + alpha*beta*vol(S \ C)`
//! as its cut function, so any cut strictly cheaper than `alpha*vol(C)`
//! certifies a set with smaller local conductance.

use std::collections::HashMap;

use crate::coarsening::CoarseningHierarchy;
use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, NodeSet};
use crate::maxflow::{FlowNetwork, FlowNetworkBuilder};
use crate::metrics;

/// All nodes sharing at least one hyperedge with a member of `s`,
/// excluding `s` itself.
pub fn neighborhood(h: &Hypergraph, s: &NodeSet) -> NodeSet {
    let mut mark = vec![false; h.num_nodes()];
    for v in s.iter() {
        for &e in h.edges_of(v) {
            for &u in h.pins_of(e) {
                mark[u] = true;
            }
        }
    }
    NodeSet::new(
        h.num_nodes(),
        (0..h.num_nodes()).filter(|&u| mark[u] && !s.contains(u)),
    )
    .expect("ids are valid")
}

/// A localized HLC-minimization instance.
#[derive(Debug, Clone)]
pub struct LocalProblem {
    /// The local vertex set V'_L the flow problem ranges over.
    pub local_nodes: NodeSet,
    /// The reference (seed) set C; must be contained in `local_nodes`.
    pub seed: NodeSet,
    pub beta: f64,
    /// Current local-conductance estimate scaling the terminal arcs.
    pub alpha: f64,
}

/// A built flow network plus the bookkeeping needed to map cuts back to
/// node sets and scores.
#[derive(Debug)]
pub struct LocalNetwork {
    network: FlowNetwork,
    /// Hypergraph node represented by each of the first `local` vertices.
    local_order: Vec<usize>,
    /// `alpha * vol(C)`: subtracting it from a cut capacity yields
    /// `cut_H(S) - alpha * (vol(S&C) - beta*vol(S\C))`.
    baseline: f64,
}

impl LocalNetwork {
    pub fn network(&self) -> &FlowNetwork {
        &self.network
    }

    pub fn network_mut(&mut self) -> &mut FlowNetwork {
        &mut self.network
    }

    pub fn baseline(&self) -> f64 {
        self.baseline
    }

    /// Local nodes on the source side of the current residual min cut.
    pub fn cut_node_set(&self, num_nodes: usize) -> NodeSet {
        let side = self.network.source_side();
        NodeSet::new(
            num_nodes,
            self.local_order
                .iter()
                .enumerate()
                .filter(|&(i, _)| side[i])
                .map(|(_, &v)| v),
        )
        .expect("ids are valid")
    }
}

/// Build the localized s-t network at estimate `alpha`.
///
/// Every hyperedge with a pin in the local set becomes a directed gadget
/// pair `(e_in, e_out)` with one `w(e)`-capacity arc; pins inside the local
/// set attach with infinite arcs in both orientations, pins outside are
/// identified with the sink. Terminal arcs carry `alpha*d_v` from the source
/// for seed nodes and `alpha*beta*d_v` to the sink for the rest.
pub fn build_flow_network(h: &Hypergraph, local: &LocalProblem) -> Result<LocalNetwork> {
    if local.alpha <= 0.0 || !local.alpha.is_finite() {
        return Err(Error::invalid(format!(
            "alpha {} must be positive and finite",
            local.alpha
        )));
    }
    if local.seed.iter().any(|v| !local.local_nodes.contains(v)) {
        return Err(Error::invalid("seed set must lie inside the local node set"));
    }
    let locals = local.local_nodes.members().to_vec();
    let mut pos: HashMap<usize, usize> = HashMap::with_capacity(locals.len());
    for (i, &v) in locals.iter().enumerate() {
        pos.insert(v, i);
    }
    // Included hyperedges: at least one local pin.
    let mut included: Vec<usize> = Vec::new();
    {
        let mut seen = vec![false; h.num_edges()];
        for &v in &locals {
            for &e in h.edges_of(v) {
                if !seen[e] {
                    seen[e] = true;
                    included.push(e);
                }
            }
        }
        included.sort_unstable();
    }
    let num_local = locals.len();
    let num_gadgets = included.len();
    // Layout: locals, then (e_in, e_out) pairs, then source, sink.
    let source = num_local + 2 * num_gadgets;
    let sink = source + 1;
    let mut builder = FlowNetworkBuilder::new(sink + 1, source, sink);

    let deg = h.degrees();
    for (i, &v) in locals.iter().enumerate() {
        if local.seed.contains(v) {
            builder.add_arc(source, i, local.alpha * deg[v]);
        } else {
            builder.add_arc(i, sink, local.alpha * local.beta * deg[v]);
        }
    }
    for (g, &e) in included.iter().enumerate() {
        let e_in = num_local + 2 * g;
        let e_out = e_in + 1;
        builder.add_arc(e_in, e_out, h.edge_weight(e));
        let mut has_far_pin = false;
        for &p in h.pins_of(e) {
            match pos.get(&p) {
                Some(&i) => {
                    builder.add_infinite_arc(i, e_in);
                    builder.add_infinite_arc(e_out, i);
                }
                None => has_far_pin = true,
            }
        }
        if has_far_pin {
            builder.add_infinite_arc(e_out, sink);
        }
    }
    let baseline: f64 = local.alpha * local.seed.iter().map(|v| deg[v]).sum::<f64>();
    Ok(LocalNetwork {
        network: builder.build(),
        local_order: locals,
        baseline,
    })
}

/// Result of one seed refinement, with the trace of accepted estimates.
#[derive(Debug, Clone)]
pub struct RefineOutcome {
    pub set: NodeSet,
    /// Local-conductance estimates in acceptance order, starting with the
    /// seed's value; non-increasing.
    pub alpha_trace: Vec<f64>,
}

fn union(a: &NodeSet, b: &NodeSet, n: usize) -> NodeSet {
    NodeSet::new(n, a.iter().chain(b.iter())).expect("ids are valid")
}

/// Minimize local conductance around a seed set.
///
/// Starting from `S = C = seed` and `alpha = HLC(C)` (1.0 when undefined),
/// each round solves the local flow problem at the current estimate over the
/// frontier-expanded neighborhood, accepts the cut set when it certifies an
/// improvement, and stops once the improvement drops to `xi` or the
/// expansion budget is exhausted. The returned set never scores worse than
/// the seed.
pub fn refine_seed(
    h: &Hypergraph,
    seed: &NodeSet,
    beta: f64,
    xi: f64,
    max_expansions: usize,
) -> Result<NodeSet> {
    refine_seed_traced(h, seed, beta, xi, max_expansions).map(|out| out.set)
}

/// As [`refine_seed`], also exposing the alpha trace for diagnostics.
pub fn refine_seed_traced(
    h: &Hypergraph,
    seed: &NodeSet,
    beta: f64,
    xi: f64,
    max_expansions: usize,
) -> Result<RefineOutcome> {
    if seed.is_empty() {
        return Err(Error::invalid("seed set is empty"));
    }
    if beta < 0.0 {
        return Err(Error::invalid("beta must be nonnegative"));
    }
    if !(xi > 0.0) {
        return Err(Error::invalid("xi must be positive"));
    }
    let n = h.num_nodes();
    let mut best = seed.clone();
    let mut alpha = match metrics::local_conductance(h, seed, seed, beta) {
        Ok(v) if v.is_finite() && v >= 0.0 => v,
        // Isolated seeds have zero volume; any finite positive estimate
        // yields a valid first flow problem.
        _ => 1.0,
    };
    let mut trace = vec![alpha];
    if alpha == 0.0 {
        return Ok(RefineOutcome {
            set: best,
            alpha_trace: trace,
        });
    }
    let mut local = union(seed, &neighborhood(h, seed), n);
    for round in 0..=max_expansions {
        let problem = LocalProblem {
            local_nodes: local.clone(),
            seed: seed.clone(),
            beta,
            alpha,
        };
        let mut built = build_flow_network(h, &problem)?;
        let flow = built.network_mut().max_flow();
        let tol = 1e-12 * built.baseline().max(1.0);
        let mut alpha_new = alpha;
        if flow < built.baseline() - tol {
            let candidate = built.cut_node_set(n);
            if !candidate.is_empty() {
                if let Ok(score) = metrics::local_conductance(h, &candidate, seed, beta) {
                    if score >= 0.0 && score < alpha {
                        alpha_new = score;
                        best = candidate;
                    }
                }
            }
        }
        let delta = alpha - alpha_new;
        alpha = alpha_new;
        trace.push(alpha);
        if delta <= xi || alpha == 0.0 {
            break;
        }
        if round < max_expansions {
            local = union(&local, &neighborhood(h, &best), n);
        }
    }
    Ok(RefineOutcome {
        set: best,
        alpha_trace: trace,
    })
}

/// Seeds for refinement: the fine-level singleton clusters the coarsening
/// left unmerged, ordered by ascending supernode weight (ties by node id),
/// truncated to `count_limit`.
pub fn select_seeds(hier: &CoarseningHierarchy, count_limit: usize) -> Vec<NodeSet> {
    let map = hier.composite_map();
    let eta = hier.final_eta();
    let n = map.num_nodes();
    let mut cluster_sizes = vec![0usize; map.num_clusters()];
    for v in 0..n {
        cluster_sizes[map.cluster_of(v)] += 1;
    }
    let mut singles: Vec<(f64, usize)> = (0..n)
        .filter(|&v| cluster_sizes[map.cluster_of(v)] == 1)
        .map(|v| (eta[map.cluster_of(v)], v))
        .collect();
    singles.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    singles
        .into_iter()
        .take(count_limit)
        .map(|(_, v)| NodeSet::new(n, [v]).expect("ids are valid"))
        .collect()
}
