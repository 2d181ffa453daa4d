//! Independent brute-force oracles: exact effective resistance via the dense
//! Laplacian pseudoinverse, exhaustive minimum cuts, exhaustive local
//! conductance, and exhaustive balanced bipartitions.
//!
//! These are reference implementations for tests and tiny inputs only; they
//! share nothing with the estimation or flow code they check.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::graph::SparseGraph;
use crate::hypergraph::{Hypergraph, NodeSet, Partition};
use crate::maxflow::FlowNetwork;
use crate::metrics;

/// Largest vertex count accepted by the exhaustive cut oracles.
pub const BRUTE_LIMIT: usize = 14;
/// Largest node count accepted by the exhaustive bipartition oracle.
pub const BIPARTITION_LIMIT: usize = 16;

/// Dense Laplacian `L = D - A` of a small graph.
#[derive(Debug, Clone)]
pub struct DenseLaplacian {
    matrix: DMatrix<f64>,
}

impl DenseLaplacian {
    pub fn from_graph(g: &SparseGraph) -> Self {
        let n = g.num_vertices();
        let mut m = DMatrix::zeros(n, n);
        for (u, v, w) in g.edges() {
            m[(u, v)] -= w;
            m[(v, u)] -= w;
            m[(u, u)] += w;
            m[(v, v)] += w;
        }
        DenseLaplacian { matrix: m }
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }
}

/// Exact effective resistance `b_pq^T L^+ b_pq` via eigendecomposition.
///
/// Eigenvalues below `1e-9 * lambda_max` are treated as zero modes; if
/// `b_pq` has mass on them the endpoints lie in different components and the
/// resistance is infinite.
pub fn exact_resistance(g: &SparseGraph, p: usize, q: usize) -> Result<f64> {
    let n = g.num_vertices();
    if p >= n || q >= n {
        return Err(Error::invalid("endpoint out of range"));
    }
    if p == q {
        return Ok(0.0);
    }
    let lap = DenseLaplacian::from_graph(g);
    let eig = lap.matrix.clone().symmetric_eigen();
    let lambda_max = eig.eigenvalues.iter().cloned().fold(0.0f64, f64::max);
    let tol = 1e-9 * lambda_max.max(1e-300);
    let mut resistance = 0.0;
    let mut null_mass = 0.0;
    for (i, &lambda) in eig.eigenvalues.iter().enumerate() {
        let u = eig.eigenvectors.column(i);
        let proj = u[p] - u[q];
        if lambda > tol {
            resistance += proj * proj / lambda;
        } else {
            null_mass += proj * proj;
        }
    }
    if null_mass > 1e-9 {
        return Err(Error::invalid(
            "infinite resistance: endpoints lie in different components",
        ));
    }
    Ok(resistance)
}

/// Exhaustive minimum s-t cut of a small network: minimize crossing capacity
/// over all source-side assignments of the non-terminal vertices.
pub fn brute_min_cut(net: &FlowNetwork) -> Result<(f64, Vec<bool>)> {
    let n = net.num_vertices();
    let free: Vec<usize> = (0..n)
        .filter(|&v| v != net.source() && v != net.sink())
        .collect();
    if free.len() > BRUTE_LIMIT {
        return Err(Error::invalid(format!(
            "{} non-terminal vertices exceed the brute-force limit {BRUTE_LIMIT}",
            free.len()
        )));
    }
    let arcs: Vec<(usize, usize, f64, bool)> = net.original_arcs().collect();
    let mut best: Option<(f64, Vec<bool>)> = None;
    for mask in 0u64..(1u64 << free.len()) {
        let mut side = vec![false; n];
        side[net.source()] = true;
        for (bit, &v) in free.iter().enumerate() {
            side[v] = mask & (1 << bit) != 0;
        }
        let mut total = 0.0;
        let mut finite = true;
        for &(from, to, cap, inf) in &arcs {
            if side[from] && !side[to] {
                if inf {
                    finite = false;
                    break;
                }
                total += cap;
            }
        }
        if !finite {
            continue;
        }
        if best.as_ref().is_none_or(|(b, _)| total < *b) {
            best = Some((total, side));
        }
    }
    best.ok_or_else(|| Error::invalid("no finite cut exists"))
}

/// Exhaustive minimizer of local conductance over all node sets with a
/// positive denominator.
pub fn brute_best_hlc(
    h: &Hypergraph,
    c_ref: &NodeSet,
    beta: f64,
) -> Result<(NodeSet, f64)> {
    let n = h.num_nodes();
    if n > BRUTE_LIMIT {
        return Err(Error::invalid(format!(
            "{n} nodes exceed the brute-force limit {BRUTE_LIMIT}"
        )));
    }
    let deg = h.degrees();
    let mut best: Option<(NodeSet, f64)> = None;
    for mask in 1u64..(1u64 << n) {
        let members: Vec<usize> = (0..n).filter(|&v| mask & (1 << v) != 0).collect();
        let mut denom = 0.0;
        for &v in &members {
            if c_ref.contains(v) {
                denom += deg[v];
            } else {
                denom -= beta * deg[v];
            }
        }
        if denom <= 0.0 {
            continue;
        }
        let s = NodeSet::new(n, members)?;
        let value = metrics::cut(h, &s) / denom;
        if best.as_ref().is_none_or(|(_, b)| value < *b) {
            best = Some((s, value));
        }
    }
    best.ok_or_else(|| Error::Infeasible("no set has a positive denominator".into()))
}

/// Exhaustive minimum-cutsize epsilon-balanced bipartition.
pub fn brute_best_bipartition(h: &Hypergraph, epsilon: f64) -> Result<(Partition, f64)> {
    let n = h.num_nodes();
    if n > BIPARTITION_LIMIT {
        return Err(Error::invalid(format!(
            "{n} nodes exceed the brute-force limit {BIPARTITION_LIMIT}"
        )));
    }
    if n < 2 {
        return Err(Error::Infeasible("need at least 2 nodes".into()));
    }
    let total: f64 = h.total_node_weight();
    let lower = (0.5 - epsilon) * total;
    let upper = (0.5 + epsilon) * total;
    let mut best: Option<(Partition, f64)> = None;
    // Node 0 stays in block 0; bipartitions are symmetric under swap.
    for mask in 0u64..(1u64 << (n - 1)) {
        let blocks: Vec<usize> = (0..n)
            .map(|v| {
                if v == 0 {
                    0
                } else {
                    usize::from(mask & (1 << (v - 1)) != 0)
                }
            })
            .collect();
        let load0: f64 = (0..n)
            .filter(|&v| blocks[v] == 0)
            .map(|v| h.node_weight(v))
            .sum();
        let load1 = total - load0;
        if load0 < lower || load0 > upper || load1 < lower || load1 > upper {
            continue;
        }
        let Ok(p) = Partition::new(blocks, 2, epsilon.min(0.5)) else {
            continue; // one block empty
        };
        let cs = metrics::cutsize(h, &p);
        if best.as_ref().is_none_or(|(_, b)| cs < *b) {
            best = Some((p, cs));
        }
    }
    best.ok_or_else(|| Error::Infeasible("no balanced bipartition exists".into()))
}
