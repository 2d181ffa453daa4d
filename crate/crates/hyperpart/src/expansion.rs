//! Hypergraph-to-graph expansions (star, clique, hybrid) and the normalized
//! adjacency operator driving the Krylov iteration.
//!
//! Star expansion gives each hyperedge an auxiliary vertex connected to its
//! pins with scaled weight `z(e,p) = w(e)/d(e)`, where the hyperedge degree
//! `d(e)` is its cardinality. Clique expansion spreads `w(e)/(|e|-1)` over
//! all pin pairs. Auxiliary vertices are always appended after the original
//! nodes so node embeddings can be recovered by truncation.

use crate::error::Result;
use crate::graph::SparseGraph;
use crate::hypergraph::Hypergraph;

/// Bipartite star expansion: original nodes plus one star vertex per
/// hyperedge (star vertex of hyperedge `e` is `star_offset + e`).
#[derive(Debug, Clone)]
pub struct StarExpansion {
    pub graph: SparseGraph,
    pub star_offset: usize,
}

/// Hybrid expansion: small hyperedges become cliques, large ones stars.
#[derive(Debug, Clone)]
pub struct HybridExpansion {
    pub graph: SparseGraph,
    pub star_offset: usize,
    /// Star vertex per hyperedge, `None` for clique-expanded ones.
    pub star_of_edge: Vec<Option<usize>>,
}

pub fn star_expand(h: &Hypergraph) -> StarExpansion {
    let star_offset = h.num_nodes();
    let mut edges = Vec::with_capacity(h.num_pins());
    for e in 0..h.num_edges() {
        let z = h.edge_weight(e) / h.edge_size(e) as f64;
        for &p in h.pins_of(e) {
            edges.push((p, star_offset + e, z));
        }
    }
    let graph = SparseGraph::from_edges(star_offset + h.num_edges(), &edges)
        .expect("star expansion edges are valid by construction");
    StarExpansion { graph, star_offset }
}

pub fn clique_expand(h: &Hypergraph) -> SparseGraph {
    let mut edges = Vec::new();
    for e in 0..h.num_edges() {
        clique_edges(h.pins_of(e), h.edge_weight(e), &mut edges);
    }
    SparseGraph::from_edges(h.num_nodes(), &edges)
        .expect("clique expansion edges are valid by construction")
}

fn clique_edges(pins: &[usize], weight: f64, out: &mut Vec<(usize, usize, f64)>) {
    if pins.len() < 2 {
        return;
    }
    let w = weight / (pins.len() - 1) as f64;
    for (i, &u) in pins.iter().enumerate() {
        for &v in &pins[i + 1..] {
            out.push((u, v, w));
        }
    }
}

/// Clique-expand hyperedges with `|e| <= size_threshold`, star-expand the
/// rest. Star vertices for the large hyperedges are appended after the
/// original nodes, densely numbered in hyperedge order.
pub fn hybrid_expand(h: &Hypergraph, size_threshold: usize) -> Result<HybridExpansion> {
    if size_threshold < 2 {
        return Err(crate::error::Error::invalid(format!(
            "hybrid size threshold {size_threshold} must be at least 2"
        )));
    }
    let star_offset = h.num_nodes();
    let mut star_of_edge = vec![None; h.num_edges()];
    let mut next_star = star_offset;
    let mut edges = Vec::new();
    for e in 0..h.num_edges() {
        let pins = h.pins_of(e);
        if pins.len() <= size_threshold {
            clique_edges(pins, h.edge_weight(e), &mut edges);
        } else {
            let star = next_star;
            next_star += 1;
            star_of_edge[e] = Some(star);
            let z = h.edge_weight(e) / pins.len() as f64;
            for &p in pins {
                edges.push((p, star, z));
            }
        }
    }
    let graph = SparseGraph::from_edges(next_star, &edges)
        .expect("hybrid expansion edges are valid by construction");
    Ok(HybridExpansion {
        graph,
        star_offset,
        star_of_edge,
    })
}

/// The operator `x -> D^{-1/2} A D^{-1/2} x` for a sparse symmetric graph.
/// Zero-degree vertices map to zero.
#[derive(Debug)]
pub struct NormalizedAdjacencyOp<'g> {
    graph: &'g SparseGraph,
    inv_sqrt_deg: Vec<f64>,
}

impl<'g> NormalizedAdjacencyOp<'g> {
    pub fn new(graph: &'g SparseGraph) -> Self {
        let inv_sqrt_deg = (0..graph.num_vertices())
            .map(|u| {
                let d = graph.degree(u);
                if d > 0.0 {
                    1.0 / d.sqrt()
                } else {
                    0.0
                }
            })
            .collect();
        NormalizedAdjacencyOp {
            graph,
            inv_sqrt_deg,
        }
    }

    pub fn dim(&self) -> usize {
        self.graph.num_vertices()
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.dim(), "operator/vector dimension mismatch");
        let mut y = vec![0.0; x.len()];
        for u in 0..self.dim() {
            let mut acc = 0.0;
            for (v, w) in self.graph.neighbors_of(u) {
                acc += w * self.inv_sqrt_deg[v] * x[v];
            }
            y[u] = self.inv_sqrt_deg[u] * acc;
        }
        y
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    #[test]
    fn star_single_hyperedge() {
        let h = Hypergraph::new(3, vec![vec![0, 1, 2]], vec![3.0], vec![1.0; 3]).unwrap();
        let se = star_expand(&h);
        assert_eq!(se.graph.num_vertices(), 4);
        assert_eq!(se.graph.num_edges(), 3);
        for (_, _, w) in se.graph.edges() {
            assert_eq!(w, 1.0);
        }
    }

    #[test]
    fn star_two_pin_edges_weight_half() {
        let h = Hypergraph::unit(3, vec![vec![0, 1], vec![1, 2]]).unwrap();
        let se = star_expand(&h);
        for (_, _, w) in se.graph.edges() {
            assert_eq!(w, 0.5);
        }
    }

    #[test]
    fn star_is_bipartite_with_pin_count_edges() {
        let h = Hypergraph::unit(
            6,
            vec![vec![0, 1, 2], vec![2, 3], vec![3, 4, 5], vec![0, 5]],
        )
        .unwrap();
        let se = star_expand(&h);
        assert_eq!(se.graph.num_edges(), h.num_pins());
        for (u, v, _) in se.graph.edges() {
            let u_star = u >= se.star_offset;
            let v_star = v >= se.star_offset;
            assert_ne!(u_star, v_star, "edge ({u},{v}) is not node-star");
        }
        // Star edges of one hyperedge sum to w(e).
        for e in 0..h.num_edges() {
            let star = se.star_offset + e;
            let total: f64 = se.graph.neighbors_of(star).map(|(_, w)| w).sum();
            assert!((total - h.edge_weight(e)).abs() < 1e-12);
        }
    }

    #[test]
    fn clique_examples() {
        let h = Hypergraph::new(3, vec![vec![0, 1, 2]], vec![2.0], vec![1.0; 3]).unwrap();
        let g = clique_expand(&h);
        assert_eq!(g.num_edges(), 3);
        for (_, _, w) in g.edges() {
            assert_eq!(w, 1.0);
        }

        let h2 = Hypergraph::new(2, vec![vec![0, 1]], vec![5.0], vec![1.0; 2]).unwrap();
        let g2 = clique_expand(&h2);
        assert_eq!(g2.edges().collect::<Vec<_>>(), vec![(0, 1, 5.0)]);

        let h3 = Hypergraph::unit(3, vec![vec![0, 1, 2], vec![1, 2]]).unwrap();
        let g3 = clique_expand(&h3);
        let w12 = g3.neighbors_of(1).find(|&(v, _)| v == 2).unwrap().1;
        assert!((w12 - 1.5).abs() < 1e-15);
    }

    #[test]
    fn singleton_edges_star_pendant_clique_ignored() {
        let h = Hypergraph::unit(2, vec![vec![0], vec![0, 1]]).unwrap();
        let se = star_expand(&h);
        assert_eq!(se.graph.num_vertices(), 4);
        assert_eq!(se.graph.num_edges(), 3);
        let g = clique_expand(&h);
        assert_eq!(g.num_edges(), 1);
    }

    #[test]
    fn hybrid_threshold_splits_by_size() {
        let h = Hypergraph::unit(7, vec![vec![0, 1], vec![2, 3, 4, 5, 6]]).unwrap();
        let hy = hybrid_expand(&h, 3).unwrap();
        assert_eq!(hy.star_of_edge[0], None);
        assert_eq!(hy.star_of_edge[1], Some(7));
        assert_eq!(hy.graph.num_vertices(), 8);
        // 1 clique edge + 5 star edges
        assert_eq!(hy.graph.num_edges(), 6);
    }

    #[test]
    fn hybrid_limit_cases() {
        let h = Hypergraph::unit(
            6,
            vec![vec![0, 1, 2], vec![2, 3], vec![3, 4, 5]],
        )
        .unwrap();
        let all_clique = hybrid_expand(&h, usize::MAX).unwrap();
        assert_eq!(all_clique.graph, clique_expand(&h));
        assert!(all_clique.star_of_edge.iter().all(Option::is_none));

        let all_star = hybrid_expand(&h, 2).unwrap();
        // Size-2 edges stay cliques at threshold 2; compare against pure star
        // only on the bigger hyperedges.
        for e in 0..h.num_edges() {
            if h.edge_size(e) > 2 {
                assert!(all_star.star_of_edge[e].is_some());
            }
        }
        assert!(hybrid_expand(&h, 1).is_err());
    }

    #[test]
    fn normalized_adjacency_of_k2_is_swap() {
        for w in [1.0, 0.25, 8.0] {
            let g = SparseGraph::from_edges(2, &[(0, 1, w)]).unwrap();
            let op = NormalizedAdjacencyOp::new(&g);
            let y = op.apply(&[1.0, 0.0]);
            assert!((y[0] - 0.0).abs() < 1e-15 && (y[1] - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn perron_vector_is_fixed() {
        let g = SparseGraph::from_edges(
            4,
            &[(0, 1, 1.0), (1, 2, 2.0), (2, 3, 0.5), (3, 0, 1.5)],
        )
        .unwrap();
        let op = NormalizedAdjacencyOp::new(&g);
        let x: Vec<f64> = (0..4).map(|u| g.degree(u).sqrt()).collect();
        let y = op.apply(&x);
        for (a, b) in x.iter().zip(&y) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn operator_norm_at_most_one() {
        let mut rng = StdRng::seed_from_u64(7);
        let mut edges = Vec::new();
        let n = 12;
        for u in 0..n {
            for v in (u + 1)..n {
                if rng.random::<f64>() < 0.3 {
                    edges.push((u, v, rng.random::<f64>() + 0.1));
                }
            }
        }
        edges.push((0, 1, 1.0));
        let g = SparseGraph::from_edges(n, &edges).unwrap();
        let op = NormalizedAdjacencyOp::new(&g);
        for _ in 0..100 {
            let x: Vec<f64> = (0..n).map(|_| rng.random::<f64>() * 2.0 - 1.0).collect();
            let y = op.apply(&x);
            let nx: f64 = x.iter().map(|a| a * a).sum::<f64>().sqrt();
            let ny: f64 = y.iter().map(|a| a * a).sum::<f64>().sqrt();
            assert!(ny <= nx + 1e-9, "operator expanded a vector: {ny} > {nx}");
        }
    }

    #[test]
    fn zero_degree_vertex_maps_to_zero() {
        let g = SparseGraph::from_edges(3, &[(0, 1, 1.0)]).unwrap();
        let op = NormalizedAdjacencyOp::new(&g);
        let y = op.apply(&[1.0, 1.0, 5.0]);
        assert_eq!(y[2], 0.0);
    }
}
