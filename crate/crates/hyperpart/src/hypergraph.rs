//! Core hypergraph data model: pin-list incidence structure plus the node-set,
//! partition, and cluster-map types used throughout the crate.
//!
//! All types are immutable after construction and safe to share across threads.

use crate::error::{Error, Result};

/// A weighted hypergraph in compressed row layout.
///
/// Pins are stored flat, grouped per hyperedge via `edge_offsets`. A reverse
/// incidence (node -> hyperedges) and the weighted node degrees are built at
/// construction time since nearly every algorithm needs them.
#[derive(Debug, Clone)]
pub struct Hypergraph {
    num_nodes: usize,
    edge_offsets: Vec<usize>,
    pins: Vec<usize>,
    edge_weights: Vec<f64>,
    node_weights: Vec<f64>,
    // Derived incidence: hyperedge ids per node, CSR layout.
    node_offsets: Vec<usize>,
    node_edges: Vec<usize>,
    degrees: Vec<f64>,
}

impl PartialEq for Hypergraph {
    fn eq(&self, other: &Self) -> bool {
        self.num_nodes == other.num_nodes
            && self.edge_offsets == other.edge_offsets
            && self.pins == other.pins
            && self.edge_weights == other.edge_weights
            && self.node_weights == other.node_weights
    }
}

impl Hypergraph {
    /// Build a hypergraph from per-edge pin lists and explicit weights.
    ///
    /// Every hyperedge must be nonempty, contain no duplicate pins, and have
    /// positive weight; pin ids must lie in `[0, num_nodes)`.
    pub fn new(
        num_nodes: usize,
        edges: Vec<Vec<usize>>,
        edge_weights: Vec<f64>,
        node_weights: Vec<f64>,
    ) -> Result<Self> {
        if edge_weights.len() != edges.len() {
            return Err(Error::invalid(format!(
                "{} edge weights for {} hyperedges",
                edge_weights.len(),
                edges.len()
            )));
        }
        if node_weights.len() != num_nodes {
            return Err(Error::invalid(format!(
                "{} node weights for {} nodes",
                node_weights.len(),
                num_nodes
            )));
        }
        for (e, pins) in edges.iter().enumerate() {
            if pins.is_empty() {
                return Err(Error::invalid(format!("hyperedge {e} is empty")));
            }
            let mut seen = pins.clone();
            seen.sort_unstable();
            for w in seen.windows(2) {
                if w[0] == w[1] {
                    return Err(Error::invalid(format!(
                        "hyperedge {e} contains duplicate pin {}",
                        w[0]
                    )));
                }
            }
            if let Some(&p) = pins.iter().find(|&&p| p >= num_nodes) {
                return Err(Error::invalid(format!(
                    "hyperedge {e} has pin {p} out of range (num_nodes = {num_nodes})"
                )));
            }
        }
        for (e, &w) in edge_weights.iter().enumerate() {
            if !(w > 0.0) || !w.is_finite() {
                return Err(Error::invalid(format!("hyperedge {e} has weight {w} <= 0")));
            }
        }
        for (v, &w) in node_weights.iter().enumerate() {
            if w < 0.0 || !w.is_finite() {
                return Err(Error::invalid(format!("node {v} has negative weight {w}")));
            }
        }

        let mut edge_offsets = Vec::with_capacity(edges.len() + 1);
        edge_offsets.push(0usize);
        let mut pins = Vec::with_capacity(edges.iter().map(Vec::len).sum());
        for e in &edges {
            pins.extend_from_slice(e);
            edge_offsets.push(pins.len());
        }

        let mut h = Hypergraph {
            num_nodes,
            edge_offsets,
            pins,
            edge_weights,
            node_weights,
            node_offsets: Vec::new(),
            node_edges: Vec::new(),
            degrees: Vec::new(),
        };
        h.build_incidence();
        Ok(h)
    }

    /// Unit edge and node weights; the common case in tests.
    pub fn unit(num_nodes: usize, edges: Vec<Vec<usize>>) -> Result<Self> {
        let ew = vec![1.0; edges.len()];
        let nw = vec![1.0; num_nodes];
        Self::new(num_nodes, edges, ew, nw)
    }

    fn build_incidence(&mut self) {
        let mut counts = vec![0usize; self.num_nodes + 1];
        for &p in &self.pins {
            counts[p + 1] += 1;
        }
        for i in 0..self.num_nodes {
            counts[i + 1] += counts[i];
        }
        let node_offsets = counts.clone();
        let mut cursor = counts;
        let mut node_edges = vec![0usize; self.pins.len()];
        for e in 0..self.num_edges() {
            for &p in self.pins_of(e) {
                node_edges[cursor[p]] = e;
                cursor[p] += 1;
            }
        }
        let mut degrees = vec![0.0; self.num_nodes];
        for e in 0..self.num_edges() {
            let w = self.edge_weights[e];
            for &p in self.pins_of(e) {
                degrees[p] += w;
            }
        }
        self.node_offsets = node_offsets;
        self.node_edges = node_edges;
        self.degrees = degrees;
    }

    pub fn num_nodes(&self) -> usize {
        self.num_nodes
    }

    pub fn num_edges(&self) -> usize {
        self.edge_offsets.len() - 1
    }

    /// Total number of pins, `sum_e |e|`.
    pub fn num_pins(&self) -> usize {
        self.pins.len()
    }

    pub fn pins_of(&self, e: usize) -> &[usize] {
        &self.pins[self.edge_offsets[e]..self.edge_offsets[e + 1]]
    }

    pub fn edge_size(&self, e: usize) -> usize {
        self.edge_offsets[e + 1] - self.edge_offsets[e]
    }

    pub fn edge_weight(&self, e: usize) -> f64 {
        self.edge_weights[e]
    }

    pub fn edge_weights(&self) -> &[f64] {
        &self.edge_weights
    }

    pub fn node_weight(&self, v: usize) -> f64 {
        self.node_weights[v]
    }

    pub fn node_weights(&self) -> &[f64] {
        &self.node_weights
    }

    pub fn total_node_weight(&self) -> f64 {
        self.node_weights.iter().sum()
    }

    /// Hyperedges incident to node `v`.
    pub fn edges_of(&self, v: usize) -> &[usize] {
        &self.node_edges[self.node_offsets[v]..self.node_offsets[v + 1]]
    }

    /// Weighted degree `d_v = sum of w(e) over e containing v` (precomputed).
    pub fn degrees(&self) -> &[f64] {
        &self.degrees
    }

    /// Weighted degree of one node; errors on an out-of-range id.
    pub fn degree(&self, v: usize) -> Result<f64> {
        if v >= self.num_nodes {
            return Err(Error::invalid(format!(
                "node {v} out of range (num_nodes = {})",
                self.num_nodes
            )));
        }
        Ok(self.degrees[v])
    }

    /// Iterate hyperedges as `(pins, weight)` pairs.
    pub fn edges(&self) -> impl Iterator<Item = (&[usize], f64)> + '_ {
        (0..self.num_edges()).map(move |e| (self.pins_of(e), self.edge_weights[e]))
    }
}

/// A subset of the nodes of one hypergraph.
///
/// Keeps both a sorted member list (for iteration) and a bitmask (for O(1)
/// membership tests).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeSet {
    num_nodes: usize,
    members: Vec<usize>,
    mask: Vec<u64>,
}

impl NodeSet {
    pub fn new(num_nodes: usize, members: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut mask = vec![0u64; num_nodes.div_ceil(64)];
        let mut list: Vec<usize> = Vec::new();
        for v in members {
            if v >= num_nodes {
                return Err(Error::invalid(format!(
                    "node {v} out of range (num_nodes = {num_nodes})"
                )));
            }
            let (w, b) = (v / 64, v % 64);
            if mask[w] & (1 << b) == 0 {
                mask[w] |= 1 << b;
                list.push(v);
            }
        }
        list.sort_unstable();
        Ok(NodeSet {
            num_nodes,
            members: list,
            mask,
        })
    }

    pub fn empty(num_nodes: usize) -> Self {
        NodeSet {
            num_nodes,
            members: Vec::new(),
            mask: vec![0u64; num_nodes.div_ceil(64)],
        }
    }

    pub fn full(num_nodes: usize) -> Self {
        Self::new(num_nodes, 0..num_nodes).expect("range is valid")
    }

    pub fn num_nodes(&self) -> usize {
        self.num_nodes
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        v < self.num_nodes && self.mask[v / 64] & (1 << (v % 64)) != 0
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().copied()
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn complement(&self) -> NodeSet {
        NodeSet::new(
            self.num_nodes,
            (0..self.num_nodes).filter(|&v| !self.contains(v)),
        )
        .expect("complement ids are valid")
    }
}

/// A k-way assignment of nodes to blocks, with its balance tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    block_of: Vec<usize>,
    k: usize,
    epsilon: f64,
}

impl Partition {
    /// Validates that block ids are dense in `[0, k)` and that
    /// `epsilon` lies in `(0, 1/k]`.
    pub fn new(block_of: Vec<usize>, k: usize, epsilon: f64) -> Result<Self> {
        if k == 0 {
            return Err(Error::invalid("k must be at least 1"));
        }
        if !(epsilon > 0.0 && epsilon <= 1.0 / k as f64) {
            return Err(Error::invalid(format!(
                "epsilon {epsilon} outside (0, 1/{k}]"
            )));
        }
        let mut used = vec![false; k];
        for (v, &b) in block_of.iter().enumerate() {
            if b >= k {
                return Err(Error::invalid(format!("node {v} assigned to block {b} >= k = {k}")));
            }
            used[b] = true;
        }
        if used.iter().any(|&u| !u) {
            return Err(Error::invalid("block ids are not dense in [0, k)"));
        }
        Ok(Partition {
            block_of,
            k,
            epsilon,
        })
    }

    pub fn block_of(&self, v: usize) -> usize {
        self.block_of[v]
    }

    pub fn blocks(&self) -> &[usize] {
        &self.block_of
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn num_nodes(&self) -> usize {
        self.block_of.len()
    }

    /// Node set of one block.
    pub fn block_nodes(&self, b: usize) -> NodeSet {
        NodeSet::new(
            self.block_of.len(),
            self.block_of
                .iter()
                .enumerate()
                .filter(|&(_, &blk)| blk == b)
                .map(|(v, _)| v),
        )
        .expect("ids are valid")
    }
}

/// A many-to-one map from fine nodes to dense cluster ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterMap {
    cluster_of: Vec<usize>,
    num_clusters: usize,
}

impl ClusterMap {
    pub fn new(cluster_of: Vec<usize>, num_clusters: usize) -> Result<Self> {
        let mut used = vec![false; num_clusters];
        for (v, &c) in cluster_of.iter().enumerate() {
            if c >= num_clusters {
                return Err(Error::invalid(format!(
                    "node {v} assigned to cluster {c} >= {num_clusters}"
                )));
            }
            used[c] = true;
        }
        if used.iter().any(|&u| !u) {
            return Err(Error::invalid("cluster ids are not dense"));
        }
        Ok(ClusterMap {
            cluster_of,
            num_clusters,
        })
    }

    /// Renumber arbitrary labels to dense ids in first-occurrence order.
    pub fn from_labels(labels: &[usize]) -> ClusterMap {
        let mut remap: Vec<Option<usize>> = vec![None; labels.len().max(labels.iter().map(|&l| l + 1).max().unwrap_or(0))];
        let mut next = 0usize;
        let mut cluster_of = Vec::with_capacity(labels.len());
        for &l in labels {
            let id = *remap[l].get_or_insert_with(|| {
                let id = next;
                next += 1;
                id
            });
            cluster_of.push(id);
        }
        ClusterMap {
            cluster_of,
            num_clusters: next,
        }
    }

    /// The identity map over `n` nodes.
    pub fn identity(n: usize) -> ClusterMap {
        ClusterMap {
            cluster_of: (0..n).collect(),
            num_clusters: n,
        }
    }

    pub fn cluster_of(&self, v: usize) -> usize {
        self.cluster_of[v]
    }

    pub fn assignments(&self) -> &[usize] {
        &self.cluster_of
    }

    pub fn num_clusters(&self) -> usize {
        self.num_clusters
    }

    pub fn num_nodes(&self) -> usize {
        self.cluster_of.len()
    }

    /// Member lists per cluster, each sorted ascending.
    pub fn clusters(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.num_clusters];
        for (v, &c) in self.cluster_of.iter().enumerate() {
            out[c].push(v);
        }
        out
    }

    /// Compose with a coarser map: `self` maps fine -> mid, `next` maps mid -> coarse.
    pub fn compose(&self, next: &ClusterMap) -> Result<ClusterMap> {
        if next.num_nodes() != self.num_clusters {
            return Err(Error::invalid(format!(
                "composition mismatch: {} clusters vs {} nodes",
                self.num_clusters,
                next.num_nodes()
            )));
        }
        let cluster_of = self
            .cluster_of
            .iter()
            .map(|&c| next.cluster_of[c])
            .collect();
        Ok(ClusterMap {
            cluster_of,
            num_clusters: next.num_clusters,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn construction_validates_pins() {
        assert!(Hypergraph::unit(3, vec![vec![0, 1], vec![1, 2]]).is_ok());
        assert!(Hypergraph::unit(2, vec![vec![0, 2]]).is_err());
        assert!(Hypergraph::unit(3, vec![vec![]]).is_err());
        assert!(Hypergraph::unit(3, vec![vec![1, 1]]).is_err());
    }

    #[test]
    fn construction_validates_weights() {
        assert!(Hypergraph::new(2, vec![vec![0, 1]], vec![0.0], vec![1.0, 1.0]).is_err());
        assert!(Hypergraph::new(2, vec![vec![0, 1]], vec![-1.0], vec![1.0, 1.0]).is_err());
        assert!(Hypergraph::new(2, vec![vec![0, 1]], vec![1.0], vec![-1.0, 1.0]).is_err());
    }

    #[test]
    fn incidence_is_consistent() {
        let h = Hypergraph::unit(4, vec![vec![0, 1, 2], vec![1, 3], vec![2, 3]]).unwrap();
        assert_eq!(h.num_pins(), 7);
        assert_eq!(h.edges_of(1), &[0, 1]);
        assert_eq!(h.edges_of(3), &[1, 2]);
        assert_eq!(h.degree(1).unwrap(), 2.0);
        assert!(h.degree(4).is_err());
    }

    #[test]
    fn nodeset_membership_and_complement() {
        let s = NodeSet::new(5, [3, 1, 3]).unwrap();
        assert_eq!(s.len(), 2);
        assert!(s.contains(1) && s.contains(3) && !s.contains(0));
        let c = s.complement();
        assert_eq!(c.members(), &[0, 2, 4]);
        assert!(NodeSet::new(2, [2]).is_err());
    }

    #[test]
    fn partition_density_checked() {
        assert!(Partition::new(vec![0, 1, 0], 2, 0.3).is_ok());
        assert!(Partition::new(vec![0, 0, 0], 2, 0.3).is_err());
        assert!(Partition::new(vec![0, 2, 1], 2, 0.3).is_err());
        assert!(Partition::new(vec![0, 1], 2, 0.6).is_err());
    }

    #[test]
    fn cluster_map_from_labels_renumbers() {
        let c = ClusterMap::from_labels(&[5, 5, 2, 7, 2]);
        assert_eq!(c.assignments(), &[0, 0, 1, 2, 1]);
        assert_eq!(c.num_clusters(), 3);
    }

    #[test]
    fn cluster_map_compose() {
        let fine = ClusterMap::from_labels(&[0, 0, 1, 2]);
        let coarse = ClusterMap::from_labels(&[0, 0, 1]);
        let all = fine.compose(&coarse).unwrap();
        assert_eq!(all.assignments(), &[0, 0, 0, 1]);
    }
}
