//! Sparse symmetric weighted graphs in CSR form, the substrate shared by the
//! expansions, the Krylov iteration, and the resistance oracle.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct SparseGraph {
    num_vertices: usize,
    offsets: Vec<usize>,
    neighbors: Vec<usize>,
    weights: Vec<f64>,
}

impl SparseGraph {
    /// Build from an undirected edge list. Parallel contributions between the
    /// same endpoints are summed; self-loops are rejected.
    pub fn from_edges(num_vertices: usize, edges: &[(usize, usize, f64)]) -> Result<Self> {
        let mut acc: BTreeMap<(usize, usize), f64> = BTreeMap::new();
        for &(u, v, w) in edges {
            if u >= num_vertices || v >= num_vertices {
                return Err(Error::invalid(format!(
                    "edge ({u},{v}) out of range (num_vertices = {num_vertices})"
                )));
            }
            if u == v {
                return Err(Error::invalid(format!("self-loop at vertex {u}")));
            }
            if !(w >= 0.0) || !w.is_finite() {
                return Err(Error::invalid(format!("edge ({u},{v}) has bad weight {w}")));
            }
            let key = (u.min(v), u.max(v));
            *acc.entry(key).or_insert(0.0) += w;
        }
        let mut counts = vec![0usize; num_vertices + 1];
        for &(u, v) in acc.keys() {
            counts[u + 1] += 1;
            counts[v + 1] += 1;
        }
        for i in 0..num_vertices {
            counts[i + 1] += counts[i];
        }
        let offsets = counts.clone();
        let mut cursor = counts;
        let nnz = acc.len() * 2;
        let mut neighbors = vec![0usize; nnz];
        let mut weights = vec![0.0; nnz];
        for (&(u, v), &w) in &acc {
            neighbors[cursor[u]] = v;
            weights[cursor[u]] = w;
            cursor[u] += 1;
            neighbors[cursor[v]] = u;
            weights[cursor[v]] = w;
            cursor[v] += 1;
        }
        Ok(SparseGraph {
            num_vertices,
            offsets,
            neighbors,
            weights,
        })
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    /// Number of undirected edges.
    pub fn num_edges(&self) -> usize {
        self.neighbors.len() / 2
    }

    pub fn neighbors_of(&self, u: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let lo = self.offsets[u];
        let hi = self.offsets[u + 1];
        self.neighbors[lo..hi]
            .iter()
            .copied()
            .zip(self.weights[lo..hi].iter().copied())
    }

    /// Weighted degree of `u`.
    pub fn degree(&self, u: usize) -> f64 {
        let lo = self.offsets[u];
        let hi = self.offsets[u + 1];
        self.weights[lo..hi].iter().sum()
    }

    /// Iterate each undirected edge once, as `(u, v, w)` with `u < v`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.num_vertices).flat_map(move |u| {
            self.neighbors_of(u)
                .filter(move |&(v, _)| u < v)
                .map(move |(v, w)| (u, v, w))
        })
    }
}
