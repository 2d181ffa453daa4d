//! Directed capacitated flow networks and a Dinic-style max-flow solver
//! (level graphs plus blocking flows).
//!
//! Infinite capacities are encoded as the sum of all finite capacities plus
//! one, which no finite s-t cut can reach.

use std::collections::VecDeque;

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
struct Arc {
    head: usize,
    cap: f64,
}

/// Builder for a flow network; capacities are fixed once built.
#[derive(Debug, Clone)]
pub struct FlowNetworkBuilder {
    num_vertices: usize,
    source: usize,
    sink: usize,
    arcs: Vec<(usize, usize, Option<f64>)>,
}

impl FlowNetworkBuilder {
    pub fn new(num_vertices: usize, source: usize, sink: usize) -> Self {
        assert!(source < num_vertices && sink < num_vertices && source != sink);
        FlowNetworkBuilder {
            num_vertices,
            source,
            sink,
            arcs: Vec::new(),
        }
    }

    pub fn add_arc(&mut self, from: usize, to: usize, cap: f64) {
        assert!(from < self.num_vertices && to < self.num_vertices);
        assert!(cap >= 0.0 && cap.is_finite(), "arc capacity must be finite and nonnegative");
        self.arcs.push((from, to, Some(cap)));
    }

    pub fn add_infinite_arc(&mut self, from: usize, to: usize) {
        assert!(from < self.num_vertices && to < self.num_vertices);
        self.arcs.push((from, to, None));
    }

    pub fn build(self) -> FlowNetwork {
        let finite_sum: f64 = self.arcs.iter().filter_map(|&(_, _, c)| c).sum();
        let infinite = finite_sum + 1.0;
        let mut arcs = Vec::with_capacity(self.arcs.len() * 2);
        let mut adj = vec![Vec::new(); self.num_vertices];
        let mut infinite_flags = Vec::with_capacity(self.arcs.len());
        for &(from, to, cap) in &self.arcs {
            let cap = cap.unwrap_or(infinite);
            adj[from].push(arcs.len());
            arcs.push(Arc { head: to, cap });
            adj[to].push(arcs.len());
            arcs.push(Arc { head: from, cap: 0.0 });
            infinite_flags.push(cap >= infinite);
        }
        let eps = 1e-12 * infinite.max(1.0);
        FlowNetwork {
            num_vertices: self.num_vertices,
            source: self.source,
            sink: self.sink,
            arcs,
            original: self.arcs,
            infinite_flags,
            adj,
            infinite,
            eps,
            solved: false,
        }
    }
}

/// A sealed flow network; [`FlowNetwork::max_flow`] runs Dinic and leaves the
/// residual state in place for min-cut extraction.
#[derive(Debug, Clone)]
pub struct FlowNetwork {
    num_vertices: usize,
    source: usize,
    sink: usize,
    arcs: Vec<Arc>,
    original: Vec<(usize, usize, Option<f64>)>,
    infinite_flags: Vec<bool>,
    adj: Vec<Vec<usize>>,
    infinite: f64,
    eps: f64,
    solved: bool,
}

impl FlowNetwork {
    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn sink(&self) -> usize {
        self.sink
    }

    /// The finite stand-in value used for infinite capacities.
    pub fn infinite_value(&self) -> f64 {
        self.infinite
    }

    /// Original arcs as `(from, to, capacity, is_infinite)`.
    pub fn original_arcs(&self) -> impl Iterator<Item = (usize, usize, f64, bool)> + '_ {
        self.original
            .iter()
            .zip(&self.infinite_flags)
            .map(move |(&(from, to, cap), &inf)| (from, to, cap.unwrap_or(self.infinite), inf))
    }

    fn bfs_levels(&self) -> Option<Vec<i32>> {
        let mut level = vec![-1i32; self.num_vertices];
        level[self.source] = 0;
        let mut queue = VecDeque::new();
        queue.push_back(self.source);
        while let Some(u) = queue.pop_front() {
            for &a in &self.adj[u] {
                let arc = &self.arcs[a];
                if arc.cap > self.eps && level[arc.head] < 0 {
                    level[arc.head] = level[u] + 1;
                    queue.push_back(arc.head);
                }
            }
        }
        if level[self.sink] >= 0 {
            Some(level)
        } else {
            None
        }
    }

    fn dfs_push(
        &mut self,
        u: usize,
        limit: f64,
        level: &[i32],
        next: &mut [usize],
    ) -> f64 {
        if u == self.sink {
            return limit;
        }
        while next[u] < self.adj[u].len() {
            let a = self.adj[u][next[u]];
            let (head, cap) = {
                let arc = &self.arcs[a];
                (arc.head, arc.cap)
            };
            if cap > self.eps && level[head] == level[u] + 1 {
                let pushed = self.dfs_push(head, limit.min(cap), level, next);
                if pushed > self.eps {
                    self.arcs[a].cap -= pushed;
                    self.arcs[a ^ 1].cap += pushed;
                    return pushed;
                }
            }
            next[u] += 1;
        }
        0.0
    }

    /// Run Dinic to completion and return the max-flow value.
    pub fn max_flow(&mut self) -> f64 {
        let mut total = 0.0;
        while let Some(level) = self.bfs_levels() {
            let mut next = vec![0usize; self.num_vertices];
            loop {
                let pushed = self.dfs_push(self.source, f64::INFINITY, &level, &mut next);
                if pushed <= self.eps {
                    break;
                }
                total += pushed;
            }
        }
        self.solved = true;
        total
    }

    /// Vertices reachable from the source in the residual network. Only
    /// meaningful after [`max_flow`](Self::max_flow); this is the minimum-cut
    /// source side.
    pub fn source_side(&self) -> Vec<bool> {
        assert!(self.solved, "source_side requires max_flow first");
        let mut seen = vec![false; self.num_vertices];
        seen[self.source] = true;
        let mut queue = VecDeque::new();
        queue.push_back(self.source);
        while let Some(u) = queue.pop_front() {
            for &a in &self.adj[u] {
                let arc = &self.arcs[a];
                if arc.cap > self.eps && !seen[arc.head] {
                    seen[arc.head] = true;
                    queue.push_back(arc.head);
                }
            }
        }
        seen
    }

    /// Capacity of the cut induced by a source-side assignment, or an error
    /// if an infinite arc crosses it.
    pub fn cut_capacity(&self, side: &[bool]) -> Result<f64> {
        if !side[self.source] || side[self.sink] {
            return Err(Error::invalid("side must contain source and exclude sink"));
        }
        let mut total = 0.0;
        for (from, to, cap, inf) in self.original_arcs() {
            if side[from] && !side[to] {
                if inf {
                    return Err(Error::invalid("infinite arc crosses the cut"));
                }
                total += cap;
            }
        }
        Ok(total)
    }
}
