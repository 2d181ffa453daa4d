//! Quality metrics over hypergraphs: volume, cut, conductance, local
//! conductance, balance, and k-way cut size.
//!
//! All cuts use the all-or-nothing convention: a hyperedge pays its full
//! weight as soon as its pins straddle the boundary.

use crate::error::{Error, Result};
use crate::hypergraph::{ClusterMap, Hypergraph, NodeSet, Partition};

/// Sum of weighted degrees over the members of `s`.
pub fn volume(h: &Hypergraph, s: &NodeSet) -> f64 {
    let deg = h.degrees();
    s.iter().map(|v| deg[v]).sum()
}

/// Total weight of hyperedges with at least one pin inside `s` and one outside.
pub fn cut(h: &Hypergraph, s: &NodeSet) -> f64 {
    let mut total = 0.0;
    for (pins, w) in h.edges() {
        let mut inside = false;
        let mut outside = false;
        for &p in pins {
            if s.contains(p) {
                inside = true;
            } else {
                outside = true;
            }
            if inside && outside {
                total += w;
                break;
            }
        }
    }
    total
}

/// Conductance `cut(S) / min(vol(S), vol(S-complement))`.
///
/// Undefined when `s` is empty, is the whole node set, or the smaller side
/// has zero volume.
pub fn conductance(h: &Hypergraph, s: &NodeSet) -> Result<f64> {
    if s.is_empty() {
        return Err(Error::UndefinedConductance("empty node set".into()));
    }
    if s.len() == h.num_nodes() {
        return Err(Error::UndefinedConductance("node set is all of V".into()));
    }
    let vol_s = volume(h, s);
    let vol_rest = total_volume(h) - vol_s;
    let denom = vol_s.min(vol_rest);
    if denom <= 0.0 {
        return Err(Error::UndefinedConductance(
            "min-volume side has zero volume".into(),
        ));
    }
    Ok(cut(h, s) / denom)
}

/// `vol(V) = sum_e w(e) * |e|`.
pub fn total_volume(h: &Hypergraph) -> f64 {
    h.degrees().iter().sum()
}

/// Mean conductance over the clusters of `c`.
///
/// Clusters whose conductance is undefined (cluster equal to V, or zero
/// min-volume) are excluded from the mean and the divisor shrinks with them.
pub fn avg_conductance(h: &Hypergraph, c: &ClusterMap) -> Result<f64> {
    if c.num_clusters() < 2 {
        return Err(Error::UndefinedConductance(
            "average conductance needs at least 2 clusters".into(),
        ));
    }
    let mut sum = 0.0;
    let mut counted = 0usize;
    for members in c.clusters() {
        let s = NodeSet::new(h.num_nodes(), members)?;
        match conductance(h, &s) {
            Ok(phi) => {
                sum += phi;
                counted += 1;
            }
            Err(Error::UndefinedConductance(_)) => {}
            Err(e) => return Err(e),
        }
    }
    if counted == 0 {
        return Err(Error::UndefinedConductance(
            "every cluster has undefined conductance".into(),
        ));
    }
    Ok(sum / counted as f64)
}

/// Hypergraph local conductance of `s` with respect to the reference set
/// `c_ref`: `cut(S) / (vol(S & C) - beta * vol(S & C-complement))`.
///
/// The value is returned as-is when the denominator is negative; callers
/// minimizing HLC treat nonpositive denominators as infeasible.
pub fn local_conductance(h: &Hypergraph, s: &NodeSet, c_ref: &NodeSet, beta: f64) -> Result<f64> {
    let deg = h.degrees();
    let mut vol_in = 0.0;
    let mut vol_out = 0.0;
    for v in s.iter() {
        if c_ref.contains(v) {
            vol_in += deg[v];
        } else {
            vol_out += deg[v];
        }
    }
    let denom = vol_in - beta * vol_out;
    if denom == 0.0 {
        return Err(Error::UndefinedHlc);
    }
    Ok(cut(h, s) / denom)
}

/// Mean self-referenced local conductance over the clusters of `c`: each
/// cluster scores `cut(S)/vol(S)` (its own members as the reference set, so
/// the penalty term vanishes). Zero-volume clusters are skipped.
pub fn avg_local_conductance(h: &Hypergraph, c: &ClusterMap) -> Result<f64> {
    if c.num_clusters() < 2 {
        return Err(Error::UndefinedHlc);
    }
    let mut sum = 0.0;
    let mut counted = 0usize;
    for members in c.clusters() {
        let s = NodeSet::new(h.num_nodes(), members)?;
        let vol = volume(h, &s);
        if vol > 0.0 {
            sum += cut(h, &s) / vol;
            counted += 1;
        }
    }
    if counted == 0 {
        return Err(Error::UndefinedHlc);
    }
    Ok(sum / counted as f64)
}

/// Per-block loads plus the verdict of the two-sided balance test.
#[derive(Debug, Clone)]
pub struct BalanceReport {
    pub loads: Vec<f64>,
    pub lower: f64,
    pub upper: f64,
    pub balanced: bool,
}

/// Check `(1/k - eps) W <= load(V_i) <= (1/k + eps) W` for every block.
pub fn check_balance(h: &Hypergraph, p: &Partition) -> BalanceReport {
    let mut loads = vec![0.0; p.k()];
    for v in 0..h.num_nodes() {
        loads[p.block_of(v)] += h.node_weight(v);
    }
    let total = h.total_node_weight();
    let lower = (1.0 / p.k() as f64 - p.epsilon()) * total;
    let upper = (1.0 / p.k() as f64 + p.epsilon()) * total;
    let balanced = loads.iter().all(|&l| l >= lower && l <= upper);
    BalanceReport {
        loads,
        lower,
        upper,
        balanced,
    }
}

/// Total weight of hyperedges not contained in a single block.
pub fn cutsize(h: &Hypergraph, p: &Partition) -> f64 {
    let mut total = 0.0;
    for (pins, w) in h.edges() {
        let first = p.block_of(pins[0]);
        if pins[1..].iter().any(|&v| p.block_of(v) != first) {
            total += w;
        }
    }
    total
}
