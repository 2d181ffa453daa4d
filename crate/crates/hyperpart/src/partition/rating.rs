//! Vertex-pair rating functions for pairwise coarsening.

use crate::hypergraph::Hypergraph;
use crate::resistance::ResistanceVector;

/// Stabilizer added to normalized resistances in the denominator.
pub const RATING_EPSILON: f64 = 1e-6;

/// Classic heavy-edge rating: `sum over shared hyperedges of w(e)/(|e|-1)`.
pub fn heavy_edge_rating(h: &Hypergraph, p: usize, q: usize) -> f64 {
    debug_assert_ne!(p, q);
    let mut score = 0.0;
    for &e in h.edges_of(p) {
        let pins = h.pins_of(e);
        if pins.len() >= 2 && pins.contains(&q) {
            score += h.edge_weight(e) / (pins.len() - 1) as f64;
        }
    }
    score
}

/// Max-normalized resistances `R_e / max_e R_e`, ready for
/// [`resistance_rating_normalized`]. All zeros when every resistance is zero.
pub fn normalize_resistances(r: &ResistanceVector) -> Vec<f64> {
    let max = r.values().iter().cloned().fold(0.0f64, f64::max);
    if max <= 0.0 {
        return vec![0.0; r.len()];
    }
    r.values().iter().map(|&v| v / max).collect()
}

/// Resistance-based rating: `sum over shared hyperedges of
/// w(e) / (R_hat_e + epsilon)` with max-normalized resistances, so pairs
/// coupled through heavy, low-resistance hyperedges score highest.
pub fn resistance_rating(h: &Hypergraph, r: &ResistanceVector, p: usize, q: usize) -> f64 {
    resistance_rating_normalized(h, &normalize_resistances(r), p, q)
}

/// As [`resistance_rating`], with the normalization precomputed.
pub fn resistance_rating_normalized(h: &Hypergraph, rhat: &[f64], p: usize, q: usize) -> f64 {
    debug_assert_ne!(p, q);
    let mut score = 0.0;
    for &e in h.edges_of(p) {
        let pins = h.pins_of(e);
        if pins.len() >= 2 && pins.contains(&q) {
            score += h.edge_weight(e) / (rhat[e] + RATING_EPSILON);
        }
    }
    score
}
