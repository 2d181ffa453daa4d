//! Hyperedge effective-resistance estimation from a node embedding: one
//! Rayleigh-style ratio per embedding vector and hyperedge, summed over the
//! top-m ratios after a descending sort.

use crate::embedding::Embedding;
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;

/// Estimated effective resistance per hyperedge.
#[derive(Debug, Clone, PartialEq)]
pub struct ResistanceVector {
    values: Vec<f64>,
    m_used: usize,
    rho_used: usize,
}

impl ResistanceVector {
    pub fn new(values: Vec<f64>, m_used: usize, rho_used: usize) -> Self {
        ResistanceVector {
            values,
            m_used,
            rho_used,
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, e: usize) -> f64 {
        self.values[e]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn m_used(&self) -> usize {
        self.m_used
    }

    pub fn rho_used(&self) -> usize {
        self.rho_used
    }
}

/// The nonlinear quadratic form `Q_H(chi) = sum_e w_e max_{u,v in e} (chi_u - chi_v)^2`.
///
/// Zero exactly when `chi` is constant on every hyperedge.
pub fn quadratic_form(h: &Hypergraph, chi: &[f64]) -> f64 {
    assert_eq!(chi.len(), h.num_nodes(), "embedding vector length mismatch");
    let mut q = 0.0;
    for (pins, w) in h.edges() {
        let span = edge_span(chi, pins);
        q += w * span * span;
    }
    q
}

/// Max minus min of `chi` over the pins of one hyperedge.
fn edge_span(chi: &[f64], pins: &[usize]) -> f64 {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &p in pins {
        lo = lo.min(chi[p]);
        hi = hi.max(chi[p]);
    }
    hi - lo
}

/// Resistance ratio of hyperedge `e` under one embedding vector: the squared
/// spread of `chi` over the pins of `e`, normalized by `Q_H(chi)`. The pin
/// pair is the per-vector argmax/argmin, which maximizes the numerator.
pub fn resistance_ratio(h: &Hypergraph, chi: &[f64], e: usize) -> Result<f64> {
    assert_eq!(chi.len(), h.num_nodes(), "embedding vector length mismatch");
    let q = quadratic_form(h, chi);
    if q <= 0.0 {
        return Err(Error::UndefinedRatio);
    }
    let span = edge_span(chi, h.pins_of(e));
    Ok(span * span / q)
}

/// Estimate all hyperedge effective resistances: per hyperedge compute one
/// ratio per embedding vector, sort them descending (ties keep vector
/// order), and sum the top `m`.
///
/// Each vector's quadratic form is computed once; vectors with a vanishing
/// quadratic form contribute zero ratios.
pub fn estimate_resistances(h: &Hypergraph, emb: &Embedding, m: usize) -> Result<ResistanceVector> {
    if m < 1 || m > emb.rho() {
        return Err(Error::invalid(format!(
            "m = {m} outside 1..={} (embedding vectors)",
            emb.rho()
        )));
    }
    assert_eq!(emb.num_nodes(), h.num_nodes(), "embedding/hypergraph mismatch");
    let inv_q: Vec<f64> = emb
        .vectors()
        .iter()
        .map(|chi| {
            let q = quadratic_form(h, chi);
            if q > 0.0 {
                1.0 / q
            } else {
                0.0
            }
        })
        .collect();

    let mut values = Vec::with_capacity(h.num_edges());
    let mut ratios = vec![0.0; emb.rho()];
    for e in 0..h.num_edges() {
        let pins = h.pins_of(e);
        for (i, chi) in emb.vectors().iter().enumerate() {
            let span = edge_span(chi, pins);
            ratios[i] = span * span * inv_q[i];
        }
        // Stable descending sort keeps ties in vector order.
        let mut sorted = ratios.clone();
        sorted.sort_by(|a, b| b.partial_cmp(a).expect("ratios are finite"));
        values.push(sorted[..m].iter().sum());
    }
    Ok(ResistanceVector::new(values, m, emb.rho()))
}
