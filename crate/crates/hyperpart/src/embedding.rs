//! Krylov-subspace node embeddings over a hypergraph expansion.
//!
//! Each embedding vector starts from an independent seeded random signal on
//! the expanded graph and is low-pass filtered by repeated application of
//! the lazy normalized adjacency operator `(I + A)/2`. Most vectors combine
//! snapshots at geometrically spaced depths with square-root-of-depth
//! coefficients, which shapes the filter toward an inverse-square-root
//! Laplacian response: squared entry differences of the resulting vectors
//! sketch effective resistances across all scales. One slot holds a plain
//! deep iterate instead, which self-purifies toward the smoothest
//! nontrivial mode and pins down global bottlenecks regardless of how much
//! of that mode the random signals happened to carry. Leaving the
//! symmetrically normalized coordinates multiplies by `D^{-1/2}`. The
//! vectors are orthogonalized behind the constant vector, the constant-like
//! leading basis vector is discarded, and the auxiliary star-vertex entries
//! are stripped off.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::expansion::{self, NormalizedAdjacencyOp};
use crate::graph::SparseGraph;
use crate::hypergraph::Hypergraph;

/// Default number of embedding vectors.
pub const DEFAULT_RHO: usize = 4;
/// Default drop tolerance for Gram-Schmidt residuals.
pub const DEFAULT_DROP_TOL: f64 = 1e-10;
/// Default cardinality threshold for the hybrid expansion.
pub const DEFAULT_HYBRID_THRESHOLD: usize = 3;
/// Snapshot levels of the diffusion filter; depths are `4^j` for
/// `j < SMOOTHING_LEVELS`, so the deepest combined smoothing is 256 steps.
pub const SMOOTHING_LEVELS: usize = 5;
/// Iteration depth of the dedicated smoothest-mode vector.
pub const DEEP_DEPTH: usize = 1024;

/// Which simple-graph substrate carries the Krylov iteration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExpansionKind {
    Star,
    Clique,
    Hybrid,
}

/// Per-node embedding vectors produced by [`embed`].
#[derive(Debug, Clone)]
pub struct Embedding {
    vectors: Vec<Vec<f64>>,
    seed: u64,
}

impl Embedding {
    pub fn vectors(&self) -> &[Vec<f64>] {
        &self.vectors
    }

    /// Number of embedding vectors actually produced (<= requested rho).
    pub fn rho(&self) -> usize {
        self.vectors.len()
    }

    pub fn num_nodes(&self) -> usize {
        self.vectors.first().map_or(0, Vec::len)
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

/// Deterministic Rademacher vector (entries +-1), mean-centered so the sum
/// of entries is zero.
pub fn random_start_vector(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x: Vec<f64> = (0..n)
        .map(|_| if rng.next_u32() & 1 == 1 { 1.0 } else { -1.0 })
        .collect();
    let mean = x.iter().sum::<f64>() / n as f64;
    for v in &mut x {
        *v -= mean;
    }
    x
}

/// The Krylov sequence `[x, Ax, A^2 x, ..., A^rho x]`.
pub fn build_krylov(op: &NormalizedAdjacencyOp, x: &[f64], rho: usize) -> Result<Vec<Vec<f64>>> {
    if rho < 1 {
        return Err(Error::invalid("rho must be at least 1"));
    }
    if x.iter().all(|&v| v == 0.0) {
        return Err(Error::DegenerateInput("zero start vector".into()));
    }
    let mut out = Vec::with_capacity(rho + 1);
    out.push(x.to_vec());
    for _ in 0..rho {
        let next = op.apply(out.last().expect("nonempty"));
        out.push(next);
    }
    Ok(out)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Modified Gram-Schmidt with one reorthogonalization pass. Vectors whose
/// residual norm falls below `drop_tol` times their original norm are
/// dropped; an empty result is a degenerate subspace.
pub fn orthogonalize(vectors: &[Vec<f64>], drop_tol: f64) -> Result<Vec<Vec<f64>>> {
    if vectors.is_empty() {
        return Err(Error::DegenerateSubspace("no vectors to orthogonalize".into()));
    }
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for v in vectors {
        let original = norm(v);
        if original == 0.0 {
            continue;
        }
        let mut u = v.clone();
        for _ in 0..2 {
            for b in &basis {
                let c = dot(&u, b);
                for (ui, bi) in u.iter_mut().zip(b) {
                    *ui -= c * bi;
                }
            }
        }
        let residual = norm(&u);
        if residual < drop_tol * original {
            continue;
        }
        for ui in &mut u {
            *ui /= residual;
        }
        basis.push(u);
    }
    if basis.is_empty() {
        return Err(Error::DegenerateSubspace(
            "all vectors dropped during orthogonalization".into(),
        ));
    }
    Ok(basis)
}

fn lazy_step(op: &NormalizedAdjacencyOp, v: &mut [f64]) {
    let av = op.apply(v);
    for (vi, ai) in v.iter_mut().zip(&av) {
        *vi = 0.5 * (*vi + ai);
    }
}

/// One diffusion-filtered signal: snapshots of the lazy walk at depths
/// `4^j`, combined with coefficients `2^j` and rescaled by the inverse
/// square-root vertex degrees.
fn sketch_signal(
    op: &NormalizedAdjacencyOp,
    inv_sqrt_deg: &[f64],
    start: &[f64],
    levels: usize,
) -> Vec<f64> {
    let dim = start.len();
    let mut v = start.to_vec();
    let mut combined = vec![0.0; dim];
    let mut done = 0usize;
    for level in 0..levels {
        let depth = 1usize << (2 * level);
        while done < depth {
            lazy_step(op, &mut v);
            done += 1;
        }
        let coeff = (1u64 << level) as f64;
        for (ci, vi) in combined.iter_mut().zip(&v) {
            *ci += coeff * vi;
        }
    }
    for (ci, s) in combined.iter_mut().zip(inv_sqrt_deg) {
        *ci *= s;
    }
    combined
}

/// A plain deep iterate of the lazy walk; relative to any shallower content
/// it converges onto the smoothest surviving mode.
fn deep_signal(op: &NormalizedAdjacencyOp, inv_sqrt_deg: &[f64], start: &[f64]) -> Vec<f64> {
    let mut v = start.to_vec();
    for _ in 0..DEEP_DEPTH {
        lazy_step(op, &mut v);
    }
    for (vi, s) in v.iter_mut().zip(inv_sqrt_deg) {
        *vi *= s;
    }
    v
}

/// Embed the hypergraph nodes via the star expansion with default settings.
pub fn embed(h: &Hypergraph, rho: usize, seed: u64) -> Result<Embedding> {
    embed_with(
        h,
        rho,
        seed,
        ExpansionKind::Star,
        DEFAULT_HYBRID_THRESHOLD,
        DEFAULT_DROP_TOL,
    )
}

fn derived_seed(seed: u64, index: u64) -> u64 {
    seed.wrapping_add(index.wrapping_mul(0x9E3779B97F4A7C15))
}

/// Full-dimension orthonormal embedding basis over the expanded graph,
/// before star-vertex stripping: the constant direction followed by the
/// filtered signals. The caller discards the leading constant-like vector.
fn embedding_basis(
    graph: &SparseGraph,
    rho: usize,
    seed: u64,
    drop_tol: f64,
) -> Result<Vec<Vec<f64>>> {
    let op = NormalizedAdjacencyOp::new(graph);
    let dim = graph.num_vertices();
    let inv_sqrt_deg: Vec<f64> = (0..dim)
        .map(|u| {
            let d = graph.degree(u);
            if d > 0.0 {
                1.0 / d.sqrt()
            } else {
                0.0
            }
        })
        .collect();
    let constant = vec![1.0; dim];
    let mut stacked = Vec::with_capacity(rho + 1);
    stacked.push(constant);
    for i in 0..rho {
        let mut start = random_start_vector(dim, derived_seed(seed, i as u64));
        let mut attempt = 0u64;
        while start.iter().all(|&v| v == 0.0) {
            attempt += 1;
            if attempt > 8 {
                return Err(Error::DegenerateInput(
                    "start vector centers to zero for every derived seed".into(),
                ));
            }
            start = random_start_vector(dim, derived_seed(seed, i as u64 ^ (attempt << 32)));
        }
        // The first signal slot (when there is room for more than one)
        // carries the deep smoothest-mode iterate.
        let signal = if i == 0 && rho >= 2 {
            deep_signal(&op, &inv_sqrt_deg, &start)
        } else {
            sketch_signal(&op, &inv_sqrt_deg, &start, SMOOTHING_LEVELS)
        };
        stacked.push(signal);
    }
    orthogonalize(&stacked, drop_tol)
}

/// Embed with an explicit expansion substrate.
///
/// One independent random signal feeds each of the `rho` embedding vectors;
/// a retry on derived seeds covers tiny inputs whose signals collapse. The
/// whole procedure is deterministic per seed.
pub fn embed_with(
    h: &Hypergraph,
    rho: usize,
    seed: u64,
    kind: ExpansionKind,
    hybrid_threshold: usize,
    drop_tol: f64,
) -> Result<Embedding> {
    if rho < 1 {
        return Err(Error::invalid("rho must be at least 1"));
    }
    if h.num_nodes() < 2 {
        return Err(Error::invalid("embedding needs at least 2 nodes"));
    }
    if h.num_edges() == 0 {
        return Err(Error::DegenerateSubspace("hypergraph has no hyperedges".into()));
    }
    let graph: SparseGraph = match kind {
        ExpansionKind::Star => expansion::star_expand(h).graph,
        ExpansionKind::Clique => expansion::clique_expand(h),
        ExpansionKind::Hybrid => expansion::hybrid_expand(h, hybrid_threshold)?.graph,
    };

    let mut last_err = None;
    for round in 0..8u64 {
        let round_seed = if round == 0 {
            seed
        } else {
            derived_seed(seed, round << 48)
        };
        match embedding_basis(&graph, rho, round_seed, drop_tol) {
            Ok(basis) => {
                // Drop the leading constant-like vector, strip star entries.
                let mut vectors = Vec::new();
                for b in basis.into_iter().skip(1).take(rho) {
                    let node_part: Vec<f64> = b[..h.num_nodes()].to_vec();
                    if norm(&node_part) > drop_tol {
                        vectors.push(node_part);
                    }
                }
                if !vectors.is_empty() {
                    debug_assert!(vectors.iter().flatten().all(|v| v.is_finite()));
                    return Ok(Embedding { vectors, seed });
                }
                last_err = Some(Error::DegenerateSubspace(
                    "no embedding vectors survive star-vertex stripping".into(),
                ));
            }
            Err(e @ (Error::DegenerateSubspace(_) | Error::DegenerateInput(_))) => {
                last_err = Some(e);
            }
            Err(e) => return Err(e),
        }
    }
    Err(last_err.unwrap_or(Error::DegenerateSubspace("embedding collapsed".into())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn start_vector_is_centered_and_seeded() {
        let x = random_start_vector(4, 11);
        assert_eq!(x.len(), 4);
        assert!(x.iter().sum::<f64>().abs() <= 1e-12 * 4.0);
        assert_eq!(x, random_start_vector(4, 11));
        let y = random_start_vector(4, 12);
        assert_ne!(x, y);
    }

    #[test]
    fn start_vector_of_one_entry_is_zero() {
        let x = random_start_vector(1, 5);
        assert_eq!(x, vec![0.0]);
        // build_krylov refuses that vector.
        let g = SparseGraph::from_edges(2, &[(0, 1, 1.0)]).unwrap();
        let op = NormalizedAdjacencyOp::new(&g);
        assert!(matches!(
            build_krylov(&op, &[0.0, 0.0], 1),
            Err(Error::DegenerateInput(_))
        ));
    }

    #[test]
    fn krylov_on_k2_alternates() {
        let g = SparseGraph::from_edges(2, &[(0, 1, 1.0)]).unwrap();
        let op = NormalizedAdjacencyOp::new(&g);
        let seq = build_krylov(&op, &[1.0, -1.0], 2).unwrap();
        assert_eq!(seq.len(), 3);
        assert_eq!(seq[0], vec![1.0, -1.0]);
        assert_eq!(seq[1], vec![-1.0, 1.0]);
        assert_eq!(seq[2], vec![1.0, -1.0]);

        let short = build_krylov(&op, &[1.0, -1.0], 1).unwrap();
        assert_eq!(short.len(), 2);
    }

    #[test]
    fn krylov_matches_dense_power_oracle() {
        let g = SparseGraph::from_edges(
            5,
            &[(0, 1, 1.0), (1, 2, 2.0), (2, 3, 0.5), (3, 4, 1.5), (4, 0, 1.0), (1, 3, 1.0)],
        )
        .unwrap();
        let op = NormalizedAdjacencyOp::new(&g);
        let n = 5;
        // Dense D^{-1/2} A D^{-1/2}.
        let mut dense = vec![vec![0.0; n]; n];
        for u in 0..n {
            for (v, w) in g.neighbors_of(u) {
                dense[u][v] = w / (g.degree(u) * g.degree(v)).sqrt();
            }
        }
        let x = vec![0.3, -1.2, 0.7, 0.1, -0.5];
        let seq = build_krylov(&op, &x, 4).unwrap();
        let mut expect = x.clone();
        for k in 1..=4 {
            let mut next = vec![0.0; n];
            for (u, row) in dense.iter().enumerate() {
                next[u] = row.iter().zip(&expect).map(|(a, b)| a * b).sum();
            }
            expect = next;
            for (a, b) in seq[k].iter().zip(&expect) {
                assert!((a - b).abs() <= 1e-10 * b.abs().max(1.0));
            }
        }
    }

    #[test]
    fn orthogonalize_examples() {
        let basis = orthogonalize(&[vec![1.0, 0.0], vec![1.0, 1.0]], 1e-10).unwrap();
        assert_eq!(basis.len(), 2);
        assert!(dot(&basis[0], &basis[1]).abs() < 1e-12);

        let dropped = orthogonalize(&[vec![1.0, 0.0], vec![1.0, 0.0]], 1e-10).unwrap();
        assert_eq!(dropped.len(), 1);

        assert!(matches!(
            orthogonalize(&[vec![0.0, 0.0]], 1e-10),
            Err(Error::DegenerateSubspace(_))
        ));
    }

    #[test]
    fn orthogonalize_gram_matrix_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let vs: Vec<Vec<f64>> = (0..5)
            .map(|_| {
                (0..8)
                    .map(|_| (rng.next_u32() as f64) / u32::MAX as f64 - 0.5)
                    .collect()
            })
            .collect();
        let basis = orthogonalize(&vs, 1e-10).unwrap();
        for (i, a) in basis.iter().enumerate() {
            for (j, b) in basis.iter().enumerate() {
                let g = dot(a, b);
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((g - expect).abs() < 1e-8, "gram[{i}][{j}] = {g}");
            }
        }
    }

    #[test]
    fn embed_single_edge_separates_endpoints() {
        let h = Hypergraph::unit(2, vec![vec![0, 1]]).unwrap();
        // The lazy filter annihilates the oscillatory mode and the constant
        // direction is deflated, so any surviving vector is the
        // antisymmetric one: endpoint entries take opposite signs.
        for seed in 0..16 {
            let emb = embed(&h, 1, seed).unwrap();
            assert_eq!(emb.rho(), 1);
            let v = &emb.vectors()[0];
            assert_eq!(v.len(), 2);
            assert!(
                v[0] * v[1] < 0.0,
                "seed {seed}: endpoints should take opposite signs, got {v:?}"
            );
        }
    }

    #[test]
    fn embed_is_deterministic() {
        let h = Hypergraph::unit(5, vec![vec![0, 1, 2], vec![2, 3], vec![3, 4], vec![4, 0]])
            .unwrap();
        let a = embed(&h, 3, 42).unwrap();
        let b = embed(&h, 3, 42).unwrap();
        assert_eq!(a.vectors(), b.vectors());
        let c = embed(&h, 3, 43).unwrap();
        assert_ne!(a.vectors(), c.vectors());
    }

    #[test]
    fn embed_disconnected_has_shape_and_finite_values() {
        let h = Hypergraph::unit(6, vec![vec![0, 1, 2], vec![3, 4], vec![4, 5]]).unwrap();
        let emb = embed(&h, 3, 9).unwrap();
        assert!(emb.rho() >= 1 && emb.rho() <= 3);
        for v in emb.vectors() {
            assert_eq!(v.len(), 6);
            assert!(v.iter().all(|x| x.is_finite()));
        }
    }

    #[test]
    fn embed_rejects_degenerate_inputs() {
        let no_edges = Hypergraph::unit(3, vec![]).unwrap();
        assert!(matches!(
            embed(&no_edges, 2, 0),
            Err(Error::DegenerateSubspace(_))
        ));
        let h = Hypergraph::unit(2, vec![vec![0, 1]]).unwrap();
        assert!(embed(&h, 0, 0).is_err());
    }

    #[test]
    fn embed_prestrip_basis_is_orthonormal() {
        let h = Hypergraph::unit(6, vec![vec![0, 1, 2], vec![2, 3, 4], vec![4, 5, 0]]).unwrap();
        let se = expansion::star_expand(&h);
        let basis = embedding_basis(&se.graph, 4, 17, DEFAULT_DROP_TOL).unwrap();
        for (i, a) in basis.iter().enumerate() {
            assert!((norm(a) - 1.0).abs() <= 1e-10);
            for b in basis.iter().skip(i + 1) {
                assert!(dot(a, b).abs() <= 1e-8);
            }
        }
        // The first basis vector is the normalized constant direction.
        let dim = se.graph.num_vertices();
        let expect = 1.0 / (dim as f64).sqrt();
        for &x in &basis[0] {
            assert!((x - expect).abs() <= 1e-12);
        }
    }
}
