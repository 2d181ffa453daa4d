use hyperpart::coarsening::{coarsen, CoarsenParams};
use hyperpart::hypergraph::Hypergraph;
use hyperpart::metrics;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn planted(supers: usize, micros_per: usize, seed: u64) -> Hypergraph {
    let mut rng = StdRng::seed_from_u64(seed);
    let micro = 5usize;
    let micros = supers * micros_per;
    let n = micros * micro;
    let mut edges = Vec::new();
    let mut weights = Vec::new();
    for m in 0..micros {
        let base = m * micro;
        edges.push((0..micro).map(|v| base + v).collect::<Vec<_>>());
        weights.push(3.0);
    }
    for s in 0..supers {
        let lo = s * micros_per;
        for m_idx in 0..micros_per {
            let m = lo + m_idx;
            let mut sibling = lo + rng.random_range(0..micros_per);
            if sibling == m { sibling = lo + (m_idx + 1) % micros_per; }
            let mut pins = Vec::new();
            for _ in 0..2 { pins.push(m * micro + rng.random_range(0..micro)); }
            for _ in 0..3 { pins.push(sibling * micro + rng.random_range(0..micro)); }
            pins.sort_unstable();
            pins.dedup();
            if pins.len() >= 2 { edges.push(pins); weights.push(1.0); }
        }
    }
    for s in 1..supers {
        let parent = rng.random_range(0..s);
        let u = (parent * micros_per + rng.random_range(0..micros_per)) * micro + rng.random_range(0..micro);
        let v = (s * micros_per + rng.random_range(0..micros_per)) * micro + rng.random_range(0..micro);
        edges.push(vec![u, v]); weights.push(1.0);
    }
    Hypergraph::new(n, edges, weights, vec![1.0; n]).unwrap()
}

fn main() {
    let h = planted(4, 25, 7000);
    let params = CoarsenParams { seed: 0, levels: 8, reduction_target: 0.75, ..CoarsenParams::default() };
    let hier = coarsen(&h, &params).unwrap();
    for (i, l) in hier.levels().iter().enumerate() {
        println!("level {i}: {} -> {}", l.cluster_map.num_nodes(), l.hypergraph.num_nodes());
    }
    let map = hier.composite_map();
    let clusters = map.clusters();
    let mut size_hist = std::collections::BTreeMap::new();
    for c in &clusters { *size_hist.entry(c.len()).or_insert(0usize) += 1; }
    println!("cluster size histogram: {size_hist:?}");
    // who are the singles: same-micro spread
    let singles: Vec<usize> = clusters.iter().filter(|c| c.len() == 1).map(|c| c[0]).collect();
    let mut micro_single_count = std::collections::BTreeMap::new();
    for &v in &singles { *micro_single_count.entry(v / 5).or_insert(0usize) += 1; }
    let mut dist = std::collections::BTreeMap::new();
    for (_, c) in micro_single_count { *dist.entry(c).or_insert(0usize) += 1; }
    println!("micros by their singleton count: {dist:?}");
    println!("phi = {:.4}", metrics::avg_conductance(&h, &map).unwrap());
}
