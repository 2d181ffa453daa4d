use hyperpart::coarsening::{coarsen, CoarsenParams};
use hyperpart::hypergraph::{Hypergraph, NodeSet};
use hyperpart::localflow::{neighborhood, refine_seed_traced, select_seeds};
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
        for _ in 0..2 * micros_per {
            let mut pins = Vec::new();
            for _ in 0..5 {
                let m = lo + rng.random_range(0..micros_per);
                pins.push(m * micro + rng.random_range(0..micro));
            }
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
    let map = hier.composite_map();
    let seeds = select_seeds(&hier, usize::MAX);
    println!("{} seeds", seeds.len());
    let deg = h.degrees();
    for seed in seeds.iter().take(5) {
        let x = seed.members()[0];
        // its micro-mates and their current cluster sizes
        let micro_base = (x / 5) * 5;
        let mates: Vec<usize> = (micro_base..micro_base + 5).filter(|&v| v != x).collect();
        let cluster_sizes: Vec<usize> = mates.iter().map(|&m| {
            let c = map.cluster_of(m);
            (0..h.num_nodes()).filter(|&v| map.cluster_of(v) == c).count()
        }).collect();
        let s_full = NodeSet::new(h.num_nodes(), (micro_base..micro_base + 5)).unwrap();
        let hlc_x = metrics::local_conductance(&h, seed, seed, 0.05);
        let hlc_micro = metrics::local_conductance(&h, &s_full, seed, 0.05);
        let vol_x = deg[x];
        let vol_mates: f64 = mates.iter().map(|&m| deg[m]).sum();
        println!("seed {x}: vol={vol_x:.2} mates vol={vol_mates:.2} matecl={cluster_sizes:?} HLC(x)={:?} HLC(micro)={:?}",
            hlc_x.map(|v| (v * 1000.0).round() / 1000.0).ok(),
            hlc_micro.map(|v| (v * 1000.0).round() / 1000.0).ok());
        let out = refine_seed_traced(&h, seed, 0.05, 1e-3, 3).unwrap();
        println!("   refine: |S|={} trace={:?}", out.set.len(),
            out.alpha_trace.iter().map(|v| (v * 1000.0).round() / 1000.0).collect::<Vec<_>>());
        let nb = neighborhood(&h, seed);
        println!("   neighborhood size {}", nb.len());
    }
}
