//! Seeded workloads shared by the benchmarks.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tempo_core::generate::{random_instance, random_labeling, random_strong_digraph, random_tree};
use tempo_core::graph::DiGraph;
use tempo_core::{Instance, Labeling};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A strongly connected digraph with about three out-edges per vertex and a
/// random labeling.
pub fn labeled_digraph(n: usize, delta: u32, seed: u64) -> (DiGraph, Labeling) {
    let mut r = rng(seed);
    let p = (3.0 / n as f64).min(1.0);
    let g = random_strong_digraph(&mut r, n, p);
    let lab = random_labeling(&mut r, &g, delta);
    (g, lab)
}

/// A random tree instance with bounds on about half of the pairs.
pub fn tree_instance(n: usize, delta: u32, max_slack: u32, seed: u64) -> Instance {
    let mut r = rng(seed);
    let g = random_tree(&mut r, n);
    random_instance(&mut r, g, delta, 0.5, max_slack)
}
