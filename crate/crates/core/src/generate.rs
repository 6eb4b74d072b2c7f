//! Random and exhaustive instance generators for tests and benchmarks.
//! Vertices are named `v0`, `v1`, ...

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::graph::{static_distances, DiGraph, VertexIx};
use crate::instance::{no_restriction_threshold, Instance, Labeling};

fn named(n: usize) -> DiGraph {
    let mut g = DiGraph::new();
    for i in 0..n {
        g.add_vertex(format!("v{i}")).expect("fresh name");
    }
    g
}

/// Bidirected graph over `n` vertices with the given undirected edges.
pub fn bidirected(n: usize, edges: &[(usize, usize)]) -> DiGraph {
    let mut g = named(n);
    for &(a, b) in edges {
        g.add_bidirected(a, b).expect("simple edge list");
    }
    g
}

/// Uniform random recursive tree, bidirected.
pub fn random_tree<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DiGraph {
    let edges: Vec<_> = (1..n).map(|i| (rng.gen_range(0..i), i)).collect();
    bidirected(n, &edges)
}

/// Each ordered pair is an edge with probability `p`; may be disconnected.
pub fn random_digraph<R: Rng + ?Sized>(rng: &mut R, n: usize, p: f64) -> DiGraph {
    let mut g = named(n);
    for u in 0..n {
        for v in 0..n {
            if u != v && rng.gen_bool(p) {
                g.add_edge(u, v).expect("fresh edge");
            }
        }
    }
    g
}

/// A directed Hamiltonian cycle in random order plus random chords.
pub fn random_strong_digraph<R: Rng + ?Sized>(rng: &mut R, n: usize, p: f64) -> DiGraph {
    let mut g = named(n);
    if n < 2 {
        return g;
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    for i in 0..n {
        let (a, b) = (order[i], order[(i + 1) % n]);
        if g.find_edge(a, b).is_none() {
            g.add_edge(a, b).expect("fresh edge");
        }
    }
    for u in 0..n {
        for v in 0..n {
            if u != v && g.find_edge(u, v).is_none() && rng.gen_bool(p) {
                g.add_edge(u, v).expect("fresh edge");
            }
        }
    }
    g
}

/// An odd bidirected cycle with trees hanging off it, `n` vertices total.
pub fn random_odd_cycle_plus_trees<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DiGraph {
    assert!(n >= 3, "needs at least a triangle");
    let max_half = (n - 1) / 2;
    let c = 2 * rng.gen_range(1..=max_half) + 1;
    let mut edges: Vec<_> = (0..c).map(|i| (i, (i + 1) % c)).collect();
    for v in c..n {
        edges.push((rng.gen_range(0..v), v));
    }
    bidirected(n, &edges)
}

pub fn random_labeling<R: Rng + ?Sized>(rng: &mut R, g: &DiGraph, delta: u32) -> Labeling {
    Labeling::new(delta, (0..g.edge_count()).map(|_| rng.gen_range(0..delta)).collect()).expect("in range")
}

/// Labels both directions of every antiparallel pair alike.
pub fn random_symmetric_labeling<R: Rng + ?Sized>(rng: &mut R, g: &DiGraph, delta: u32) -> Labeling {
    let mut labels = vec![0; g.edge_count()];
    for (a, b) in g.undirected_edges() {
        let t = rng.gen_range(0..delta);
        labels[g.find_edge(a, b).expect("edge")] = t;
        if let Some(r) = g.find_edge(b, a) {
            labels[r] = t;
        }
    }
    Labeling::new(delta, labels).expect("in range")
}

/// Each ordered pair at distance at least 2 gets a bound with probability
/// `density`; the bound is the distance plus a slack drawn from `0..=max_slack`.
/// Pairs whose bound would be no restriction are skipped.
pub fn random_bounds<R: Rng + ?Sized>(
    rng: &mut R,
    g: &DiGraph,
    delta: u32,
    density: f64,
    max_slack: u32,
) -> Vec<((VertexIx, VertexIx), u64)> {
    let dist = static_distances(g).expect("strongly connected");
    let mut out = Vec::new();
    for u in g.vertices() {
        for v in g.vertices() {
            let d = dist.get(u, v);
            if u == v || d < 2 || !rng.gen_bool(density) {
                continue;
            }
            let bound = u64::from(d + rng.gen_range(0..=max_slack));
            if bound < no_restriction_threshold(d, delta) {
                out.push(((u, v), bound));
            }
        }
    }
    out
}

pub fn random_instance<R: Rng + ?Sized>(rng: &mut R, g: DiGraph, delta: u32, density: f64, max_slack: u32) -> Instance {
    let bounds = random_bounds(rng, &g, delta, density, max_slack);
    Instance::new(g, delta, bounds).expect("generated instances are valid")
}

/// `D = d̂` for every ordered pair at distance at least 2.
pub fn exact_bounds(g: &DiGraph) -> Vec<((VertexIx, VertexIx), u64)> {
    let dist = static_distances(g).expect("strongly connected");
    let mut out = Vec::new();
    for u in g.vertices() {
        for v in g.vertices() {
            if u != v && dist.get(u, v) >= 2 {
                out.push(((u, v), u64::from(dist.get(u, v))));
            }
        }
    }
    out
}

fn rooted_code(adj: &[Vec<usize>], v: usize, parent: usize) -> String {
    let mut kids: Vec<String> = adj[v]
        .iter()
        .filter(|&&w| w != parent)
        .map(|&w| rooted_code(adj, w, v))
        .collect();
    kids.sort_unstable();
    format!("({})", kids.concat())
}

fn centers(adj: &[Vec<usize>]) -> Vec<usize> {
    let n = adj.len();
    let mut degree: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut layer: Vec<usize> = (0..n).filter(|&v| degree[v] <= 1).collect();
    let mut left = n;
    while left > 2 {
        left -= layer.len();
        let mut next = Vec::new();
        for &v in &layer {
            for &w in &adj[v] {
                degree[w] -= 1;
                if degree[w] == 1 {
                    next.push(w);
                }
            }
        }
        layer = next;
    }
    layer
}

/// Canonical form of an unrooted tree given by adjacency lists.
fn tree_code(adj: &[Vec<usize>]) -> String {
    centers(adj)
        .into_iter()
        .map(|c| rooted_code(adj, c, usize::MAX))
        .min()
        .unwrap_or_default()
}

/// Every tree on `n` vertices up to isomorphism, bidirected.
pub fn nonisomorphic_trees(n: usize) -> Vec<DiGraph> {
    if n == 0 {
        return Vec::new();
    }
    let mut level: Vec<Vec<(usize, usize)>> = vec![Vec::new()];
    for size in 2..=n {
        let mut seen = BTreeSet::new();
        let mut next = Vec::new();
        for edges in &level {
            for attach in 0..size - 1 {
                let mut grown = edges.clone();
                grown.push((attach, size - 1));
                let mut adj = vec![Vec::new(); size];
                for &(a, b) in &grown {
                    adj[a].push(b);
                    adj[b].push(a);
                }
                if seen.insert(tree_code(&adj)) {
                    next.push(grown);
                }
            }
        }
        level = next;
    }
    level.iter().map(|edges| bidirected(n, edges)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn tree_counts_match_the_known_sequence() {
        let counts: Vec<usize> = (1..=9).map(|n| nonisomorphic_trees(n).len()).collect();
        assert_eq!(counts, [1, 1, 1, 2, 3, 6, 11, 23, 47]);
    }

    #[test]
    fn generated_graphs_have_the_promised_shape() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for n in 3..12 {
            let t = random_tree(&mut rng, n);
            assert_eq!(t.edge_count(), 2 * (n - 1));
            assert!(t.is_strongly_connected());
            let s = random_strong_digraph(&mut rng, n, 0.2);
            assert!(s.is_strongly_connected());
            let c = random_odd_cycle_plus_trees(&mut rng, n);
            assert_eq!(c.edge_count(), 2 * n);
        }
    }
}
