//! Polynomial deciders and constructors, plus the dispatcher that tries them
//! before falling back to search.

use std::collections::VecDeque;

use thiserror::Error;

use crate::certificate::{Certificate, Refutation, Route};
use crate::graph::{bipartition, classify, path_edges, shortest_path, EdgeIx, RootedTree, TopologyClass, VertexIx};
use crate::instance::{slack, Instance, Labeling};
use crate::search::{solve_exact, SearchConfig};
use crate::temporal::is_valid;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("period must be 1")]
    NotDeltaOne,
    #[error("period must be 2")]
    NotDeltaTwo,
    #[error("graph is not a bidirected tree")]
    NotBidirectedTree,
    #[error("graph is not bipartite")]
    NotBipartite,
    #[error("graph is not a bidirected odd cycle with attached trees")]
    NotOddCyclePlusTrees,
    #[error("pair ({0}, {1}) is not bounded by its distance")]
    NotExact(String, String),
    #[error("no-wait propagation met conflicting labels on edge {0}")]
    PropagationConflict(String),
}

/// Result of a branching-pair test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NecessityVerdict {
    Pass,
    Fail {
        u: VertexIx,
        v: VertexIx,
        distance: u32,
    },
    /// The no-wait requirements of the zero-slack path from `u` to `v`
    /// contradict those of the paths before it.
    Conflict {
        u: VertexIx,
        v: VertexIx,
    },
}

impl NecessityVerdict {
    pub fn passed(&self) -> bool {
        matches!(self, NecessityVerdict::Pass)
    }

    fn refutation(self) -> Option<Refutation> {
        match self {
            NecessityVerdict::Pass => None,
            NecessityVerdict::Fail { u, v, distance } => Some(Refutation::BranchingPair { u, v, distance }),
            NecessityVerdict::Conflict { u, v } => Some(Refutation::NoWaitConflict { u, v }),
        }
    }
}

pub fn solve_delta1(inst: &Instance) -> Result<Labeling, PolyError> {
    if inst.delta() != 1 {
        return Err(PolyError::NotDeltaOne);
    }
    Ok(Labeling::constant(1, inst.graph().edge_count(), 0))
}

fn tree_root(inst: &Instance) -> Result<VertexIx, PolyError> {
    match classify(inst.graph()) {
        TopologyClass::BidirectedTree { root } => Ok(root),
        _ => Err(PolyError::NotBidirectedTree),
    }
}

/// Labels edges away from `root` with the depth of their tail and edges
/// toward it with the negated depth of their tail, modulo Δ.
pub fn root_labeling(inst: &Instance, root: VertexIx) -> Result<Labeling, PolyError> {
    tree_root(inst)?;
    let g = inst.graph();
    let delta = inst.delta();
    let tree = RootedTree::new(g, root);
    let labels = g
        .edges()
        .iter()
        .map(|&(a, b)| {
            let da = tree.depth(a) % delta;
            if tree.parent(b) == Some(a) {
                da
            } else {
                (delta - da) % delta
            }
        })
        .collect();
    Ok(Labeling::new(delta, labels).expect("labels reduced modulo the period"))
}

/// Whether every instance with period `delta` and minimum slack `k` on this
/// topology is feasible. `k = None` means there are no bounds at all.
pub fn always_feasible_region(delta: u32, k: Option<u32>, topo: &TopologyClass) -> bool {
    if delta == 1 || k.is_none() {
        return true;
    }
    if !matches!(topo, TopologyClass::BidirectedTree { .. }) {
        return false;
    }
    let k = k.unwrap_or(0);
    delta == 2 || (!delta.is_multiple_of(2) && delta <= k + 1) || (delta.is_multiple_of(2) && delta <= k + 2)
}

/// Period 2 on a bipartite digraph: 0 on edges leaving the first side, 1 on
/// edges entering it. No journey ever waits.
pub fn bipartite_labeling(inst: &Instance) -> Result<Labeling, PolyError> {
    if inst.delta() != 2 {
        return Err(PolyError::NotDeltaTwo);
    }
    let g = inst.graph();
    let (left, _) = bipartition(g).ok_or(PolyError::NotBipartite)?;
    let mut on_left = vec![false; g.vertex_count()];
    for v in left {
        on_left[v] = true;
    }
    let labels = g.edges().iter().map(|&(a, _)| if on_left[a] { 0 } else { 1 }).collect();
    Ok(Labeling::new(2, labels).expect("labels are 0 or 1"))
}

/// Pairs that survive canonicalization are exactly those with `d̂ >= 2`
/// when `Δ >= 2`; all of them must be bounded by their distance.
fn check_all_exact(inst: &Instance) -> Result<(), PolyError> {
    if inst.delta() == 1 {
        return Ok(());
    }
    let g = inst.graph();
    for u in g.vertices_by_name() {
        for v in g.vertices_by_name() {
            let d = inst.distance(u, v);
            if d >= 2 && inst.bound(u, v) != Some(d) {
                return Err(PolyError::NotExact(g.name(u).into(), g.name(v).into()));
            }
        }
    }
    Ok(())
}

fn doubled_distance_fails(inst: &Instance, u: VertexIx, v: VertexIx) -> bool {
    (2 * u64::from(inst.distance(u, v))) % u64::from(inst.delta()) != 0
}

/// Pairs of vertices in id order, `u < v`.
fn ordered_pairs(ids: &[VertexIx]) -> impl Iterator<Item = (VertexIx, VertexIx)> + '_ {
    ids.iter()
        .enumerate()
        .flat_map(move |(i, &u)| ids[i + 1..].iter().map(move |&v| (u, v)))
}

/// Decides a bidirected tree whose every pair must be realized without
/// waiting: feasible iff every two vertices of degree at least 3 sit at a
/// distance `d` with `2d ≡ 0 (mod Δ)`.
pub fn exact_tree_decide(inst: &Instance) -> Result<NecessityVerdict, PolyError> {
    tree_root(inst)?;
    check_all_exact(inst)?;
    let g = inst.graph();
    let branching: Vec<VertexIx> = g
        .vertices_by_name()
        .into_iter()
        .filter(|&v| g.neighbors(v).len() >= 3)
        .collect();
    for (u, v) in ordered_pairs(&branching) {
        if doubled_distance_fails(inst, u, v) {
            return Ok(NecessityVerdict::Fail {
                u,
                v,
                distance: inst.distance(u, v),
            });
        }
    }
    Ok(NecessityVerdict::Pass)
}

/// Builds the no-wait labeling for an instance accepted by
/// [`exact_tree_decide`]: whenever `x, y, z` are distinct and consecutive,
/// `λ(y,z) = λ(x,y) + 1`. Each connected set of such constraints starts at 0
/// on its lowest-index edge.
pub fn exact_tree_construct(inst: &Instance) -> Result<Labeling, PolyError> {
    if let NecessityVerdict::Fail { u, v, .. } = exact_tree_decide(inst)? {
        let g = inst.graph();
        return Err(PolyError::NotExact(g.name(u).into(), g.name(v).into()));
    }
    let g = inst.graph();
    let delta = inst.delta();
    // Successor edges carry +1, predecessor edges -1.
    let mut links: Vec<Vec<(EdgeIx, u32)>> = vec![Vec::new(); g.edge_count()];
    for (e, &(x, y)) in g.edges().iter().enumerate() {
        for &f in g.out_edges(y) {
            if g.edge(f).1 != x {
                links[e].push((f, 1 % delta));
                links[f].push((e, (delta - 1) % delta));
            }
        }
    }
    let mut labels: Vec<Option<u32>> = vec![None; g.edge_count()];
    for start in 0..g.edge_count() {
        if labels[start].is_some() {
            continue;
        }
        labels[start] = Some(0);
        let mut queue = VecDeque::from([start]);
        while let Some(e) = queue.pop_front() {
            let le = labels[e].expect("queued edges are labeled");
            for &(f, step) in &links[e] {
                let want = (le + step) % delta;
                match labels[f] {
                    None => {
                        labels[f] = Some(want);
                        queue.push_back(f);
                    }
                    Some(l) if l != want => {
                        debug_assert!(false, "no-wait propagation conflict after a passing decision");
                        return Err(PolyError::PropagationConflict(g.edge_label(f)));
                    }
                    Some(_) => {}
                }
            }
        }
    }
    let lab = Labeling::new(delta, labels.into_iter().map(|l| l.unwrap_or(0)).collect()).expect("in range");
    Ok(lab)
}

/// Edge set closed under shared edges among zero-slack paths.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZeroSlackComponent {
    /// Sorted edge indices.
    pub edges: Vec<EdgeIx>,
    /// Bounded pairs whose paths make up the component.
    pub paths: Vec<(VertexIx, VertexIx)>,
    /// Vertices with more than one in-edge, more than one out-edge and at
    /// least three neighbours inside the component, in id order.
    pub branching: Vec<VertexIx>,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut x = x;
        while self.0[x] != r {
            let next = self.0[x];
            self.0[x] = r;
            x = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Components of the zero-slack paths on a bidirected tree, ordered by
/// their smallest edge index.
pub fn zero_slack_components(inst: &Instance) -> Result<Vec<ZeroSlackComponent>, PolyError> {
    let root = tree_root(inst)?;
    let g = inst.graph();
    let tree = RootedTree::new(g, root);
    let m = g.edge_count();
    let mut uf = UnionFind((0..m).collect());
    let mut used = vec![false; m];
    let mut paths = Vec::new();
    for (&(u, v), &d) in inst.bounds() {
        if d != inst.distance(u, v) {
            continue;
        }
        let edges = path_edges(g, &tree.path(u, v));
        for w in edges.windows(2) {
            uf.union(w[0], w[1]);
        }
        for &e in &edges {
            used[e] = true;
        }
        paths.push(((u, v), edges[0]));
    }
    let mut roots: Vec<usize> = (0..m).filter(|&e| used[e]).map(|e| uf.find(e)).collect();
    roots.sort_unstable();
    roots.dedup();
    let mut out = Vec::new();
    for r in roots {
        let edges: Vec<EdgeIx> = (0..m).filter(|&e| used[e] && uf.find(e) == r).collect();
        let member_paths = paths
            .iter()
            .filter(|&&(_, e)| uf.find(e) == r)
            .map(|&(p, _)| p)
            .collect();
        let n = g.vertex_count();
        let (mut outd, mut ind) = (vec![0usize; n], vec![0usize; n]);
        let mut nbrs: Vec<Vec<VertexIx>> = vec![Vec::new(); n];
        for &e in &edges {
            let (a, b) = g.edge(e);
            outd[a] += 1;
            ind[b] += 1;
            nbrs[a].push(b);
            nbrs[b].push(a);
        }
        let branching = g
            .vertices_by_name()
            .into_iter()
            .filter(|&v| {
                nbrs[v].sort_unstable();
                nbrs[v].dedup();
                outd[v] > 1 && ind[v] > 1 && nbrs[v].len() >= 3
            })
            .collect();
        out.push(ZeroSlackComponent {
            edges,
            paths: member_paths,
            branching,
        });
    }
    Ok(out)
}

/// Union-find over edges that also tracks label differences mod Δ.
struct Potentials {
    parent: Vec<usize>,
    /// Label of an edge minus the label of its parent.
    offset: Vec<u32>,
    delta: u32,
}

impl Potentials {
    fn new(m: usize, delta: u32) -> Self {
        Self {
            parent: (0..m).collect(),
            offset: vec![0; m],
            delta,
        }
    }

    fn find(&mut self, x: usize) -> (usize, u32) {
        let p = self.parent[x];
        if p == x {
            return (x, 0);
        }
        let (root, up) = self.find(p);
        self.parent[x] = root;
        self.offset[x] = (self.offset[x] + up) % self.delta;
        (root, self.offset[x])
    }

    /// Records `λ(f) = λ(e) + 1`; false if that contradicts earlier records.
    fn link(&mut self, e: usize, f: usize) -> bool {
        let ((re, oe), (rf, of)) = (self.find(e), self.find(f));
        let want = (oe + 1) % self.delta;
        if re == rf {
            return of == want;
        }
        self.parent[rf] = re;
        self.offset[rf] = (want + self.delta - of) % self.delta;
        true
    }
}

/// Refutes a bidirected tree instance whose zero-slack paths cannot all be
/// travelled without waiting. Such a path forces `λ(y,z) = λ(x,y) + 1` at
/// each interior vertex; the check fails when these equations have no
/// common solution mod Δ. Passing says nothing about feasibility.
pub fn necessary_condition(inst: &Instance) -> Result<NecessityVerdict, PolyError> {
    let root = tree_root(inst)?;
    let g = inst.graph();
    let tree = RootedTree::new(g, root);
    let mut pot = Potentials::new(g.edge_count(), inst.delta());
    for (&(u, v), &d) in inst.bounds() {
        if d != inst.distance(u, v) {
            continue;
        }
        let edges = path_edges(g, &tree.path(u, v));
        if !edges.windows(2).all(|w| pot.link(w[0], w[1])) {
            return Ok(NecessityVerdict::Conflict { u, v });
        }
    }
    Ok(NecessityVerdict::Pass)
}

fn check_odd_cycle_preconditions(inst: &Instance) -> Result<(), PolyError> {
    if inst.delta() != 2 {
        return Err(PolyError::NotDeltaTwo);
    }
    if !matches!(
        classify(inst.graph()),
        TopologyClass::BidirectedOddCyclePlusTrees { .. }
    ) {
        return Err(PolyError::NotOddCyclePlusTrees);
    }
    let g = inst.graph();
    for (&(u, v), &d) in inst.bounds() {
        if d != inst.distance(u, v) {
            return Err(PolyError::NotExact(g.name(u).into(), g.name(v).into()));
        }
    }
    Ok(())
}

/// Period 2 on one odd bidirected cycle with trees attached, every bound
/// either the distance or absent. Consecutive edges of each bounded shortest
/// path must differ in label, so the instance is feasible iff the graph of
/// these requirements is 2-colourable.
pub fn odd_cycle_delta2_solve(inst: &Instance) -> Result<Certificate, PolyError> {
    check_odd_cycle_preconditions(inst)?;
    let g = inst.graph();
    let m = g.edge_count();
    let mut adj: Vec<Vec<EdgeIx>> = vec![Vec::new(); m];
    for &(u, v) in inst.bounds().keys() {
        let path = shortest_path(g, u, v).expect("strongly connected");
        for w in path_edges(g, &path).windows(2) {
            adj[w[0]].push(w[1]);
            adj[w[1]].push(w[0]);
        }
    }
    for list in &mut adj {
        list.sort_unstable();
        list.dedup();
    }
    let mut color: Vec<Option<u32>> = vec![None; m];
    let mut parent: Vec<Option<EdgeIx>> = vec![None; m];
    let mut depth = vec![0usize; m];
    for start in 0..m {
        if color[start].is_some() {
            continue;
        }
        color[start] = Some(0);
        let mut queue = VecDeque::from([start]);
        while let Some(a) = queue.pop_front() {
            let ca = color[a].expect("queued edges are coloured");
            for &b in &adj[a] {
                match color[b] {
                    None => {
                        color[b] = Some(1 - ca);
                        parent[b] = Some(a);
                        depth[b] = depth[a] + 1;
                        queue.push_back(b);
                    }
                    Some(cb) if cb == ca => {
                        let cycle = odd_cycle(a, b, &parent, &depth);
                        let cycle = cycle.into_iter().map(|e| g.edge(e)).collect();
                        return Ok(Certificate::infeasible(
                            Refutation::AuxGraphOddCycle { cycle },
                            Route::OddCycle,
                        ));
                    }
                    Some(_) => {}
                }
            }
        }
    }
    let lab = Labeling::new(2, color.into_iter().map(|c| c.unwrap_or(0)).collect()).expect("colours are 0 or 1");
    debug_assert!(is_valid(inst, &lab));
    Ok(Certificate::feasible(lab, Route::OddCycle))
}

/// Closes the BFS-tree paths from `a` and `b` up to their meeting point.
fn odd_cycle(a: EdgeIx, b: EdgeIx, parent: &[Option<EdgeIx>], depth: &[usize]) -> Vec<EdgeIx> {
    let (mut x, mut y) = (a, b);
    let mut left = vec![x];
    let mut right = vec![y];
    while depth[x] > depth[y] {
        x = parent[x].expect("deeper node has a parent");
        left.push(x);
    }
    while depth[y] > depth[x] {
        y = parent[y].expect("deeper node has a parent");
        right.push(y);
    }
    while x != y {
        x = parent[x].expect("distinct nodes below the root");
        y = parent[y].expect("distinct nodes below the root");
        left.push(x);
        right.push(y);
    }
    right.pop();
    left.extend(right.into_iter().rev());
    left
}

fn odd_cycle_applies(inst: &Instance) -> bool {
    check_odd_cycle_preconditions(inst).is_ok()
}

/// Routes an instance to the cheapest procedure that can settle it.
///
/// Order: period 1, the always-feasible tree region, bipartite graphs at
/// period 2, trees with every pair exact, the odd-cycle case, the
/// branching-pair refutation, and finally search. Undirected instances skip
/// straight to search unless the period is 1.
pub fn auto_solve(inst: &Instance, cfg: &SearchConfig) -> Certificate {
    if let Ok(lab) = solve_delta1(inst) {
        return Certificate::feasible(lab, Route::Delta1);
    }
    if inst.is_undirected() {
        return solve_exact(inst, cfg);
    }
    let topo = classify(inst.graph());
    let k = slack(inst).k_min;
    if let TopologyClass::BidirectedTree { root } = topo {
        if always_feasible_region(inst.delta(), k, &topo) {
            let lab = root_labeling(inst, root).expect("tree checked");
            debug_assert!(is_valid(inst, &lab));
            return Certificate::feasible(lab, Route::Alg1);
        }
    }
    if inst.delta() == 2 {
        if let Ok(lab) = bipartite_labeling(inst) {
            return Certificate::feasible(lab, Route::Bipartite);
        }
    }
    if let Ok(verdict) = exact_tree_decide(inst) {
        return match verdict.refutation() {
            Some(why) => Certificate::infeasible(why, Route::ExactTree),
            None => {
                let lab = exact_tree_construct(inst).expect("decision passed");
                Certificate::feasible(lab, Route::ExactTree)
            }
        };
    }
    if odd_cycle_applies(inst) {
        return odd_cycle_delta2_solve(inst).expect("preconditions checked");
    }
    if let Ok(verdict) = necessary_condition(inst) {
        if let Some(why) = verdict.refutation() {
            return Certificate::infeasible(why, Route::NecessaryFail);
        }
    }
    solve_exact(inst, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certificate::Verdict;
    use crate::graph::DiGraph;
    use crate::temporal::duration_matrix;

    fn tree(names: &[&str], edges: &[(&str, &str)]) -> DiGraph {
        let mut g = DiGraph::new();
        for n in names {
            g.add_vertex(*n).unwrap();
        }
        for (a, b) in edges {
            let (a, b) = (g.vertex(a).unwrap(), g.vertex(b).unwrap());
            g.add_bidirected(a, b).unwrap();
        }
        g
    }

    fn all_exact(g: DiGraph, delta: u32) -> Instance {
        let n = g.vertex_count();
        let dist = crate::graph::static_distances(&g).unwrap();
        let bounds: Vec<_> = (0..n)
            .flat_map(|u| (0..n).map(move |v| (u, v)))
            .filter(|&(u, v)| u != v)
            .map(|(u, v)| ((u, v), u64::from(dist.get(u, v))))
            .collect();
        Instance::new(g, delta, bounds).unwrap()
    }

    #[test]
    fn root_labeling_on_a_path() {
        let g = tree(&["r", "x", "y"], &[("r", "x"), ("x", "y")]);
        let inst = Instance::new(g, 3, []).unwrap();
        let lab = root_labeling(&inst, 0).unwrap();
        let g = inst.graph();
        let at = |a: &str, b: &str| lab.get(g.find_edge(g.vertex(a).unwrap(), g.vertex(b).unwrap()).unwrap());
        assert_eq!((at("r", "x"), at("x", "y"), at("x", "r"), at("y", "x")), (0, 1, 2, 1));
    }

    #[test]
    fn region_examples() {
        let t = TopologyClass::BidirectedTree { root: 0 };
        assert!(always_feasible_region(2, Some(0), &t));
        assert!(always_feasible_region(3, Some(2), &t));
        assert!(!always_feasible_region(3, Some(1), &t));
        assert!(always_feasible_region(4, Some(2), &t));
        assert!(!always_feasible_region(4, Some(1), &t));
    }

    #[test]
    fn bipartite_on_a_directed_square() {
        let mut g = DiGraph::new();
        for n in ["a", "b", "c", "d"] {
            g.add_vertex(n).unwrap();
        }
        for (a, b) in [(0, 1), (1, 2), (2, 3), (3, 0)] {
            g.add_edge(a, b).unwrap();
        }
        let inst = Instance::new(g, 2, [((0, 2), 2), ((1, 0), 3)]).unwrap();
        let lab = bipartite_labeling(&inst).unwrap();
        assert_eq!(lab.labels(), &[0, 1, 0, 1]);
        assert!(is_valid(&inst, &lab));
    }

    #[test]
    fn exact_trees() {
        let two_hubs = || {
            tree(
                &["a", "b", "c", "d", "e", "f", "g"],
                &[("a", "c"), ("b", "c"), ("c", "d"), ("d", "e"), ("e", "f"), ("e", "g")],
            )
        };
        let ok = all_exact(two_hubs(), 4);
        assert!(exact_tree_decide(&ok).unwrap().passed());
        let lab = exact_tree_construct(&ok).unwrap();
        let m = duration_matrix(ok.graph(), &lab);
        for u in 0..7 {
            for v in 0..7 {
                assert_eq!(m.get(u, v), u64::from(ok.distance(u, v)));
            }
        }
        let bad = all_exact(two_hubs(), 3);
        assert!(matches!(
            exact_tree_decide(&bad).unwrap(),
            NecessityVerdict::Fail { distance: 2, .. }
        ));
        assert!(matches!(
            necessary_condition(&bad).unwrap(),
            NecessityVerdict::Conflict { .. }
        ));
        let spider = all_exact(tree(&["c", "x", "y", "z"], &[("c", "x"), ("c", "y"), ("c", "z")]), 3);
        assert!(exact_tree_decide(&spider).unwrap().passed());
        assert!(is_valid(&spider, &exact_tree_construct(&spider).unwrap()));
    }

    #[test]
    fn components_merge_on_shared_edges() {
        let g = tree(&["a", "b", "c", "d"], &[("a", "b"), ("b", "c"), ("c", "d")]);
        let split = Instance::new(g.clone(), 3, [((0, 2), 2), ((3, 1), 2)]).unwrap();
        assert_eq!(zero_slack_components(&split).unwrap().len(), 2);
        let merged = Instance::new(g.clone(), 3, [((0, 2), 2), ((1, 3), 2)]).unwrap();
        assert_eq!(zero_slack_components(&merged).unwrap().len(), 1);
        let none = Instance::new(g, 3, []).unwrap();
        assert!(zero_slack_components(&none).unwrap().is_empty());
        assert!(necessary_condition(&none).unwrap().passed());
    }

    #[test]
    fn adjacent_branching_vertices_need_not_conflict() {
        // a and b branch inside one zero-slack component at odd distance,
        // yet the no-wait requirements never meet in a cycle.
        let g = tree(
            &["a", "b", "p", "q", "x", "y"],
            &[("a", "p"), ("a", "x"), ("a", "b"), ("b", "q"), ("b", "y")],
        );
        let id = |n: &str| g.vertex(n).unwrap();
        let bounds: Vec<_> = [
            ("p", "b"),
            ("x", "b"),
            ("b", "p"),
            ("a", "q"),
            ("q", "a"),
            ("y", "a"),
            ("p", "x"),
            ("b", "x"),
        ]
        .iter()
        .map(|&(u, v)| ((id(u), id(v)), 2))
        .collect();
        let inst = Instance::new(g.clone(), 3, bounds).unwrap();
        let comps = zero_slack_components(&inst).unwrap();
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].branching, vec![id("a"), id("b")]);
        assert!(necessary_condition(&inst).unwrap().passed());
        assert!(solve_exact(&inst, &SearchConfig::default()).is_feasible());
    }

    fn five_cycle(bounds: &[(usize, usize)]) -> Instance {
        let mut g = DiGraph::new();
        for i in 0..5 {
            g.add_vertex(i.to_string()).unwrap();
        }
        for i in 0..5 {
            g.add_bidirected(i, (i + 1) % 5).unwrap();
        }
        Instance::new(g, 2, bounds.iter().map(|&p| (p, 2))).unwrap()
    }

    #[test]
    fn odd_cycle_examples() {
        let full = five_cycle(&[(0, 2), (2, 4), (4, 1), (1, 3), (3, 0)]);
        let cert = odd_cycle_delta2_solve(&full).unwrap();
        match cert.verdict {
            Verdict::Infeasible(Refutation::AuxGraphOddCycle { cycle }) => assert_eq!(cycle.len() % 2, 1),
            other => panic!("unexpected {other:?}"),
        }
        let open = five_cycle(&[(0, 2), (2, 4), (4, 1), (1, 3)]);
        let cert = odd_cycle_delta2_solve(&open).unwrap();
        assert!(is_valid(&open, cert.labeling().unwrap()));
        assert!(odd_cycle_delta2_solve(&five_cycle(&[])).unwrap().is_feasible());
    }

    #[test]
    fn dispatcher_routes() {
        let g = tree(&["a", "b", "c"], &[("a", "b"), ("b", "c")]);
        let cfg = SearchConfig::default();
        let d1 = Instance::new(g.clone(), 1, []).unwrap();
        assert_eq!(auto_solve(&d1, &cfg).route, Route::Delta1);
        let d2 = Instance::new(g.clone(), 2, [((0, 2), 2)]).unwrap();
        assert_eq!(auto_solve(&d2, &cfg).route, Route::Alg1);
        let full = five_cycle(&[(0, 2), (2, 4), (4, 1), (1, 3), (3, 0)]);
        let cert = auto_solve(&full, &cfg);
        assert_eq!((cert.route, cert.is_infeasible()), (Route::OddCycle, true));
    }
}
