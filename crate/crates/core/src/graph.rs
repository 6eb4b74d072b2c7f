//! Static directed graphs with opaque string vertex ids.
//!
//! Vertices and edges are stored densely and addressed by index; iteration
//! follows insertion order. Where a choice has to be made between vertices
//! (roots, tie-breaking) the lexicographically smallest id wins, exposed via
//! [`DiGraph::rank`].

use std::collections::{HashMap, VecDeque};

use thiserror::Error;

pub type VertexIx = usize;
pub type EdgeIx = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("self-loop on vertex `{0}`")]
    SelfLoop(String),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(String, String),
    #[error("vertex `{to}` is unreachable from `{from}`")]
    Unreachable { from: String, to: String },
}

#[derive(Debug, Clone, Default)]
pub struct DiGraph {
    names: Vec<String>,
    lookup: HashMap<String, VertexIx>,
    edges: Vec<(VertexIx, VertexIx)>,
    edge_lookup: HashMap<(VertexIx, VertexIx), EdgeIx>,
    out: Vec<Vec<EdgeIx>>,
    inc: Vec<Vec<EdgeIx>>,
    rank: Vec<usize>,
}

impl PartialEq for DiGraph {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names && self.edges == other.edges
    }
}

impl Eq for DiGraph {}

impl DiGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, name: impl Into<String>) -> Result<VertexIx, GraphError> {
        let name = name.into();
        if self.lookup.contains_key(&name) {
            return Err(GraphError::DuplicateVertex(name));
        }
        let ix = self.names.len();
        self.lookup.insert(name.clone(), ix);
        self.names.push(name);
        self.out.push(Vec::new());
        self.inc.push(Vec::new());
        self.recompute_rank();
        Ok(ix)
    }

    /// Returns the vertex with this id, adding it if absent.
    pub fn ensure_vertex(&mut self, name: &str) -> VertexIx {
        match self.lookup.get(name) {
            Some(&ix) => ix,
            None => self.add_vertex(name).expect("vertex is new"),
        }
    }

    pub fn add_edge(&mut self, from: VertexIx, to: VertexIx) -> Result<EdgeIx, GraphError> {
        if from == to {
            return Err(GraphError::SelfLoop(self.names[from].clone()));
        }
        if self.edge_lookup.contains_key(&(from, to)) {
            return Err(GraphError::DuplicateEdge(
                self.names[from].clone(),
                self.names[to].clone(),
            ));
        }
        let ix = self.edges.len();
        self.edges.push((from, to));
        self.edge_lookup.insert((from, to), ix);
        self.out[from].push(ix);
        self.inc[to].push(ix);
        Ok(ix)
    }

    pub fn add_edge_by_name(&mut self, from: &str, to: &str) -> Result<EdgeIx, GraphError> {
        let u = self.vertex(from)?;
        let v = self.vertex(to)?;
        self.add_edge(u, v)
    }

    /// Adds both `(a, b)` and `(b, a)`, in that order.
    pub fn add_bidirected(&mut self, a: VertexIx, b: VertexIx) -> Result<(EdgeIx, EdgeIx), GraphError> {
        let e = self.add_edge(a, b)?;
        let r = self.add_edge(b, a)?;
        Ok((e, r))
    }

    fn recompute_rank(&mut self) {
        let mut order: Vec<VertexIx> = (0..self.names.len()).collect();
        order.sort_by(|&a, &b| self.names[a].cmp(&self.names[b]));
        self.rank = vec![0; order.len()];
        for (r, v) in order.into_iter().enumerate() {
            self.rank[v] = r;
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> std::ops::Range<VertexIx> {
        0..self.names.len()
    }

    pub fn name(&self, v: VertexIx) -> &str {
        &self.names[v]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn vertex(&self, name: &str) -> Result<VertexIx, GraphError> {
        self.lookup
            .get(name)
            .copied()
            .ok_or_else(|| GraphError::UnknownVertex(name.to_string()))
    }

    pub fn edges(&self) -> &[(VertexIx, VertexIx)] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeIx) -> (VertexIx, VertexIx) {
        self.edges[e]
    }

    pub fn find_edge(&self, from: VertexIx, to: VertexIx) -> Option<EdgeIx> {
        self.edge_lookup.get(&(from, to)).copied()
    }

    pub fn reverse(&self, e: EdgeIx) -> Option<EdgeIx> {
        let (u, v) = self.edges[e];
        self.find_edge(v, u)
    }

    pub fn out_edges(&self, v: VertexIx) -> &[EdgeIx] {
        &self.out[v]
    }

    pub fn in_edges(&self, v: VertexIx) -> &[EdgeIx] {
        &self.inc[v]
    }

    pub fn out_degree(&self, v: VertexIx) -> usize {
        self.out[v].len()
    }

    pub fn in_degree(&self, v: VertexIx) -> usize {
        self.inc[v].len()
    }

    /// Neighbors over either edge direction, sorted by lexicographic rank.
    pub fn neighbors(&self, v: VertexIx) -> Vec<VertexIx> {
        let mut ns: Vec<VertexIx> = self.out[v]
            .iter()
            .map(|&e| self.edges[e].1)
            .chain(self.inc[v].iter().map(|&e| self.edges[e].0))
            .collect();
        ns.sort_by_key(|&w| self.rank[w]);
        ns.dedup();
        ns
    }

    /// Position of `v` in the lexicographic order of vertex ids.
    pub fn rank(&self, v: VertexIx) -> usize {
        self.rank[v]
    }

    /// Vertices in lexicographic id order.
    pub fn vertices_by_name(&self) -> Vec<VertexIx> {
        let mut vs: Vec<VertexIx> = self.vertices().collect();
        vs.sort_by_key(|&v| self.rank[v]);
        vs
    }

    pub fn edge_label(&self, e: EdgeIx) -> String {
        let (u, v) = self.edges[e];
        format!("({}, {})", self.names[u], self.names[v])
    }

    /// Every edge has its antiparallel twin.
    pub fn is_symmetric(&self) -> bool {
        self.edges.iter().all(|&(u, v)| self.edge_lookup.contains_key(&(v, u)))
    }

    /// Breadth-first hop distances from `source`; `None` for unreachable vertices.
    pub fn bfs(&self, source: VertexIx) -> Vec<Option<u32>> {
        let mut dist = vec![None; self.vertex_count()];
        dist[source] = Some(0);
        let mut queue = VecDeque::from([source]);
        while let Some(x) = queue.pop_front() {
            let dx = dist[x].unwrap();
            for &e in &self.out[x] {
                let y = self.edges[e].1;
                if dist[y].is_none() {
                    dist[y] = Some(dx + 1);
                    queue.push_back(y);
                }
            }
        }
        dist
    }

    pub fn is_strongly_connected(&self) -> bool {
        self.first_unreachable_pair().is_none()
    }

    /// Some `(u, v)` with `v` unreachable from `u`, if the graph is not strongly connected.
    pub fn first_unreachable_pair(&self) -> Option<(VertexIx, VertexIx)> {
        if self.vertex_count() == 0 {
            return None;
        }
        let root = self.vertices_by_name()[0];
        if let Some(v) = self.bfs(root).iter().position(Option::is_none) {
            return Some((root, v));
        }
        // Reverse reachability: everything must reach the root.
        let mut seen = vec![false; self.vertex_count()];
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(x) = queue.pop_front() {
            for &e in &self.inc[x] {
                let y = self.edges[e].0;
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        seen.iter().position(|s| !s).map(|v| (v, root))
    }

    /// Undirected simple edges `{u, v}` of the underlying graph, each once,
    /// in the order their first direction was inserted.
    pub fn undirected_edges(&self) -> Vec<(VertexIx, VertexIx)> {
        let mut seen = std::collections::HashSet::new();
        let mut out = Vec::new();
        for &(u, v) in &self.edges {
            let key = (u.min(v), u.max(v));
            if seen.insert(key) {
                out.push((u, v));
            }
        }
        out
    }
}

/// All-pairs static hop distances.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceTable {
    n: usize,
    dist: Vec<u32>,
}

impl DistanceTable {
    pub fn get(&self, u: VertexIx, v: VertexIx) -> u32 {
        self.dist[u * self.n + v]
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }
}

/// Static distances by one breadth-first traversal per vertex.
pub fn static_distances(g: &DiGraph) -> Result<DistanceTable, GraphError> {
    let n = g.vertex_count();
    let mut dist = Vec::with_capacity(n * n);
    for u in g.vertices() {
        for (v, d) in g.bfs(u).into_iter().enumerate() {
            match d {
                Some(d) => dist.push(d),
                None => {
                    return Err(GraphError::Unreachable {
                        from: g.name(u).to_string(),
                        to: g.name(v).to_string(),
                    })
                }
            }
        }
    }
    Ok(DistanceTable { n, dist })
}

/// The most specific structural class a graph falls into, with a witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TopologyClass {
    /// Symmetric edges over an undirected tree; `root` is the lexicographically first vertex.
    BidirectedTree {
        root: VertexIx,
    },
    /// Symmetric edges over a unicyclic graph whose single cycle has odd length.
    /// `cycle` lists the cycle vertices in walking order.
    BidirectedOddCyclePlusTrees {
        cycle: Vec<VertexIx>,
    },
    /// Every edge crosses the bipartition.
    BipartiteDirected {
        left: Vec<VertexIx>,
        right: Vec<VertexIx>,
    },
    General,
}

impl TopologyClass {
    pub fn tag(&self) -> &'static str {
        match self {
            TopologyClass::BidirectedTree { .. } => "bidirected_tree",
            TopologyClass::BidirectedOddCyclePlusTrees { .. } => "bidirected_odd_cycle_plus_trees",
            TopologyClass::BipartiteDirected { .. } => "bipartite_directed",
            TopologyClass::General => "general",
        }
    }
}

pub fn classify(g: &DiGraph) -> TopologyClass {
    let n = g.vertex_count();
    if n == 0 {
        return TopologyClass::General;
    }
    let symmetric = g.is_symmetric();
    let m = g.undirected_edges().len();
    let connected = g.bfs(g.vertices_by_name()[0]).iter().all(Option::is_some);
    if symmetric && connected && m + 1 == n {
        return TopologyClass::BidirectedTree {
            root: g.vertices_by_name()[0],
        };
    }
    if symmetric && connected && m == n {
        let cycle = unique_cycle(g);
        if cycle.len() % 2 == 1 {
            return TopologyClass::BidirectedOddCyclePlusTrees { cycle };
        }
    }
    if let Some((left, right)) = bipartition(g) {
        return TopologyClass::BipartiteDirected { left, right };
    }
    TopologyClass::General
}

/// Cycle of a connected unicyclic graph: strip leaves, then walk what remains.
fn unique_cycle(g: &DiGraph) -> Vec<VertexIx> {
    let n = g.vertex_count();
    let adj: Vec<Vec<VertexIx>> = g.vertices().map(|v| g.neighbors(v)).collect();
    let mut degree: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut removed = vec![false; n];
    let mut queue: VecDeque<VertexIx> = (0..n).filter(|&v| degree[v] <= 1).collect();
    while let Some(v) = queue.pop_front() {
        if removed[v] {
            continue;
        }
        removed[v] = true;
        for &w in &adj[v] {
            if !removed[w] {
                degree[w] -= 1;
                if degree[w] == 1 {
                    queue.push_back(w);
                }
            }
        }
    }
    let Some(start) = g.vertices_by_name().into_iter().find(|&v| !removed[v]) else {
        return Vec::new();
    };
    let mut cycle = vec![start];
    let mut prev = start;
    let mut cur = adj[start].iter().copied().find(|&w| !removed[w]).unwrap();
    while cur != start {
        cycle.push(cur);
        let next = adj[cur].iter().copied().find(|&w| !removed[w] && w != prev).unwrap();
        prev = cur;
        cur = next;
    }
    cycle
}

/// Proper 2-coloring of the underlying undirected graph, seeded from the
/// lexicographically first vertex of each component.
pub fn bipartition(g: &DiGraph) -> Option<(Vec<VertexIx>, Vec<VertexIx>)> {
    let mut side: Vec<Option<bool>> = vec![None; g.vertex_count()];
    for s in g.vertices_by_name() {
        if side[s].is_some() {
            continue;
        }
        side[s] = Some(false);
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            let sx = side[x].unwrap();
            for w in g.neighbors(x) {
                match side[w] {
                    None => {
                        side[w] = Some(!sx);
                        queue.push_back(w);
                    }
                    Some(sw) if sw == sx => return None,
                    Some(_) => {}
                }
            }
        }
    }
    let by_name = g.vertices_by_name();
    let left = by_name.iter().copied().filter(|&v| side[v] == Some(false)).collect();
    let right = by_name.iter().copied().filter(|&v| side[v] == Some(true)).collect();
    Some((left, right))
}

/// Rooted view of a bidirected tree: parents, depths and unique paths.
#[derive(Debug, Clone)]
pub struct RootedTree {
    pub root: VertexIx,
    parent: Vec<Option<VertexIx>>,
    depth: Vec<u32>,
}

impl RootedTree {
    /// Roots the underlying undirected graph at `root` by breadth-first search.
    /// Only meaningful when that graph is a tree.
    pub fn new(g: &DiGraph, root: VertexIx) -> Self {
        let n = g.vertex_count();
        let mut parent = vec![None; n];
        let mut depth = vec![u32::MAX; n];
        depth[root] = 0;
        let mut queue = VecDeque::from([root]);
        while let Some(x) = queue.pop_front() {
            for w in g.neighbors(x) {
                if depth[w] == u32::MAX {
                    depth[w] = depth[x] + 1;
                    parent[w] = Some(x);
                    queue.push_back(w);
                }
            }
        }
        Self { root, parent, depth }
    }

    pub fn parent(&self, v: VertexIx) -> Option<VertexIx> {
        self.parent[v]
    }

    pub fn depth(&self, v: VertexIx) -> u32 {
        self.depth[v]
    }

    /// Vertex sequence of the unique path from `u` to `v`.
    pub fn path(&self, u: VertexIx, v: VertexIx) -> Vec<VertexIx> {
        let mut up = vec![u];
        let mut down = vec![v];
        let (mut a, mut b) = (u, v);
        while self.depth[a] > self.depth[b] {
            a = self.parent[a].unwrap();
            up.push(a);
        }
        while self.depth[b] > self.depth[a] {
            b = self.parent[b].unwrap();
            down.push(b);
        }
        while a != b {
            a = self.parent[a].unwrap();
            b = self.parent[b].unwrap();
            up.push(a);
            down.push(b);
        }
        down.pop();
        up.extend(down.into_iter().rev());
        up
    }
}

/// Edge indices along a vertex sequence; panics if a step is not an edge.
pub fn path_edges(g: &DiGraph, vertices: &[VertexIx]) -> Vec<EdgeIx> {
    vertices
        .windows(2)
        .map(|w| g.find_edge(w[0], w[1]).expect("consecutive path vertices are adjacent"))
        .collect()
}

/// One shortest path from `u` to `v` (breadth-first, neighbors in id order).
pub fn shortest_path(g: &DiGraph, u: VertexIx, v: VertexIx) -> Option<Vec<VertexIx>> {
    let mut pred: Vec<Option<VertexIx>> = vec![None; g.vertex_count()];
    let mut seen = vec![false; g.vertex_count()];
    seen[u] = true;
    let mut queue = VecDeque::from([u]);
    while let Some(x) = queue.pop_front() {
        if x == v {
            break;
        }
        let mut succ: Vec<VertexIx> = g.out_edges(x).iter().map(|&e| g.edge(e).1).collect();
        succ.sort_by_key(|&w| g.rank(w));
        for y in succ {
            if !seen[y] {
                seen[y] = true;
                pred[y] = Some(x);
                queue.push_back(y);
            }
        }
    }
    if !seen[v] {
        return None;
    }
    let mut path = vec![v];
    let mut cur = v;
    while let Some(p) = pred[cur] {
        path.push(p);
        cur = p;
    }
    path.reverse();
    Some(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(names: &[&str], edges: &[(&str, &str)], bidirected: bool) -> DiGraph {
        let mut g = DiGraph::new();
        for n in names {
            g.add_vertex(*n).unwrap();
        }
        for (a, b) in edges {
            g.add_edge_by_name(a, b).unwrap();
            if bidirected {
                g.add_edge_by_name(b, a).unwrap();
            }
        }
        g
    }

    #[test]
    fn rejects_self_loops_and_duplicates() {
        let mut g = graph(&["a", "b"], &[("a", "b")], false);
        assert!(matches!(g.add_edge(0, 0), Err(GraphError::SelfLoop(_))));
        assert!(matches!(g.add_edge(0, 1), Err(GraphError::DuplicateEdge(..))));
        assert!(matches!(g.add_vertex("a"), Err(GraphError::DuplicateVertex(_))));
    }

    #[test]
    fn distances_on_paths_stars_and_cycles() {
        let path = graph(&["a", "b", "c"], &[("a", "b"), ("b", "c")], true);
        let d = static_distances(&path).unwrap();
        assert_eq!(d.get(0, 2), 2);
        assert_eq!(d.get(2, 0), 2);

        let star = graph(&["u", "x", "y"], &[("u", "x"), ("u", "y")], true);
        let d = static_distances(&star).unwrap();
        assert_eq!(d.get(1, 2), 2);

        let cyc = graph(&["a", "b", "c"], &[("a", "b"), ("b", "c"), ("c", "a")], false);
        let d = static_distances(&cyc).unwrap();
        assert_eq!(d.get(0, 2), 2);
        assert_eq!(d.get(2, 0), 1);
    }

    #[test]
    fn unreachable_pair_is_reported() {
        let g = graph(&["a", "b"], &[("a", "b")], false);
        assert!(matches!(static_distances(&g), Err(GraphError::Unreachable { .. })));
        assert!(!g.is_strongly_connected());
    }

    #[test]
    fn classifies_the_basic_shapes() {
        let p4 = graph(&["a", "b", "c", "d"], &[("a", "b"), ("b", "c"), ("c", "d")], true);
        assert_eq!(classify(&p4), TopologyClass::BidirectedTree { root: 0 });

        let names = ["0", "1", "2", "3", "4", "5"];
        let c5p = graph(
            &names,
            &[("0", "1"), ("1", "2"), ("2", "3"), ("3", "4"), ("4", "0"), ("2", "5")],
            true,
        );
        match classify(&c5p) {
            TopologyClass::BidirectedOddCyclePlusTrees { cycle } => assert_eq!(cycle.len(), 5),
            other => panic!("unexpected {other:?}"),
        }

        let c4 = graph(
            &["a", "b", "c", "d"],
            &[("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")],
            false,
        );
        assert_eq!(
            classify(&c4),
            TopologyClass::BipartiteDirected {
                left: vec![0, 2],
                right: vec![1, 3]
            }
        );

        let tri = graph(&["a", "b", "c"], &[("a", "b"), ("b", "c"), ("c", "a")], false);
        assert_eq!(classify(&tri), TopologyClass::General);
    }

    #[test]
    fn rooted_tree_paths() {
        let g = graph(
            &["r", "a", "b", "c", "d"],
            &[("r", "a"), ("r", "b"), ("a", "c"), ("b", "d")],
            true,
        );
        let t = RootedTree::new(&g, 0);
        assert_eq!(t.path(3, 4), vec![3, 1, 0, 2, 4]);
        assert_eq!(t.path(3, 1), vec![3, 1]);
        assert_eq!(t.path(0, 3), vec![0, 1, 3]);
        assert_eq!(t.path(2, 2), vec![2]);
        assert_eq!(path_edges(&g, &t.path(0, 3)).len(), 2);
    }
}
