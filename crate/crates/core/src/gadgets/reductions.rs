//! Reductions into realization instances.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::{reference_labeling, select_gadget, Gadget, GadgetError};
use crate::graph::{classify, DiGraph, EdgeIx, GraphError, TopologyClass, VertexIx};
use crate::instance::{slack, Instance, InstanceError, Labeling, LabelingError};
use crate::io::{CnfDoc, UndirectedGraphDoc};

fn graph_err(e: GraphError) -> GadgetError {
    GadgetError::Instance(InstanceError::Graph(e))
}

/// A star whose leaves are the vertices of a graph to be coloured.
#[derive(Debug, Clone)]
pub struct StarReduction {
    pub instance: Instance,
    pub center: VertexIx,
    /// Leaf of each input vertex, in input order.
    pub leaves: Vec<VertexIx>,
}

impl StarReduction {
    /// The colour of each input vertex: the label of its spoke.
    pub fn coloring(&self, lab: &Labeling) -> Vec<u32> {
        let g = self.instance.graph();
        self.leaves
            .iter()
            .map(|&v| lab.get(g.find_edge(self.center, v).expect("spoke")))
            .collect()
    }

    /// Labels both directions of each spoke with its leaf's colour.
    pub fn labeling_from_coloring(&self, colors: &[u32]) -> Result<Labeling, LabelingError> {
        let g = self.instance.graph();
        let mut labels = vec![0; g.edge_count()];
        for (&v, &c) in self.leaves.iter().zip(colors) {
            labels[g.find_edge(self.center, v).expect("spoke")] = c;
            labels[g.find_edge(v, self.center).expect("spoke")] = c;
        }
        Labeling::new(self.instance.delta(), labels)
    }
}

/// Δ-colourability as an undirected star instance: every vertex becomes a
/// leaf, every edge `{a, b}` the bounds `D(a, b) = D(b, a) = Δ`.
pub fn star_from_coloring(doc: &UndirectedGraphDoc, delta: u32) -> Result<StarReduction, GadgetError> {
    if delta < 3 {
        return Err(GadgetError::PeriodTooSmall(delta));
    }
    let mut center_name = "center".to_string();
    while doc.vertices.contains(&center_name) {
        center_name.push('_');
    }
    let mut g = DiGraph::new();
    let center = g.add_vertex(center_name).map_err(graph_err)?;
    let mut leaves = Vec::new();
    for name in &doc.vertices {
        let v = g.add_vertex(name.clone()).map_err(graph_err)?;
        g.add_bidirected(center, v).map_err(graph_err)?;
        leaves.push(v);
    }
    let mut bounds = BTreeMap::new();
    for [a, b] in &doc.edges {
        let (u, v) = (g.vertex(a).map_err(graph_err)?, g.vertex(b).map_err(graph_err)?);
        if u == v {
            return Err(graph_err(GraphError::SelfLoop(a.clone())));
        }
        bounds.insert((u, v), u64::from(delta));
        bounds.insert((v, u), u64::from(delta));
    }
    let instance = Instance::new_undirected(g, delta, bounds)?;
    Ok(StarReduction {
        instance,
        center,
        leaves,
    })
}

/// A monotone 3-CNF with variables by index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonotoneCnf {
    pub variables: Vec<String>,
    pub clauses: Vec<[usize; 3]>,
}

impl MonotoneCnf {
    /// Checks that no clause repeats a variable and that two clauses share
    /// at most one variable.
    pub fn new(variables: Vec<String>, clauses: Vec<[usize; 3]>) -> Result<Self, GadgetError> {
        if clauses.is_empty() {
            return Err(GadgetError::EmptyFormula);
        }
        for (i, c) in clauses.iter().enumerate() {
            if c[0] == c[1] || c[1] == c[2] || c[0] == c[2] {
                return Err(GadgetError::RepeatedVariable(i));
            }
        }
        for i in 0..clauses.len() {
            for j in i + 1..clauses.len() {
                let shared = clauses[i].iter().filter(|x| clauses[j].contains(x)).count();
                if shared > 1 {
                    return Err(GadgetError::NotLinear(i, j));
                }
            }
        }
        Ok(Self { variables, clauses })
    }

    /// Variables are numbered in order of first appearance.
    pub fn from_doc(doc: &CnfDoc) -> Result<Self, GadgetError> {
        let mut variables: Vec<String> = Vec::new();
        let mut index = HashMap::new();
        let clauses = doc
            .clauses
            .iter()
            .map(|c| {
                c.clone().map(|name| {
                    *index.entry(name.clone()).or_insert_with(|| {
                        variables.push(name);
                        variables.len() - 1
                    })
                })
            })
            .collect();
        Self::new(variables, clauses)
    }

    /// Not-all-equal satisfaction: every clause has a true and a false
    /// variable.
    pub fn nae_satisfied(&self, assignment: &[bool]) -> bool {
        self.clauses.iter().all(|c| {
            let t = c.iter().filter(|&&x| assignment[x]).count();
            t == 1 || t == 2
        })
    }

    /// Exhaustive NAE satisfiability.
    pub fn nae_satisfiable(&self) -> bool {
        let n = self.variables.len();
        (0u64..1 << n).any(|mask| {
            let a: Vec<bool> = (0..n).map(|i| mask >> i & 1 == 1).collect();
            self.nae_satisfied(&a)
        })
    }
}

/// Where a variable sits in a clause.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Occurrence {
    pub clause: usize,
    /// 0, 1, 2 for the first, second and third literal.
    pub slot: usize,
}

/// Cycle vertex pairs whose edge carries each literal slot, and the edges
/// that links attach to.
const READOUT: [(u32, u32); 3] = [(3, 4), (1, 2), (2, 3)];
const LINK: [(u32, u32); 3] = [(7, 8), (1, 2), (2, 3)];

#[derive(Debug, Clone)]
pub struct NaeReduction {
    pub instance: Instance,
    pub cnf: MonotoneCnf,
    /// Edge whose label is each variable's value.
    pub readout: Vec<EdgeIx>,
    pub symmetric: bool,
    /// A hub vertex was added for strong connectivity.
    pub hub: bool,
}

impl NaeReduction {
    pub fn assignment(&self, lab: &Labeling) -> Vec<bool> {
        self.readout.iter().map(|&e| lab.get(e) == 1).collect()
    }
}

fn cycle_vertex(j: u32, clause: usize) -> String {
    format!("{j}_{}", clause + 1)
}

/// Monotone NAE-3SAT on a linear formula to Δ = 2 realization: one 11-cycle
/// per clause, linked per variable along its occurrences. With `symmetric`
/// every edge gets its reverse and every bound its mirror.
pub fn nae3sat_to_ditgr(cnf: &MonotoneCnf, symmetric: bool) -> Result<NaeReduction, GadgetError> {
    let mut g = DiGraph::new();
    let mut bounds: BTreeMap<(VertexIx, VertexIx), u64> = BTreeMap::new();
    let v = |g: &mut DiGraph, j: u32, c: usize| g.ensure_vertex(&cycle_vertex(j, c));
    for c in 0..cnf.clauses.len() {
        for j in 0..11 {
            let (a, b) = (v(&mut g, j, c), v(&mut g, (j + 1) % 11, c));
            g.add_edge(a, b).map_err(graph_err)?;
        }
        bounds.insert((v(&mut g, 0, c), v(&mut g, 4, c)), 5);
        for j in 3..=10 {
            bounds.insert((v(&mut g, j, c), v(&mut g, (j + 2) % 11, c)), 2);
        }
    }
    let mut occurrences: Vec<Vec<Occurrence>> = vec![Vec::new(); cnf.variables.len()];
    for (clause, c) in cnf.clauses.iter().enumerate() {
        for (slot, &x) in c.iter().enumerate() {
            occurrences[x].push(Occurrence { clause, slot });
        }
    }
    for occ in &occurrences {
        for w in occ.windows(2) {
            let (p, q) = (w[0], w[1]);
            let (u, u2) = (v(&mut g, LINK[p.slot].0, p.clause), v(&mut g, LINK[p.slot].1, p.clause));
            let (x, x2) = (v(&mut g, LINK[q.slot].0, q.clause), v(&mut g, LINK[q.slot].1, q.clause));
            if p.slot == 1 && q.slot == 2 {
                g.add_edge(x2, u).map_err(graph_err)?;
                bounds.insert((x, u), 2);
                bounds.insert((x2, u2), 2);
            } else {
                g.add_edge(u2, x).map_err(graph_err)?;
                bounds.insert((u, x), 2);
                bounds.insert((u2, x2), 2);
            }
        }
    }
    if symmetric {
        for (a, b) in g.edges().to_vec() {
            if g.find_edge(b, a).is_none() {
                g.add_edge(b, a).map_err(graph_err)?;
            }
        }
        for ((a, b), d) in bounds.clone() {
            let e = bounds.entry((b, a)).or_insert(d);
            *e = (*e).min(d);
        }
    }
    let hub = !g.is_strongly_connected();
    if hub {
        let h = g.add_vertex("hub").map_err(graph_err)?;
        for c in 0..cnf.clauses.len() {
            let five = v(&mut g, 5, c);
            g.add_bidirected(h, five).map_err(graph_err)?;
        }
    }
    let readout = occurrences
        .iter()
        .map(|occ| {
            let o = occ.first().expect("every variable occurs");
            let (a, b) = READOUT[o.slot];
            let (a, b) = (
                g.vertex(&cycle_vertex(a, o.clause)),
                g.vertex(&cycle_vertex(b, o.clause)),
            );
            g.find_edge(a.expect("cycle vertex"), b.expect("cycle vertex"))
                .expect("cycle edge")
        })
        .collect();
    let instance = Instance::new(g, 2, bounds)?;
    Ok(NaeReduction {
        instance,
        cnf: cnf.clone(),
        readout,
        symmetric,
        hub,
    })
}

/// An undirected tree instance with a gadget spliced onto every edge.
#[derive(Debug, Clone)]
pub struct TtrReduction {
    pub instance: Instance,
    pub original: Instance,
    pub gadget: Gadget,
    /// Forward and backward edge of each undirected input edge. Input edge
    /// indices are kept in the output.
    pub pairs: Vec<(EdgeIx, EdgeIx)>,
    /// For each input edge, the output edge of every gadget edge.
    pub copies: Vec<Vec<EdgeIx>>,
}

impl TtrReduction {
    /// Reads the undirected labeling off the original edges; each edge takes
    /// the label of its forward direction.
    pub fn project(&self, lab: &Labeling) -> Labeling {
        let mut labels = vec![0; self.original.graph().edge_count()];
        for &(e, r) in &self.pairs {
            labels[e] = lab.get(e);
            labels[r] = lab.get(e);
        }
        Labeling::new(lab.delta(), labels).expect("labels in range")
    }

    /// Extends an undirected labeling by a shifted reference labeling in
    /// every gadget copy.
    pub fn lift(&self, lab: &Labeling) -> Result<Labeling, GadgetError> {
        let reference = reference_labeling(&self.gadget)?;
        let delta = self.gadget.delta;
        let (de, _) = self.gadget.designated_edges();
        let r = reference.get(de);
        let mut labels = vec![0; self.instance.graph().edge_count()];
        labels[..lab.len()].copy_from_slice(lab.labels());
        for (&(e, _), copy) in self.pairs.iter().zip(&self.copies) {
            let shift = (lab.get(e) + delta - r) % delta;
            for (ge, &ne) in copy.iter().enumerate() {
                labels[ne] = (reference.get(ge) + shift) % delta;
            }
        }
        Ok(Labeling::new(delta, labels).expect("labels in range"))
    }
}

/// Splices the gadget for `(Δ, k)` onto every edge of an undirected tree
/// instance. Gadget vertices other than the designated pair are renamed
/// `e{index}:{name}`.
pub fn reduce_ttr_to_dittr(inst: &Instance, k: u32) -> Result<TtrReduction, GadgetError> {
    if !inst.is_undirected() || !matches!(classify(inst.graph()), TopologyClass::BidirectedTree { .. }) {
        return Err(GadgetError::NotUndirectedTree);
    }
    if let Some(s) = slack(inst).k_min {
        if s < k {
            return Err(GadgetError::SlackBelowK { slack: s, k });
        }
    }
    let gadget = select_gadget(inst.delta(), k)?;
    let src = inst.graph();
    let gg = gadget.instance.graph();
    let mut g = src.clone();
    let mut bounds: BTreeMap<(VertexIx, VertexIx), u64> =
        inst.bounds().iter().map(|(&p, &d)| (p, u64::from(d))).collect();
    let mut pairs = Vec::new();
    let mut copies = Vec::new();
    let designated: BTreeSet<_> = [gadget.designated.0, gadget.designated.1].into();
    for (idx, (a, b)) in src.undirected_edges().into_iter().enumerate() {
        pairs.push((src.find_edge(a, b).expect("edge"), src.find_edge(b, a).expect("edge")));
        let mut map = Vec::with_capacity(gg.vertex_count());
        for x in gg.vertices() {
            map.push(if x == gadget.designated.0 {
                a
            } else if x == gadget.designated.1 {
                b
            } else {
                g.add_vertex(format!("e{idx}:{}", gg.name(x))).map_err(graph_err)?
            });
        }
        let mut copy = Vec::with_capacity(gg.edge_count());
        for &(x, y) in gg.edges() {
            let (nx, ny) = (map[x], map[y]);
            let e = if designated.contains(&x) && designated.contains(&y) {
                g.find_edge(nx, ny).expect("original edge")
            } else {
                g.add_edge(nx, ny).map_err(graph_err)?
            };
            copy.push(e);
        }
        copies.push(copy);
        for (&(x, y), &d) in gadget.instance.bounds() {
            let e = bounds.entry((map[x], map[y])).or_insert(u64::from(d));
            *e = (*e).min(u64::from(d));
        }
    }
    let instance = Instance::new(g, inst.delta(), bounds)?;
    Ok(TtrReduction {
        instance,
        original: inst.clone(),
        gadget,
        pairs,
        copies,
    })
}
