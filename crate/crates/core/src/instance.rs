//! Realization instances, labelings and slack.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::graph::{static_distances, DiGraph, DistanceTable, EdgeIx, GraphError, VertexIx};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstanceError {
    #[error("period must be at least 1")]
    ZeroPeriod,
    #[error("graph is not strongly connected: `{to}` is unreachable from `{from}`")]
    NotStronglyConnected { from: String, to: String },
    #[error("bound below distance: D({from}, {to}) = {bound} < {distance}")]
    BoundBelowDistance {
        from: String,
        to: String,
        bound: u64,
        distance: u32,
    },
    #[error("bound on diagonal pair ({0}, {0})")]
    DiagonalBound(String),
    #[error("bound D({from}, {to}) must be a positive integer")]
    NonPositiveBound { from: String, to: String },
    #[error("duplicate bound on ({from}, {to})")]
    DuplicateBound { from: String, to: String },
    #[error("undirected instance needs antiparallel edge pairs; ({from}, {to}) has no twin")]
    NotSymmetric { from: String, to: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A realization instance: strongly connected graph, period and sparse upper
/// bounds on fastest-journey durations. Absent bounds are unconstrained.
///
/// Bounds at or above `(d̂ - 1)·Δ + 1` can never be violated and are dropped
/// during construction, so equal instances have equal bound maps.
///
/// An undirected instance is stored over its bidirected graph; its labelings
/// must give both directions of an edge the same label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    graph: DiGraph,
    delta: u32,
    bounds: BTreeMap<(VertexIx, VertexIx), u32>,
    dist: DistanceTable,
    undirected: bool,
}

impl Instance {
    pub fn new(
        graph: DiGraph,
        delta: u32,
        bounds: impl IntoIterator<Item = ((VertexIx, VertexIx), u64)>,
    ) -> Result<Self, InstanceError> {
        Self::build(graph, delta, bounds, false)
    }

    /// An undirected instance over a symmetric graph.
    pub fn new_undirected(
        graph: DiGraph,
        delta: u32,
        bounds: impl IntoIterator<Item = ((VertexIx, VertexIx), u64)>,
    ) -> Result<Self, InstanceError> {
        Self::build(graph, delta, bounds, true)
    }

    fn build(
        graph: DiGraph,
        delta: u32,
        bounds: impl IntoIterator<Item = ((VertexIx, VertexIx), u64)>,
        undirected: bool,
    ) -> Result<Self, InstanceError> {
        if delta == 0 {
            return Err(InstanceError::ZeroPeriod);
        }
        if let Some((u, v)) = graph.first_unreachable_pair() {
            return Err(InstanceError::NotStronglyConnected {
                from: graph.name(u).to_string(),
                to: graph.name(v).to_string(),
            });
        }
        if undirected {
            if let Some(&(u, v)) = graph.edges().iter().find(|&&(u, v)| graph.find_edge(v, u).is_none()) {
                return Err(InstanceError::NotSymmetric {
                    from: graph.name(v).to_string(),
                    to: graph.name(u).to_string(),
                });
            }
        }
        let dist = static_distances(&graph)?;
        let mut map = BTreeMap::new();
        let mut seen = std::collections::BTreeSet::new();
        for ((u, v), d) in bounds {
            let (from, to) = (graph.name(u).to_string(), graph.name(v).to_string());
            if u == v {
                return Err(InstanceError::DiagonalBound(from));
            }
            if d == 0 {
                return Err(InstanceError::NonPositiveBound { from, to });
            }
            if !seen.insert((u, v)) {
                return Err(InstanceError::DuplicateBound { from, to });
            }
            let hops = dist.get(u, v);
            if d < u64::from(hops) {
                return Err(InstanceError::BoundBelowDistance {
                    from,
                    to,
                    bound: d,
                    distance: hops,
                });
            }
            if d < no_restriction_threshold(hops, delta) {
                map.insert((u, v), d as u32);
            }
        }
        Ok(Self {
            graph,
            delta,
            bounds: map,
            dist,
            undirected,
        })
    }

    pub fn graph(&self) -> &DiGraph {
        &self.graph
    }

    pub fn delta(&self) -> u32 {
        self.delta
    }

    pub fn is_undirected(&self) -> bool {
        self.undirected
    }

    pub fn bounds(&self) -> &BTreeMap<(VertexIx, VertexIx), u32> {
        &self.bounds
    }

    pub fn bound(&self, u: VertexIx, v: VertexIx) -> Option<u32> {
        self.bounds.get(&(u, v)).copied()
    }

    pub fn distances(&self) -> &DistanceTable {
        &self.dist
    }

    pub fn distance(&self, u: VertexIx, v: VertexIx) -> u32 {
        self.dist.get(u, v)
    }

    /// Same graph and bounds under another period (bounds are re-canonicalized).
    pub fn with_delta(&self, delta: u32) -> Result<Self, InstanceError> {
        let bounds = self.bounds.iter().map(|(&k, &d)| (k, u64::from(d)));
        Self::build(self.graph.clone(), delta, bounds, self.undirected)
    }

    /// Bounds listed by `(from id, to id)` in lexicographic order.
    pub fn bounds_by_name(&self) -> Vec<((VertexIx, VertexIx), u32)> {
        let mut out: Vec<_> = self.bounds.iter().map(|(&k, &d)| (k, d)).collect();
        out.sort_by(|a, b| {
            let key = |((u, v), _): &((VertexIx, VertexIx), u32)| (self.graph.name(*u), self.graph.name(*v));
            key(a).cmp(&key(b))
        });
        out
    }
}

/// The smallest bound that no labeling can violate: `(d̂ - 1)·Δ + 1`.
pub fn no_restriction_threshold(hops: u32, delta: u32) -> u64 {
    u64::from(hops.saturating_sub(1)) * u64::from(delta) + 1
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LabelingError {
    #[error("label {label} on edge #{edge} is outside 0..{delta}")]
    OutOfRange { edge: EdgeIx, label: u32, delta: u32 },
    #[error("shift {shift} is outside 0..{delta}")]
    ShiftOutOfRange { shift: u32, delta: u32 },
    #[error("labeling has period {labeling} but the instance has period {instance}")]
    PeriodMismatch { labeling: u32, instance: u32 },
    #[error("labeling covers {labeling} edges but the graph has {graph}")]
    DomainMismatch { labeling: usize, graph: usize },
    #[error("undirected instance needs equal labels on both directions of {0}")]
    Asymmetric(String),
}

/// A Δ-periodic labeling: one timestamp in `0..Δ` per edge, indexed like the
/// edges of the graph it was built for.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Labeling {
    delta: u32,
    labels: Vec<u32>,
}

impl Labeling {
    pub fn new(delta: u32, labels: Vec<u32>) -> Result<Self, LabelingError> {
        if let Some((edge, &label)) = labels.iter().enumerate().find(|(_, &l)| l >= delta) {
            return Err(LabelingError::OutOfRange { edge, label, delta });
        }
        Ok(Self { delta, labels })
    }

    pub fn constant(delta: u32, edges: usize, value: u32) -> Self {
        Self::new(delta, vec![value; edges]).expect("constant label in range")
    }

    pub fn delta(&self) -> u32 {
        self.delta
    }

    pub fn get(&self, e: EdgeIx) -> u32 {
        self.labels[e]
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Every label moved by `c` modulo Δ.
    pub fn shift(&self, c: u32) -> Result<Self, LabelingError> {
        if c >= self.delta {
            return Err(LabelingError::ShiftOutOfRange {
                shift: c,
                delta: self.delta,
            });
        }
        let labels = self.labels.iter().map(|&l| (l + c) % self.delta).collect();
        Ok(Self {
            delta: self.delta,
            labels,
        })
    }

    /// Checks that this labeling belongs to `inst`.
    pub fn check_against(&self, inst: &Instance) -> Result<(), LabelingError> {
        if self.delta != inst.delta() {
            return Err(LabelingError::PeriodMismatch {
                labeling: self.delta,
                instance: inst.delta(),
            });
        }
        if self.labels.len() != inst.graph().edge_count() {
            return Err(LabelingError::DomainMismatch {
                labeling: self.labels.len(),
                graph: inst.graph().edge_count(),
            });
        }
        if inst.is_undirected() {
            let g = inst.graph();
            for e in 0..g.edge_count() {
                let r = g.reverse(e).expect("undirected graphs are symmetric");
                if self.labels[e] != self.labels[r] {
                    return Err(LabelingError::Asymmetric(g.edge_label(e)));
                }
            }
        }
        Ok(())
    }
}

/// Minimum slack over the present bounds, with the per-pair values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlackReport {
    /// `None` when the instance has no bounds at all.
    pub k_min: Option<u32>,
    pub per_pair: Vec<((VertexIx, VertexIx), u32)>,
}

pub fn slack(inst: &Instance) -> SlackReport {
    let per_pair: Vec<_> = inst
        .bounds_by_name()
        .into_iter()
        .map(|((u, v), d)| ((u, v), d - inst.distance(u, v)))
        .collect();
    SlackReport {
        k_min: per_pair.iter().map(|&(_, s)| s).min(),
        per_pair,
    }
}
