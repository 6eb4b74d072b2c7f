//! Journeys in Δ-periodic temporal graphs.
//!
//! Edge `e` can be entered at every time `λ(e) + iΔ` and the traversal takes
//! one unit. Journeys are strict: departure times increase along the path.
//! The duration of a journey is its last departure minus its first departure
//! plus one.
//!
//! The engine computes earliest arrivals by label-correcting relaxation over
//! walks. That suffices for simple paths: every edge is FIFO (entering
//! later never arrives earlier) and waiting is free, so revisiting a vertex
//! never arrives before the first visit did, and the predecessor tree of an
//! earliest-arrival run consists of simple paths. The oracle in this module
//! enumerates simple paths directly and is property-tested against the engine.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use rayon::prelude::*;
use thiserror::Error;

use crate::graph::{DiGraph, EdgeIx, VertexIx};
use crate::instance::{Instance, Labeling, LabelingError};

pub const UNREACHABLE: u64 = u64::MAX;

/// Anything that can answer "what is the label of edge `e`", possibly "not
/// decided yet". Undecided edges are treated as departing the moment they
/// are reached, which makes every computed time a lower bound.
pub trait LabelSource {
    fn label(&self, e: EdgeIx) -> Option<u32>;
}

impl LabelSource for Labeling {
    fn label(&self, e: EdgeIx) -> Option<u32> {
        Some(self.get(e))
    }
}

impl LabelSource for [Option<u32>] {
    fn label(&self, e: EdgeIx) -> Option<u32> {
        self[e]
    }
}

/// Earliest time `>= t` at which an edge with label `label` departs.
#[inline]
pub fn next_departure(t: u64, label: u32, delta: u32) -> u64 {
    let delta = u64::from(delta);
    let wait = (u64::from(label) + delta - t % delta) % delta;
    t + wait
}

/// Result of one earliest-arrival run.
#[derive(Debug, Clone)]
pub struct Arrivals {
    pub time: Vec<u64>,
    /// Edge used to reach each vertex and its departure time.
    pred: Vec<Option<(EdgeIx, u64)>>,
}

impl Arrivals {
    /// The journey to `target` in the predecessor tree.
    pub fn journey(&self, g: &DiGraph, target: VertexIx) -> TemporalPath {
        let mut steps = Vec::new();
        let mut cur = target;
        while let Some((e, t)) = self.pred[cur] {
            let (u, v) = g.edge(e);
            steps.push(Step { from: u, to: v, t });
            cur = u;
        }
        steps.reverse();
        TemporalPath { steps }
    }
}

pub(crate) fn relax<L: LabelSource + ?Sized>(
    g: &DiGraph,
    labels: &L,
    delta: u32,
    source: VertexIx,
    start: u64,
) -> Arrivals {
    let n = g.vertex_count();
    let mut time = vec![UNREACHABLE; n];
    let mut pred = vec![None; n];
    let mut done = vec![false; n];
    time[source] = start;
    // Equal times pop in lexicographic id order.
    let mut heap = BinaryHeap::new();
    heap.push(Reverse((start, g.rank(source), source)));
    while let Some(Reverse((t, _, x))) = heap.pop() {
        if done[x] {
            continue;
        }
        done[x] = true;
        for &e in g.out_edges(x) {
            let y = g.edge(e).1;
            if done[y] {
                continue;
            }
            let dep = match labels.label(e) {
                Some(l) => next_departure(t, l, delta),
                None => t,
            };
            if dep + 1 < time[y] {
                time[y] = dep + 1;
                pred[y] = Some((e, dep));
                heap.push(Reverse((dep + 1, g.rank(y), y)));
            }
        }
    }
    Arrivals { time, pred }
}

/// Earliest absolute arrival at every vertex when leaving `source` no earlier
/// than `start`.
pub fn earliest_arrival(g: &DiGraph, lab: &Labeling, source: VertexIx, start: u64) -> Vec<u64> {
    relax(g, lab, lab.delta(), source, start).time
}

/// Minimum over start residues of `arrival - start`, for every target.
pub(crate) fn durations_from<L: LabelSource + ?Sized>(
    g: &DiGraph,
    labels: &L,
    delta: u32,
    source: VertexIx,
) -> Vec<u64> {
    let mut best = vec![UNREACHABLE; g.vertex_count()];
    for s in 0..u64::from(delta) {
        let arr = relax(g, labels, delta, source, s);
        for (b, &t) in best.iter_mut().zip(&arr.time) {
            if t != UNREACHABLE {
                *b = (*b).min(t - s);
            }
        }
    }
    best[source] = 0;
    best
}

/// Duration of a fastest journey from `u` to `v`.
pub fn fastest_duration(g: &DiGraph, lab: &Labeling, u: VertexIx, v: VertexIx) -> u64 {
    durations_from(g, lab, lab.delta(), u)[v]
}

/// A fastest journey from `u` to `v`; ties go to the earliest start residue.
pub fn fastest_path(g: &DiGraph, lab: &Labeling, u: VertexIx, v: VertexIx) -> TemporalPath {
    let mut best: Option<(u64, TemporalPath)> = None;
    for s in 0..u64::from(lab.delta()) {
        let arr = relax(g, lab, lab.delta(), u, s);
        if arr.time[v] == UNREACHABLE {
            continue;
        }
        let d = arr.time[v] - s;
        if best.as_ref().is_none_or(|(bd, _)| d < *bd) {
            best = Some((d, arr.journey(g, v)));
        }
    }
    best.map(|(_, p)| p).unwrap_or_default()
}

/// One step of a journey: traverse `(from, to)` departing at absolute time `t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Step {
    pub from: VertexIx,
    pub to: VertexIx,
    pub t: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TemporalPath {
    pub steps: Vec<Step>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PathError {
    #[error("empty path")]
    Empty,
    #[error("step {0} is not an edge of the graph")]
    NotAnEdge(usize),
    #[error("step {0} does not continue from the previous step")]
    Disconnected(usize),
    #[error("path revisits a vertex at step {0}")]
    RepeatedVertex(usize),
    #[error("departure times must strictly increase (step {0})")]
    NotStrict(usize),
    #[error("step {0} departs at a time that is not a label occurrence")]
    OffSchedule(usize),
}

impl TemporalPath {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Last departure minus first departure plus one; zero for the empty path.
    pub fn duration(&self) -> u64 {
        match (self.steps.first(), self.steps.last()) {
            (Some(a), Some(b)) => b.t - a.t + 1,
            _ => 0,
        }
    }

    pub fn validate(&self, g: &DiGraph, lab: &Labeling) -> Result<(), PathError> {
        if self.steps.is_empty() {
            return Err(PathError::Empty);
        }
        let mut seen = vec![false; g.vertex_count()];
        seen[self.steps[0].from] = true;
        for (i, s) in self.steps.iter().enumerate() {
            let e = g.find_edge(s.from, s.to).ok_or(PathError::NotAnEdge(i))?;
            if i > 0 {
                let prev = self.steps[i - 1];
                if prev.to != s.from {
                    return Err(PathError::Disconnected(i));
                }
                if prev.t >= s.t {
                    return Err(PathError::NotStrict(i));
                }
            }
            if seen[s.to] {
                return Err(PathError::RepeatedVertex(i));
            }
            seen[s.to] = true;
            if s.t % u64::from(lab.delta()) != u64::from(lab.get(e)) {
                return Err(PathError::OffSchedule(i));
            }
        }
        Ok(())
    }

    pub fn to_json(&self, g: &DiGraph) -> serde_json::Value {
        serde_json::Value::Array(
            self.steps
                .iter()
                .map(|s| serde_json::json!({"from": g.name(s.from), "to": g.name(s.to), "t": s.t}))
                .collect(),
        )
    }
}

/// Total waiting at interior vertices of a valid journey.
pub fn waiting_time(g: &DiGraph, lab: &Labeling, path: &TemporalPath) -> Result<u64, PathError> {
    path.validate(g, lab)?;
    Ok(path.steps.windows(2).map(|w| w[1].t - w[0].t - 1).sum())
}

/// Fastest durations for all ordered pairs; the diagonal is zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DurationMatrix {
    n: usize,
    dur: Vec<u64>,
}

impl DurationMatrix {
    pub fn get(&self, u: VertexIx, v: VertexIx) -> u64 {
        self.dur[u * self.n + v]
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    fn rows(&self) -> impl Iterator<Item = &[u64]> {
        self.dur.chunks(self.n.max(1))
    }

    /// Header row of vertex ids, then one row per source.
    pub fn to_csv(&self, g: &DiGraph) -> String {
        render_csv(g, self.rows())
    }

    pub fn to_json(&self, g: &DiGraph) -> serde_json::Value {
        serde_json::json!({
            "vertices": g.names(),
            "durations": self.rows().collect::<Vec<_>>(),
        })
    }
}

pub(crate) fn render_csv<'a>(g: &DiGraph, rows: impl Iterator<Item = &'a [u64]>) -> String {
    let mut out = String::from("from");
    for n in g.names() {
        out.push(',');
        out.push_str(n);
    }
    out.push('\n');
    for (u, row) in rows.enumerate() {
        out.push_str(g.name(u));
        for d in row {
            out.push(',');
            out.push_str(&d.to_string());
        }
        out.push('\n');
    }
    out
}

/// Static distance table rendered like a duration matrix.
pub fn static_distances_csv(inst: &Instance) -> String {
    let g = inst.graph();
    let n = g.vertex_count();
    let rows: Vec<Vec<u64>> = (0..n)
        .map(|u| (0..n).map(|v| u64::from(inst.distance(u, v))).collect())
        .collect();
    render_csv(g, rows.iter().map(Vec::as_slice))
}

pub fn duration_matrix(g: &DiGraph, lab: &Labeling) -> DurationMatrix {
    let n = g.vertex_count();
    let rows: Vec<Vec<u64>> = (0..n)
        .into_par_iter()
        .map(|u| durations_from(g, lab, lab.delta(), u))
        .collect();
    DurationMatrix {
        n,
        dur: rows.into_iter().flatten().collect(),
    }
}

/// A bounded pair whose fastest journey is too slow.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub from: VertexIx,
    pub to: VertexIx,
    pub required: u32,
    pub achieved: u64,
    pub witness: TemporalPath,
}

impl Violation {
    pub fn to_json(&self, g: &DiGraph) -> serde_json::Value {
        serde_json::json!({
            "from": g.name(self.from),
            "to": g.name(self.to),
            "required": self.required,
            "achieved": self.achieved,
            "witness": self.witness.to_json(g),
        })
    }
}

/// All bounded pairs violated by `lab`, ordered by `(from id, to id)`.
pub fn verify_labeling(inst: &Instance, lab: &Labeling) -> Result<Vec<Violation>, LabelingError> {
    lab.check_against(inst)?;
    let g = inst.graph();
    let mut sources: Vec<VertexIx> = inst.bounds().keys().map(|&(u, _)| u).collect();
    sources.dedup();
    let rows: Vec<(VertexIx, Vec<u64>)> = sources
        .into_par_iter()
        .map(|u| (u, durations_from(g, lab, lab.delta(), u)))
        .collect();
    let mut out = Vec::new();
    for (u, row) in rows {
        for (&(_, v), &d) in inst.bounds().range((u, 0)..(u + 1, 0)) {
            if row[v] > u64::from(d) {
                out.push(Violation {
                    from: u,
                    to: v,
                    required: d,
                    achieved: row[v],
                    witness: fastest_path(g, lab, u, v),
                });
            }
        }
    }
    out.sort_by(|a, b| (g.name(a.from), g.name(a.to)).cmp(&(g.name(b.from), g.name(b.to))));
    Ok(out)
}

pub fn is_valid(inst: &Instance, lab: &Labeling) -> bool {
    verify_labeling(inst, lab).is_ok_and(|v| v.is_empty())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("path enumeration budget of {0} steps exceeded")]
pub struct OracleBudgetExceeded(pub u64);

/// Exhaustive reference: fastest durations from `source` to every vertex by
/// enumerating all simple paths. Each path departs at its first label and
/// takes every later edge at its next occurrence.
pub fn oracle_durations_from(
    g: &DiGraph,
    lab: &Labeling,
    source: VertexIx,
    budget: u64,
) -> Result<Vec<Option<u64>>, OracleBudgetExceeded> {
    struct Walk<'a> {
        g: &'a DiGraph,
        lab: &'a Labeling,
        on_path: Vec<bool>,
        best: Vec<Option<u64>>,
        steps: u64,
        budget: u64,
    }
    impl Walk<'_> {
        fn go(&mut self, x: VertexIx, first: u64, last: u64) -> Result<(), OracleBudgetExceeded> {
            for &e in self.g.out_edges(x) {
                let y = self.g.edge(e).1;
                if self.on_path[y] {
                    continue;
                }
                self.steps += 1;
                if self.steps > self.budget {
                    return Err(OracleBudgetExceeded(self.budget));
                }
                let dep = next_departure(last + 1, self.lab.get(e), self.lab.delta());
                let d = dep - first + 1;
                if self.best[y].is_none_or(|b| d < b) {
                    self.best[y] = Some(d);
                }
                self.on_path[y] = true;
                self.go(y, first, dep)?;
                self.on_path[y] = false;
            }
            Ok(())
        }
    }
    let mut w = Walk {
        g,
        lab,
        on_path: vec![false; g.vertex_count()],
        best: vec![None; g.vertex_count()],
        steps: 0,
        budget,
    };
    w.on_path[source] = true;
    for &e in g.out_edges(source) {
        let y = g.edge(e).1;
        let dep = u64::from(lab.get(e));
        w.steps += 1;
        if w.best[y].is_none_or(|b| 1 < b) {
            w.best[y] = Some(1);
        }
        w.on_path[y] = true;
        w.go(y, dep, dep)?;
        w.on_path[y] = false;
    }
    w.best[source] = Some(0);
    Ok(w.best)
}

/// Oracle duration for a single pair.
pub fn fastest_duration_oracle(
    g: &DiGraph,
    lab: &Labeling,
    u: VertexIx,
    v: VertexIx,
    budget: u64,
) -> Result<u64, OracleBudgetExceeded> {
    Ok(oracle_durations_from(g, lab, u, budget)?[v].unwrap_or(UNREACHABLE))
}
