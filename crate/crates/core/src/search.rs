//! Complete backtracking search over labelings.
//!
//! Variables are edges, or antiparallel edge pairs for undirected instances.
//! After each assignment the bounds that can see the new edges are
//! re-checked against an optimistic lower bound: unassigned edges depart the
//! moment they are reached. The bound never exceeds the duration of any
//! completion, so pruning is safe.
//!
//! On a bidirected tree every bounded pair has one simple path and the lower
//! bound is read off that path directly. Elsewhere it comes from the
//! earliest-arrival engine run over the partial labeling.
//!
//! Parallel runs split the tree at a fixed depth and merge the subtrees in
//! order, so outcomes, witnesses and node counts match the sequential run.

use std::ops::ControlFlow;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::certificate::{BudgetKind, BudgetReport, Certificate, Refutation, Route, Verdict};
use crate::graph::{classify, path_edges, DiGraph, EdgeIx, RootedTree, TopologyClass, VertexIx};
use crate::instance::{Instance, Labeling, LabelingError};
use crate::temporal::durations_from;

/// Subtrees are cut where the product of the leading domains reaches this.
const SPLIT_WIDTH: u64 = 512;
const CLOCK_EVERY: u64 = 1024;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchConfig {
    /// Give up after this many assignments.
    pub max_nodes: Option<u64>,
    pub timeout: Option<Duration>,
    /// Fix the first variable to 0. Every shift class of solutions keeps
    /// exactly one member. Ignored when labels are fixed up front.
    pub symmetry_breaking: bool,
    /// Worker threads; `None` uses the ambient rayon pool.
    pub threads: Option<usize>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            max_nodes: None,
            timeout: None,
            symmetry_breaking: true,
            threads: None,
        }
    }
}

impl SearchConfig {
    pub fn with_max_nodes(mut self, n: u64) -> Self {
        self.max_nodes = Some(n);
        self
    }

    pub fn without_symmetry(mut self) -> Self {
        self.symmetry_breaking = false;
        self
    }

    pub fn with_threads(mut self, n: usize) -> Self {
        self.threads = Some(n);
        self
    }
}

/// Outcome of checking a partial labeling.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Pruning {
    Open,
    /// Some completion-independent lower bound already exceeds a bound.
    Prune {
        from: VertexIx,
        to: VertexIx,
        lower_bound: u64,
        bound: u32,
    },
}

/// Lower-bounds every bounded pair under the partial labeling `partial`
/// (one entry per edge, `None` = unassigned) and reports the first violated
/// bound in `(from, to)` index order.
pub fn propagate(inst: &Instance, partial: &[Option<u32>]) -> Pruning {
    let g = inst.graph();
    let mut from = None;
    let mut row = Vec::new();
    for (&(u, v), &d) in inst.bounds() {
        if from != Some(u) {
            row = durations_from(g, partial, inst.delta(), u);
            from = Some(u);
        }
        if row[v] > u64::from(d) {
            return Pruning::Prune {
                from: u,
                to: v,
                lower_bound: row[v],
                bound: d,
            };
        }
    }
    Pruning::Open
}

struct PathBound {
    d: u64,
    path: Vec<EdgeIx>,
}

struct SourceBounds {
    source: VertexIx,
    targets: Vec<(VertexIx, u64)>,
}

enum Checker {
    Tree {
        bounds: Vec<PathBound>,
        by_edge: Vec<Vec<usize>>,
    },
    General {
        sources: Vec<SourceBounds>,
        by_edge: Vec<Vec<usize>>,
    },
}

/// Minimum duration of the fixed path given the labels assigned so far.
/// Between labeled positions `p < q` the departures differ by at least
/// `q - p` and by `λq - λp` modulo Δ.
fn path_lower_bound(path: &[EdgeIx], labels: &[Option<u32>], delta: u32) -> u64 {
    let delta = i64::from(delta);
    let mut lb = path.len() as i64;
    let mut prev: Option<(usize, u32)> = None;
    for (q, &e) in path.iter().enumerate() {
        if let Some(l) = labels[e] {
            if let Some((p, lp)) = prev {
                lb += (i64::from(l) - i64::from(lp) - (q - p) as i64).rem_euclid(delta);
            }
            prev = Some((q, l));
        }
    }
    lb as u64
}

/// Static data shared by all workers.
struct Model<'a> {
    g: &'a DiGraph,
    delta: u32,
    vars: Vec<Vec<EdgeIx>>,
    order: Vec<usize>,
    base: Vec<Option<u32>>,
    checker: Checker,
    first_fixed_to_zero: bool,
}

impl<'a> Model<'a> {
    fn new(inst: &'a Instance, fixed: Option<&[Option<u32>]>, symmetry: bool) -> Result<Self, LabelingError> {
        let g = inst.graph();
        let m = g.edge_count();
        let delta = inst.delta();
        let mut base = vec![None; m];
        if let Some(fixed) = fixed {
            if fixed.len() != m {
                return Err(LabelingError::DomainMismatch {
                    labeling: fixed.len(),
                    graph: m,
                });
            }
            for (e, &l) in fixed.iter().enumerate() {
                if let Some(label) = l {
                    if label >= delta {
                        return Err(LabelingError::OutOfRange { edge: e, label, delta });
                    }
                }
                base[e] = l;
            }
        }

        let mut vars: Vec<Vec<EdgeIx>> = Vec::new();
        if inst.is_undirected() {
            for e in 0..m {
                let r = g.reverse(e).expect("undirected graphs are symmetric");
                if e < r {
                    match (base[e], base[r]) {
                        (Some(a), Some(b)) if a != b => return Err(LabelingError::Asymmetric(g.edge_label(e))),
                        (Some(a), None) => base[r] = Some(a),
                        (None, Some(b)) => base[e] = Some(b),
                        _ => {}
                    }
                    vars.push(vec![e, r]);
                }
            }
        } else {
            vars.extend((0..m).map(|e| vec![e]));
        }

        let checker = Self::checker(inst);
        let order = Self::order(g, &vars, &base, &checker);
        let any_fixed = base.iter().any(Option::is_some);
        Ok(Self {
            g,
            delta,
            vars,
            order,
            base,
            checker,
            first_fixed_to_zero: symmetry && !any_fixed,
        })
    }

    fn checker(inst: &Instance) -> Checker {
        let g = inst.graph();
        let m = g.edge_count();
        if let TopologyClass::BidirectedTree { root } = classify(g) {
            let tree = RootedTree::new(g, root);
            let mut bounds = Vec::new();
            let mut by_edge = vec![Vec::new(); m];
            for (&(u, v), &d) in inst.bounds() {
                let path = path_edges(g, &tree.path(u, v));
                for &e in &path {
                    by_edge[e].push(bounds.len());
                }
                bounds.push(PathBound { d: u64::from(d), path });
            }
            return Checker::Tree { bounds, by_edge };
        }
        let mut sources: Vec<SourceBounds> = Vec::new();
        for (&(u, v), &d) in inst.bounds() {
            match sources.last_mut() {
                Some(s) if s.source == u => s.targets.push((v, u64::from(d))),
                _ => sources.push(SourceBounds {
                    source: u,
                    targets: vec![(v, u64::from(d))],
                }),
            }
        }
        let mut by_edge = vec![Vec::new(); m];
        for (e, &(x, y)) in g.edges().iter().enumerate() {
            for (si, s) in sources.iter().enumerate() {
                let relevant = s
                    .targets
                    .iter()
                    .any(|&(v, d)| u64::from(inst.distance(s.source, x)) + 1 + u64::from(inst.distance(y, v)) <= d);
                if relevant {
                    by_edge[e].push(si);
                }
            }
        }
        Checker::General { sources, by_edge }
    }

    /// Bound groups each edge takes part in: bound indices on trees, source
    /// indices otherwise.
    fn groups_of(checker: &Checker, e: EdgeIx) -> &[usize] {
        match checker {
            Checker::Tree { by_edge, .. } | Checker::General { by_edge, .. } => &by_edge[e],
        }
    }

    /// Most constrained first, then the variable sharing the most bounds with
    /// those already placed, ties by total bound count and then edge id.
    fn order(g: &DiGraph, vars: &[Vec<EdgeIx>], base: &[Option<u32>], checker: &Checker) -> Vec<usize> {
        let groups: Vec<Vec<usize>> = vars
            .iter()
            .map(|edges| {
                let mut gs: Vec<usize> = edges
                    .iter()
                    .flat_map(|&e| Self::groups_of(checker, e).iter().copied())
                    .collect();
                gs.sort_unstable();
                gs.dedup();
                gs
            })
            .collect();
        let n_groups = groups.iter().flatten().max().map_or(0, |&m| m + 1);
        let mut members = vec![Vec::new(); n_groups];
        for (v, gs) in groups.iter().enumerate() {
            for &b in gs {
                members[b].push(v);
            }
        }
        let key = |v: usize| {
            let e = *vars[v]
                .iter()
                .min_by_key(|&&e| (g.name(g.edge(e).0), g.name(g.edge(e).1)))
                .unwrap();
            (g.name(g.edge(e).0), g.name(g.edge(e).1))
        };
        let mut shared = vec![0usize; vars.len()];
        let mut placed = vec![false; vars.len()];
        let place = |v: usize, placed: &mut Vec<bool>, shared: &mut Vec<usize>| {
            placed[v] = true;
            for &b in &groups[v] {
                for &w in &members[b] {
                    shared[w] += 1;
                }
            }
        };
        for v in 0..vars.len() {
            if base[vars[v][0]].is_some() {
                place(v, &mut placed, &mut shared);
            }
        }
        let mut order = Vec::new();
        while let Some(v) = (0..vars.len()).filter(|&v| !placed[v]).min_by(|&a, &b| {
            shared[b]
                .cmp(&shared[a])
                .then(groups[b].len().cmp(&groups[a].len()))
                .then(key(a).cmp(&key(b)))
        }) {
            place(v, &mut placed, &mut shared);
            order.push(v);
        }
        order
    }

    /// Re-checks every bound that can see edge `e`.
    fn consistent_after(&self, e: EdgeIx, labels: &[Option<u32>]) -> bool {
        match &self.checker {
            Checker::Tree { bounds, by_edge } => by_edge[e]
                .iter()
                .all(|&b| path_lower_bound(&bounds[b].path, labels, self.delta) <= bounds[b].d),
            Checker::General { sources, by_edge } => by_edge[e].iter().all(|&si| self.source_ok(&sources[si], labels)),
        }
    }

    fn source_ok(&self, s: &SourceBounds, labels: &[Option<u32>]) -> bool {
        let row = durations_from(self.g, labels, self.delta, s.source);
        s.targets.iter().all(|&(v, d)| row[v] <= d)
    }

    fn consistent_all(&self, labels: &[Option<u32>]) -> bool {
        match &self.checker {
            Checker::Tree { bounds, .. } => bounds
                .iter()
                .all(|b| path_lower_bound(&b.path, labels, self.delta) <= b.d),
            Checker::General { sources, .. } => sources.iter().all(|s| self.source_ok(s, labels)),
        }
    }

    fn domain(&self, depth: usize) -> std::ops::Range<u32> {
        if depth == 0 && self.first_fixed_to_zero {
            0..1
        } else {
            0..self.delta
        }
    }

    fn split_depth(&self) -> usize {
        let mut width = 1u64;
        let mut depth = 0;
        while depth < self.order.len() && width < SPLIT_WIDTH {
            width = width.saturating_mul(self.domain(depth).len() as u64);
            depth += 1;
        }
        depth
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Stop {
    Budget(BudgetKind),
    Cancelled,
    Visitor,
}

struct Worker<'m, 'a> {
    m: &'m Model<'a>,
    labels: Vec<Option<u32>>,
    nodes: u64,
    cap: u64,
    deadline: Option<Instant>,
    cancel: Option<(&'m AtomicUsize, usize)>,
}

impl Worker<'_, '_> {
    fn tick(&mut self) -> Result<(), Stop> {
        self.nodes += 1;
        if self.nodes > self.cap {
            return Err(Stop::Budget(BudgetKind::Nodes));
        }
        if self.nodes.is_multiple_of(CLOCK_EVERY) {
            if let Some((flag, me)) = self.cancel {
                if flag.load(Ordering::Relaxed) < me {
                    return Err(Stop::Cancelled);
                }
            }
            if self.deadline.is_some_and(|d| Instant::now() >= d) {
                return Err(Stop::Budget(BudgetKind::Time));
            }
        }
        Ok(())
    }

    fn set(&mut self, var: usize, value: Option<u32>) {
        for &e in &self.m.vars[var] {
            self.labels[e] = value;
        }
    }

    /// Depth-first over `order[depth..limit]`; `visit` sees each consistent
    /// assignment of the first `limit` variables.
    fn dfs(
        &mut self,
        depth: usize,
        limit: usize,
        visit: &mut dyn FnMut(&[Option<u32>]) -> ControlFlow<()>,
    ) -> Result<(), Stop> {
        if depth == limit {
            return match visit(&self.labels) {
                ControlFlow::Continue(()) => Ok(()),
                ControlFlow::Break(()) => Err(Stop::Visitor),
            };
        }
        let var = self.m.order[depth];
        for value in self.m.domain(depth) {
            self.tick()?;
            self.set(var, Some(value));
            let ok = self.m.vars[var]
                .iter()
                .all(|&e| self.m.consistent_after(e, &self.labels));
            if ok {
                if let Err(stop) = self.dfs(depth + 1, limit, visit) {
                    self.set(var, None);
                    return Err(stop);
                }
            }
        }
        self.set(var, None);
        Ok(())
    }
}

/// How a run ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunEnd {
    /// Every subtree was explored.
    Complete,
    /// A visitor asked to stop.
    Stopped,
    /// A budget ran out; only the subtrees before that point were kept.
    Budget(BudgetReport),
}

/// Per-subtree accumulators in search order, plus accounting.
#[derive(Debug, Clone)]
pub struct Run<A> {
    pub parts: Vec<A>,
    pub nodes: u64,
    pub end: RunEnd,
}

struct SubResult<A> {
    acc: A,
    nodes: u64,
    stop: Option<Stop>,
}

fn to_labeling(delta: u32, labels: &[Option<u32>]) -> Labeling {
    Labeling::new(delta, labels.iter().map(|l| l.expect("complete assignment")).collect())
        .expect("search labels are in range")
}

/// Runs the search, folding solutions into one accumulator per subtree.
/// `visit` may return `Break` to stop; subtrees after the stopping one are
/// discarded. The result is the same for every thread count.
pub fn search_fold<A, I, V>(
    inst: &Instance,
    cfg: &SearchConfig,
    fixed: Option<&[Option<u32>]>,
    init: I,
    visit: V,
) -> Result<Run<A>, LabelingError>
where
    A: Send,
    I: Fn() -> A + Sync,
    V: Fn(&mut A, &Labeling) -> ControlFlow<()> + Sync,
{
    let model = Model::new(inst, fixed, cfg.symmetry_breaking)?;
    let run = || run_model(&model, cfg, &init, &visit);
    Ok(match cfg.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map(|pool| pool.install(run))
            .unwrap_or_else(|_| run()),
        None => run(),
    })
}

fn run_model<A, I, V>(model: &Model, cfg: &SearchConfig, init: &I, visit: &V) -> Run<A>
where
    A: Send,
    I: Fn() -> A + Sync,
    V: Fn(&mut A, &Labeling) -> ControlFlow<()> + Sync,
{
    let cap = cfg.max_nodes.unwrap_or(u64::MAX);
    let deadline = cfg.timeout.map(|t| Instant::now() + t);
    let delta = model.delta;

    if !model.consistent_all(&model.base) {
        return Run {
            parts: Vec::new(),
            nodes: 0,
            end: RunEnd::Complete,
        };
    }

    let split = model.split_depth();
    let mut prefixes: Vec<Vec<Option<u32>>> = Vec::new();
    let mut head = Worker {
        m: model,
        labels: model.base.clone(),
        nodes: 0,
        cap,
        deadline,
        cancel: None,
    };
    let prefix_stop = head
        .dfs(0, split, &mut |labels| {
            prefixes.push(labels.to_vec());
            ControlFlow::Continue(())
        })
        .err();
    let mut nodes = head.nodes;
    if let Some(Stop::Budget(kind)) = prefix_stop {
        return Run {
            parts: Vec::new(),
            nodes: nodes.min(cap),
            end: RunEnd::Budget(BudgetReport {
                kind,
                nodes: nodes.min(cap),
            }),
        };
    }

    let winner = AtomicUsize::new(usize::MAX);
    let subs: Vec<Option<SubResult<A>>> = prefixes
        .into_par_iter()
        .enumerate()
        .map(|(i, labels)| {
            if winner.load(Ordering::Relaxed) < i {
                return None;
            }
            let mut w = Worker {
                m: model,
                labels,
                nodes: 0,
                cap,
                deadline,
                cancel: Some((&winner, i)),
            };
            let mut acc = init();
            let stop = w
                .dfs(split, model.order.len(), &mut |labels| {
                    visit(&mut acc, &to_labeling(delta, labels))
                })
                .err();
            if matches!(stop, Some(Stop::Visitor | Stop::Budget(_))) {
                winner.fetch_min(i, Ordering::Relaxed);
            }
            if stop == Some(Stop::Cancelled) {
                return None;
            }
            Some(SubResult {
                acc,
                nodes: w.nodes,
                stop,
            })
        })
        .collect();

    let mut parts = Vec::new();
    for sub in subs {
        let sub = sub.expect("subtrees before the first stop are never cancelled");
        nodes = nodes.saturating_add(sub.nodes);
        if nodes > cap {
            return Run {
                parts,
                nodes: cap,
                end: RunEnd::Budget(BudgetReport {
                    kind: BudgetKind::Nodes,
                    nodes: cap,
                }),
            };
        }
        match sub.stop {
            None => parts.push(sub.acc),
            Some(Stop::Visitor) => {
                parts.push(sub.acc);
                return Run {
                    parts,
                    nodes,
                    end: RunEnd::Stopped,
                };
            }
            Some(Stop::Budget(kind)) => {
                return Run {
                    parts,
                    nodes,
                    end: RunEnd::Budget(BudgetReport { kind, nodes }),
                };
            }
            Some(Stop::Cancelled) => unreachable!("cancelled subtrees are dropped"),
        }
    }
    Run {
        parts,
        nodes,
        end: RunEnd::Complete,
    }
}

/// Decides feasibility. With symmetry breaking the witness has its first
/// variable at 0.
pub fn solve_exact(inst: &Instance, cfg: &SearchConfig) -> Certificate {
    solve_exact_with(inst, cfg, None).expect("no fixed labels to reject")
}

/// Like [`solve_exact`], with some edge labels fixed in advance.
pub fn solve_exact_with(
    inst: &Instance,
    cfg: &SearchConfig,
    fixed: Option<&[Option<u32>]>,
) -> Result<Certificate, LabelingError> {
    let run = search_fold(
        inst,
        cfg,
        fixed,
        || None,
        |slot: &mut Option<Labeling>, lab| {
            *slot = Some(lab.clone());
            ControlFlow::Break(())
        },
    )?;
    let verdict = match run.end {
        RunEnd::Stopped => Verdict::Feasible(run.parts.into_iter().flatten().next().expect("stopped on a solution")),
        RunEnd::Complete => Verdict::Infeasible(Refutation::SearchExhausted),
        RunEnd::Budget(report) => Verdict::Unknown(report),
    };
    Ok(Certificate {
        verdict,
        route: Route::Search,
        nodes: run.nodes,
    })
}

/// All solutions in search order; `truncated` is set when a budget ran out,
/// in which case `solutions` holds only those found before the cut.
#[derive(Debug, Clone)]
pub struct Enumeration {
    pub solutions: Vec<Labeling>,
    pub nodes: u64,
    pub truncated: Option<BudgetReport>,
}

pub fn enumerate_solutions(inst: &Instance, cfg: &SearchConfig) -> Enumeration {
    enumerate_with(inst, cfg, None).expect("no fixed labels to reject")
}

pub fn enumerate_with(
    inst: &Instance,
    cfg: &SearchConfig,
    fixed: Option<&[Option<u32>]>,
) -> Result<Enumeration, LabelingError> {
    let run = search_fold(inst, cfg, fixed, Vec::new, |acc: &mut Vec<Labeling>, lab| {
        acc.push(lab.clone());
        ControlFlow::Continue(())
    })?;
    Ok(Enumeration {
        solutions: run.parts.into_iter().flatten().collect(),
        nodes: run.nodes,
        truncated: match run.end {
            RunEnd::Budget(r) => Some(r),
            _ => None,
        },
    })
}

/// Every labeling of `inst` by brute force, in lexicographic label order.
/// Reference implementation for tests; cost is Δ^|E|.
pub fn brute_force_solutions(inst: &Instance) -> Vec<Labeling> {
    let m = inst.graph().edge_count();
    let delta = inst.delta();
    let mut labels = vec![0u32; m];
    let mut out = Vec::new();
    loop {
        let lab = Labeling::new(delta, labels.clone()).expect("in range");
        if lab.check_against(inst).is_ok() && crate::temporal::is_valid(inst, &lab) {
            out.push(lab);
        }
        let mut i = m;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            labels[i] += 1;
            if labels[i] < delta {
                break;
            }
            labels[i] = 0;
        }
    }
}
