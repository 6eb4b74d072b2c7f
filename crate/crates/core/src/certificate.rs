//! Solver outcomes and their JSON form.

use std::fmt;

use crate::graph::{DiGraph, VertexIx};
use crate::instance::Labeling;
use crate::io::labeling_to_json;

/// Which procedure produced a certificate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Route {
    Delta1,
    Alg1,
    Bipartite,
    ExactTree,
    OddCycle,
    NecessaryFail,
    Search,
}

impl Route {
    pub fn as_str(self) -> &'static str {
        match self {
            Route::Delta1 => "delta1",
            Route::Alg1 => "alg1",
            Route::Bipartite => "bipartite",
            Route::ExactTree => "exact_tree",
            Route::OddCycle => "odd_cycle",
            Route::NecessaryFail => "necessary_fail",
            Route::Search => "search",
        }
    }
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Why an instance has no feasible labeling.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Refutation {
    /// The complete search tree was explored without a solution.
    SearchExhausted,
    /// Two branching vertices inside one zero-slack component whose doubled
    /// distance is not a multiple of Δ.
    BranchingPair { u: VertexIx, v: VertexIx, distance: u32 },
    /// Odd cycle in the auxiliary graph on directed edges; consecutive edges
    /// in the list are forced to differ in label, including last and first.
    AuxGraphOddCycle { cycle: Vec<(VertexIx, VertexIx)> },
    /// The zero-slack path from `u` to `v` cannot be travelled without
    /// waiting given the zero-slack paths checked before it.
    NoWaitConflict { u: VertexIx, v: VertexIx },
}

impl Refutation {
    pub fn code(&self) -> &'static str {
        match self {
            Refutation::SearchExhausted => "search_exhausted",
            Refutation::BranchingPair { .. } => "branching_pair_violation",
            Refutation::AuxGraphOddCycle { .. } => "aux_graph_odd_cycle",
            Refutation::NoWaitConflict { .. } => "no_wait_conflict",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BudgetKind {
    Nodes,
    Time,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BudgetReport {
    pub kind: BudgetKind,
    pub nodes: u64,
}

impl BudgetReport {
    pub fn code(&self) -> &'static str {
        match self.kind {
            BudgetKind::Nodes => "node_budget_exhausted",
            BudgetKind::Time => "time_budget_exhausted",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Feasible(Labeling),
    Infeasible(Refutation),
    Unknown(BudgetReport),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub verdict: Verdict,
    pub route: Route,
    /// Search nodes spent; zero for the polynomial routes.
    pub nodes: u64,
}

impl Certificate {
    pub fn feasible(lab: Labeling, route: Route) -> Self {
        Self {
            verdict: Verdict::Feasible(lab),
            route,
            nodes: 0,
        }
    }

    pub fn infeasible(why: Refutation, route: Route) -> Self {
        Self {
            verdict: Verdict::Infeasible(why),
            route,
            nodes: 0,
        }
    }

    pub fn status(&self) -> &'static str {
        match self.verdict {
            Verdict::Feasible(_) => "feasible",
            Verdict::Infeasible(_) => "infeasible",
            Verdict::Unknown(_) => "unknown",
        }
    }

    pub fn labeling(&self) -> Option<&Labeling> {
        match &self.verdict {
            Verdict::Feasible(lab) => Some(lab),
            _ => None,
        }
    }

    pub fn is_feasible(&self) -> bool {
        matches!(self.verdict, Verdict::Feasible(_))
    }

    pub fn is_infeasible(&self) -> bool {
        matches!(self.verdict, Verdict::Infeasible(_))
    }

    pub fn to_json(&self, g: &DiGraph) -> serde_json::Value {
        let mut out = serde_json::json!({
            "status": self.status(),
            "route": self.route.as_str(),
            "nodes": self.nodes,
        });
        let obj = out.as_object_mut().expect("object literal");
        match &self.verdict {
            Verdict::Feasible(lab) => {
                obj.insert("labeling".into(), labeling_to_json(g, lab));
            }
            Verdict::Infeasible(why) => {
                obj.insert("reason".into(), why.code().into());
                match why {
                    Refutation::SearchExhausted => {}
                    Refutation::BranchingPair { u, v, distance } => {
                        obj.insert(
                            "pair".into(),
                            serde_json::json!({"u": g.name(*u), "v": g.name(*v), "distance": distance}),
                        );
                    }
                    Refutation::NoWaitConflict { u, v } => {
                        obj.insert("pair".into(), serde_json::json!({"u": g.name(*u), "v": g.name(*v)}));
                    }
                    Refutation::AuxGraphOddCycle { cycle } => {
                        let edges: Vec<_> = cycle.iter().map(|&(a, b)| [g.name(a), g.name(b)]).collect();
                        obj.insert("cycle".into(), serde_json::json!(edges));
                    }
                }
            }
            Verdict::Unknown(report) => {
                obj.insert("reason".into(), report.code().into());
            }
        }
        out
    }
}
