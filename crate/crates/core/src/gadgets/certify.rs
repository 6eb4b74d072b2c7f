//! Exhaustive certification of gadget properties.

use std::ops::ControlFlow;

use serde_json::json;

use super::{even_subgadget, Gadget, GadgetError};
use crate::certificate::BudgetReport;
use crate::graph::VertexIx;
use crate::instance::{Instance, Labeling};
use crate::io::labeling_to_json;
use crate::search::{search_fold, RunEnd, SearchConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Check {
    Pass,
    Fail,
    /// The search budget ran out before the property was settled.
    Unknown,
}

impl Check {
    pub fn as_str(self) -> &'static str {
        match self {
            Check::Pass => "pass",
            Check::Fail => "fail",
            Check::Unknown => "unknown",
        }
    }

    fn and(self, other: Check) -> Check {
        match (self, other) {
            (Check::Fail, _) | (_, Check::Fail) => Check::Fail,
            (Check::Unknown, _) | (_, Check::Unknown) => Check::Unknown,
            _ => Check::Pass,
        }
    }
}

/// The three gadget properties: (a) some labeling is feasible, (b) every
/// feasible labeling is symmetric on the designated pair, (c) the
/// designated label takes every value in `0..Δ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GadgetReport {
    pub feasible: Check,
    pub symmetric: Check,
    pub shift_complete: Check,
    /// Solutions visited; with symmetry breaking, one per shift class.
    pub solutions: u64,
    /// Designated labels observed, closed under shifts when symmetry
    /// breaking is on.
    pub designated_values: Vec<u32>,
    pub nodes: u64,
    pub counterexample: Option<Labeling>,
    pub truncated: Option<BudgetReport>,
}

impl GadgetReport {
    pub fn overall(&self) -> Check {
        self.feasible.and(self.symmetric).and(self.shift_complete)
    }

    pub fn to_json(&self, g: &Gadget) -> serde_json::Value {
        let graph = g.instance.graph();
        json!({
            "status": self.overall().as_str(),
            "family": g.family.as_str(),
            "delta": g.delta,
            "k": g.k,
            "designated": [graph.name(g.designated.0), graph.name(g.designated.1)],
            "checks": {
                "feasible": self.feasible.as_str(),
                "symmetric": self.symmetric.as_str(),
                "shift_complete": self.shift_complete.as_str(),
            },
            "solutions": self.solutions,
            "designated_values": self.designated_values,
            "nodes": self.nodes,
            "counterexample": self.counterexample.as_ref().map(|l| labeling_to_json(graph, l)),
            "reason": self.truncated.map(|r| r.code()),
        })
    }
}

#[derive(Default)]
struct Tally {
    count: u64,
    seen: Vec<bool>,
    asymmetric: Option<Labeling>,
}

/// Enumerates the gadget's solutions and checks (a), (b) and (c). Stops at
/// the first asymmetric solution, which becomes the counterexample.
pub fn certify_gadget(g: &Gadget, cfg: &SearchConfig) -> GadgetReport {
    let delta = g.delta as usize;
    let (e, r) = g.designated_edges();
    let run = search_fold(
        &g.instance,
        cfg,
        None,
        || Tally {
            seen: vec![false; delta],
            ..Tally::default()
        },
        |t: &mut Tally, lab| {
            t.count += 1;
            if lab.get(e) != lab.get(r) {
                t.asymmetric = Some(lab.clone());
                return ControlFlow::Break(());
            }
            t.seen[lab.get(e) as usize] = true;
            ControlFlow::Continue(())
        },
    )
    .expect("no fixed labels");
    let mut count = 0;
    let mut seen = vec![false; delta];
    let mut asymmetric = None;
    for part in run.parts {
        count += part.count;
        for (s, p) in seen.iter_mut().zip(part.seen) {
            *s |= p;
        }
        if asymmetric.is_none() {
            asymmetric = part.asymmetric;
        }
    }
    if cfg.symmetry_breaking && seen.iter().any(|&s| s) {
        seen.fill(true);
    }
    let complete_values = seen.iter().all(|&s| s);
    let truncated = match run.end {
        RunEnd::Budget(b) => Some(b),
        _ => None,
    };
    let settled = |holds: bool| match (holds, truncated) {
        (true, _) => Check::Pass,
        (false, None) => Check::Fail,
        (false, Some(_)) => Check::Unknown,
    };
    let symmetric = match (&asymmetric, truncated) {
        (Some(_), _) => Check::Fail,
        (None, Some(_)) => Check::Unknown,
        (None, None) => Check::Pass,
    };
    GadgetReport {
        feasible: settled(count > 0),
        symmetric,
        shift_complete: settled(complete_values),
        solutions: count,
        designated_values: (0..g.delta).filter(|&v| seen[v as usize]).collect(),
        nodes: run.nodes,
        counterexample: asymmetric,
        truncated,
    }
}

/// The gadget with the bound on `(from, to)` raised by one.
pub fn loosen_bound(g: &Gadget, from: VertexIx, to: VertexIx) -> Result<Gadget, GadgetError> {
    let inst = &g.instance;
    let bounds = inst
        .bounds()
        .iter()
        .map(|(&(u, v), &d)| ((u, v), u64::from(d) + u64::from((u, v) == (from, to))));
    let instance = Instance::new(inst.graph().clone(), inst.delta(), bounds)?;
    Ok(Gadget { instance, ..g.clone() })
}

/// Result of checking, over every solution of one even-comb subgadget, that
/// its end teeth share one label in both directions unless the main path
/// waits at least twice in total.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClaimReport {
    pub delta: u32,
    /// Solutions visited, one per shift class.
    pub solutions: u64,
    pub ends_equal: u64,
    /// Solutions with unequal end teeth and no main-path waiting.
    pub unequal_without_waiting: u64,
    /// Solutions with unequal end teeth and total main-path waiting below 2.
    pub violations: u64,
    /// Smallest main-path waiting among solutions with unequal end teeth.
    pub min_wait_unequal: Option<u32>,
    pub counterexample: Option<Labeling>,
    pub nodes: u64,
    pub truncated: Option<BudgetReport>,
}

impl ClaimReport {
    pub fn holds(&self) -> Check {
        match (self.violations, self.truncated) {
            (0, None) => Check::Pass,
            (0, Some(_)) => Check::Unknown,
            _ => Check::Fail,
        }
    }
}

#[derive(Default)]
struct ClaimTally {
    solutions: u64,
    equal: u64,
    no_wait: u64,
    violations: u64,
    min_wait: Option<u32>,
    example: Option<Labeling>,
}

/// Total waiting at interior main vertices over both directions.
fn main_path_wait(inst: &Instance, lab: &Labeling) -> u32 {
    let g = inst.graph();
    let delta = inst.delta() as i64;
    let n = u64::from(inst.delta());
    let label = |a: u64, b: u64| {
        let e = g
            .find_edge(
                g.vertex(&a.to_string()).expect("main"),
                g.vertex(&b.to_string()).expect("main"),
            )
            .expect("main edge");
        i64::from(lab.get(e))
    };
    (1..n - 1)
        .map(|i| {
            let fwd = (label(i, i + 1) - label(i - 1, i) - 1).rem_euclid(delta);
            let bwd = (label(i, i - 1) - label(i + 1, i) - 1).rem_euclid(delta);
            (fwd + bwd) as u32
        })
        .sum()
}

pub fn certify_even_subgadget_claim(delta: u32, cfg: &SearchConfig) -> Result<ClaimReport, GadgetError> {
    let inst = even_subgadget(delta)?;
    let g = inst.graph();
    let last = u64::from(delta) - 1;
    let tooth = |i: u64| {
        let (m, t) = (
            g.vertex(&i.to_string()).expect("main"),
            g.vertex(&format!("{i}'")).expect("tip"),
        );
        [g.find_edge(m, t).expect("tooth"), g.find_edge(t, m).expect("tooth")]
    };
    let ends: Vec<_> = tooth(0).into_iter().chain(tooth(last)).collect();
    let run = search_fold(&inst, cfg, None, ClaimTally::default, |t: &mut ClaimTally, lab| {
        t.solutions += 1;
        let first = lab.get(ends[0]);
        if ends.iter().all(|&e| lab.get(e) == first) {
            t.equal += 1;
            return ControlFlow::Continue(());
        }
        let wait = main_path_wait(&inst, lab);
        t.min_wait = Some(t.min_wait.map_or(wait, |m| m.min(wait)));
        if wait == 0 {
            t.no_wait += 1;
        }
        if wait < 2 {
            t.violations += 1;
            t.example.get_or_insert_with(|| lab.clone());
        }
        ControlFlow::Continue(())
    })
    .expect("no fixed labels");
    let mut report = ClaimReport {
        delta,
        solutions: 0,
        ends_equal: 0,
        unequal_without_waiting: 0,
        violations: 0,
        min_wait_unequal: None,
        counterexample: None,
        nodes: run.nodes,
        truncated: match run.end {
            RunEnd::Budget(b) => Some(b),
            _ => None,
        },
    };
    for p in run.parts {
        report.solutions += p.solutions;
        report.ends_equal += p.equal;
        report.unequal_without_waiting += p.no_wait;
        report.violations += p.violations;
        report.min_wait_unequal = match (report.min_wait_unequal, p.min_wait) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        if report.counterexample.is_none() {
            report.counterexample = p.example;
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gadgets::{gadget_delta4, gadget_odd_k0, gadget_odd_quarter};

    #[test]
    fn small_gadgets_certify() {
        for g in [gadget_odd_k0(3).unwrap(), gadget_odd_k0(5).unwrap(), gadget_delta4()] {
            let r = certify_gadget(&g, &SearchConfig::default());
            assert_eq!(r.overall(), Check::Pass, "{} {:?}", g.family, r);
            assert_eq!(r.designated_values, (0..g.delta).collect::<Vec<_>>());
        }
        let g = gadget_odd_quarter(5, 1).unwrap();
        assert_eq!(certify_gadget(&g, &SearchConfig::default()).overall(), Check::Pass);
    }

    #[test]
    fn certification_without_symmetry_breaking_agrees() {
        let g = gadget_odd_k0(3).unwrap();
        let with = certify_gadget(&g, &SearchConfig::default());
        let without = certify_gadget(&g, &SearchConfig::default().without_symmetry());
        assert_eq!(without.overall(), Check::Pass);
        assert_eq!(without.solutions, with.solutions * 3);
    }

    #[test]
    fn loosened_bound_breaks_symmetry() {
        for (g, from, to) in [
            (gadget_odd_quarter(5, 1).unwrap(), "2", "1"),
            (gadget_delta4(), "2", "5"),
        ] {
            let gr = g.instance.graph();
            let m = loosen_bound(&g, gr.vertex(from).unwrap(), gr.vertex(to).unwrap()).unwrap();
            let r = certify_gadget(&m, &SearchConfig::default());
            assert_eq!(r.symmetric, Check::Fail);
            assert!(!m.is_symmetric_on_designated(r.counterexample.as_ref().unwrap()));
        }
    }

    #[test]
    fn odd_k0_survives_any_single_loosened_bound() {
        let g = gadget_odd_k0(3).unwrap();
        for &(u, v) in g.instance.bounds().keys() {
            let m = loosen_bound(&g, u, v).unwrap();
            assert_eq!(certify_gadget(&m, &SearchConfig::default()).symmetric, Check::Pass);
        }
    }

    #[test]
    fn budget_gives_unknown() {
        let g = gadget_delta4();
        let r = certify_gadget(&g, &SearchConfig::default().with_max_nodes(3));
        assert!(r.truncated.is_some());
        assert_ne!(r.overall(), Check::Pass);
    }
}
