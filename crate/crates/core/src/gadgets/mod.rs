//! Hardness gadgets, the reductions that use them, and their certification.
//!
//! A gadget is a bidirected-tree instance in which every feasible labeling
//! gives both directions of one designated edge the same label.

mod certify;
mod families;
mod reductions;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::TopologyClass;
use crate::graph::{EdgeIx, VertexIx};
use crate::instance::{Instance, InstanceError, Labeling};
use crate::io::{InstanceDoc, ParseError};
use crate::polycases::always_feasible_region;
use crate::temporal::{duration_matrix, verify_labeling};

pub use certify::{certify_even_subgadget_claim, certify_gadget, loosen_bound, Check, ClaimReport, GadgetReport};
pub use families::{
    even_subgadget, gadget_delta4, gadget_even_comb, gadget_odd_comb, gadget_odd_k0, gadget_odd_quarter,
};
pub use reductions::{
    nae3sat_to_ditgr, reduce_ttr_to_dittr, star_from_coloring, MonotoneCnf, NaeReduction, Occurrence, StarReduction,
    TtrReduction,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    OddK0,
    OddQuarter,
    Delta4,
    OddComb,
    EvenComb,
}

impl Family {
    pub const ALL: [Family; 5] = [
        Family::OddK0,
        Family::OddQuarter,
        Family::Delta4,
        Family::OddComb,
        Family::EvenComb,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Family::OddK0 => "oddk0",
            Family::OddQuarter => "oddquarter",
            Family::Delta4 => "delta4",
            Family::OddComb => "oddcomb",
            Family::EvenComb => "evencomb",
        }
    }

    pub fn is_comb(self) -> bool {
        matches!(self, Family::OddComb | Family::EvenComb)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Family {
    type Err = GadgetError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Family::ALL
            .into_iter()
            .find(|f| f.as_str() == s)
            .ok_or_else(|| GadgetError::UnknownFamily(s.to_string()))
    }
}

#[derive(Debug, Error)]
pub enum GadgetError {
    #[error("unknown gadget family `{0}`")]
    UnknownFamily(String),
    #[error("{family} needs {requirement} (got delta={delta}, k={k})")]
    OutOfRegion {
        family: Family,
        requirement: &'static str,
        delta: u32,
        k: u32,
    },
    #[error("no gadget exists for delta={delta}, k={k}: every bidirected tree instance is feasible in this always-feasible region")]
    AlwaysFeasible { delta: u32, k: u32 },
    #[error("{0} is not a comb gadget")]
    NotComb(Family),
    #[error("reference labeling failed verification for {0}")]
    ReferenceInvalid(Family),
    #[error("period must be at least 3 for the colouring reduction (got {0})")]
    PeriodTooSmall(u32),
    #[error("the input instance is not an undirected tree")]
    NotUndirectedTree,
    #[error("instance slack {slack} is below the requested k={k}")]
    SlackBelowK { slack: u32, k: u32 },
    #[error("formula is not linear: clauses {0} and {1} share more than one variable")]
    NotLinear(usize, usize),
    #[error("clause {0} repeats a variable")]
    RepeatedVariable(usize),
    #[error("the formula has no clauses")]
    EmptyFormula,
    #[error("designated pair ({0}, {1}) is not an antiparallel edge pair of the instance")]
    BadDesignated(String, String),
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error(transparent)]
    Parse(#[from] Box<ParseError>),
}

/// An instance that forces equal labels on both directions of the
/// designated edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gadget {
    pub instance: Instance,
    pub family: Family,
    pub delta: u32,
    /// Slack the gadget was requested for.
    pub k: u32,
    /// Slack the bounds were built with; at least `k`.
    pub built_k: u32,
    pub designated: (VertexIx, VertexIx),
}

impl Gadget {
    /// The designated edge and its reverse.
    pub fn designated_edges(&self) -> (EdgeIx, EdgeIx) {
        let g = self.instance.graph();
        let (a, b) = self.designated;
        (
            g.find_edge(a, b).expect("designated edge exists"),
            g.find_edge(b, a).expect("designated edge exists"),
        )
    }

    pub fn is_symmetric_on_designated(&self, lab: &Labeling) -> bool {
        let (e, r) = self.designated_edges();
        lab.get(e) == lab.get(r)
    }

    pub fn sidecar(&self) -> GadgetSidecar {
        let g = self.instance.graph();
        GadgetSidecar {
            family: self.family.as_str().to_string(),
            delta: self.delta,
            k: self.k,
            designated: [
                g.name(self.designated.0).to_string(),
                g.name(self.designated.1).to_string(),
            ],
        }
    }

    pub fn to_doc(&self) -> GadgetDoc {
        GadgetDoc {
            instance: InstanceDoc::from_instance(&self.instance),
            gadget: self.sidecar(),
        }
    }

    /// Rebuilds a gadget from its document. The instance is taken as given,
    /// so hand-edited gadgets can be certified too.
    pub fn from_doc(doc: GadgetDoc) -> Result<Self, GadgetError> {
        let family: Family = doc.gadget.family.parse()?;
        let instance = doc.instance.into_instance().map_err(Box::new)?;
        let g = instance.graph();
        let [a, b] = &doc.gadget.designated;
        let bad = || GadgetError::BadDesignated(a.clone(), b.clone());
        let (u, v) = (g.vertex(a).map_err(|_| bad())?, g.vertex(b).map_err(|_| bad())?);
        if g.find_edge(u, v).is_none() || g.find_edge(v, u).is_none() {
            return Err(bad());
        }
        let built_k = crate::instance::slack(&instance).k_min.unwrap_or(doc.gadget.k);
        Ok(Self {
            instance,
            family,
            delta: doc.gadget.delta,
            k: doc.gadget.k,
            built_k,
            designated: (u, v),
        })
    }
}

/// Gadget metadata stored next to the instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GadgetSidecar {
    pub family: String,
    pub delta: u32,
    pub k: u32,
    pub designated: [String; 2],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GadgetDoc {
    pub instance: InstanceDoc,
    pub gadget: GadgetSidecar,
}

/// Builds the gadget of `family` for period `delta` and slack `k`.
pub fn build_gadget(family: Family, delta: u32, k: u32) -> Result<Gadget, GadgetError> {
    match family {
        Family::OddK0 => {
            if k != 0 {
                return Err(GadgetError::OutOfRegion {
                    family,
                    requirement: "k = 0",
                    delta,
                    k,
                });
            }
            gadget_odd_k0(delta)
        }
        Family::OddQuarter => gadget_odd_quarter(delta, k),
        Family::Delta4 => {
            if delta != 4 || k != 0 {
                return Err(GadgetError::OutOfRegion {
                    family,
                    requirement: "delta = 4 and k = 0",
                    delta,
                    k,
                });
            }
            Ok(gadget_delta4())
        }
        Family::OddComb => gadget_odd_comb(delta, k),
        Family::EvenComb => gadget_even_comb(delta, k),
    }
}

/// The family used for a hard `(Δ, k)` cell.
///
/// Odd Δ: `OddK0` at k = 0, otherwise `OddQuarter` where its size bound
/// allows and the odd comb elsewhere. Even Δ: `Delta4` at (4, 0), otherwise
/// the even comb.
pub fn select_gadget(delta: u32, k: u32) -> Result<Gadget, GadgetError> {
    if delta == 0 || always_feasible_region(delta, Some(k), &TopologyClass::BidirectedTree { root: 0 }) {
        return Err(GadgetError::AlwaysFeasible { delta, k });
    }
    if delta % 2 == 1 {
        if k == 0 {
            return gadget_odd_k0(delta);
        }
        let quarter_fits = if k % 2 == 1 { delta > 4 * k } else { delta >= 4 * k + 5 };
        if quarter_fits {
            return gadget_odd_quarter(delta, k);
        }
        return gadget_odd_comb(delta, k);
    }
    if delta == 4 && k == 0 {
        return Ok(gadget_delta4());
    }
    gadget_even_comb(delta, k)
}

/// A feasible labeling with equal labels on the designated pair.
pub fn reference_labeling(g: &Gadget) -> Result<Labeling, GadgetError> {
    let lab = families::reference(g)?;
    match verify_labeling(&g.instance, &lab) {
        Ok(v) if v.is_empty() && g.is_symmetric_on_designated(&lab) => Ok(lab),
        _ => Err(GadgetError::ReferenceInvalid(g.family)),
    }
}

/// Largest extra duration of journeys between earlier tips and each main
/// vertex: `plus[i]` over journeys from tips `j̄` (j < i) to `i`, `minus[i]`
/// over journeys from `i` back to those tips. Index 0 has no earlier tip.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WaitingProfile {
    /// Main vertices in path order with their ids.
    pub vertices: Vec<String>,
    pub plus: Vec<Option<u64>>,
    pub minus: Vec<Option<u64>>,
}

pub fn waiting_profile(g: &Gadget, lab: &Labeling) -> Result<WaitingProfile, GadgetError> {
    if !g.family.is_comb() {
        return Err(GadgetError::NotComb(g.family));
    }
    let graph = g.instance.graph();
    let inst = &g.instance;
    let m = duration_matrix(graph, lab);
    let mut main: Vec<(u64, VertexIx)> = graph
        .vertices()
        .filter_map(|v| graph.name(v).parse::<u64>().ok().map(|i| (i, v)))
        .collect();
    main.sort_unstable();
    let tip = |i: u64| graph.vertex(&format!("{i}'")).ok();
    let mut profile = WaitingProfile {
        vertices: main.iter().map(|&(_, v)| graph.name(v).to_string()).collect(),
        plus: Vec::new(),
        minus: Vec::new(),
    };
    for &(i, v) in &main {
        let tips: Vec<VertexIx> = main
            .iter()
            .filter(|&&(j, _)| j < i)
            .filter_map(|&(j, _)| tip(j))
            .collect();
        let extra = |a: VertexIx, b: VertexIx| m.get(a, b) - u64::from(inst.distance(a, b));
        profile.plus.push(tips.iter().map(|&t| extra(t, v)).max());
        profile.minus.push(tips.iter().map(|&t| extra(v, t)).max());
    }
    Ok(profile)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn selection_follows_the_landscape() {
        assert_eq!(select_gadget(3, 0).unwrap().family, Family::OddK0);
        assert_eq!(select_gadget(4, 0).unwrap().family, Family::Delta4);
        assert_eq!(select_gadget(5, 1).unwrap().family, Family::OddQuarter);
        assert_eq!(select_gadget(3, 1).unwrap().family, Family::OddComb);
        assert_eq!(select_gadget(4, 1).unwrap().family, Family::EvenComb);
        assert_eq!(select_gadget(6, 0).unwrap().family, Family::EvenComb);
        assert!(matches!(select_gadget(4, 2), Err(GadgetError::AlwaysFeasible { .. })));
        assert!(matches!(select_gadget(2, 0), Err(GadgetError::AlwaysFeasible { .. })));
        assert!(matches!(select_gadget(3, 2), Err(GadgetError::AlwaysFeasible { .. })));
    }

    #[test]
    fn family_names_round_trip() {
        for f in Family::ALL {
            assert_eq!(f.as_str().parse::<Family>().unwrap(), f);
        }
        assert!("comb".parse::<Family>().is_err());
    }

    #[test]
    fn documents_round_trip() {
        let g = gadget_odd_k0(3).unwrap();
        let text = serde_json::to_string(&g.to_doc()).unwrap();
        let back = Gadget::from_doc(serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn odd_comb_profile_grows_once_per_period() {
        let g = gadget_odd_comb(3, 1).unwrap();
        let lab = reference_labeling(&g).unwrap();
        let p = waiting_profile(&g, &lab).unwrap();
        assert_eq!(p.plus[0], None);
        for j in 0..=1u64 {
            assert_eq!(p.plus[(j * 3 + 1) as usize], Some(j));
        }
        assert!(matches!(
            waiting_profile(&gadget_delta4(), &lab),
            Err(GadgetError::NotComb(_))
        ));
    }

    #[test]
    fn even_subgadget_claim_at_four() {
        let r = certify_even_subgadget_claim(4, &crate::search::SearchConfig::default()).unwrap();
        assert_eq!(r.holds(), Check::Pass);
        assert_eq!(r.unequal_without_waiting, 0);
        assert!(r.ends_equal > 0);
    }
}
