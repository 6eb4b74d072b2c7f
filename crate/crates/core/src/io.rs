//! JSON documents for instances, labelings and the reduction inputs.
//!
//! Instance: `{"delta", "vertices", "edges", "bounds", "undirected"?}`.
//! Labeling: `{"delta", "labels": [{"from", "to", "t"}]}`.
//! Unknown fields are rejected everywhere.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{DiGraph, GraphError};
use crate::instance::{Instance, InstanceError, Labeling, LabelingError};

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error(transparent)]
    Labeling(#[from] LabelingError),
    #[error("labeling names edge ({0}, {1}) which is not in the graph")]
    UnknownEdge(String, String),
    #[error("labeling assigns edge ({0}, {1}) twice")]
    DuplicateLabel(String, String),
    #[error("labeling misses edge ({0}, {1})")]
    MissingLabel(String, String),
    #[error("{0}")]
    Invalid(String),
}

impl ParseError {
    /// True when the text itself is unreadable, as opposed to describing an
    /// invalid instance.
    pub fn is_malformed(&self) -> bool {
        matches!(self, ParseError::Json(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundDoc {
    pub from: String,
    pub to: String,
    pub d: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceDoc {
    pub delta: u32,
    pub vertices: Vec<String>,
    pub edges: Vec<[String; 2]>,
    #[serde(default)]
    pub bounds: Vec<BoundDoc>,
    /// Edges are undirected: each is listed once and labeled once.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub undirected: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LabelDoc {
    pub from: String,
    pub to: String,
    pub t: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LabelingDoc {
    pub delta: u32,
    pub labels: Vec<LabelDoc>,
}

impl InstanceDoc {
    pub fn into_instance(self) -> Result<Instance, ParseError> {
        let mut g = DiGraph::new();
        for v in &self.vertices {
            g.add_vertex(v.as_str())?;
        }
        for [a, b] in &self.edges {
            let (u, v) = (g.vertex(a)?, g.vertex(b)?);
            if self.undirected {
                g.add_bidirected(u, v)?;
            } else {
                g.add_edge(u, v)?;
            }
        }
        let mut bounds = Vec::with_capacity(self.bounds.len());
        for b in &self.bounds {
            bounds.push(((g.vertex(&b.from)?, g.vertex(&b.to)?), b.d));
        }
        let inst = if self.undirected {
            Instance::new_undirected(g, self.delta, bounds)?
        } else {
            Instance::new(g, self.delta, bounds)?
        };
        Ok(inst)
    }

    pub fn from_instance(inst: &Instance) -> Self {
        let g = inst.graph();
        let edges = if inst.is_undirected() {
            g.undirected_edges()
        } else {
            g.edges().to_vec()
        };
        Self {
            delta: inst.delta(),
            vertices: g.names().to_vec(),
            edges: edges
                .into_iter()
                .map(|(u, v)| [g.name(u).to_string(), g.name(v).to_string()])
                .collect(),
            bounds: inst
                .bounds_by_name()
                .into_iter()
                .map(|((u, v), d)| BoundDoc {
                    from: g.name(u).to_string(),
                    to: g.name(v).to_string(),
                    d: u64::from(d),
                })
                .collect(),
            undirected: inst.is_undirected(),
        }
    }
}

pub fn parse_instance(text: &str) -> Result<Instance, ParseError> {
    let doc: InstanceDoc = serde_json::from_str(text)?;
    doc.into_instance()
}

pub fn instance_to_json(inst: &Instance) -> serde_json::Value {
    serde_json::to_value(InstanceDoc::from_instance(inst)).expect("instance documents serialize")
}

pub fn serialize_instance(inst: &Instance) -> String {
    serde_json::to_string_pretty(&InstanceDoc::from_instance(inst)).expect("instance documents serialize")
}

impl LabelingDoc {
    /// Resolves against `inst`. For undirected instances a label given on one
    /// direction covers both.
    pub fn into_labeling(self, inst: &Instance) -> Result<Labeling, ParseError> {
        let g = inst.graph();
        if self.delta != inst.delta() {
            return Err(LabelingError::PeriodMismatch {
                labeling: self.delta,
                instance: inst.delta(),
            }
            .into());
        }
        let mut labels: Vec<Option<u32>> = vec![None; g.edge_count()];
        for l in &self.labels {
            let (u, v) = (g.vertex(&l.from)?, g.vertex(&l.to)?);
            let e = g
                .find_edge(u, v)
                .ok_or_else(|| ParseError::UnknownEdge(l.from.clone(), l.to.clone()))?;
            if labels[e].is_some() {
                return Err(ParseError::DuplicateLabel(l.from.clone(), l.to.clone()));
            }
            labels[e] = Some(l.t);
        }
        if inst.is_undirected() {
            for e in 0..g.edge_count() {
                let r = g.reverse(e).expect("undirected graphs are symmetric");
                if labels[e].is_none() {
                    labels[e] = labels[r];
                }
            }
        }
        let mut out = Vec::with_capacity(labels.len());
        for (e, l) in labels.into_iter().enumerate() {
            let (u, v) = g.edge(e);
            out.push(l.ok_or_else(|| ParseError::MissingLabel(g.name(u).to_string(), g.name(v).to_string()))?);
        }
        let lab = Labeling::new(self.delta, out)?;
        lab.check_against(inst)?;
        Ok(lab)
    }

    pub fn from_labeling(g: &DiGraph, lab: &Labeling) -> Self {
        Self {
            delta: lab.delta(),
            labels: g
                .edges()
                .iter()
                .enumerate()
                .map(|(e, &(u, v))| LabelDoc {
                    from: g.name(u).to_string(),
                    to: g.name(v).to_string(),
                    t: lab.get(e),
                })
                .collect(),
        }
    }
}

pub fn parse_labeling(text: &str, inst: &Instance) -> Result<Labeling, ParseError> {
    let doc: LabelingDoc = serde_json::from_str(text)?;
    doc.into_labeling(inst)
}

pub fn labeling_to_json(g: &DiGraph, lab: &Labeling) -> serde_json::Value {
    serde_json::to_value(LabelingDoc::from_labeling(g, lab)).expect("labeling documents serialize")
}

/// A simple undirected graph, the input of the coloring reduction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UndirectedGraphDoc {
    pub vertices: Vec<String>,
    pub edges: Vec<[String; 2]>,
}

/// A monotone CNF: each clause lists three variable names.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CnfDoc {
    pub clauses: Vec<[String; 3]>,
}

/// Index of each vertex id, used by reduction documents.
pub fn name_index(names: &[String]) -> Result<HashMap<&str, usize>, ParseError> {
    let mut map = HashMap::new();
    for (i, n) in names.iter().enumerate() {
        if map.insert(n.as_str(), i).is_some() {
            return Err(GraphError::DuplicateVertex(n.clone()).into());
        }
    }
    Ok(map)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_instance_parses() {
        let inst =
            parse_instance(r#"{"delta":2,"vertices":["a","b"],"edges":[["a","b"],["b","a"]],"bounds":[]}"#).unwrap();
        assert_eq!(inst.graph().edge_count(), 2);
        assert!(inst.bounds().is_empty());
    }

    #[test]
    fn errors_name_the_offender() {
        let unknown = parse_instance(r#"{"delta":2,"vertices":["a"],"edges":[["a","z"]]}"#).unwrap_err();
        assert!(unknown.to_string().contains('z'));
        let extra = parse_instance(r#"{"delta":2,"vertices":[],"edges":[],"colour":1}"#).unwrap_err();
        assert!(extra.is_malformed());
        let below = parse_instance(
            r#"{"delta":3,"vertices":["a","b","c"],"edges":[["a","b"],["b","a"],["b","c"],["c","b"]],
                "bounds":[{"from":"a","to":"c","d":1}]}"#,
        )
        .unwrap_err();
        assert!(below.to_string().contains("bound below distance"));
    }

    #[test]
    fn normalizes_wait_free_bound() {
        let inst = parse_instance(
            r#"{"delta":3,"vertices":["u","x","v"],"edges":[["u","x"],["x","u"],["x","v"],["v","x"]],
                "bounds":[{"from":"u","to":"v","d":7}]}"#,
        )
        .unwrap();
        assert!(inst.bounds().is_empty());
    }

    #[test]
    fn undirected_round_trip() {
        let text = r#"{"delta":3,"vertices":["c","a","b"],"edges":[["c","a"],["c","b"]],
            "bounds":[{"from":"a","to":"b","d":3}],"undirected":true}"#;
        let inst = parse_instance(text).unwrap();
        assert_eq!(inst.graph().edge_count(), 4);
        let again = parse_instance(&serialize_instance(&inst)).unwrap();
        assert_eq!(again, inst);
        let lab = parse_labeling(
            r#"{"delta":3,"labels":[{"from":"c","to":"a","t":1},{"from":"c","to":"b","t":2}]}"#,
            &inst,
        )
        .unwrap();
        assert_eq!(lab.labels(), &[1, 1, 2, 2]);
    }

    #[test]
    fn labeling_errors() {
        let inst = parse_instance(r#"{"delta":2,"vertices":["a","b"],"edges":[["a","b"],["b","a"]]}"#).unwrap();
        let wrong_period = parse_labeling(r#"{"delta":3,"labels":[]}"#, &inst).unwrap_err();
        assert!(matches!(
            wrong_period,
            ParseError::Labeling(LabelingError::PeriodMismatch { .. })
        ));
        let missing = parse_labeling(r#"{"delta":2,"labels":[{"from":"a","to":"b","t":1}]}"#, &inst).unwrap_err();
        assert!(matches!(missing, ParseError::MissingLabel(..)));
        let range = parse_labeling(
            r#"{"delta":2,"labels":[{"from":"a","to":"b","t":2},{"from":"b","to":"a","t":0}]}"#,
            &inst,
        )
        .unwrap_err();
        assert!(matches!(range, ParseError::Labeling(LabelingError::OutOfRange { .. })));
    }
}
