//! Periodic upper-bounded temporal graph realization: instances, the
//! temporal engine, polynomial special cases, exact search and gadgets.

pub mod certificate;
pub mod gadgets;
pub mod graph;
pub mod instance;
pub mod io;
pub mod polycases;
pub mod search;
pub mod temporal;

pub use certificate::{BudgetKind, BudgetReport, Certificate, Refutation, Route, Verdict};
pub use graph::{classify, static_distances, DiGraph, EdgeIx, GraphError, TopologyClass, VertexIx};
pub use instance::{slack, Instance, InstanceError, Labeling, LabelingError, SlackReport};
pub use io::{parse_instance, parse_labeling, ParseError};
pub use polycases::auto_solve;
pub use search::{solve_exact, SearchConfig};
pub use temporal::{fastest_duration, verify_labeling, DurationMatrix, TemporalPath, Violation};

#[cfg(feature = "gen")]
pub mod generate;
