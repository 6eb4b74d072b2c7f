use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::{json, Value};
use tempo_core::gadgets::{
    build_gadget, certify_gadget, nae3sat_to_ditgr, reduce_ttr_to_dittr, reference_labeling, select_gadget,
    star_from_coloring, Family, Gadget, GadgetDoc, GadgetError, GadgetSidecar, MonotoneCnf,
};
use tempo_core::io::{labeling_to_json, CnfDoc, InstanceDoc, UndirectedGraphDoc};
use tempo_core::search::enumerate_solutions;
use tempo_core::temporal::duration_matrix;
use tempo_core::{auto_solve, classify, parse_labeling, slack, verify_labeling, Instance, SearchConfig};

use crate::report::{exit_for, Exit, Outcome};

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = read(path)?;
    serde_json::from_str(&text).with_context(|| format!("malformed document {}", path.display()))
}

fn load_instance(path: &Path) -> Result<Instance> {
    let doc: InstanceDoc = read_json(path)?;
    doc.into_instance()
        .with_context(|| format!("invalid instance {}", path.display()))
}

fn write_json(path: &Path, v: &Value) -> Result<()> {
    let text = serde_json::to_string_pretty(v).expect("values serialize");
    fs::write(path, text + "\n").with_context(|| format!("cannot write {}", path.display()))
}

fn instance_json(inst: &Instance) -> Value {
    serde_json::to_value(InstanceDoc::from_instance(inst)).expect("instance documents serialize")
}

pub fn validate(path: &Path) -> Result<Outcome> {
    let doc: InstanceDoc = read_json(path)?;
    let inst = match doc.into_instance() {
        Ok(inst) => inst,
        Err(e) => {
            let reason = e.to_string();
            let summary = format!("invalid: {reason}");
            return Ok(Outcome::json(
                Exit::Fail,
                json!({"status": "invalid", "reason": reason}),
                summary,
            ));
        }
    };
    let g = inst.graph();
    let class = classify(g);
    let s = slack(&inst);
    let per_pair: Vec<Value> = s
        .per_pair
        .iter()
        .map(|&((u, v), k)| json!({"from": g.name(u), "to": g.name(v), "slack": k}))
        .collect();
    let doc = json!({
        "status": "valid",
        "class": class.tag(),
        "delta": inst.delta(),
        "undirected": inst.is_undirected(),
        "vertices": g.vertex_count(),
        "edges": g.edge_count(),
        "bounds": inst.bounds().len(),
        "slack": {"k_min": s.k_min, "pairs": per_pair},
    });
    Ok(Outcome::json(Exit::Ok, doc, format!("valid {} instance", class.tag())))
}

pub fn solve(path: &Path, cfg: &SearchConfig, all: bool, out: Option<&Path>) -> Result<Outcome> {
    let inst = load_instance(path)?;
    let g = inst.graph();
    if all {
        let e = enumerate_solutions(&inst, cfg);
        let status = match (&e.truncated, e.solutions.is_empty()) {
            (Some(_), _) => "unknown",
            (None, true) => "infeasible",
            (None, false) => "feasible",
        };
        let doc = json!({
            "status": status,
            "count": e.solutions.len(),
            "solutions": e.solutions.iter().map(|l| labeling_to_json(g, l)).collect::<Vec<_>>(),
            "nodes": e.nodes,
            "reason": e.truncated.map(|r| r.code()),
        });
        let summary = format!("{status}: {} solutions, {} nodes", e.solutions.len(), e.nodes);
        return Ok(Outcome::json(exit_for(status), doc, summary));
    }
    let cert = auto_solve(&inst, cfg);
    if let (Some(lab), Some(out)) = (cert.labeling(), out) {
        write_json(out, &labeling_to_json(g, lab))?;
    }
    let summary = format!("{} via {}", cert.status(), cert.route);
    Ok(Outcome::json(exit_for(cert.status()), cert.to_json(g), summary))
}

pub fn check(instance: &Path, labeling: &Path) -> Result<Outcome> {
    let inst = load_instance(instance)?;
    let lab =
        parse_labeling(&read(labeling)?, &inst).with_context(|| format!("invalid labeling {}", labeling.display()))?;
    let violations = verify_labeling(&inst, &lab)?;
    let status = if violations.is_empty() { "valid" } else { "invalid" };
    let g = inst.graph();
    let doc = json!({
        "status": status,
        "violations": violations.iter().map(|v| v.to_json(g)).collect::<Vec<_>>(),
    });
    Ok(Outcome::json(
        exit_for(status),
        doc,
        format!("{status}: {} violations", violations.len()),
    ))
}

/// Errors that describe a parameter choice without a gadget rather than bad
/// input.
fn no_gadget(e: GadgetError) -> Result<Outcome> {
    match e {
        GadgetError::AlwaysFeasible { .. } | GadgetError::OutOfRegion { .. } => {
            let reason = e.to_string();
            Ok(Outcome::json(
                Exit::Fail,
                json!({"status": "no_gadget", "reason": reason}),
                reason,
            ))
        }
        e => Err(e.into()),
    }
}

pub fn gadget(
    family: &str,
    delta: u32,
    k: u32,
    out: Option<&Path>,
    sidecar: Option<&Path>,
    with_reference: bool,
) -> Result<Outcome> {
    let built = if family == "auto" {
        select_gadget(delta, k)
    } else {
        build_gadget(family.parse::<Family>()?, delta, k)
    };
    let g = match built {
        Ok(g) => g,
        Err(e) => return no_gadget(e),
    };
    let doc = g.to_doc();
    let mut v = serde_json::to_value(&doc).expect("gadget documents serialize");
    if let Some(path) = out {
        write_json(path, &v["instance"])?;
    }
    if let Some(path) = sidecar {
        write_json(path, &v["gadget"])?;
    }
    if with_reference {
        let lab = reference_labeling(&g)?;
        v["reference"] = labeling_to_json(g.instance.graph(), &lab);
    }
    let gr = g.instance.graph();
    let summary = format!(
        "{} gadget: {} vertices, {} edges",
        g.family,
        gr.vertex_count(),
        gr.edge_count()
    );
    Ok(Outcome::json(Exit::Ok, v, summary))
}

/// A gadget document; extra fields such as a reference labeling are ignored.
#[derive(Deserialize)]
struct GadgetFile {
    instance: InstanceDoc,
    gadget: GadgetSidecar,
}

pub fn certify(path: &Path, cfg: &SearchConfig) -> Result<Outcome> {
    let file: GadgetFile = read_json(path)?;
    let g = Gadget::from_doc(GadgetDoc {
        instance: file.instance,
        gadget: file.gadget,
    })?;
    let report = certify_gadget(&g, cfg);
    let status = report.overall().as_str();
    let summary = format!("{status}: {} solutions, {} nodes", report.solutions, report.nodes);
    Ok(Outcome::json(exit_for(status), report.to_json(&g), summary))
}

pub fn reduce_coloring(path: &Path, delta: u32) -> Result<Outcome> {
    let doc: UndirectedGraphDoc = read_json(path)?;
    let r = star_from_coloring(&doc, delta)?;
    let g = r.instance.graph();
    let out = json!({
        "instance": instance_json(&r.instance),
        "center": g.name(r.center),
        "leaves": r.leaves.iter().map(|&v| g.name(v)).collect::<Vec<_>>(),
    });
    Ok(Outcome::json(
        Exit::Ok,
        out,
        format!("star instance with {} leaves", r.leaves.len()),
    ))
}

pub fn reduce_nae(path: &Path, symmetric: bool) -> Result<Outcome> {
    let doc: CnfDoc = read_json(path)?;
    let cnf = MonotoneCnf::from_doc(&doc)?;
    let r = nae3sat_to_ditgr(&cnf, symmetric)?;
    let g = r.instance.graph();
    let readout: Vec<Value> = cnf
        .variables
        .iter()
        .zip(&r.readout)
        .map(|(name, &e)| {
            let (a, b) = g.edge(e);
            json!({"variable": name, "from": g.name(a), "to": g.name(b)})
        })
        .collect();
    let out = json!({
        "instance": instance_json(&r.instance),
        "readout": readout,
        "symmetric": r.symmetric,
        "hub": r.hub,
    });
    Ok(Outcome::json(
        Exit::Ok,
        out,
        format!("period-2 instance for {} clauses", cnf.clauses.len()),
    ))
}

pub fn reduce_ttr(path: &Path, k: u32) -> Result<Outcome> {
    let inst = load_instance(path)?;
    let r = match reduce_ttr_to_dittr(&inst, k) {
        Ok(r) => r,
        Err(e) => return no_gadget(e),
    };
    let out = json!({
        "instance": instance_json(&r.instance),
        "gadget": r.gadget.sidecar(),
    });
    let summary = format!("{} copies of {}", r.copies.len(), r.gadget.family);
    Ok(Outcome::json(Exit::Ok, out, summary))
}

pub fn distances(path: &Path, labeling: Option<&Path>, as_json: bool) -> Result<Outcome> {
    let inst = load_instance(path)?;
    let g = inst.graph();
    let temporal = match labeling {
        Some(p) => {
            let lab = parse_labeling(&read(p)?, &inst).with_context(|| format!("invalid labeling {}", p.display()))?;
            Some(duration_matrix(g, &lab))
        }
        None => None,
    };
    let n = g.vertex_count();
    let summary = format!("distances for {n} vertices");
    if as_json {
        let stat: Vec<Vec<u32>> = (0..n).map(|u| (0..n).map(|v| inst.distance(u, v)).collect()).collect();
        let temp = temporal.as_ref().map(|m| {
            (0..n)
                .map(|u| (0..n).map(|v| m.get(u, v)).collect::<Vec<_>>())
                .collect::<Vec<_>>()
        });
        let doc = json!({"vertices": g.names(), "static": stat, "temporal": temp});
        return Ok(Outcome::json(Exit::Ok, doc, summary));
    }
    let mut csv = String::from(if temporal.is_some() {
        "from,to,static,temporal\n"
    } else {
        "from,to,static\n"
    });
    for u in 0..n {
        for v in 0..n {
            csv.push_str(&format!("{},{},{}", g.name(u), g.name(v), inst.distance(u, v)));
            if let Some(m) = &temporal {
                csv.push_str(&format!(",{}", m.get(u, v)));
            }
            csv.push('\n');
        }
    }
    Ok(Outcome::text(Exit::Ok, csv, summary))
}
