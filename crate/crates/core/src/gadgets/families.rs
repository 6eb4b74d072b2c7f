//! Constructors and reference labelings for the five gadget families.
//! Vertices are named by integers; comb tips carry a trailing `'`.

use std::collections::BTreeSet;

use super::{Family, Gadget, GadgetError};
use crate::certificate::Verdict;
use crate::graph::{static_distances, DiGraph};
use crate::instance::{Instance, Labeling};
use crate::search::{solve_exact_with, SearchConfig};

/// Node budget for the searches that complete reference labelings.
const COMPLETION_BUDGET: u64 = 20_000_000;

enum Bound {
    Exact(u64),
    Slack(u32),
}

#[derive(Default)]
struct Builder {
    g: DiGraph,
    seen: BTreeSet<(String, String)>,
    bounds: Vec<(String, String, Bound)>,
}

impl Builder {
    fn bi(&mut self, a: impl ToString, b: impl ToString) {
        let (a, b) = (a.to_string(), b.to_string());
        let key = if a < b {
            (a.clone(), b.clone())
        } else {
            (b.clone(), a.clone())
        };
        if !self.seen.insert(key) {
            return;
        }
        let (u, v) = (self.g.ensure_vertex(&a), self.g.ensure_vertex(&b));
        self.g.add_bidirected(u, v).expect("fresh edge");
    }

    fn bound(&mut self, a: impl ToString, b: impl ToString, d: u64) {
        self.bounds.push((a.to_string(), b.to_string(), Bound::Exact(d)));
    }

    /// Bound both directions of every pair in `names` at distance plus `k`.
    fn clique_bounds(&mut self, names: &[String], k: u32) {
        for a in names {
            for b in names {
                if a != b {
                    self.bounds.push((a.clone(), b.clone(), Bound::Slack(k)));
                }
            }
        }
    }

    fn finish(self, delta: u32) -> Result<Instance, GadgetError> {
        let dist = static_distances(&self.g).map_err(crate::instance::InstanceError::from)?;
        let g = &self.g;
        let mut bounds = Vec::new();
        for (a, b, bound) in &self.bounds {
            let (u, v) = (
                g.vertex(a).expect("bounded vertex exists"),
                g.vertex(b).expect("bounded vertex exists"),
            );
            let d = match *bound {
                Bound::Exact(d) => d,
                Bound::Slack(k) => u64::from(dist.get(u, v) + k),
            };
            bounds.push(((u, v), d));
        }
        Ok(Instance::new(self.g, delta, bounds)?)
    }
}

fn tip(i: u64) -> String {
    format!("{i}'")
}

fn designated(inst: &Instance, a: impl ToString, b: impl ToString) -> (usize, usize) {
    let g = inst.graph();
    (
        g.vertex(&a.to_string()).expect("designated vertex"),
        g.vertex(&b.to_string()).expect("designated vertex"),
    )
}

fn odd_delta(family: Family, delta: u32, k: u32) -> Result<(), GadgetError> {
    if delta < 3 || delta.is_multiple_of(2) {
        return Err(GadgetError::OutOfRegion {
            family,
            requirement: "an odd period of at least 3",
            delta,
            k,
        });
    }
    Ok(())
}

/// Odd Δ, k = 0: a claw whose long arm ends in the designated edge.
pub fn gadget_odd_k0(delta: u32) -> Result<Gadget, GadgetError> {
    odd_delta(Family::OddK0, delta, 0)?;
    let h = u64::from(delta / 2);
    let last = 4 + h;
    let mut b = Builder::default();
    b.bi(1, 3);
    b.bi(2, 3);
    for i in 3..last {
        b.bi(i, i + 1);
    }
    b.bound(1, 2, 2);
    b.bound(2, 1, 2);
    for leaf in [1, 2] {
        b.bound(leaf, last, 2 + h);
        b.bound(last, leaf, 2 + h);
    }
    let instance = b.finish(delta)?;
    let designated = designated(&instance, 3 + h, last);
    Ok(Gadget {
        instance,
        family: Family::OddK0,
        delta,
        k: 0,
        built_k: 0,
        designated,
    })
}

/// Odd Δ with Δ ≥ 4k+1 for odd k, Δ ≥ 4k+5 for even k. Even k is built
/// with slack k+1.
pub fn gadget_odd_quarter(delta: u32, k: u32) -> Result<Gadget, GadgetError> {
    odd_delta(Family::OddQuarter, delta, k)?;
    let kk = if k % 2 == 1 { k } else { k + 1 };
    if k == 0 || delta < 4 * kk + 1 {
        return Err(GadgetError::OutOfRegion {
            family: Family::OddQuarter,
            requirement: "k >= 1 and delta >= 4k+1 (k odd) or delta >= 4k+5 (k even)",
            delta,
            k,
        });
    }
    let q = u64::from(kk);
    let mut b = Builder::default();
    b.bi(1, 3);
    b.bi(2, 3);
    for i in 3..q + 3 {
        b.bi(i, i + 1);
    }
    b.bi(q + 3, q + 4);
    b.bi(q + 3, q + 5);
    b.bound(2, 1, q + 2);
    b.bound(q + 4, q + 5, q + 2);
    b.bound(2, q + 5, 2 * q + 2);
    b.bound(q + 4, 1, 2 * q + 2);
    let instance = b.finish(delta)?;
    let designated = designated(&instance, 3 + q / 2, 3 + q.div_ceil(2));
    Ok(Gadget {
        instance,
        family: Family::OddQuarter,
        delta,
        k,
        built_k: kk,
        designated,
    })
}

/// Δ = 4, k = 0.
pub fn gadget_delta4() -> Gadget {
    let mut b = Builder::default();
    for (x, y) in [(1, 3), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (6, 8)] {
        b.bi(x, y);
    }
    for (x, y, d) in [
        (1, 2, 2),
        (2, 1, 2),
        (7, 8, 2),
        (8, 7, 2),
        (5, 7, 2),
        (4, 1, 2),
        (8, 4, 3),
        (2, 5, 3),
        (8, 1, 6),
        (2, 7, 6),
    ] {
        b.bound(x, y, d);
    }
    let instance = b.finish(4).expect("fixed construction is valid");
    let designated = designated(&instance, 4, 5);
    Gadget {
        instance,
        family: Family::Delta4,
        delta: 4,
        k: 0,
        built_k: 0,
        designated,
    }
}

/// Odd Δ, 1 ≤ k ≤ Δ−2. Built with slack Δ−2, which covers every smaller k.
pub fn gadget_odd_comb(delta: u32, k: u32) -> Result<Gadget, GadgetError> {
    odd_delta(Family::OddComb, delta, k)?;
    if k > delta - 2 {
        return Err(GadgetError::OutOfRegion {
            family: Family::OddComb,
            requirement: "k <= delta-2",
            delta,
            k,
        });
    }
    let kp = delta - 2;
    let len = u64::from((kp + 1) * delta);
    let mut b = Builder::default();
    b.bi(0, tip(0));
    for i in 1..=len {
        b.bi(i - 1, i);
        b.bi(i, tip(i));
    }
    let tips: Vec<String> = (0..=len).map(tip).collect();
    b.clique_bounds(&tips, kp);
    let instance = b.finish(delta)?;
    let designated = designated(&instance, 0, tip(0));
    Ok(Gadget {
        instance,
        family: Family::OddComb,
        delta,
        k,
        built_k: kp,
        designated,
    })
}

/// Last main-path index of the even comb.
fn even_len(delta: u32) -> u64 {
    let d = u64::from(delta);
    3 * d - 3 + (2 * d - 3) * (d - 3)
}

fn even_delta(delta: u32, k: u32) -> Result<(), GadgetError> {
    if delta < 4 || delta % 2 == 1 || k + 3 > delta {
        return Err(GadgetError::OutOfRegion {
            family: Family::EvenComb,
            requirement: "an even period of at least 4 and k <= delta-3",
            delta,
            k,
        });
    }
    Ok(())
}

/// Even Δ ≥ 4, k ≤ Δ−3. Built with slack Δ−3: a chain of Δ combs with
/// 2Δ vertices each, the second one upside down, the last Δ−2 joined by
/// bar paths of length Δ−2.
pub fn gadget_even_comb(delta: u32, k: u32) -> Result<Gadget, GadgetError> {
    even_delta(delta, k)?;
    let kp = delta - 3;
    let d = u64::from(delta);
    let len = even_len(delta);
    let step = 2 * d - 3;
    let mut b = Builder::default();
    for i in 0..d {
        if i > 0 {
            b.bi(i - 1, i);
        }
        b.bi(i, tip(i));
    }
    for i in d - 1..=2 * d - 2 {
        if i >= d {
            b.bi(tip(i - 1), tip(i));
        }
        b.bi(i, tip(i));
    }
    for j in 0..=d - 3 {
        let base = 2 * d - 2 + j * step;
        for i in base..=base + d - 1 {
            if i > base {
                b.bi(i - 1, i);
            }
            b.bi(i, tip(i));
        }
        if j + 4 <= d {
            for i in base + d..=base + step {
                b.bi(tip(i - 1), tip(i));
            }
        }
    }
    b.clique_bounds(&(0..d).map(tip).collect::<Vec<_>>(), kp);
    b.clique_bounds(&(d - 1..=2 * d - 2).map(|i| i.to_string()).collect::<Vec<_>>(), kp);
    for p in 0..=d - 3 {
        let base = 2 * d - 2 + p * step;
        b.clique_bounds(&(base..base + d).map(tip).collect::<Vec<_>>(), kp);
    }
    b.clique_bounds(&[tip(0), tip(len)], kp);
    let instance = b.finish(delta)?;
    let designated = designated(&instance, 0, tip(0));
    Ok(Gadget {
        instance,
        family: Family::EvenComb,
        delta,
        k,
        built_k: kp,
        designated,
    })
}

/// One even-comb subgadget on its own: main path `0..Δ-1`, a tooth at each
/// main vertex, tip bounds with slack Δ−3.
pub fn even_subgadget(delta: u32) -> Result<Instance, GadgetError> {
    even_delta(delta, 0)?;
    let d = u64::from(delta);
    let mut b = Builder::default();
    for i in 0..d {
        if i > 0 {
            b.bi(i - 1, i);
        }
        b.bi(i, tip(i));
    }
    b.clique_bounds(&(0..d).map(tip).collect::<Vec<_>>(), delta - 3);
    b.finish(delta)
}

/// Partial labeling from `(from, to, label)` triples.
fn partial(g: &DiGraph, labels: &[(String, String, u32)]) -> Vec<Option<u32>> {
    let mut out = vec![None; g.edge_count()];
    for (a, b, t) in labels {
        let e = g
            .find_edge(g.vertex(a).expect("vertex"), g.vertex(b).expect("vertex"))
            .expect("labelled edge exists");
        out[e] = Some(*t);
    }
    out
}

fn complete(inst: &Instance, fixed: &[Option<u32>], family: Family) -> Result<Labeling, GadgetError> {
    let cfg = SearchConfig::default().with_max_nodes(COMPLETION_BUDGET);
    let cert = solve_exact_with(inst, &cfg, Some(fixed)).map_err(|_| GadgetError::ReferenceInvalid(family))?;
    match cert.verdict {
        Verdict::Feasible(lab) => Ok(lab),
        _ => Err(GadgetError::ReferenceInvalid(family)),
    }
}

fn explicit(inst: &Instance, labels: &[(u64, u64, u32)], family: Family) -> Result<Labeling, GadgetError> {
    let named: Vec<_> = labels
        .iter()
        .map(|&(a, b, t)| (a.to_string(), b.to_string(), t))
        .collect();
    let fixed = partial(inst.graph(), &named);
    let labels = fixed.into_iter().map(|l| l.unwrap_or(0)).collect();
    Labeling::new(inst.delta(), labels).map_err(|_| GadgetError::ReferenceInvalid(family))
}

pub(super) fn reference(g: &Gadget) -> Result<Labeling, GadgetError> {
    let inst = &g.instance;
    let delta = g.delta;
    match g.family {
        Family::OddK0 => {
            let last = 4 + u64::from(delta / 2);
            let mut labels = vec![(1, 3, delta - 1), (2, 3, delta - 1), (3, 1, 0), (3, 2, 0)];
            for i in 3..last {
                let t = (i - 3) as u32;
                labels.push((i, i + 1, t));
                labels.push((i + 1, i, delta - 1 - t));
            }
            explicit(inst, &labels, g.family)
        }
        Family::OddQuarter => {
            let q = u64::from(g.built_k);
            let mut labels = vec![
                (q + 4, q + 3, 0),
                (3, 1, g.built_k + 1),
                (2, 3, 0),
                (q + 3, q + 5, g.built_k + 1),
            ];
            for j in 3..q + 3 {
                labels.push((j + 1, j, (q + 3 - j) as u32));
                labels.push((j, j + 1, (j - 2) as u32));
            }
            explicit(inst, &labels, g.family)
        }
        Family::Delta4 => {
            let labels = [
                (8, 6, 1),
                (7, 6, 1),
                (5, 6, 1),
                (6, 7, 2),
                (6, 8, 2),
                (6, 5, 2),
                (5, 4, 3),
                (4, 5, 3),
                (3, 4, 2),
                (4, 3, 1),
                (3, 1, 2),
                (3, 2, 2),
                (1, 3, 1),
                (2, 3, 1),
            ];
            explicit(inst, &labels, g.family)
        }
        Family::OddComb => {
            let d = u64::from(delta);
            let kp = u64::from(g.built_k);
            let len = (kp + 1) * d;
            let m = |x: i64| x.rem_euclid(i64::from(delta)) as u32;
            let back = |i: u64| m(-1 - i as i64 - (1..=kp).filter(|j| j * d <= i).count() as i64);
            let mut labels = vec![("0".to_string(), tip(0), 0), (tip(0), "0".to_string(), 0)];
            for i in 0..len {
                labels.push((i.to_string(), (i + 1).to_string(), m(1 + i as i64)));
                labels.push(((i + 1).to_string(), i.to_string(), back(i)));
            }
            for j in 1..=kp {
                let t = m(i64::from(back(j * d - 1)) - 1);
                labels.push(((j * d).to_string(), tip(j * d), t));
                labels.push((tip(j * d), (j * d).to_string(), t));
            }
            complete(inst, &partial(inst.graph(), &labels), g.family)
        }
        Family::EvenComb => even_reference(g),
    }
}

/// Main path without waiting, first and last tooth at 0.
fn even_sub_pattern(delta: u32) -> Result<Labeling, GadgetError> {
    let sub = even_subgadget(delta)?;
    let d = u64::from(delta);
    let mut labels = Vec::new();
    for i in 0..d - 1 {
        labels.push((i.to_string(), (i + 1).to_string(), (1 + i) as u32));
        labels.push(((i + 1).to_string(), i.to_string(), (d - 1 - i) as u32));
    }
    for i in [0, d - 1] {
        labels.push((i.to_string(), tip(i), 0));
        labels.push((tip(i), i.to_string(), 0));
    }
    complete(&sub, &partial(sub.graph(), &labels), Family::EvenComb)
}

fn even_reference(g: &Gadget) -> Result<Labeling, GadgetError> {
    let delta = g.delta;
    let d = u64::from(delta);
    let sub = even_subgadget(delta)?;
    let pattern = even_sub_pattern(delta)?;
    let sg = sub.graph();
    let at = |a: String, b: String| {
        pattern.get(
            sg.find_edge(sg.vertex(&a).expect("vertex"), sg.vertex(&b).expect("vertex"))
                .expect("edge"),
        )
    };
    // Each subgadget as (main vertex, tooth tip) names in path order.
    let mut subs: Vec<Vec<(String, String)>> = vec![
        (0..d).map(|i| (i.to_string(), tip(i))).collect(),
        (d - 1..2 * d - 1).map(|i| (tip(i), i.to_string())).collect(),
    ];
    for j in 0..=d - 3 {
        let base = 2 * d - 2 + j * (2 * d - 3);
        subs.push((base..base + d).map(|i| (i.to_string(), tip(i))).collect());
    }
    let mut labels = Vec::new();
    for s in &subs {
        for (i, (main, tooth)) in s.iter().enumerate() {
            let i = i as u64;
            let (pm, pt) = (i.to_string(), tip(i));
            labels.push((main.clone(), tooth.clone(), at(pm.clone(), pt.clone())));
            labels.push((tooth.clone(), main.clone(), at(pt, pm.clone())));
            if i + 1 < d {
                let next = s[i as usize + 1].0.clone();
                let pn = (i + 1).to_string();
                labels.push((main.clone(), next.clone(), at(pm.clone(), pn.clone())));
                labels.push((next, main.clone(), at(pn, pm)));
            }
        }
    }
    complete(&g.instance, &partial(g.instance.graph(), &labels), g.family)
}
