use tempo_core::gadgets::{
    build_gadget, nae3sat_to_ditgr, reduce_ttr_to_dittr, reference_labeling, star_from_coloring, waiting_profile,
    Family, Gadget, MonotoneCnf,
};
use tempo_core::generate::bidirected;
use tempo_core::graph::{classify, DiGraph, TopologyClass};
use tempo_core::instance::{slack, Instance, Labeling};
use tempo_core::io::{CnfDoc, UndirectedGraphDoc};
use tempo_core::search::{enumerate_solutions, solve_exact, SearchConfig};
use tempo_core::temporal::{duration_matrix, is_valid};

fn small_gadgets() -> Vec<Gadget> {
    [
        (Family::OddK0, 3, 0),
        (Family::OddK0, 5, 0),
        (Family::OddQuarter, 5, 1),
        (Family::OddQuarter, 13, 3),
        (Family::Delta4, 4, 0),
        (Family::OddComb, 3, 1),
        (Family::OddComb, 5, 2),
        (Family::EvenComb, 4, 1),
        (Family::EvenComb, 6, 2),
    ]
    .into_iter()
    .map(|(f, d, k)| build_gadget(f, d, k).unwrap())
    .collect()
}

fn edge(g: &DiGraph, a: &str, b: &str) -> usize {
    g.find_edge(g.vertex(a).unwrap(), g.vertex(b).unwrap()).unwrap()
}

#[test]
fn gadgets_are_bidirected_trees_with_enough_slack() {
    for g in small_gadgets() {
        let inst = &g.instance;
        assert!(
            matches!(classify(inst.graph()), TopologyClass::BidirectedTree { .. }),
            "{}",
            g.family
        );
        let k_min = slack(inst).k_min.unwrap();
        assert!(k_min >= g.k, "{} slack {} below {}", g.family, k_min, g.k);
        if g.family.is_comb() {
            for (&(u, v), &d) in inst.bounds() {
                assert_eq!(d, inst.distance(u, v) + g.built_k, "{} bound {}->{}", g.family, u, v);
            }
        }
    }
}

#[test]
fn reference_labelings_and_their_shifts_are_valid() {
    for g in small_gadgets() {
        let lab = reference_labeling(&g).unwrap();
        for c in 0..g.delta {
            let shifted = lab.shift(c).unwrap();
            assert!(is_valid(&g.instance, &shifted), "{} shift {}", g.family, c);
            assert!(g.is_symmetric_on_designated(&shifted));
        }
    }
}

#[test]
fn odd_k0_reference_is_equal_on_the_designated_pair() {
    let g = build_gadget(Family::OddK0, 3, 0).unwrap();
    let lab = reference_labeling(&g).unwrap();
    let gr = g.instance.graph();
    assert_eq!(lab.get(edge(gr, "4", "5")), lab.get(edge(gr, "5", "4")));
}

#[test]
fn odd_comb_profiles_stay_within_the_slack() {
    let g = build_gadget(Family::OddComb, 3, 1).unwrap();
    let all = enumerate_solutions(&g.instance, &SearchConfig::default());
    assert!(all.truncated.is_none());
    assert!(!all.solutions.is_empty());
    for lab in &all.solutions {
        let p = waiting_profile(&g, lab).unwrap();
        for w in p.plus.iter().chain(&p.minus).flatten() {
            assert!(*w <= u64::from(g.built_k));
        }
        let plus: Vec<u64> = p.plus.iter().flatten().copied().collect();
        assert!(plus.windows(2).all(|w| w[0] <= w[1]), "{:?}", p.plus);
    }
}

#[test]
fn all_zero_labeling_waits_too_long() {
    let g = build_gadget(Family::OddComb, 3, 1).unwrap();
    let zero = Labeling::constant(3, g.instance.graph().edge_count(), 0);
    assert!(!is_valid(&g.instance, &zero));
    let p = waiting_profile(&g, &zero).unwrap();
    assert!(p
        .plus
        .iter()
        .chain(&p.minus)
        .flatten()
        .any(|&w| w > u64::from(g.built_k)));
}

fn cnf(clauses: &[[&str; 3]]) -> MonotoneCnf {
    MonotoneCnf::from_doc(&CnfDoc {
        clauses: clauses.iter().map(|c| c.map(String::from)).collect(),
    })
    .unwrap()
}

/// Readout edge of every occurrence of every variable.
fn occurrence_edges(g: &DiGraph, cnf: &MonotoneCnf) -> Vec<Vec<usize>> {
    let slots = [("3", "4"), ("1", "2"), ("2", "3")];
    let mut out = vec![Vec::new(); cnf.variables.len()];
    for (c, clause) in cnf.clauses.iter().enumerate() {
        for (s, &x) in clause.iter().enumerate() {
            let (a, b) = slots[s];
            out[x].push(edge(g, &format!("{a}_{}", c + 1), &format!("{b}_{}", c + 1)));
        }
    }
    out
}

#[test]
fn linked_clauses_read_out_consistently() {
    let f = cnf(&[["a", "b", "c"], ["d", "e", "a"]]);
    for symmetric in [false, true] {
        let r = nae3sat_to_ditgr(&f, symmetric).unwrap();
        let g = r.instance.graph();
        if !symmetric {
            let (v7, v2) = (g.vertex("7_1").unwrap(), g.vertex("2_2").unwrap());
            assert_eq!(r.instance.bound(v7, v2), Some(2));
            let (v8, v3) = (g.vertex("8_1").unwrap(), g.vertex("3_2").unwrap());
            assert_eq!(r.instance.bound(v8, v3), Some(2));
        }
        let all = enumerate_solutions(&r.instance, &SearchConfig::default().without_symmetry());
        assert!(all.truncated.is_none());
        assert!(!all.solutions.is_empty());
        let occ = occurrence_edges(g, &f);
        for lab in &all.solutions {
            for edges in &occ {
                assert!(edges.iter().all(|&e| lab.get(e) == lab.get(edges[0])));
            }
            assert!(f.nae_satisfied(&r.assignment(lab)));
        }
    }
}

#[test]
fn single_clause_solutions_are_exactly_the_nae_assignments() {
    let f = cnf(&[["x", "y", "z"]]);
    let r = nae3sat_to_ditgr(&f, false).unwrap();
    let all = enumerate_solutions(&r.instance, &SearchConfig::default().without_symmetry());
    let mut seen: Vec<Vec<bool>> = all.solutions.iter().map(|l| r.assignment(l)).collect();
    seen.sort();
    seen.dedup();
    let mut expect: Vec<Vec<bool>> = (0u8..8)
        .map(|m| (0..3).map(|i| m >> i & 1 == 1).collect())
        .filter(|a: &Vec<bool>| f.nae_satisfied(a))
        .collect();
    expect.sort();
    assert_eq!(seen, expect);
}

fn star_through_ttr(n: usize) -> bool {
    let names: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            edges.push([names[i].clone(), names[j].clone()]);
        }
    }
    let doc = UndirectedGraphDoc { vertices: names, edges };
    let star = star_from_coloring(&doc, 3).unwrap();
    let r = reduce_ttr_to_dittr(&star.instance, 0).unwrap();
    let cert = solve_exact(&r.instance, &SearchConfig::default());
    assert!(cert.is_feasible() || cert.is_infeasible());
    if let Some(lab) = cert.labeling() {
        assert!(is_valid(&star.instance, &r.project(lab)));
    }
    cert.is_feasible()
}

#[test]
fn complete_graph_stars_compose_through_the_tree_reduction() {
    assert!(star_through_ttr(3));
    assert!(!star_through_ttr(4));
}

#[test]
fn tree_reduction_preserves_feasibility_on_paths() {
    let g = bidirected(4, &[(0, 1), (1, 2), (2, 3)]);
    for d03 in [3u64, 4, 5] {
        for d02 in [2u64, 3] {
            let inst = Instance::new_undirected(
                g.clone(),
                3,
                [((0, 3), d03), ((3, 0), d03), ((0, 2), d02), ((2, 0), d02)],
            )
            .unwrap();
            let r = reduce_ttr_to_dittr(&inst, 0).unwrap();
            let small = solve_exact(&inst, &SearchConfig::default());
            let big = solve_exact(&r.instance, &SearchConfig::default());
            assert_eq!(small.is_feasible(), big.is_feasible(), "D03={d03} D02={d02}");
            if let Some(lab) = small.labeling() {
                let lifted = r.lift(lab).unwrap();
                assert!(is_valid(&r.instance, &lifted));
                assert_eq!(
                    duration_matrix(inst.graph(), &r.project(&lifted)),
                    duration_matrix(inst.graph(), lab)
                );
            }
        }
    }
}
