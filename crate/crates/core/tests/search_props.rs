use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tempo_core::generate::{random_instance, random_strong_digraph, random_tree};
use tempo_core::instance::Instance;
use tempo_core::search::{brute_force_solutions, enumerate_solutions, propagate, solve_exact, Pruning, SearchConfig};
use tempo_core::temporal::is_valid;

fn small_instance(seed: u64, n: usize, delta: u32, tree: bool) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = if tree {
        random_tree(&mut rng, n)
    } else {
        random_strong_digraph(&mut rng, n, 0.15)
    };
    random_instance(&mut rng, g, delta, 0.6, 2)
}

fn fits(inst: &Instance, cap: f64) -> bool {
    f64::from(inst.delta()).powi(inst.graph().edge_count() as i32) <= cap
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn search_agrees_with_brute_force(seed: u64, n in 2usize..=5, delta in 1u32..=4, tree: bool) {
        let inst = small_instance(seed, n, delta, tree);
        prop_assume!(fits(&inst, 2e5));
        let all = brute_force_solutions(&inst);
        let cert = solve_exact(&inst, &SearchConfig::default());
        prop_assert_eq!(cert.is_feasible(), !all.is_empty());
        if let Some(lab) = cert.labeling() {
            prop_assert!(is_valid(&inst, lab));
        }
        let enumerated = enumerate_solutions(&inst, &SearchConfig::default().without_symmetry());
        let got: BTreeSet<_> = enumerated.solutions.into_iter().collect();
        prop_assert_eq!(got.len(), all.len());
        prop_assert_eq!(got, all.into_iter().collect::<BTreeSet<_>>());
    }

    #[test]
    fn symmetry_breaking_keeps_one_per_shift_class(seed: u64, n in 2usize..=5, delta in 1u32..=4) {
        let inst = small_instance(seed, n, delta, true);
        prop_assume!(fits(&inst, 2e5));
        let full = enumerate_solutions(&inst, &SearchConfig::default().without_symmetry()).solutions;
        let broken = enumerate_solutions(&inst, &SearchConfig::default()).solutions;
        prop_assert_eq!(full.len(), broken.len() * delta as usize);
        let set: BTreeSet<_> = full.iter().cloned().collect();
        for lab in &full {
            for c in 0..delta {
                prop_assert!(set.contains(&lab.shift(c).unwrap()));
            }
        }
    }

    #[test]
    fn propagation_never_prunes_a_completable_assignment(seed: u64, n in 2usize..=4, delta in 2u32..=3, mask: u64) {
        let inst = small_instance(seed, n, delta, false);
        let m = inst.graph().edge_count();
        prop_assume!(m <= 6);
        for lab in brute_force_solutions(&inst) {
            let partial: Vec<Option<u32>> =
                (0..m).map(|e| (mask >> e & 1 == 1).then(|| lab.get(e))).collect();
            prop_assert_eq!(propagate(&inst, &partial), Pruning::Open);
        }
    }

    #[test]
    fn results_do_not_depend_on_thread_count(seed: u64, n in 3usize..=7, delta in 2u32..=4) {
        let inst = small_instance(seed, n, delta, true);
        let one = enumerate_solutions(&inst, &SearchConfig::default().with_threads(1).with_max_nodes(20_000));
        let four = enumerate_solutions(&inst, &SearchConfig::default().with_threads(4).with_max_nodes(20_000));
        prop_assert_eq!(one.solutions, four.solutions);
        prop_assert_eq!(one.nodes, four.nodes);
        prop_assert_eq!(one.truncated, four.truncated);
    }
}

#[test]
fn fully_assigned_violation_is_pruned() {
    let g = tempo_core::generate::bidirected(3, &[(0, 1), (1, 2)]);
    let inst = Instance::new(g, 3, [((0, 2), 2)]).unwrap();
    let zeros = vec![Some(0); 4];
    assert!(matches!(
        propagate(&inst, &zeros),
        Pruning::Prune { from: 0, to: 2, .. }
    ));
    assert_eq!(propagate(&inst, &[None; 4]), Pruning::Open);
}
