use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tempo_core::generate::{exact_bounds, random_instance, random_odd_cycle_plus_trees, random_tree};
use tempo_core::graph::{classify, static_distances, TopologyClass};
use tempo_core::instance::Instance;
use tempo_core::polycases::{
    auto_solve, exact_tree_construct, exact_tree_decide, necessary_condition, odd_cycle_delta2_solve, root_labeling,
};
use tempo_core::search::{solve_exact, SearchConfig};
use tempo_core::temporal::{duration_matrix, is_valid};

fn budget() -> SearchConfig {
    SearchConfig::default().with_max_nodes(2_000_000)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn root_labeling_waits_within_the_period_bound(seed: u64, n in 2usize..=20, delta in 1u32..=8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_tree(&mut rng, n);
        let root = rng.gen_range(0..n);
        let inst = Instance::new(g, delta, []).unwrap();
        let lab = root_labeling(&inst, root).unwrap();
        let m = duration_matrix(inst.graph(), &lab);
        let dist = static_distances(inst.graph()).unwrap();
        let worst = inst.graph().vertices()
            .flat_map(|u| inst.graph().vertices().map(move |v| (u, v)))
            .filter(|&(u, v)| u != v)
            .map(|(u, v)| m.get(u, v) - u64::from(dist.get(u, v)))
            .max()
            .unwrap_or(0);
        let cap = match delta {
            1 | 2 => 0,
            d if d % 2 == 1 => u64::from(d - 1),
            d => u64::from(d - 2),
        };
        prop_assert!(worst <= cap, "worst {} cap {}", worst, cap);
    }

    #[test]
    fn exact_trees_agree_with_search(seed: u64, n in 2usize..=9, delta in 2u32..=6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_tree(&mut rng, n);
        let bounds = exact_bounds(&g);
        let inst = Instance::new(g, delta, bounds).unwrap();
        let verdict = exact_tree_decide(&inst).unwrap();
        let cert = solve_exact(&inst, &budget());
        prop_assert!(!matches!(cert.verdict, tempo_core::Verdict::Unknown(_)));
        prop_assert_eq!(verdict.passed(), cert.is_feasible());
        if verdict.passed() {
            prop_assert!(is_valid(&inst, &exact_tree_construct(&inst).unwrap()));
        }
    }

    #[test]
    fn branching_pair_failure_implies_infeasible(seed: u64, n in 4usize..=9, delta in 2u32..=6, density in 0.3f64..1.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_tree(&mut rng, n);
        let inst = random_instance(&mut rng, g, delta, density, 1);
        if !necessary_condition(&inst).unwrap().passed() {
            let cert = solve_exact(&inst, &budget());
            prop_assert!(cert.is_infeasible(), "refuted instance was {}", cert.status());
        }
    }

    #[test]
    fn odd_cycle_case_agrees_with_search(seed: u64, n in 3usize..=11, density in 0.1f64..0.9) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_odd_cycle_plus_trees(&mut rng, n);
        let bounds: Vec<_> = exact_bounds(&g).into_iter().filter(|_| rng.gen_bool(density)).collect();
        let inst = Instance::new(g, 2, bounds).unwrap();
        let shaped = matches!(classify(inst.graph()), TopologyClass::BidirectedOddCyclePlusTrees { .. });
        prop_assert!(shaped);
        let fast = odd_cycle_delta2_solve(&inst).unwrap();
        let slow = solve_exact(&inst, &budget());
        prop_assert_eq!(fast.is_feasible(), slow.is_feasible());
        if let Some(lab) = fast.labeling() {
            prop_assert!(is_valid(&inst, lab));
        }
    }

    #[test]
    fn dispatcher_agrees_with_search(seed: u64, n in 2usize..=8, delta in 1u32..=5, slack in 0u32..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_tree(&mut rng, n);
        let inst = random_instance(&mut rng, g, delta, 0.5, slack);
        let auto = auto_solve(&inst, &budget());
        let slow = solve_exact(&inst, &budget());
        prop_assert_eq!(auto.is_feasible(), slow.is_feasible());
        if let Some(lab) = auto.labeling() {
            prop_assert!(is_valid(&inst, lab));
        }
    }
}
