use proptest::prelude::*;

use rand::SeedableRng;
use redblue::approx::{decomposition_report, split_mst, TieBreakPlan};
use redblue::cyclecover::{
    decode_cover, encode_matching, exact_bottleneck_2matching, find_c6_cover, to_dummy_graph, validate_cover,
};
use redblue::generators::{gen_random_metric, reduce_1in3_to_2matching, CnfFormula, Flavor, RandomModel};
use redblue::instance::{cost, metric_closure, validate_metric, validate_solution};
use redblue::io::{instance_from_str, instance_to_string, solution_from_str, solution_to_string, SolutionRecord};
use redblue::oracle::{cross_edge_audit, exact_opt, ratio_experiment, solve_coloring, ObjectiveValues, OracleConfig};
use redblue::solvers::OrderPolicy;
use redblue::{Coloring, MetricInstance, Objective, StructureKind, Weight};

fn model() -> impl Strategy<Value = RandomModel> {
    prop_oneof![Just(RandomModel::UniformMatrixClosure), Just(RandomModel::IntegerGrid2D), Just(RandomModel::Weights12),]
}

fn instance(pairs: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = MetricInstance> {
    (pairs, any::<u64>(), model()).prop_map(|(n, seed, m)| gen_random_metric(n, seed, m).unwrap())
}

fn with_coloring(pairs: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = (MetricInstance, Coloring)> {
    instance(pairs).prop_flat_map(|inst| {
        let n = inst.n_pairs();
        (Just(inst), proptest::collection::vec(any::<bool>(), n).prop_map(Coloring::new))
    })
}

fn weight() -> impl Strategy<Value = Weight> {
    (0u64..1000, 1u64..50).prop_map(|(a, b)| Weight::ratio(a, b))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn weight_text_round_trip(w in weight()) {
        prop_assert_eq!(w.to_string().parse::<Weight>().unwrap(), w);
    }

    #[test]
    fn instance_text_round_trip(inst in instance(1..=5)) {
        let text = instance_to_string(&inst);
        prop_assert_eq!(instance_from_str(&text, "mem").unwrap(), inst);
    }

    #[test]
    fn color_swap_keeps_values((inst, c) in with_coloring(1..=4)) {
        for kind in StructureKind::ALL {
            if kind == StructureKind::PerfectMatching && inst.n_pairs() % 2 == 1 {
                continue;
            }
            for objective in Objective::ALL {
                let a = solve_coloring(&inst, &c, kind, objective);
                let b = solve_coloring(&inst, &c.flipped(), kind, objective);
                prop_assert_eq!(validate_solution(&inst, &a), Ok(()));
                let (va, vb) = (ObjectiveValues::of(&inst, &a), ObjectiveValues::of(&inst, &b));
                prop_assert_eq!(va.get(objective), vb.get(objective));
            }
        }
    }

    #[test]
    fn solution_text_round_trip((inst, c) in with_coloring(1..=4), objective in prop_oneof![
        Just(Objective::MinSum), Just(Objective::MinMax), Just(Objective::Bottleneck)
    ]) {
        let pair = solve_coloring(&inst, &c, StructureKind::Tour, objective);
        let rec = SolutionRecord { value: Some(cost(&inst, &pair, objective)), objective: Some(objective), pair };
        prop_assert_eq!(solution_from_str(&solution_to_string(&rec), "mem").unwrap(), rec);
    }

    #[test]
    fn decomposition_slacks_nonnegative((inst, c) in with_coloring(1..=7)) {
        let report = decomposition_report(&inst, &c.node_colors());
        prop_assert!(report.all_nonnegative(), "{:?}", report);
    }

    #[test]
    fn cross_edge_claim_holds((inst, c) in with_coloring(1..=5)) {
        let split = split_mst(&inst);
        for kind in [StructureKind::SpanningTree, StructureKind::Tour] {
            let pair = solve_coloring(&inst, &c, kind, Objective::MinSum);
            prop_assert!(cross_edge_audit(&inst, &split, &pair).holds);
        }
    }

    #[test]
    fn closure_is_metric_and_below_defined(
        n in 2usize..7,
        entries in proptest::collection::vec(proptest::option::of(1u64..20), 21),
    ) {
        let mut partial = vec![vec![None; n]; n];
        let mut k = 0;
        for u in 0..n {
            for v in u + 1..n {
                partial[u][v] = entries[k].map(Weight::from_int);
                k += 1;
            }
        }
        let default = Weight::from_int(25);
        match metric_closure(&partial, &default) {
            Ok(m) => {
                let inst = MetricInstance::new(n / 2, m.submatrix(&(0..n / 2 * 2).collect::<Vec<_>>())).unwrap();
                prop_assert!(validate_metric(&inst).is_empty());
                for u in 0..n {
                    for v in u + 1..n {
                        if let Some(d) = &partial[u][v] {
                            prop_assert_eq!(m.get(u, v), d);
                        }
                    }
                }
            }
            Err(e) => {
                let consistent = matches!(e, redblue::instance::InstanceError::InconsistentEntry { .. });
                prop_assert!(consistent, "{}", e);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn approximation_bounds(inst in instance(2..=5), start in 0usize..4, desc in any::<bool>()) {
        let cfg = OracleConfig::default();
        let plan = TieBreakPlan {
            euler_policy: if desc { OrderPolicy::IndexDescending } else { OrderPolicy::IndexAscending },
            start_node: Some(start),
            ..TieBreakPlan::default()
        };
        for (kind, objective, bound) in [
            (StructureKind::SpanningTree, Objective::MinSum, 3),
            (StructureKind::SpanningTree, Objective::MinMax, 4),
            (StructureKind::Tour, Objective::MinSum, 4),
            (StructureKind::Tour, Objective::MinMax, 4),
        ] {
            let rec = ratio_experiment(&inst, kind, objective, &plan, &cfg).unwrap();
            prop_assert_eq!(validate_solution(&inst, &rec.alg_solution), Ok(()));
            prop_assert!(rec.alg_value >= rec.opt_value);
            prop_assert!(rec.ratio.at_most(bound), "{:?} {:?} {}", kind, objective, rec.ratio);
        }
    }

    #[test]
    fn sharded_oracle_equals_sequential(inst in instance(1..=6), jobs in 2usize..6) {
        let seq = OracleConfig::default();
        let par = OracleConfig { jobs, ..OracleConfig::default() };
        for kind in [StructureKind::SpanningTree, StructureKind::Tour] {
            for objective in Objective::ALL {
                prop_assert_eq!(
                    exact_opt(&inst, kind, objective, &seq).unwrap(),
                    exact_opt(&inst, kind, objective, &par).unwrap()
                );
            }
        }
    }

    #[test]
    fn cover_exists_iff_unit_bottleneck(seed in any::<u64>(), half in 1usize..=2) {
        let inst = gen_random_metric(2 * half, seed, RandomModel::Weights12).unwrap();
        let g = to_dummy_graph(&inst, &Weight::one());
        let opt = exact_opt(&inst, StructureKind::PerfectMatching, Objective::Bottleneck, &OracleConfig::default())
            .unwrap();
        let cover = find_c6_cover(&g, 40).unwrap();
        prop_assert_eq!(cover.is_some(), opt.best_value <= Weight::one());
        prop_assert_eq!(exact_bottleneck_2matching(&inst, 40).unwrap(), opt.best_value);
        if let Some(cover) = cover {
            prop_assert_eq!(validate_cover(&g, &cover), Ok(()));
            prop_assert_eq!(cover.cycles.iter().map(Vec::len).sum::<usize>(), g.n_nodes());
            for cycle in &cover.cycles {
                let real = cycle.iter().filter(|&&v| !g.is_dummy(v)).count() / 2;
                prop_assert_eq!(real % 2, 0);
                prop_assert_eq!(cycle.len(), 3 * real);
            }
            let (_, pair) = decode_cover(&g, &cover).unwrap();
            prop_assert_eq!(validate_solution(&inst, &pair), Ok(()));
            prop_assert!(cost(&inst, &pair, Objective::Bottleneck) <= Weight::one());
            prop_assert_eq!(encode_matching(&g, &pair).unwrap().edge_set(), cover.edge_set());
        }
    }

    #[test]
    fn matching_reduction_is_well_formed(seed in any::<u64>(), vars in 1usize..5, clauses in 1usize..4) {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let cnf = CnfFormula::random(vars, clauses, Flavor::MonotoneOneInThree, &mut rng);
        let red = reduce_1in3_to_2matching(&cnf).unwrap();
        prop_assert_eq!(red.built.graph.validate_structure(), Ok(()));
        prop_assert_eq!(red.instance.n_pairs() % 2, 0);
        prop_assert_eq!(red.annotations.len(), red.built.graph.n_nodes());
        prop_assert!(validate_metric(&red.instance).is_empty());
    }
}
