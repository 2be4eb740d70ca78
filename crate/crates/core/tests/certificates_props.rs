//! Span program and dual adversary solutions built from the same weights.

mod common;

use common::rel;
use proptest::prelude::*;

use dtq_core::bits::index_to_bits;
use dtq_core::weights::{appendix_b_weights, canonical_weights, evaluate, opt_value};
use dtq_core::{dualadv, spanprog, DTree, WeightMap};

fn weightings(t: &DTree) -> Vec<WeightMap> {
    vec![WeightMap::unit(t), canonical_weights(t), appendix_b_weights(t)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn span_program_computes_the_tree(t in common::tree(41, 8)) {
        for w in weightings(&t) {
            let inst = spanprog::build(&t, &w).unwrap();
            let rep = spanprog::verify_all(&inst, &t).unwrap();
            prop_assert!(rep.pass, "{:?}", rep.worst);
        }
    }

    #[test]
    fn witness_norms_are_path_sums(t in common::tree(41, 8)) {
        for w in weightings(&t) {
            let inst = spanprog::build(&t, &w).unwrap();
            for i in 0..1u64 << t.n() {
                let x = index_to_bits(i, t.n());
                let p = t.path_for_input(&x).unwrap();
                let wp = spanprog::witnesses(&inst, &t, &x).unwrap();
                let plus: f64 = wp.positive.iter().map(|(_, a)| a * a).sum();
                let want: f64 = t.path_edges(&p).iter().map(|&e| 1.0 / w.get(e).unwrap()).sum();
                prop_assert!(rel(plus, want) <= 1e-9);
                // ||A^T neg||^2: only columns leaving the path are nonzero.
                let mut neg = vec![0.0; inst.dim];
                for &(v, a) in &wp.negative {
                    neg[v] += a;
                }
                let minus: f64 = inst
                    .columns
                    .iter()
                    .map(|c| (c.scale * (neg[c.parent] - neg[c.child])).powi(2))
                    .sum();
                let want: f64 = t.deviating_edges(&p).iter().map(|&e| w.get(e).unwrap()).sum();
                prop_assert!(rel(minus, want) <= 1e-9);
            }
        }
    }

    #[test]
    fn witness_size_dominates_opt(t in common::tree(41, 8)) {
        let opt = opt_value(&t);
        for w in weightings(&t) {
            let ws = spanprog::witness_sizes(&spanprog::build(&t, &w).unwrap(), &t).unwrap();
            prop_assert!(ws.size >= opt - 1e-9);
        }
        let ws = spanprog::witness_sizes(&spanprog::build(&t, &canonical_weights(&t)).unwrap(), &t).unwrap();
        prop_assert!(rel(ws.size, opt) <= 1e-9);
    }

    #[test]
    fn dual_solution_is_feasible(t in common::tree(41, 7)) {
        for w in weightings(&t) {
            let sol = dualadv::build(&t, &w).unwrap();
            let rep = dualadv::check_feasibility(&sol, 12).unwrap();
            prop_assert!(rep.pass, "{} at {:?}", rep.max_residual, rep.worst_pair);
            prop_assert_eq!(rep.pairs_checked, 1u64 << (2 * t.n()));
        }
    }

    #[test]
    fn dual_objective_matches_the_weight_program(t in common::tree(61, 10)) {
        for w in weightings(&t) {
            let v = evaluate(&t, &w).unwrap();
            let obj = dualadv::objective(&dualadv::build(&t, &w).unwrap());
            prop_assert!((obj - v.alpha.max(v.beta)).abs() <= 1e-12 * obj.max(1.0));
        }
        let canon = dualadv::objective(&dualadv::build(&t, &canonical_weights(&t)).unwrap());
        prop_assert!(rel(canon, opt_value(&t)) <= 1e-9);
    }

    #[test]
    fn balanced_dual_objective(t in common::tree(61, 10), c in 0.01f64..100.0) {
        prop_assume!(t.num_internal() > 0);
        let w = WeightMap::unit(&t).scaled(c);
        let v = evaluate(&t, &w).unwrap();
        let b = dualadv::balance(&w, v.alpha, v.beta).unwrap();
        let obj = dualadv::objective(&dualadv::build(&t, &b).unwrap());
        prop_assert!(rel(obj, (v.alpha * v.beta).sqrt()) <= 1e-9);
    }
}
