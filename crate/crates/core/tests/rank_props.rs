mod common;

use proptest::prelude::*;

use dtq_core::rank::{
    coloring_cost, exhaustive_guessing_complexity, func_rank, game_value, node_ranks, optimal_coloring, tree_rank, Color,
};
use dtq_core::TruthTable;

proptest! {
    #[test]
    fn guessing_complexity_is_rank(t in common::tree(21, 10)) {
        prop_assert_eq!(exhaustive_guessing_complexity(&t).unwrap(), tree_rank(&t));
    }

    #[test]
    fn optimal_coloring_is_legal_and_tight(t in common::tree(401, 20)) {
        let c = optimal_coloring(&t);
        for v in t.internal_nodes() {
            let blacks = [0, 1].iter().filter(|&&b| c.color[&t.edge_of(v, b)] == Color::Black).count();
            prop_assert!(blacks <= 1);
        }
        prop_assert_eq!(coloring_cost(&t, &c).unwrap(), tree_rank(&t));
    }

    #[test]
    fn rank_is_logarithmic(t in common::tree(401, 20)) {
        let cap = ((t.size() + 1) as f64).log2() - 1.0;
        prop_assert!(f64::from(tree_rank(&t)) <= cap + 1e-12);
    }

    #[test]
    fn rank_is_monotone_under_subtrees(t in common::tree(201, 16)) {
        let r = node_ranks(&t);
        for v in 0..t.size() {
            prop_assert!(r[v] <= r[t.root()]);
            prop_assert_eq!(tree_rank(&t.subtree(v)), r[v]);
        }
    }

    #[test]
    fn function_rank_is_game_value(n in 1usize..=4, code in any::<u16>()) {
        let bits = 1u32 << n;
        let mask = if bits == 16 { u16::MAX } else { (1u16 << bits) - 1 };
        let f = TruthTable::from_hex(n, &format!("{:X}", code & mask)).unwrap();
        prop_assert_eq!(func_rank(&f).unwrap(), game_value(&f).unwrap());
    }

    #[test]
    fn function_rank_at_most_tree_rank(t in common::tree(31, 6)) {
        let f = TruthTable::from_tree(&t).unwrap();
        prop_assert!(func_rank(&f).unwrap() <= tree_rank(&t));
    }
}
