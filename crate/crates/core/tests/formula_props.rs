mod common;

use proptest::prelude::*;

use dtq_core::bits::index_to_bits;
use dtq_core::formula::{check, formula_eval, formula_size, to_formula};

proptest! {
    #[test]
    fn formula_matches_tree(t in common::tree(81, 10)) {
        let f = to_formula(&t).unwrap();
        prop_assert!(formula_size(&f) <= 5 * t.size());
        prop_assert_eq!(formula_size(&f), 6 * t.num_internal() + 1);
        for i in 0..1u64 << t.n() {
            let x = index_to_bits(i, t.n());
            let want = t.leaf_output_bit(t.eval_leaf_ix(&x).unwrap()).unwrap();
            prop_assert_eq!(formula_eval(&f, &x).unwrap(), want);
        }
        prop_assert!(check(&t, &f).unwrap().pass);
    }
}
