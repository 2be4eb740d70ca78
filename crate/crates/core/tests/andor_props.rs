mod common;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use dtq_core::andor::{
    play, AndOrTree, Decision, Exhaustive, Opponent, PaperDelayer, PaperProver, RandomDelayer, RandomProver,
};
use dtq_core::bits::index_to_bits;

proptest! {
    #[test]
    fn restrictions_preserve_semantics(t in common::andor(12), seed in any::<u64>()) {
        let n = t.n();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut cur = t.contract();
        prop_assert!(cur.is_reduced());
        let mut fixed = vec![None; n];
        for _ in 0..rng.gen_range(0..=n) {
            let var = rng.gen_range(0..n);
            if fixed[var].is_some() || cur.is_empty() {
                continue;
            }
            let b = rng.gen_bool(0.5);
            fixed[var] = Some(b);
            cur = cur.update(var, b).unwrap().contract();
            prop_assert!(cur.is_reduced());
        }
        for i in 0..1u64 << n {
            let x = index_to_bits(i, n);
            if fixed.iter().zip(&x).any(|(f, &xb)| f.is_some_and(|b| b != xb)) {
                continue;
            }
            prop_assert_eq!(cur.eval(&x).unwrap(), t.eval(&x).unwrap());
        }
    }

    #[test]
    fn contract_keeps_measures(t in common::andor(16)) {
        let (a, b) = (t.measures(), t.contract().measures());
        prop_assert_eq!((a.p, a.s), (b.p, b.s));
        prop_assert_eq!(t.contract().contract(), t.contract());
    }

    #[test]
    fn paper_delayer_conserves_score_plus_p(t in common::andor(16), seed in any::<u64>()) {
        let tr = play(&t, &mut RandomProver::new(seed), &mut PaperDelayer).unwrap();
        for r in &tr.rounds {
            prop_assert_eq!(r.score + r.p, tr.initial_p);
        }
        prop_assert_eq!(tr.final_score, tr.initial_p);
    }

    #[test]
    fn paper_prover_gains_on_every_defer(t in common::andor(16), seed in any::<u64>()) {
        let tr = play(&t, &mut PaperProver, &mut RandomDelayer::new(seed)).unwrap();
        let mut s = tr.initial_s;
        for r in &tr.rounds {
            if r.decision == Decision::Defer {
                prop_assert!(r.s < s, "defer left S at {} from {}", r.s, s);
            }
            prop_assert!(r.s <= s);
            s = r.s;
        }
        prop_assert!(tr.final_score <= tr.initial_s);
    }

    #[test]
    fn measures_vanish_only_on_constants(t in common::andor(16), seed in any::<u64>()) {
        let tr = play(&t, &mut RandomProver::new(seed), &mut RandomDelayer::new(seed ^ 1)).unwrap();
        for r in &tr.rounds {
            let empty = r.tree.starts_with("const");
            prop_assert_eq!(r.p == 0, empty);
            prop_assert_eq!(r.s == 0, empty);
        }
    }
}

#[test]
fn complete_trees_start_at_n_plus_two_over_three() {
    for depth in [2, 4, 6] {
        let n = 1u32 << depth;
        let m = AndOrTree::complete(depth).unwrap().measures();
        assert_eq!((m.p, m.s), (n.div_ceil(3), n.div_ceil(3)));
    }
}

#[test]
fn paper_strategies_against_many_opponents() {
    for depth in [2, 4] {
        let t = AndOrTree::complete(depth).unwrap();
        let want = (1u32 << depth).div_ceil(3);
        for seed in 0..100 {
            assert_eq!(play(&t, &mut RandomProver::new(seed), &mut PaperDelayer).unwrap().final_score, want);
            assert!(play(&t, &mut PaperProver, &mut RandomDelayer::new(seed)).unwrap().final_score <= want);
        }
    }
}

#[test]
fn exhaustive_players_at_four_leaves() {
    let t = AndOrTree::complete(2).unwrap();
    let adv = play(&t, &mut Exhaustive::new(Opponent::Adversarial), &mut Exhaustive::new(Opponent::Adversarial));
    assert_eq!(adv.unwrap().final_score, 2);
    assert!(play(&t, &mut Exhaustive::new(Opponent::Paper), &mut PaperDelayer).unwrap().final_score >= 2);
    assert!(play(&t, &mut PaperProver, &mut Exhaustive::new(Opponent::Paper)).unwrap().final_score <= 2);
}
