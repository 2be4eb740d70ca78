#![allow(dead_code)]

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use dtq_core::andor::{AndOrTree, Expr, Gate};
use dtq_core::DTree;

/// Seeded random decision trees with at most `max_budget` nodes and
/// `max_n` variables.
pub fn tree(max_budget: usize, max_n: usize) -> impl Strategy<Value = DTree> {
    (any::<u64>(), 1..=max_budget, 1..=max_n).prop_map(|(seed, budget, n)| DTree::random(seed, budget, n).unwrap())
}

pub fn rel(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

/// Random read-once AND-OR tree using every variable below `n`, fan-in 2 or 3.
pub fn andor_from_seed(seed: u64, n: usize) -> AndOrTree {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut vars: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        vars.swap(i, rng.gen_range(0..=i));
    }
    fn grow(rng: &mut ChaCha8Rng, vars: &[usize]) -> Expr {
        if vars.len() == 1 {
            return Expr::Leaf(vars[0]);
        }
        let parts = rng.gen_range(2..=vars.len().min(3));
        let mut cuts: Vec<usize> = (1..vars.len()).collect();
        for i in (1..cuts.len()).rev() {
            cuts.swap(i, rng.gen_range(0..=i));
        }
        cuts.truncate(parts - 1);
        cuts.sort_unstable();
        let mut kids = Vec::new();
        let mut lo = 0;
        for hi in cuts.into_iter().chain([vars.len()]) {
            kids.push(grow(rng, &vars[lo..hi]));
            lo = hi;
        }
        Expr::Gate(if rng.gen_bool(0.5) { Gate::And } else { Gate::Or }, kids)
    }
    AndOrTree::new(n, grow(&mut rng, &vars)).unwrap()
}

pub fn andor(max_n: usize) -> impl Strategy<Value = AndOrTree> {
    (any::<u64>(), 1..=max_n).prop_map(|(seed, n)| andor_from_seed(seed, n))
}
