//! Rank, guessing complexity, and the Prover-Delayer game value.
//!
//! `func_rank` and `game_value` are two independent dynamic programs over
//! restrictions of a truth table. Both are memoized on the restricted
//! table itself, so restrictions that yield the same subfunction share one
//! entry.
//!
//! The rank DP is justified by monotonicity: `combine(a, b)` (max if
//! unequal, else a + 1) is nondecreasing in both arguments, so a tree of
//! minimum rank can pick its root variable and then independently use a
//! minimum-rank tree for each restriction.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;

use crate::dtree::{DTree, EdgeId, RandomizedDTree};
use crate::error::{Error, Result};
use crate::truth_table::TruthTable;

/// Largest table the function-level DPs accept.
pub const MAX_FUNC_N: usize = 12;

/// Largest tree [`exhaustive_guessing_complexity`] will enumerate.
pub const MAX_EXHAUSTIVE_INTERNAL: usize = 16;

fn combine(a: u32, b: u32) -> u32 {
    if a == b {
        a + 1
    } else {
        a.max(b)
    }
}

/// Rank of every node, by dense index.
pub fn node_ranks(t: &DTree) -> Vec<u32> {
    let mut r = vec![0u32; t.size()];
    for &v in t.preorder().iter().rev() {
        if let Some([c0, c1]) = t.children(v) {
            r[v] = combine(r[c0], r[c1]);
        }
    }
    r
}

pub fn tree_rank(t: &DTree) -> u32 {
    node_ranks(t)[t.root()]
}

/// Max rank over the support.
pub fn rrank(r: &RandomizedDTree) -> u32 {
    r.support().iter().map(|(_, t)| tree_rank(t)).max().unwrap_or(0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Color {
    Black,
    Red,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GColoring {
    pub color: BTreeMap<EdgeId, Color>,
}

impl GColoring {
    pub fn black_edges(&self) -> Vec<EdgeId> {
        self.color
            .iter()
            .filter(|(_, c)| **c == Color::Black)
            .map(|(e, _)| *e)
            .collect()
    }
}

/// Black toward the child of larger rank; on ties, black on the 0-edge.
pub fn optimal_coloring(t: &DTree) -> GColoring {
    let r = node_ranks(t);
    let mut color = BTreeMap::new();
    for v in t.internal_nodes() {
        let [c0, c1] = t.children(v).expect("internal");
        let black = if r[c1] > r[c0] { 1 } else { 0 };
        for b in [0u8, 1] {
            let c = if b == black { Color::Black } else { Color::Red };
            color.insert(t.edge_of(v, b), c);
        }
    }
    GColoring { color }
}

/// Max number of red edges on a root-to-leaf path. Fails if an edge is
/// uncolored or a node has two black out-edges.
pub fn coloring_cost(t: &DTree, c: &GColoring) -> Result<u32> {
    let mut cost = vec![0u32; t.size()];
    for &v in t.preorder().iter().rev() {
        let Some(kids) = t.children(v) else { continue };
        let mut blacks = 0;
        let mut best = 0;
        for (b, &child) in kids.iter().enumerate() {
            let e = t.edge_of(v, b as u8);
            let col = c
                .color
                .get(&e)
                .ok_or_else(|| Error::InvalidParameter(format!("edge {e} is not colored")))?;
            let red = match col {
                Color::Black => {
                    blacks += 1;
                    0
                }
                Color::Red => 1,
            };
            best = best.max(cost[child] + red);
        }
        if blacks > 1 {
            return Err(Error::InvalidParameter(format!(
                "node {} has two black out-edges",
                t.id(v)
            )));
        }
        cost[v] = best;
    }
    Ok(cost[t.root()])
}

/// Minimum coloring cost over all 3^k legal colorings (per internal node:
/// black on 0, black on 1, or both red).
pub fn exhaustive_guessing_complexity(t: &DTree) -> Result<u32> {
    let internal = t.internal_nodes();
    let k = internal.len();
    if k > MAX_EXHAUSTIVE_INTERNAL {
        return Err(Error::SizeCap {
            what: "internal nodes for exhaustive coloring",
            actual: k,
            limit: MAX_EXHAUSTIVE_INTERNAL,
        });
    }
    // slot[v] = position of internal node v in `internal`; children are
    // addressed by slot, leaves by None.
    let mut slot = vec![usize::MAX; t.size()];
    for (s, &v) in internal.iter().enumerate() {
        slot[v] = s;
    }
    let kids: Vec<[Option<usize>; 2]> = internal
        .iter()
        .map(|&v| {
            let [c0, c1] = t.children(v).expect("internal");
            [c0, c1].map(|c| (!t.is_leaf(c)).then(|| slot[c]))
        })
        .collect();
    let total = 3u64.pow(k as u32);
    let best = (0..total)
        .into_par_iter()
        .map_init(
            || (vec![0u8; k], vec![0u32; k]),
            |(digits, cost), mut code| {
                for d in digits.iter_mut() {
                    *d = (code % 3) as u8;
                    code /= 3;
                }
                // Preorder puts parents before children, so walk backwards.
                for s in (0..k).rev() {
                    let mut c = 0;
                    for (b, kid) in kids[s].iter().enumerate() {
                        let below = kid.map_or(0, |cs| cost[cs]);
                        let red = u32::from(digits[s] != b as u8);
                        c = c.max(below + red);
                    }
                    cost[s] = c;
                }
                if k == 0 {
                    0
                } else {
                    cost[0]
                }
            },
        )
        .min()
        .unwrap_or(0);
    Ok(best)
}

fn check_func_n(f: &TruthTable) -> Result<()> {
    if f.n() > MAX_FUNC_N {
        return Err(Error::SizeCap {
            what: "truth-table variables",
            actual: f.n(),
            limit: MAX_FUNC_N,
        });
    }
    Ok(())
}

/// Minimum rank of a decision tree computing `f`.
pub fn func_rank(f: &TruthTable) -> Result<u32> {
    check_func_n(f)?;
    Ok(rank_dp(f, &mut HashMap::new()))
}

fn rank_dp(f: &TruthTable, memo: &mut HashMap<TruthTable, u32>) -> u32 {
    if f.constant().is_some() {
        return 0;
    }
    if let Some(&v) = memo.get(f) {
        return v;
    }
    let mut best = u32::MAX;
    for i in 0..f.n() {
        let a = rank_dp(&f.restrict(i, false), memo);
        let b = rank_dp(&f.restrict(i, true), memo);
        best = best.min(combine(a, b));
    }
    memo.insert(f.clone(), best);
    best
}

/// Value of the Prover-Delayer game on `f`: the Prover picks a free
/// variable, the Delayer answers 0, answers 1, or defers (scoring a point
/// and letting the Prover pick the bit).
pub fn game_value(f: &TruthTable) -> Result<u32> {
    check_func_n(f)?;
    Ok(game_dp(f, &mut HashMap::new()))
}

fn game_dp(f: &TruthTable, memo: &mut HashMap<TruthTable, u32>) -> u32 {
    if f.constant().is_some() {
        return 0;
    }
    if let Some(&v) = memo.get(f) {
        return v;
    }
    let mut best = u32::MAX;
    for i in 0..f.n() {
        let v0 = game_dp(&f.restrict(i, false), memo);
        let v1 = game_dp(&f.restrict(i, true), memo);
        let delayer = v0.max(v1).max(1 + v0.min(v1));
        best = best.min(delayer);
    }
    memo.insert(f.clone(), best);
    best
}
