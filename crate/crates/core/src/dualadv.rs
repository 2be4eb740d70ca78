//! Dual adversary solution built from a weighted decision tree.
//!
//! Axes are the internal nodes. For input `x` and variable `j` queried at
//! node `v` on `P_x`:
//!
//! ```text
//! u_xj = |v> / sqrt(W(v, x_j))        w_xj = sqrt(W(v, 1 - x_j)) |v>
//! ```
//!
//! and both are zero when `j` is not queried on `P_x`. For `x != y` the
//! only common axis with `x_j != y_j` is the node where the two paths
//! split, whose term is `sqrt(W(v, 1 - x_j)) / sqrt(W(v, x_j)) = 1`, so the
//! constraint `sum_{j: x_j != y_j} <u_xj, w_yj> = 1 - [leaf(x) = leaf(y)]`
//! holds.

use rayon::prelude::*;
use serde::Serialize;

use crate::bits::{format_bits, index_to_bits};
use crate::dtree::DTree;
use crate::error::{check_enum_limit, Error, Result};
use crate::weights::WeightMap;

pub const DUAL_TOL: f64 = 1e-9;

/// Default cap on `n` for the pairwise check (4^n pairs).
pub const DEFAULT_MAX_PAIR_N: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualEntry {
    pub var: usize,
    /// Dense index of the internal node carrying both vectors.
    pub axis: usize,
    pub u: f64,
    pub w: f64,
}

#[derive(Debug, Clone)]
pub struct DualAdvSolution {
    n: usize,
    /// Per input index: entries sorted by variable.
    entries: Vec<Vec<DualEntry>>,
    /// Per input index: dense index of the leaf reached.
    leaf: Vec<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FeasibilityReport {
    pub pairs_checked: u64,
    pub max_residual: f64,
    /// Worst pair `(x, y)`; ties go to the lexicographically smallest.
    pub worst_pair: Option<(String, String)>,
    pub objective: f64,
    pub pass: bool,
}

pub fn build(t: &DTree, wmap: &WeightMap) -> Result<DualAdvSolution> {
    check_enum_limit(t.n())?;
    wmap.check(t)?;
    let n = t.n();
    let mut entries = Vec::with_capacity(1 << n);
    let mut leaf = Vec::with_capacity(1 << n);
    for i in 0..1u64 << n {
        let x = index_to_bits(i, n);
        let path = t.path_for_input(&x)?;
        let mut row = Vec::with_capacity(path.bits.len());
        for (&v, &b) in path.nodes.iter().zip(&path.bits) {
            let var = t.var(v).expect("internal");
            row.push(DualEntry {
                var,
                axis: v,
                u: 1.0 / wmap.checked(t.edge_of(v, b))?.sqrt(),
                w: wmap.checked(t.edge_of(v, 1 - b))?.sqrt(),
            });
        }
        row.sort_by_key(|e| e.var);
        entries.push(row);
        leaf.push(path.leaf());
    }
    Ok(DualAdvSolution { n, entries, leaf })
}

impl DualAdvSolution {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Nonzero `(u_xj, w_xj)` pairs for input `x`, sorted by `j`.
    pub fn entries(&self, x: u64) -> &[DualEntry] {
        &self.entries[x as usize]
    }

    pub fn entries_mut(&mut self, x: u64) -> &mut [DualEntry] {
        &mut self.entries[x as usize]
    }

    /// The entry for variable `j` on input `x`, or `None` if both vectors
    /// are zero.
    pub fn entry(&self, x: u64, j: usize) -> Option<&DualEntry> {
        let row = &self.entries[x as usize];
        row.binary_search_by_key(&j, |e| e.var).ok().map(|k| &row[k])
    }

    /// `sum_{j: x_j != y_j} <u_xj, w_yj>`.
    pub fn pair_sum(&self, x: u64, y: u64) -> f64 {
        let (a, b) = (&self.entries[x as usize], &self.entries[y as usize]);
        let (mut i, mut k) = (0, 0);
        let mut sum = 0.0;
        while i < a.len() && k < b.len() {
            let (ea, eb) = (&a[i], &b[k]);
            match ea.var.cmp(&eb.var) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => k += 1,
                std::cmp::Ordering::Equal => {
                    let j = ea.var;
                    let differ = bit(x, j, self.n) != bit(y, j, self.n);
                    if differ && ea.axis == eb.axis {
                        sum += ea.u * eb.w;
                    }
                    i += 1;
                    k += 1;
                }
            }
        }
        sum
    }

    fn target(&self, x: u64, y: u64) -> f64 {
        if self.leaf[x as usize] == self.leaf[y as usize] {
            0.0
        } else {
            1.0
        }
    }
}

fn bit(index: u64, j: usize, n: usize) -> bool {
    index >> (n - 1 - j) & 1 == 1
}

/// Checks the constraint on all ordered pairs, refusing above `max_n`.
pub fn check_feasibility(sol: &DualAdvSolution, max_n: usize) -> Result<FeasibilityReport> {
    if sol.n > max_n {
        return Err(Error::EnumerationLimit {
            n: sol.n,
            limit: max_n,
        });
    }
    let count = 1u64 << sol.n;
    // Per x: worst residual and the smallest y attaining it.
    let per_x: Vec<(f64, u64)> = (0..count)
        .into_par_iter()
        .map(|x| {
            let mut worst = (f64::NEG_INFINITY, 0);
            for y in 0..count {
                let r = (sol.pair_sum(x, y) - sol.target(x, y)).abs();
                if r > worst.0 {
                    worst = (r, y);
                }
            }
            worst
        })
        .collect();
    let mut best: Option<(f64, u64, u64)> = None;
    for (x, &(r, y)) in per_x.iter().enumerate() {
        if best.map_or(true, |(b, _, _)| r > b) {
            best = Some((r, x as u64, y));
        }
    }
    let (max_residual, wx, wy) = best.expect("at least one input");
    Ok(FeasibilityReport {
        pairs_checked: count * count,
        max_residual,
        worst_pair: Some((
            format_bits(&index_to_bits(wx, sol.n)),
            format_bits(&index_to_bits(wy, sol.n)),
        )),
        objective: objective(sol),
        pass: max_residual <= DUAL_TOL,
    })
}

/// `max_x max(sum_j ||u_xj||^2, sum_j ||w_xj||^2)`.
pub fn objective(sol: &DualAdvSolution) -> f64 {
    sol.entries
        .iter()
        .map(|row| {
            let u: f64 = row.iter().map(|e| e.u * e.u).sum();
            let w: f64 = row.iter().map(|e| e.w * e.w).sum();
            u.max(w)
        })
        .fold(0.0, f64::max)
}

pub use crate::weights::balance;
