//! Span program with orthogonal inputs built from a weighted decision tree.
//!
//! One coordinate per tree vertex. The edge `e = (v, c)` contributes the
//! input vector `sqrt(W_e) (|v> - |c>)`, available on `x` iff `x` answers
//! the query at `v` with the edge's bit. The target for leaf `u` is
//! `|root> - |u>`. On input `x` with path `P_x`:
//!
//! - positive witness: coefficient `1/sqrt(W_e)` on each edge of `P_x`,
//!   so `A w` telescopes to `|root> - |leaf(x)>`;
//! - negative witness: `sum over v in P_x of |v>`, orthogonal to every
//!   available column and with inner product 1 with every other target.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::bits::{format_bits, index_to_bits};
use crate::dtree::{DTree, EdgeId};
use crate::error::{check_enum_limit, Error, Result};
use crate::weights::WeightMap;

/// Absolute residual allowed on every condition.
pub const SPAN_TOL: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct Column {
    pub edge: EdgeId,
    /// Coordinate of the parent (entry `+scale`).
    pub parent: usize,
    /// Coordinate of the child (entry `-scale`).
    pub child: usize,
    /// `sqrt(W_e)`.
    pub scale: f64,
    /// The column lies in `I_{var, bit}`.
    pub var: usize,
    pub bit: u8,
}

#[derive(Debug, Clone)]
pub struct SpanProgramInstance {
    pub dim: usize,
    pub root: usize,
    pub columns: Vec<Column>,
    index: HashMap<EdgeId, usize>,
}

/// Sparse witnesses: positive over column indices, negative over
/// coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct WitnessPair {
    pub positive: Vec<(usize, f64)>,
    pub negative: Vec<(usize, f64)>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct Residuals {
    /// Largest |coefficient| of the positive witness on an unavailable column.
    pub unavailable_zero: f64,
    /// `max |A w - t_{leaf(x)}|` over coordinates.
    pub reaches_target: f64,
    /// `max |<a_e, w̄>|` over available columns.
    pub orthogonal_available: f64,
    /// `max |<t_u, w̄> - 1|` over leaves `u != leaf(x)`.
    pub other_targets: f64,
}

impl Residuals {
    pub fn max(&self) -> f64 {
        self.unavailable_zero
            .max(self.reaches_target)
            .max(self.orthogonal_available)
            .max(self.other_targets)
    }

    pub fn pass(&self) -> bool {
        self.max() <= SPAN_TOL
    }

    fn named(&self) -> [(&'static str, f64); 4] {
        [
            ("unavailable coefficients vanish", self.unavailable_zero),
            ("A|w_x> = |t_f(x)>", self.reaches_target),
            ("<v|w̄_x> = 0 on available columns", self.orthogonal_available),
            ("<t_b|w̄_x> = 1 for other leaves", self.other_targets),
        ]
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct WorstCase {
    pub condition: &'static str,
    pub input: String,
    pub residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SpanReport {
    pub inputs_checked: u64,
    /// Worst residual per condition over all checked inputs.
    pub residuals: Residuals,
    pub worst: Option<WorstCase>,
    pub pass: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WitnessSizes {
    /// `max_x ||w_x||^2`
    pub plus: f64,
    /// `max_x ||A^† w̄_x||^2`
    pub minus: f64,
    /// `sqrt(plus * minus)`
    pub size: f64,
    /// The same two maxima from path sums, over all syntactic paths.
    pub plus_paths: f64,
    pub minus_paths: f64,
}

pub fn build(t: &DTree, w: &WeightMap) -> Result<SpanProgramInstance> {
    w.check(t)?;
    let mut columns = Vec::with_capacity(t.size().saturating_sub(1));
    for v in t.internal_nodes() {
        let var = t.var(v).expect("internal");
        for (b, c) in t.children(v).expect("internal").into_iter().enumerate() {
            let edge = t.edge_of(v, b as u8);
            columns.push(Column {
                edge,
                parent: v,
                child: c,
                scale: w.checked(edge)?.sqrt(),
                var,
                bit: b as u8,
            });
        }
    }
    let index = columns.iter().enumerate().map(|(i, c)| (c.edge, i)).collect();
    Ok(SpanProgramInstance {
        dim: t.size(),
        root: t.root(),
        columns,
        index,
    })
}

impl SpanProgramInstance {
    pub fn column_index(&self, e: EdgeId) -> Option<usize> {
        self.index.get(&e).copied()
    }

    pub fn available(&self, col: usize, x: &[bool]) -> bool {
        let c = &self.columns[col];
        u8::from(x[c.var]) == c.bit
    }

    /// Dense target vector `|root> - |leaf>`.
    pub fn target(&self, leaf: usize) -> Vec<f64> {
        let mut t = vec![0.0; self.dim];
        t[self.root] += 1.0;
        t[leaf] -= 1.0;
        t
    }

    /// Dense `A w` for a sparse coefficient vector.
    pub fn apply(&self, coeffs: &[(usize, f64)]) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        for &(col, a) in coeffs {
            let c = &self.columns[col];
            out[c.parent] += c.scale * a;
            out[c.child] -= c.scale * a;
        }
        out
    }

    /// `<a_col, v>` for a dense vector.
    fn column_dot(&self, col: usize, v: &[f64]) -> f64 {
        let c = &self.columns[col];
        c.scale * (v[c.parent] - v[c.child])
    }

    fn check_dim(&self, t: &DTree) -> Result<()> {
        if t.size() != self.dim {
            return Err(Error::LengthMismatch {
                expected: self.dim,
                got: t.size(),
            });
        }
        Ok(())
    }
}

pub fn witnesses(inst: &SpanProgramInstance, t: &DTree, x: &[bool]) -> Result<WitnessPair> {
    inst.check_dim(t)?;
    let path = t.path_for_input(x)?;
    let mut positive = Vec::with_capacity(path.bits.len());
    for e in t.path_edges(&path) {
        let col = inst
            .column_index(e)
            .ok_or_else(|| Error::Malformed(format!("instance has no column for edge {e}")))?;
        positive.push((col, 1.0 / inst.columns[col].scale));
    }
    let negative = path.nodes.iter().map(|&v| (v, 1.0)).collect();
    Ok(WitnessPair { positive, negative })
}

/// Residuals of the four conditions for a given witness pair on `x`.
pub fn verify_witness(inst: &SpanProgramInstance, t: &DTree, x: &[bool], wp: &WitnessPair) -> Result<Residuals> {
    inst.check_dim(t)?;
    let leaf = t.eval_leaf_ix(x)?;
    let mut r = Residuals::default();

    for &(col, a) in &wp.positive {
        if !inst.available(col, x) {
            r.unavailable_zero = r.unavailable_zero.max(a.abs());
        }
    }
    let aw = inst.apply(&wp.positive);
    let target = inst.target(leaf);
    r.reaches_target = aw.iter().zip(&target).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);

    let mut neg = vec![0.0; inst.dim];
    for &(v, a) in &wp.negative {
        neg[v] += a;
    }
    for col in 0..inst.columns.len() {
        if inst.available(col, x) {
            r.orthogonal_available = r.orthogonal_available.max(inst.column_dot(col, &neg).abs());
        }
    }
    for u in t.leaves() {
        if u != leaf {
            let dot = neg[inst.root] - neg[u];
            r.other_targets = r.other_targets.max((dot - 1.0).abs());
        }
    }
    Ok(r)
}

pub fn verify(inst: &SpanProgramInstance, t: &DTree, x: &[bool]) -> Result<Residuals> {
    let wp = witnesses(inst, t, x)?;
    verify_witness(inst, t, x, &wp)
}

/// Verifies every input in parallel. The worst case is the largest
/// residual, ties going to the smallest input.
pub fn verify_all(inst: &SpanProgramInstance, t: &DTree) -> Result<SpanReport> {
    check_enum_limit(t.n())?;
    let n = t.n();
    let per_input: Vec<Residuals> = (0..1u64 << n)
        .into_par_iter()
        .map(|i| verify(inst, t, &index_to_bits(i, n)))
        .collect::<Result<_>>()?;
    Ok(aggregate(per_input.iter().enumerate().map(|(i, r)| (i as u64, *r)), n))
}

pub fn verify_one(inst: &SpanProgramInstance, t: &DTree, x: &[bool]) -> Result<SpanReport> {
    let r = verify(inst, t, x)?;
    Ok(aggregate([(crate::bits::bits_to_index(x), r)], t.n()))
}

fn aggregate(items: impl IntoIterator<Item = (u64, Residuals)>, n: usize) -> SpanReport {
    let mut total = Residuals::default();
    let mut worst: Option<(f64, u64, &'static str)> = None;
    let mut count = 0;
    for (i, r) in items {
        count += 1;
        total.unavailable_zero = total.unavailable_zero.max(r.unavailable_zero);
        total.reaches_target = total.reaches_target.max(r.reaches_target);
        total.orthogonal_available = total.orthogonal_available.max(r.orthogonal_available);
        total.other_targets = total.other_targets.max(r.other_targets);
        for (name, v) in r.named() {
            if worst.map_or(true, |(w, wi, _)| v > w || (v == w && i < wi)) {
                worst = Some((v, i, name));
            }
        }
    }
    SpanReport {
        inputs_checked: count,
        residuals: total,
        worst: worst.map(|(residual, i, condition)| WorstCase {
            condition,
            input: format_bits(&index_to_bits(i, n)),
            residual,
        }),
        pass: total.pass(),
    }
}

/// Witness sizes from the vector norms (enumerating all inputs) and from
/// path sums over all syntactic paths.
pub fn witness_sizes(inst: &SpanProgramInstance, t: &DTree) -> Result<WitnessSizes> {
    inst.check_dim(t)?;
    check_enum_limit(t.n())?;
    let n = t.n();
    let (plus, minus) = (0..1u64 << n)
        .into_par_iter()
        .map(|i| {
            let x = index_to_bits(i, n);
            let wp = witnesses(inst, t, &x)?;
            let plus: f64 = wp.positive.iter().map(|(_, a)| a * a).sum();
            let mut neg = vec![0.0; inst.dim];
            for &(v, a) in &wp.negative {
                neg[v] += a;
            }
            let minus: f64 = (0..inst.columns.len())
                .map(|col| inst.column_dot(col, &neg).powi(2))
                .sum();
            Ok::<_, Error>((plus, minus))
        })
        .try_reduce(|| (0.0, 0.0), |a, b| Ok((a.0.max(b.0), a.1.max(b.1))))?;

    let mut plus_paths: f64 = 0.0;
    let mut minus_paths: f64 = 0.0;
    for p in t.paths() {
        let on: f64 = t
            .path_edges(&p)
            .iter()
            .map(|e| inst.columns[inst.index[e]].scale.powi(-2))
            .sum();
        let dev: f64 = t
            .deviating_edges(&p)
            .iter()
            .map(|e| inst.columns[inst.index[e]].scale.powi(2))
            .sum();
        plus_paths = plus_paths.max(on);
        minus_paths = minus_paths.max(dev);
    }
    Ok(WitnessSizes {
        plus,
        minus,
        size: (plus * minus).sqrt(),
        plus_paths,
        minus_paths,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::parse_bits;
    use crate::weights::{canonical_weights, opt_value};

    #[test]
    fn depth_one_unit() {
        let t = DTree::complete(1).unwrap();
        let inst = build(&t, &WeightMap::unit(&t)).unwrap();
        assert_eq!(inst.columns.len(), 2);
        for c in &inst.columns {
            assert_eq!(c.parent, t.root());
            assert_eq!(c.scale, 1.0);
        }
        let wp = witnesses(&inst, &t, &[false]).unwrap();
        let e0 = inst.column_index(t.edge_of(t.root(), 0)).unwrap();
        assert_eq!(wp.positive, vec![(e0, 1.0)]);
        let leaf0 = t.children(t.root()).unwrap()[0];
        assert_eq!(wp.negative, vec![(t.root(), 1.0), (leaf0, 1.0)]);
        let s = witness_sizes(&inst, &t).unwrap();
        assert_eq!((s.plus, s.minus, s.size), (1.0, 1.0, 1.0));
        // On x = 1 the 0-edge is unavailable and gets no coefficient.
        let wp = witnesses(&inst, &t, &[true]).unwrap();
        assert!(wp.positive.iter().all(|&(c, _)| c != e0));
        assert!(verify(&inst, &t, &[true]).unwrap().pass());
    }

    #[test]
    fn parity_unit() {
        let t = DTree::parity(3).unwrap();
        let inst = build(&t, &WeightMap::unit(&t)).unwrap();
        assert_eq!((inst.columns.len(), inst.dim), (14, 15));
        let wp = witnesses(&inst, &t, &parse_bits("010").unwrap()).unwrap();
        assert_eq!(wp.positive.len(), 3);
        let s = witness_sizes(&inst, &t).unwrap();
        assert_eq!((s.plus, s.minus, s.size), (3.0, 3.0, 3.0));
        assert!(verify_all(&inst, &t).unwrap().pass);
    }

    #[test]
    fn and_chain_canonical() {
        let t = DTree::and_chain(3).unwrap();
        let w = canonical_weights(&t);
        let inst = build(&t, &w).unwrap();
        for c in &inst.columns {
            let norm2 = 2.0 * c.scale * c.scale;
            assert!((norm2 - 2.0 * w.get(c.edge).unwrap()).abs() < 1e-12);
        }
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        let xi = (phi + (phi + 5.0).sqrt()) / 2.0;
        let wp = witnesses(&inst, &t, &parse_bits("111").unwrap()).unwrap();
        let coeffs: Vec<f64> = wp.positive.iter().map(|&(_, a)| a).collect();
        let want = [1.0 / xi.sqrt(), 1.0 / phi.sqrt(), 1.0];
        for (a, b) in coeffs.iter().zip(want) {
            assert!((a - b).abs() < 1e-12);
        }
        let s = witness_sizes(&inst, &t).unwrap();
        assert!((s.size - opt_value(&t)).abs() < 1e-9);
        assert!(verify_all(&inst, &t).unwrap().pass);
    }

    #[test]
    fn corrupted_coefficient_fails() {
        let t = DTree::and_chain(3).unwrap();
        let w = canonical_weights(&t);
        let inst = build(&t, &w).unwrap();
        let x = parse_bits("110").unwrap();
        let mut wp = witnesses(&inst, &t, &x).unwrap();
        wp.positive[0].1 += 0.1;
        let col = wp.positive[0].0;
        let r = verify_witness(&inst, &t, &x, &wp).unwrap();
        assert!(!r.pass());
        assert!((r.reaches_target - 0.1 * inst.columns[col].scale).abs() < 1e-12);
        assert_eq!(r.unavailable_zero, 0.0);
    }

    #[test]
    fn missing_weight_is_an_error() {
        let t = DTree::complete(1).unwrap();
        let mut w = WeightMap::unit(&t);
        w.0.remove(&t.edge_of(t.root(), 1));
        assert!(matches!(build(&t, &w), Err(Error::MissingWeight(_))));
    }
}
