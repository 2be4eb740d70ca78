//! The edge-weight optimization program on a decision tree.
//!
//! For positive edge weights `W`, let `alpha` be the largest sum of `W_e`
//! over the deviating edges of a root-to-leaf path and `beta` the largest
//! sum of `1 / W_e` along a path. The program minimizes `sqrt(alpha * beta)`;
//! its optimum `OPT` satisfies
//!
//! ```text
//! OPT(leaf) = 0
//! OPT(v)    = (L + R + sqrt((L - R)^2 + 4)) / 2,   L = OPT(v_0), R = OPT(v_1)
//! ```
//!
//! and the canonical weights below attain it with `alpha = beta = OPT`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dtree::{DTree, EdgeId, NodeId};
use crate::error::{Error, Result};
use crate::rank::tree_rank;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct WeightMap(pub BTreeMap<EdgeId, f64>);

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WeightsDoc {
    weights: Vec<WeightEntry>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WeightEntry {
    parent: u64,
    bit: u8,
    w: f64,
}

impl WeightMap {
    pub fn get(&self, e: EdgeId) -> Option<f64> {
        self.0.get(&e).copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (EdgeId, f64)> + '_ {
        self.0.iter().map(|(e, w)| (*e, *w))
    }

    /// Every weight multiplied by `c`.
    pub fn scaled(&self, c: f64) -> WeightMap {
        WeightMap(self.0.iter().map(|(e, w)| (*e, w * c)).collect())
    }

    /// All edges of `t` get weight 1.
    pub fn unit(t: &DTree) -> WeightMap {
        WeightMap(t.edges().into_iter().map(|e| (e, 1.0)).collect())
    }

    /// The weight of `e`, which must be present, finite and positive.
    pub fn checked(&self, e: EdgeId) -> Result<f64> {
        match self.get(e) {
            None => Err(Error::MissingWeight(e)),
            Some(w) if w.is_finite() && w > 0.0 => Ok(w),
            Some(w) => Err(Error::NonPositiveWeight { edge: e, w }),
        }
    }

    /// Checks that the map weights exactly the edges of `t`.
    pub fn check(&self, t: &DTree) -> Result<()> {
        for e in t.edges() {
            self.checked(e)?;
        }
        if let Some(extra) = self.0.keys().find(|e| t.edge_child(**e).is_none()) {
            return Err(Error::Malformed(format!("weight given for edge {extra}, which is not in the tree")));
        }
        Ok(())
    }

    pub fn parse(text: &str) -> Result<WeightMap> {
        let doc: WeightsDoc = serde_json::from_str(text)?;
        let mut map = BTreeMap::new();
        for entry in doc.weights {
            if entry.bit > 1 {
                return Err(Error::Malformed(format!("edge bit {} is not 0 or 1", entry.bit)));
            }
            let e = EdgeId::new(NodeId(entry.parent), entry.bit);
            if map.insert(e, entry.w).is_some() {
                return Err(Error::Malformed(format!("duplicate weight for edge {e}")));
            }
        }
        Ok(WeightMap(map))
    }

    /// JSON with every weight written to 17 significant digits, which
    /// round-trips binary64 exactly.
    pub fn to_json(&self) -> String {
        let mut s = String::from("{\n  \"weights\": [");
        for (i, (e, w)) in self.0.iter().enumerate() {
            let sep = if i == 0 { "" } else { "," };
            let _ = write!(
                s,
                "{sep}\n    {{\"parent\": {}, \"bit\": {}, \"w\": {}}}",
                e.parent,
                e.bit,
                format_weight(*w)
            );
        }
        if !self.0.is_empty() {
            s.push_str("\n  ");
        }
        s.push_str("]\n}\n");
        s
    }
}

fn format_weight(w: f64) -> String {
    if w.is_finite() {
        format!("{w:.16e}")
    } else {
        // JSON has no infinities; emit something that fails validation
        // loudly rather than silently.
        "null".into()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProgramValue {
    pub alpha: f64,
    pub beta: f64,
    pub objective: f64,
}

/// `alpha`, `beta` and `sqrt(alpha * beta)` for the given weights, as exact
/// maxima over all root-to-leaf paths.
pub fn evaluate(t: &DTree, w: &WeightMap) -> Result<ProgramValue> {
    w.check(t)?;
    let mut alpha = vec![0.0f64; t.size()];
    let mut beta = vec![0.0f64; t.size()];
    for &v in t.preorder().iter().rev() {
        let Some([c0, c1]) = t.children(v) else { continue };
        let w0 = w.checked(t.edge_of(v, 0))?;
        let w1 = w.checked(t.edge_of(v, 1))?;
        // Going down the 0-edge, the 1-edge deviates, and vice versa.
        alpha[v] = (w1 + alpha[c0]).max(w0 + alpha[c1]);
        beta[v] = (1.0 / w0 + beta[c0]).max(1.0 / w1 + beta[c1]);
    }
    let (a, b) = (alpha[t.root()], beta[t.root()]);
    Ok(ProgramValue {
        alpha: a,
        beta: b,
        objective: (a * b).sqrt(),
    })
}

fn opt_step(l: f64, r: f64) -> f64 {
    let d = l - r;
    (l + r + (d * d + 4.0).sqrt()) / 2.0
}

/// OPT of the subtree rooted at every node, by dense index.
pub fn node_opts(t: &DTree) -> Vec<f64> {
    let mut opt = vec![0.0f64; t.size()];
    for &v in t.preorder().iter().rev() {
        if let Some([c0, c1]) = t.children(v) {
            opt[v] = opt_step(opt[c0], opt[c1]);
        }
    }
    opt
}

pub fn opt_value(t: &DTree) -> f64 {
    node_opts(t)[t.root()]
}

/// `(d + sqrt(d^2 + 4)) / 2`, evaluated without cancellation for d < 0.
fn root_weight(d: f64) -> f64 {
    let s = (d * d + 4.0).sqrt();
    if d >= 0.0 {
        (d + s) / 2.0
    } else {
        2.0 / (s - d)
    }
}

/// At every internal node with subtree optima L (0-side) and R (1-side):
/// the 0-edge gets `(L - R + sqrt((L-R)^2 + 4)) / 2` and the 1-edge the
/// same with L and R swapped. The two weights multiply to 1.
pub fn canonical_weights(t: &DTree) -> WeightMap {
    let opt = node_opts(t);
    let mut map = BTreeMap::new();
    for v in t.internal_nodes() {
        let [c0, c1] = t.children(v).expect("internal");
        let d = opt[c0] - opt[c1];
        map.insert(t.edge_of(v, 0), root_weight(d));
        map.insert(t.edge_of(v, 1), root_weight(-d));
    }
    WeightMap(map)
}

/// `W_(v,c) = 1 / log2(size(T_v) / size(T_c))`. Along any path the
/// inverse weights telescope to `log2(size(T))`.
pub fn appendix_b_weights(t: &DTree) -> WeightMap {
    let sizes = t.subtree_sizes();
    let mut map = BTreeMap::new();
    for v in t.internal_nodes() {
        for (b, c) in t.children(v).expect("internal").into_iter().enumerate() {
            let ratio = sizes[v] as f64 / sizes[c] as f64;
            map.insert(t.edge_of(v, b as u8), 1.0 / ratio.log2());
        }
    }
    WeightMap(map)
}

/// `W' = sqrt(beta / alpha) * W`, which makes both maxima `sqrt(alpha * beta)`.
pub fn balance(w: &WeightMap, alpha: f64, beta: f64) -> Result<WeightMap> {
    if !(alpha > 0.0 && beta > 0.0 && alpha.is_finite() && beta.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "balance needs positive alpha and beta, got {alpha} and {beta}"
        )));
    }
    Ok(w.scaled((beta / alpha).sqrt()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Bounds {
    /// `2 * sqrt(rank * depth)`
    pub rank_depth: f64,
    /// `sqrt(2 * size)`
    pub size: f64,
}

pub fn bounds(t: &DTree) -> Bounds {
    let r = f64::from(tree_rank(t));
    Bounds {
        rank_depth: 2.0 * (r * t.depth() as f64).sqrt(),
        size: (2.0 * t.size() as f64).sqrt(),
    }
}

pub const ORACLE_MAX_INTERNAL: usize = 8;
pub const ORACLE_RESTARTS: usize = 20;
pub const ORACLE_MIN_TOL: f64 = 1e-4;
pub const ORACLE_BOX: (f64, f64) = (1e-4, 1e4);

#[derive(Debug, Clone)]
pub struct OracleResult {
    pub objective: f64,
    pub weights: WeightMap,
    /// Index of the restart that produced the result.
    pub restart: usize,
    /// Edges whose optimized weight sits on the search box boundary.
    pub at_box: Vec<EdgeId>,
}

/// Numeric minimization of the program, independent of the recurrence.
///
/// Works on log-weights. The objective `ln alpha + ln beta` is convex there
/// but has kinks where coordinate descent stalls, so each restart first
/// minimizes a log-sum-exp smoothed surrogate with a shrinking temperature,
/// then finishes with exact sweeps. Each coordinate step is a golden-section
/// search over the log box, which is exact enough because the restriction
/// to one coordinate is convex.
pub fn brute_force_opt(t: &DTree, seed: u64, rel_tol: f64) -> Result<OracleResult> {
    if rel_tol.is_nan() || rel_tol < ORACLE_MIN_TOL {
        return Err(Error::InvalidParameter(format!(
            "oracle tolerance {rel_tol} is below {ORACLE_MIN_TOL}"
        )));
    }
    let k = t.num_internal();
    if k > ORACLE_MAX_INTERNAL {
        return Err(Error::SizeCap {
            what: "internal nodes for the oracle",
            actual: k,
            limit: ORACLE_MAX_INTERNAL,
        });
    }
    if k == 0 {
        return Ok(OracleResult {
            objective: 0.0,
            weights: WeightMap::default(),
            restart: 0,
            at_box: Vec::new(),
        });
    }
    let problem = PathProblem::new(t);
    let runs: Vec<(f64, Vec<f64>)> = (0..ORACLE_RESTARTS)
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(r as u64);
            let (lo, hi) = (ORACLE_BOX.0.ln(), ORACLE_BOX.1.ln());
            let mut s: Vec<f64> = (0..problem.edges.len()).map(|_| rng.gen_range(lo..hi)).collect();
            problem.minimize(&mut s, rel_tol);
            (problem.exact(&s), s)
        })
        .collect();
    let (restart, (objective, s)) = runs
        .into_iter()
        .enumerate()
        .fold(None::<(usize, (f64, Vec<f64>))>, |best, cur| match best {
            Some(b) if b.1 .0 <= cur.1 .0 => Some(b),
            _ => Some(cur),
        })
        .expect("at least one restart");
    let (lo, hi) = (ORACLE_BOX.0.ln(), ORACLE_BOX.1.ln());
    let at_box = problem
        .edges
        .iter()
        .zip(&s)
        .filter(|(_, &x)| x - lo < 1e-6 || hi - x < 1e-6)
        .map(|(e, _)| *e)
        .collect();
    let weights = WeightMap(problem.edges.iter().zip(&s).map(|(e, x)| (*e, x.exp())).collect());
    Ok(OracleResult {
        objective,
        weights,
        restart,
        at_box,
    })
}

/// Program 1 flattened to paths: for each path, the edge slots on it and
/// the edge slots deviating from it.
struct PathProblem {
    edges: Vec<EdgeId>,
    on_path: Vec<Vec<usize>>,
    deviating: Vec<Vec<usize>>,
}

const GOLDEN_ITERS: usize = 48;
const MAX_SWEEPS: usize = 400;
const TEMPERATURES: [f64; 4] = [0.1, 0.01, 0.001, 0.0];

impl PathProblem {
    fn new(t: &DTree) -> Self {
        let edges = t.edges();
        let slot = |e: EdgeId| edges.iter().position(|x| *x == e).expect("tree edge");
        let mut on_path = Vec::new();
        let mut deviating = Vec::new();
        for p in t.paths() {
            on_path.push(t.path_edges(&p).into_iter().map(slot).collect());
            deviating.push(t.deviating_edges(&p).into_iter().map(slot).collect());
        }
        PathProblem {
            edges,
            on_path,
            deviating,
        }
    }

    /// `sqrt(alpha * beta)` at log-weights `s`.
    fn exact(&self, s: &[f64]) -> f64 {
        let alpha = self
            .deviating
            .iter()
            .map(|d| d.iter().map(|&e| s[e].exp()).sum::<f64>())
            .fold(0.0, f64::max);
        let beta = self
            .on_path
            .iter()
            .map(|p| p.iter().map(|&e| (-s[e]).exp()).sum::<f64>())
            .fold(0.0, f64::max);
        (alpha * beta).sqrt()
    }

    fn surrogate(&self, s: &[f64], mu: f64) -> f64 {
        let la: Vec<f64> = self
            .deviating
            .iter()
            .map(|d| d.iter().map(|&e| s[e].exp()).sum::<f64>().ln())
            .collect();
        let lb: Vec<f64> = self
            .on_path
            .iter()
            .map(|p| p.iter().map(|&e| (-s[e]).exp()).sum::<f64>().ln())
            .collect();
        smooth_max(&la, mu) + smooth_max(&lb, mu)
    }

    fn minimize(&self, s: &mut [f64], rel_tol: f64) {
        let (lo, hi) = (ORACLE_BOX.0.ln(), ORACLE_BOX.1.ln());
        let stop = rel_tol * 1e-3;
        for mu in TEMPERATURES {
            let mut current = self.surrogate(s, mu);
            for _ in 0..MAX_SWEEPS {
                for e in 0..s.len() {
                    s[e] = self.line_search(s, e, mu, lo, hi);
                }
                recenter(s, lo, hi);
                let next = self.surrogate(s, mu);
                let gain = current - next;
                current = next;
                if gain.abs() <= stop {
                    break;
                }
            }
        }
    }

    /// Minimizes the surrogate over coordinate `e` with the others fixed.
    fn line_search(&self, s: &[f64], e: usize, mu: f64, lo: f64, hi: f64) -> f64 {
        // Per path: alpha_P = a + c * exp(x), beta_P = b + d * exp(-x).
        let mut alpha_parts = Vec::with_capacity(self.deviating.len());
        for dev in &self.deviating {
            let a: f64 = dev.iter().filter(|&&f| f != e).map(|&f| s[f].exp()).sum();
            alpha_parts.push((a, dev.contains(&e)));
        }
        let mut beta_parts = Vec::with_capacity(self.on_path.len());
        for path in &self.on_path {
            let b: f64 = path.iter().filter(|&&f| f != e).map(|&f| (-s[f]).exp()).sum();
            beta_parts.push((b, path.contains(&e)));
        }
        let mut la = vec![0.0; alpha_parts.len()];
        let mut lb = vec![0.0; beta_parts.len()];
        let mut f = |x: f64| {
            let (ex, emx) = (x.exp(), (-x).exp());
            for (out, &(a, c)) in la.iter_mut().zip(&alpha_parts) {
                *out = if c { a + ex } else { a }.ln();
            }
            for (out, &(b, d)) in lb.iter_mut().zip(&beta_parts) {
                *out = if d { b + emx } else { b }.ln();
            }
            smooth_max(&la, mu) + smooth_max(&lb, mu)
        };
        golden_section(&mut f, lo, hi, s[e])
    }
}

/// `mu * ln(sum exp(v / mu))`, or the plain max when `mu == 0`.
fn smooth_max(v: &[f64], mu: f64) -> f64 {
    let m = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if mu == 0.0 || !m.is_finite() {
        return m;
    }
    m + mu * v.iter().map(|x| ((x - m) / mu).exp()).sum::<f64>().ln()
}

/// The objective is invariant under a common scaling of all weights, so
/// keep the log-weights centered to stay away from the box walls.
fn recenter(s: &mut [f64], lo: f64, hi: f64) {
    let mean = s.iter().sum::<f64>() / s.len() as f64;
    let (min, max) = s.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)));
    // Every coordinate is inside the box, so max - hi <= 0 <= min - lo and
    // the clamp keeps them there.
    let shift = mean.clamp(max - hi, min - lo);
    for x in s.iter_mut() {
        *x -= shift;
    }
}

/// Golden-section search for the minimum of a unimodal `f` on `[lo, hi]`.
/// Returns `start` if no interior point beats it.
fn golden_section<F: FnMut(f64) -> f64>(f: &mut F, lo: f64, hi: f64, start: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..GOLDEN_ITERS {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let x = (a + b) / 2.0;
    if f(x) <= f(start) {
        x
    } else {
        start
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn phi() -> f64 {
        (1.0 + 5f64.sqrt()) / 2.0
    }

    fn xi() -> f64 {
        (phi() + (phi() + 5.0).sqrt()) / 2.0
    }

    #[test]
    fn opt_examples() {
        assert_eq!(opt_value(&DTree::complete(0).unwrap()), 0.0);
        assert!((opt_value(&DTree::parity(3).unwrap()) - 3.0).abs() < 1e-9);
        let and3 = opt_value(&DTree::and_chain(3).unwrap());
        assert!((and3 - xi()).abs() < 1e-9);
        assert!((and3 - 2.095294).abs() < 1e-6);
    }

    #[test]
    fn canonical_examples() {
        let t = DTree::complete(1).unwrap();
        let w = canonical_weights(&t);
        assert!(w.iter().all(|(_, x)| (x - 1.0).abs() < 1e-15));

        let t = DTree::and_chain(3).unwrap();
        let w = canonical_weights(&t);
        // Root x_0: the 1-edge leads on to x_1.
        let root = t.root();
        assert!((w.get(t.edge_of(root, 1)).unwrap() - xi()).abs() < 1e-12);
        assert!((w.get(t.edge_of(root, 0)).unwrap() - 1.0 / xi()).abs() < 1e-12);
        let x1 = t.children(root).unwrap()[1];
        assert!((w.get(t.edge_of(x1, 1)).unwrap() - phi()).abs() < 1e-12);
        assert!((w.get(t.edge_of(x1, 0)).unwrap() - 1.0 / phi()).abs() < 1e-12);
        let x2 = t.children(x1).unwrap()[1];
        assert!((w.get(t.edge_of(x2, 0)).unwrap() - 1.0).abs() < 1e-12);
        assert!((w.get(t.edge_of(x2, 1)).unwrap() - 1.0).abs() < 1e-12);

        let v = evaluate(&t, &w).unwrap();
        assert!((v.alpha - xi()).abs() < 1e-9);
        assert!((v.beta - xi()).abs() < 1e-9);
        assert!((v.objective - xi()).abs() < 1e-9);
    }

    #[test]
    fn evaluate_examples() {
        let t = DTree::complete(1).unwrap();
        let v = evaluate(&t, &WeightMap::unit(&t)).unwrap();
        assert_eq!((v.alpha, v.beta, v.objective), (1.0, 1.0, 1.0));
        let t = DTree::parity(3).unwrap();
        let v = evaluate(&t, &WeightMap::unit(&t)).unwrap();
        assert_eq!((v.alpha, v.beta, v.objective), (3.0, 3.0, 3.0));
    }

    #[test]
    fn evaluate_rejects_bad_maps() {
        let t = DTree::complete(1).unwrap();
        let mut w = WeightMap::unit(&t);
        let e = t.edge_of(t.root(), 0);
        w.0.insert(e, -1.0);
        assert!(matches!(evaluate(&t, &w), Err(Error::NonPositiveWeight { .. })));
        w.0.remove(&e);
        assert!(matches!(evaluate(&t, &w), Err(Error::MissingWeight(_))));
        let mut w = WeightMap::unit(&t);
        w.0.insert(EdgeId::new(NodeId(99), 0), 1.0);
        assert!(evaluate(&t, &w).is_err());
    }

    #[test]
    fn appendix_b_examples() {
        let t = DTree::complete(1).unwrap();
        let w = appendix_b_weights(&t);
        for (_, x) in w.iter() {
            assert!((x - 1.0 / 3f64.log2()).abs() < 1e-15);
            assert!((x - 0.6309).abs() < 1e-4);
        }
        let t = DTree::complete(2).unwrap();
        let w = appendix_b_weights(&t);
        for e in t.edges() {
            let c = t.edge_child(e).unwrap();
            let p = t.index_of(e.parent).unwrap();
            let sizes = t.subtree_sizes();
            let want = 1.0 / (sizes[p] as f64 / sizes[c] as f64).log2();
            assert_eq!(w.get(e).unwrap(), want);
        }
        for p in t.paths() {
            let s: f64 = t.path_edges(&p).iter().map(|e| 1.0 / w.get(*e).unwrap()).sum();
            assert!((s - 7f64.log2()).abs() < 1e-12);
        }
    }

    #[test]
    fn balance_equalizes() {
        let t = DTree::complete(1).unwrap();
        let w = WeightMap::unit(&t).scaled(4.0);
        let v = evaluate(&t, &w).unwrap();
        assert_eq!((v.alpha, v.beta), (4.0, 0.25));
        let b = balance(&w, v.alpha, v.beta).unwrap();
        let v2 = evaluate(&t, &b).unwrap();
        assert!((v2.alpha - 1.0).abs() < 1e-15 && (v2.beta - 1.0).abs() < 1e-15);
        assert!(balance(&w, 0.0, 1.0).is_err());
    }

    #[test]
    fn bounds_examples() {
        for d in 1..6 {
            let t = DTree::complete(d).unwrap();
            let b = bounds(&t);
            assert!((b.rank_depth - 2.0 * d as f64).abs() < 1e-12);
            assert!((b.size - (2.0 * ((1 << (d + 1)) - 1) as f64).sqrt()).abs() < 1e-12);
            assert!((opt_value(&t) - d as f64).abs() < 1e-9);
        }
        let leaf = bounds(&DTree::complete(0).unwrap());
        assert!(leaf.rank_depth >= 0.0 && leaf.size >= 0.0);
    }

    #[test]
    fn oracle_examples() {
        let r = brute_force_opt(&DTree::complete(1).unwrap(), 1, 1e-4).unwrap();
        assert!((r.objective - 1.0).abs() < 1e-4, "{}", r.objective);
        let r = brute_force_opt(&DTree::and_chain(3).unwrap(), 1, 1e-4).unwrap();
        assert!((r.objective / xi() - 1.0).abs() < 1e-2, "{}", r.objective);
        let r = brute_force_opt(&DTree::parity(3).unwrap(), 1, 1e-4).unwrap();
        assert!((r.objective / 3.0 - 1.0).abs() < 1e-2, "{}", r.objective);
        assert!(r.at_box.is_empty());
        assert!(brute_force_opt(&DTree::complete(4).unwrap(), 1, 1e-4).is_err());
        assert!(brute_force_opt(&DTree::complete(1).unwrap(), 1, 1e-6).is_err());
    }

    #[test]
    fn oracle_is_deterministic() {
        let t = DTree::random(3, 17, 6).unwrap();
        let a = brute_force_opt(&t, 42, 1e-3).unwrap();
        let b = brute_force_opt(&t, 42, 1e-3).unwrap();
        assert_eq!(a.objective, b.objective);
        assert_eq!(a.weights, b.weights);
    }

    #[test]
    fn weights_json_round_trip() {
        let t = DTree::and_chain(3).unwrap();
        let w = canonical_weights(&t);
        let back = WeightMap::parse(&w.to_json()).unwrap();
        assert_eq!(w, back);
        assert_eq!(WeightMap::parse(&WeightMap::default().to_json()).unwrap(), WeightMap::default());
        assert!(WeightMap::parse(r#"{"weights":[{"parent":0,"bit":2,"w":1}]}"#).is_err());
        assert!(WeightMap::parse(
            r#"{"weights":[{"parent":0,"bit":0,"w":1},{"parent":0,"bit":0,"w":2}]}"#
        )
        .is_err());
    }
}
