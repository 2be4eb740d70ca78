//! Read-once AND-OR trees with arbitrary fan-in, the restriction steps
//! `update` and `contract`, and the two progress measures used to analyse
//! the Prover-Delayer game on them.

mod game;

use std::fmt;

use serde::Serialize;

use crate::error::{check_enum_limit, Error, Result};
use crate::truth_table::TruthTable;

pub use game::{
    parse_delayer_reply, parse_prover_bit, parse_prover_var, play, Decision, DelayerPolicy, Exhaustive, GameState,
    GameTranscript, HumanDelayer, HumanIo, HumanProver, Opponent, PaperDelayer, PaperProver, ProverPolicy,
    RandomDelayer, RandomProver, Round, MAX_EXHAUSTIVE_LEAVES,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Gate {
    And,
    Or,
}

impl Gate {
    /// The input value that decides the gate on its own.
    fn absorbing(self) -> bool {
        matches!(self, Gate::Or)
    }

    fn flip(self) -> Gate {
        match self {
            Gate::And => Gate::Or,
            Gate::Or => Gate::And,
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Gate::And => "AND",
            Gate::Or => "OR",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expr {
    Leaf(usize),
    /// Children are ordered and never empty.
    Gate(Gate, Vec<Expr>),
}

impl Expr {
    fn label(&self) -> Option<Gate> {
        match self {
            Expr::Leaf(_) => None,
            Expr::Gate(g, _) => Some(*g),
        }
    }

    fn children(&self) -> &[Expr] {
        match self {
            Expr::Leaf(_) => &[],
            Expr::Gate(_, kids) => kids,
        }
    }

    fn eval(&self, x: &[bool]) -> bool {
        match self {
            Expr::Leaf(i) => x[*i],
            Expr::Gate(Gate::And, kids) => kids.iter().all(|k| k.eval(x)),
            Expr::Gate(Gate::Or, kids) => kids.iter().any(|k| k.eval(x)),
        }
    }

    fn collect_vars(&self, out: &mut Vec<usize>) {
        match self {
            Expr::Leaf(i) => out.push(*i),
            Expr::Gate(_, kids) => kids.iter().for_each(|k| k.collect_vars(out)),
        }
    }

    fn find(&self, var: usize, path: &mut Vec<usize>) -> bool {
        match self {
            Expr::Leaf(i) => *i == var,
            Expr::Gate(_, kids) => {
                for (k, kid) in kids.iter().enumerate() {
                    path.push(k);
                    if kid.find(var, path) {
                        return true;
                    }
                    path.pop();
                }
                false
            }
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Leaf(i) => write!(f, "x{i}"),
            Expr::Gate(g, kids) => {
                write!(f, "{g}(")?;
                for (k, kid) in kids.iter().enumerate() {
                    if k > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{kid}")?;
                }
                f.write_str(")")
            }
        }
    }
}

/// An AND-OR tree over `n` variables, or the empty tree computing a
/// constant.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AndOrTree {
    n: usize,
    root: Option<Expr>,
    /// The constant computed by the empty tree; ignored otherwise.
    value: bool,
}

impl fmt::Display for AndOrTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.root {
            Some(e) => write!(f, "{e}"),
            None => write!(f, "const {}", u8::from(self.value)),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct NodeMeasure {
    /// Child indices from the root.
    pub path: Vec<usize>,
    pub label: String,
    pub c: u32,
    pub d: u32,
    pub marked: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Measures {
    /// Per node, in preorder.
    pub nodes: Vec<NodeMeasure>,
    pub p: u32,
    pub s: u32,
}

impl AndOrTree {
    pub fn new(n: usize, root: Expr) -> Result<Self> {
        let mut vars = Vec::new();
        root.collect_vars(&mut vars);
        let mut seen = vec![false; n];
        for v in vars {
            if v >= n {
                return Err(Error::InvalidParameter(format!("leaf x{v} is out of range for n = {n}")));
            }
            if std::mem::replace(&mut seen[v], true) {
                return Err(Error::InvalidParameter(format!("variable x{v} labels two leaves")));
            }
        }
        if has_empty_gate(&root) {
            return Err(Error::InvalidParameter("gate without children".into()));
        }
        Ok(AndOrTree {
            n,
            root: Some(root),
            value: false,
        })
    }

    pub fn empty(n: usize, value: bool) -> Self {
        AndOrTree { n, root: None, value }
    }

    /// The complete binary AND-OR tree of the given depth: OR at the top,
    /// alternating gates, leaves `x_0 .. x_{2^depth - 1}` left to right.
    pub fn complete(depth: usize) -> Result<Self> {
        if depth > 20 {
            return Err(Error::SizeCap {
                what: "AND-OR tree depth",
                actual: depth,
                limit: 20,
            });
        }
        fn build(depth: usize, gate: Gate, next: &mut usize) -> Expr {
            if depth == 0 {
                *next += 1;
                return Expr::Leaf(*next - 1);
            }
            let l = build(depth - 1, gate.flip(), next);
            let r = build(depth - 1, gate.flip(), next);
            Expr::Gate(gate, vec![l, r])
        }
        let mut next = 0;
        let root = build(depth, Gate::Or, &mut next);
        Ok(AndOrTree {
            n: 1 << depth,
            root: Some(root),
            value: false,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn root(&self) -> Option<&Expr> {
        self.root.as_ref()
    }

    pub fn is_empty(&self) -> bool {
        self.root.is_none()
    }

    /// The constant computed by an empty tree.
    pub fn constant(&self) -> Option<bool> {
        self.root.is_none().then_some(self.value)
    }

    pub fn leaf_vars(&self) -> Vec<usize> {
        let mut out = Vec::new();
        if let Some(r) = &self.root {
            r.collect_vars(&mut out);
        }
        out
    }

    pub fn num_leaves(&self) -> usize {
        self.leaf_vars().len()
    }

    pub fn contains_var(&self, var: usize) -> bool {
        self.leaf_path(var).is_some()
    }

    /// Child indices leading from the root to the leaf labelled `var`.
    pub fn leaf_path(&self, var: usize) -> Option<Vec<usize>> {
        let root = self.root.as_ref()?;
        let mut path = Vec::new();
        root.find(var, &mut path).then_some(path)
    }

    fn node(&self, path: &[usize]) -> &Expr {
        let mut e = self.root.as_ref().expect("non-empty");
        for &k in path {
            e = &e.children()[k];
        }
        e
    }

    pub fn eval(&self, x: &[bool]) -> Result<bool> {
        if x.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                got: x.len(),
            });
        }
        Ok(match &self.root {
            Some(e) => e.eval(x),
            None => self.value,
        })
    }

    pub fn to_truth_table(&self) -> Result<TruthTable> {
        check_enum_limit(self.n)?;
        TruthTable::from_fn(self.n, |x| self.eval(x).expect("length matches"))
    }

    /// Every gate has at least two children and differs from its parent.
    pub fn is_reduced(&self) -> bool {
        fn ok(e: &Expr, parent: Option<Gate>) -> bool {
            match e {
                Expr::Leaf(_) => true,
                Expr::Gate(g, kids) => kids.len() >= 2 && parent != Some(*g) && kids.iter().all(|k| ok(k, Some(*g))),
            }
        }
        self.root.as_ref().map_or(true, |r| ok(r, None))
    }

    /// Fixes `x_var = b`. A leaf taking a value that is neutral for its
    /// parent gate is removed; an absorbing value decides the parent, whose
    /// subtree is then removed in turn as a decided input of its own parent.
    /// A decided root leaves the empty tree computing that value. Absent
    /// variables leave the tree unchanged.
    pub fn update(&self, var: usize, b: bool) -> Result<AndOrTree> {
        let Some(root) = &self.root else {
            return Err(Error::EmptyTree);
        };
        if !self.contains_var(var) {
            return Ok(self.clone());
        }
        Ok(match update_expr(root, var, b) {
            Updated::Expr(e) => AndOrTree {
                n: self.n,
                root: Some(e),
                value: false,
            },
            Updated::Const(v) => AndOrTree::empty(self.n, v),
        })
    }

    /// Promotes the child of every unary gate and merges every gate into a
    /// parent with the same label, keeping child order (merged children
    /// take the merged gate's position).
    pub fn contract(&self) -> AndOrTree {
        AndOrTree {
            n: self.n,
            root: self.root.as_ref().map(contract_expr),
            value: self.value,
        }
    }

    pub fn measures(&self) -> Measures {
        let Some(root) = &self.root else {
            return Measures {
                nodes: Vec::new(),
                p: 0,
                s: 0,
            };
        };
        let mut nodes = Vec::new();
        let mut path = Vec::new();
        measure_walk(root, None, &mut path, &mut nodes);
        let (mut p, mut s) = (1, 1);
        for m in nodes.iter().filter(|m| m.marked) {
            p += m.c.saturating_sub(1);
            s += m.d.saturating_sub(1);
        }
        Measures { nodes, p, s }
    }

    /// Variable of the leftmost leaf.
    pub fn leftmost_leaf(&self) -> Option<usize> {
        let mut e = self.root.as_ref()?;
        loop {
            match e {
                Expr::Leaf(i) => return Some(*i),
                Expr::Gate(_, kids) => e = &kids[0],
            }
        }
    }
}

fn has_empty_gate(e: &Expr) -> bool {
    match e {
        Expr::Leaf(_) => false,
        Expr::Gate(_, kids) => kids.is_empty() || kids.iter().any(has_empty_gate),
    }
}

enum Updated {
    Expr(Expr),
    Const(bool),
}

fn update_expr(e: &Expr, var: usize, b: bool) -> Updated {
    match e {
        Expr::Leaf(i) if *i == var => Updated::Const(b),
        Expr::Leaf(_) => Updated::Expr(e.clone()),
        Expr::Gate(g, kids) => {
            let mut out = Vec::with_capacity(kids.len());
            for kid in kids {
                match update_expr(kid, var, b) {
                    Updated::Expr(k) => out.push(k),
                    Updated::Const(v) if v == g.absorbing() => return Updated::Const(v),
                    Updated::Const(_) => {}
                }
            }
            if out.is_empty() {
                // Every input took the neutral value.
                Updated::Const(!g.absorbing())
            } else {
                Updated::Expr(Expr::Gate(*g, out))
            }
        }
    }
}

fn contract_expr(e: &Expr) -> Expr {
    match e {
        Expr::Leaf(_) => e.clone(),
        Expr::Gate(g, kids) => {
            let mut out = Vec::with_capacity(kids.len());
            for kid in kids.iter().map(contract_expr) {
                match kid {
                    Expr::Gate(h, grand) if h == *g => out.extend(grand),
                    other => out.push(other),
                }
            }
            if out.len() == 1 {
                out.pop().expect("one child")
            } else {
                Expr::Gate(*g, out)
            }
        }
    }
}

/// Returns (c, d) of `e` and appends the measures of its subtree.
/// `pparent` is the label of the proper parent, `None` when undefined.
fn measure_walk(e: &Expr, pparent: Option<Gate>, path: &mut Vec<usize>, out: &mut Vec<NodeMeasure>) -> (u32, u32) {
    let slot = out.len();
    out.push(NodeMeasure {
        path: path.clone(),
        label: match e {
            Expr::Leaf(i) => format!("x{i}"),
            Expr::Gate(g, _) => g.to_string(),
        },
        c: 0,
        d: 0,
        marked: false,
    });
    let (c, d, marked) = match e {
        Expr::Leaf(_) => (0, 1, false),
        Expr::Gate(g, kids) => {
            let child_pparent = if kids.len() >= 2 { Some(*g) } else { pparent };
            let mut sums = (0, 0);
            let mut first = (0, 0);
            for (k, kid) in kids.iter().enumerate() {
                path.push(k);
                let cd = measure_walk(kid, child_pparent, path, out);
                path.pop();
                if k == 0 {
                    first = cd;
                }
                sums = (sums.0 + cd.0, sums.1 + cd.1);
            }
            let (c, d) = match (g, kids.len()) {
                (Gate::Or, _) => sums,
                (_, 1) => first,
                (Gate::And, _) => (1, 1),
            };
            let marked = *g == Gate::Or && kids.len() >= 2 && pparent != Some(Gate::Or);
            (c, d, marked)
        }
    };
    out[slot].c = c;
    out[slot].d = d;
    out[slot].marked = marked;
    (c, d)
}

/// Algorithm-3 response of the Delayer on a reduced tree when the Prover
/// asks for `var`. Variables without a leaf are answered with 0.
pub fn delayer_move(t: &AndOrTree, var: usize) -> Result<Decision> {
    let Some(root) = &t.root else {
        return Err(Error::EmptyTree);
    };
    let Some(path) = t.leaf_path(var) else {
        return Ok(Decision::Answer(false));
    };
    if matches!(root, Expr::Leaf(_)) {
        return Ok(Decision::Defer);
    }
    let vpath = &path[..path.len() - 1];
    let v = t.node(vpath);
    if v.label() == Some(Gate::Or) {
        return Ok(Decision::Answer(false));
    }
    if v.children().len() > 2 || vpath.is_empty() {
        return Ok(Decision::Answer(true));
    }
    let me = path[path.len() - 1];
    let m = &v.children()[1 - me];
    if m.children().iter().any(|x| x.label() == Some(Gate::And)) {
        return Ok(Decision::Answer(true));
    }
    let upath = &vpath[..vpath.len() - 1];
    let vix = vpath[vpath.len() - 1];
    let u = t.node(upath);
    let others_are_leaves = u
        .children()
        .iter()
        .enumerate()
        .all(|(k, x)| k == vix || matches!(x, Expr::Leaf(_)));
    Ok(if others_are_leaves {
        Decision::Answer(true)
    } else {
        Decision::Defer
    })
}

/// Algorithm-5 query: the leftmost leaf.
pub fn prover_move(t: &AndOrTree) -> Result<usize> {
    t.leftmost_leaf().ok_or(Error::EmptyTree)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::index_to_bits;

    fn and2() -> AndOrTree {
        AndOrTree::new(3, Expr::Gate(Gate::And, vec![Expr::Leaf(1), Expr::Leaf(2)])).unwrap()
    }

    #[test]
    fn update_examples() {
        let t = AndOrTree::new(4, Expr::Leaf(3)).unwrap();
        let u = t.update(3, true).unwrap();
        assert_eq!(u.constant(), Some(true));

        let u = and2().update(1, true).unwrap();
        assert_eq!(u.root(), Some(&Expr::Gate(Gate::And, vec![Expr::Leaf(2)])));
        assert_eq!(u.contract().root(), Some(&Expr::Leaf(2)));

        let u = and2().update(1, false).unwrap();
        assert_eq!(u.constant(), Some(false));

        assert_eq!(and2().update(0, true).unwrap(), and2());
        assert!(matches!(AndOrTree::empty(2, true).update(0, true), Err(Error::EmptyTree)));
    }

    #[test]
    fn contract_examples() {
        let nested = AndOrTree::new(
            3,
            Expr::Gate(
                Gate::And,
                vec![Expr::Leaf(0), Expr::Gate(Gate::And, vec![Expr::Leaf(1), Expr::Leaf(2)])],
            ),
        )
        .unwrap();
        let c = nested.contract();
        assert_eq!(c.to_string(), "AND(x0, x1, x2)");
        assert!(c.is_reduced());
        assert_eq!(c.contract(), c);

        let unary = AndOrTree::new(1, Expr::Gate(Gate::Or, vec![Expr::Leaf(0)])).unwrap();
        assert_eq!(unary.contract().root(), Some(&Expr::Leaf(0)));

        let full = AndOrTree::complete(2).unwrap();
        assert_eq!(full.contract(), full);
    }

    #[test]
    fn complete_shape() {
        let t = AndOrTree::complete(2).unwrap();
        assert_eq!(t.to_string(), "OR(AND(x0, x1), AND(x2, x3))");
        assert_eq!(t.n(), 4);
        assert!(t.is_reduced());
    }

    #[test]
    fn measures_examples() {
        for (depth, want) in [(2, 2), (4, 6), (6, 22)] {
            let m = AndOrTree::complete(depth).unwrap().measures();
            assert_eq!((m.p, m.s), (want, want), "depth {depth}");
        }
        let e = AndOrTree::empty(3, false).measures();
        assert_eq!((e.p, e.s), (0, 0));
        let leaf = AndOrTree::new(1, Expr::Leaf(0)).unwrap().measures();
        assert_eq!((leaf.p, leaf.s), (1, 1));
        assert_eq!((leaf.nodes[0].c, leaf.nodes[0].d, leaf.nodes[0].marked), (0, 1, false));
    }

    #[test]
    fn delayer_ladder() {
        let t = AndOrTree::complete(2).unwrap();
        // Parent AND with two children, not root; the sibling is a leaf and
        // the grandparent OR has a non-leaf other child.
        assert_eq!(delayer_move(&t, 0).unwrap(), Decision::Defer);

        let or_parent = AndOrTree::new(2, Expr::Gate(Gate::Or, vec![Expr::Leaf(0), Expr::Leaf(1)])).unwrap();
        assert_eq!(delayer_move(&or_parent, 0).unwrap(), Decision::Answer(false));

        let wide = AndOrTree::new(3, Expr::Gate(Gate::And, vec![Expr::Leaf(0), Expr::Leaf(1), Expr::Leaf(2)])).unwrap();
        assert_eq!(delayer_move(&wide, 1).unwrap(), Decision::Answer(true));

        assert_eq!(delayer_move(&and2(), 1).unwrap(), Decision::Answer(true));

        let single = AndOrTree::new(1, Expr::Leaf(0)).unwrap();
        assert_eq!(delayer_move(&single, 0).unwrap(), Decision::Defer);

        // OR(AND(x0, x1), x2): the other children of the OR are leaves.
        let lone = AndOrTree::new(
            3,
            Expr::Gate(
                Gate::Or,
                vec![Expr::Gate(Gate::And, vec![Expr::Leaf(0), Expr::Leaf(1)]), Expr::Leaf(2)],
            ),
        )
        .unwrap();
        assert_eq!(delayer_move(&lone, 0).unwrap(), Decision::Answer(true));

        // The sibling m has an AND child.
        let deep = AndOrTree::new(
            6,
            Expr::Gate(
                Gate::Or,
                vec![
                    Expr::Gate(
                        Gate::And,
                        vec![
                            Expr::Leaf(0),
                            Expr::Gate(
                                Gate::Or,
                                vec![Expr::Leaf(1), Expr::Gate(Gate::And, vec![Expr::Leaf(2), Expr::Leaf(3)])],
                            ),
                        ],
                    ),
                    Expr::Gate(Gate::And, vec![Expr::Leaf(4), Expr::Leaf(5)]),
                ],
            ),
        )
        .unwrap();
        assert_eq!(delayer_move(&deep, 0).unwrap(), Decision::Answer(true));

        assert_eq!(delayer_move(&t, 3).unwrap(), Decision::Defer);
        assert_eq!(prover_move(&t).unwrap(), 0);
        assert!(prover_move(&AndOrTree::empty(1, false)).is_err());
    }

    #[test]
    fn rejects_bad_trees() {
        assert!(AndOrTree::new(2, Expr::Gate(Gate::And, vec![Expr::Leaf(0), Expr::Leaf(0)])).is_err());
        assert!(AndOrTree::new(1, Expr::Leaf(3)).is_err());
        assert!(AndOrTree::new(1, Expr::Gate(Gate::Or, vec![])).is_err());
    }

    #[test]
    fn truth_table_of_complete_tree() {
        let t = AndOrTree::complete(2).unwrap();
        let tt = t.to_truth_table().unwrap();
        for i in 0..16 {
            let x = index_to_bits(i, 4);
            assert_eq!(tt.get(i), (x[0] && x[1]) || (x[2] && x[3]));
        }
    }
}
