//! Conversion of decision trees with 0/1 outputs into Boolean formulas.
//!
//! Each internal node querying `x_i` with subtrees `L`, `R` becomes
//! `(¬x_i ∧ F_L) ∨ (x_i ∧ F_R)` and each leaf its constant output. That adds
//! five formula nodes per internal node and one per leaf, `6I + 1` in all,
//! against a tree size of `2I + 1`.

use std::fmt;

use serde::Serialize;

use crate::bits::index_to_bits;
use crate::dtree::DTree;
use crate::error::{check_enum_limit, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FNode {
    And(usize, usize),
    Or(usize, usize),
    Lit { var: usize, neg: bool },
    Const(bool),
}

/// A formula stored as an arena; children precede parents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Formula {
    n: usize,
    nodes: Vec<FNode>,
    root: usize,
}

impl Formula {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nodes(&self) -> &[FNode] {
        &self.nodes
    }

    pub fn root(&self) -> usize {
        self.root
    }

    fn push(&mut self, node: FNode) -> usize {
        self.nodes.push(node);
        self.nodes.len() - 1
    }

    fn write_node(&self, ix: usize, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.nodes[ix] {
            FNode::And(a, b) | FNode::Or(a, b) => {
                let op = if matches!(self.nodes[ix], FNode::And(..)) { "∧" } else { "∨" };
                f.write_str("(")?;
                self.write_node(a, f)?;
                write!(f, " {op} ")?;
                self.write_node(b, f)?;
                f.write_str(")")
            }
            FNode::Lit { var, neg } => write!(f, "{}x{var}", if neg { "¬" } else { "" }),
            FNode::Const(b) => write!(f, "{}", u8::from(b)),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_node(self.root, f)
    }
}

pub fn to_formula(t: &DTree) -> Result<Formula> {
    let mut out = Formula {
        n: t.n(),
        nodes: Vec::with_capacity(6 * t.num_internal() + 1),
        root: 0,
    };
    // Post-order, so children are built first.
    let mut built = vec![usize::MAX; t.size()];
    for &v in t.preorder().iter().rev() {
        built[v] = match t.children(v) {
            None => out.push(FNode::Const(t.leaf_output_bit(v)?)),
            Some([c0, c1]) => {
                let var = t.var(v).expect("internal");
                let neg = out.push(FNode::Lit { var, neg: true });
                let left = out.push(FNode::And(neg, built[c0]));
                let pos = out.push(FNode::Lit { var, neg: false });
                let right = out.push(FNode::And(pos, built[c1]));
                out.push(FNode::Or(left, right))
            }
        };
    }
    out.root = built[t.root()];
    Ok(out)
}

pub fn formula_size(f: &Formula) -> usize {
    f.nodes.len()
}

pub fn formula_eval(f: &Formula, x: &[bool]) -> Result<bool> {
    if x.len() != f.n {
        return Err(Error::LengthMismatch {
            expected: f.n,
            got: x.len(),
        });
    }
    let mut val = Vec::with_capacity(f.nodes.len());
    for node in &f.nodes {
        let v = match *node {
            FNode::And(a, b) => val[a] && val[b],
            FNode::Or(a, b) => val[a] || val[b],
            FNode::Lit { var, neg } => x[var] != neg,
            FNode::Const(b) => b,
        };
        val.push(v);
    }
    Ok(val[f.root])
}

#[derive(Debug, Clone, Serialize)]
pub struct FormulaCheck {
    pub size: usize,
    pub bound: usize,
    pub inputs_checked: u64,
    /// First input where formula and tree disagree.
    pub mismatch: Option<String>,
    pub pass: bool,
}

/// Size bound and exhaustive agreement with the tree.
pub fn check(t: &DTree, f: &Formula) -> Result<FormulaCheck> {
    check_enum_limit(t.n())?;
    let mut mismatch = None;
    let count = 1u64 << t.n();
    for i in 0..count {
        let x = index_to_bits(i, t.n());
        let want = t.leaf_output_bit(t.eval_leaf_ix(&x)?)?;
        if formula_eval(f, &x)? != want {
            mismatch = Some(crate::bits::format_bits(&x));
            break;
        }
    }
    let size = formula_size(f);
    let bound = 5 * t.size();
    Ok(FormulaCheck {
        size,
        bound,
        inputs_checked: count,
        pass: mismatch.is_none() && size <= bound,
        mismatch,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::parse_bits;

    #[test]
    fn leaf_is_constant() {
        let t = DTree::parse(r#"{"n":1,"root":0,"nodes":[{"id":0,"leaf":"a","out":"1"}]}"#).unwrap();
        let f = to_formula(&t).unwrap();
        assert_eq!(formula_size(&f), 1);
        assert!(formula_eval(&f, &[true]).unwrap());
    }

    #[test]
    fn depth_one() {
        let t = DTree::parse(
            r#"{"n":1,"root":0,"nodes":[{"id":0,"var":0,"zero":1,"one":2},
                {"id":1,"leaf":"a","out":"0"},{"id":2,"leaf":"b","out":"1"}]}"#,
        )
        .unwrap();
        let f = to_formula(&t).unwrap();
        assert_eq!(formula_size(&f), 7);
        assert_eq!(f.to_string(), "((¬x0 ∧ 0) ∨ (x0 ∧ 1))");
        assert!(check(&t, &f).unwrap().pass);
    }

    #[test]
    fn parity_three() {
        let t = DTree::parity(3).unwrap();
        let f = to_formula(&t).unwrap();
        assert_eq!(formula_size(&f), 43);
        for i in 0..8u64 {
            let x = index_to_bits(i, 3);
            assert_eq!(formula_eval(&f, &x).unwrap(), i.count_ones() % 2 == 1);
        }
        let rep = check(&t, &f).unwrap();
        assert!(rep.pass && rep.bound == 75);
    }

    #[test]
    fn literals_and_constants() {
        let f = Formula {
            n: 3,
            nodes: vec![FNode::Lit { var: 2, neg: true }],
            root: 0,
        };
        assert!(!formula_eval(&f, &parse_bits("001").unwrap()).unwrap());
        assert_eq!(f.to_string(), "¬x2");
        let c = Formula {
            n: 3,
            nodes: vec![FNode::Const(false)],
            root: 0,
        };
        assert!(!formula_eval(&c, &parse_bits("111").unwrap()).unwrap());
        assert!(formula_eval(&c, &[true]).is_err());
    }

    #[test]
    fn missing_output_is_an_error() {
        let text = r#"{"n":1,"root":0,"nodes":[{"id":0,"var":0,"zero":1,"one":2},{"id":1,"leaf":"a"},{"id":2,"leaf":"b","out":"1"}]}"#;
        let t = DTree::parse(text).unwrap();
        assert!(matches!(to_formula(&t), Err(Error::MissingOutput(_))));
    }
}
