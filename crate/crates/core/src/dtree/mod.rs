//! Binary decision trees over `n` Boolean variables.
//!
//! Nodes keep the integer ids they were given in the source document, so
//! weight files and reports can refer back to them. Internally every node
//! also has a dense index (its position when nodes are sorted by id), and
//! all traversals run iteratively so that very deep trees are fine.

mod gen;
mod randomized;

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use gen::{GenKind, GenParams};
pub use randomized::{RandomizedDTree, RelationReport, RelationTable};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(pub u64);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// An edge, named by its parent (always an internal node) and answer bit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeId {
    pub parent: NodeId,
    pub bit: u8,
}

impl EdgeId {
    pub fn new(parent: NodeId, bit: u8) -> Self {
        EdgeId { parent, bit }
    }

    pub fn sibling(self) -> Self {
        EdgeId {
            parent: self.parent,
            bit: 1 - self.bit,
        }
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.parent, self.bit)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NodeKind {
    /// `children[b]` is the dense index of the child along the `b`-edge.
    Internal { var: usize, children: [usize; 2] },
    Leaf { label: String, out: Option<String> },
}

/// Raw node description used to assemble a tree before validation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RawNode {
    Internal { var: usize, zero: NodeId, one: NodeId },
    Leaf { label: String, out: Option<String> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DTree {
    n: usize,
    ids: Vec<NodeId>,
    kinds: Vec<NodeKind>,
    root: usize,
    parent: Vec<Option<(usize, u8)>>,
    preorder: Vec<usize>,
    level: Vec<usize>,
}

/// A root-to-leaf path: the dense node indices from the root down to the
/// leaf, and the answer bit taken at each internal node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootPath {
    pub nodes: Vec<usize>,
    pub bits: Vec<u8>,
}

impl RootPath {
    pub fn leaf(&self) -> usize {
        *self.nodes.last().expect("paths are never empty")
    }
}

impl DTree {
    /// Validates and assembles a tree. `nodes` may be given in any order.
    pub fn from_parts(n: usize, nodes: Vec<(NodeId, RawNode)>, root: NodeId) -> Result<DTree> {
        if n == 0 {
            return Err(Error::Malformed("n must be a positive integer".into()));
        }
        let mut nodes = nodes;
        nodes.sort_by_key(|(id, _)| *id);
        for w in nodes.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::DuplicateNode(w[0].0));
            }
        }
        let ids: Vec<NodeId> = nodes.iter().map(|(id, _)| *id).collect();
        let index: HashMap<NodeId, usize> = ids.iter().enumerate().map(|(i, id)| (*id, i)).collect();
        let lookup = |parent: NodeId, child: NodeId| {
            index
                .get(&child)
                .copied()
                .ok_or(Error::DanglingChild { parent, child })
        };

        let mut kinds = Vec::with_capacity(nodes.len());
        for (id, raw) in nodes {
            kinds.push(match raw {
                RawNode::Internal { var, zero, one } => {
                    if var >= n {
                        return Err(Error::VariableOutOfRange { node: id, var, n });
                    }
                    NodeKind::Internal {
                        var,
                        children: [lookup(id, zero)?, lookup(id, one)?],
                    }
                }
                RawNode::Leaf { label, out } => NodeKind::Leaf { label, out },
            });
        }
        let root = *index
            .get(&root)
            .ok_or_else(|| Error::Malformed(format!("root {root} is not a node")))?;

        // Every node must be reached exactly once from the root.
        let size = kinds.len();
        let mut parent = vec![None; size];
        let mut level = vec![0usize; size];
        let mut seen = vec![false; size];
        let mut preorder = Vec::with_capacity(size);
        let mut stack = vec![root];
        seen[root] = true;
        while let Some(v) = stack.pop() {
            preorder.push(v);
            if let NodeKind::Internal { children, .. } = &kinds[v] {
                for b in [1u8, 0u8] {
                    let c = children[b as usize];
                    if seen[c] {
                        return Err(Error::BadTreeShape { node: ids[c] });
                    }
                    seen[c] = true;
                    parent[c] = Some((v, b));
                    level[c] = level[v] + 1;
                    stack.push(c);
                }
            }
        }
        if let Some(orphan) = seen.iter().position(|s| !s) {
            return Err(Error::BadTreeShape { node: ids[orphan] });
        }

        let tree = DTree {
            n,
            ids,
            kinds,
            root,
            parent,
            preorder,
            level,
        };
        tree.check_read_once()?;
        Ok(tree)
    }

    fn check_read_once(&self) -> Result<()> {
        // Enter/exit DFS toggling the set of variables on the current path.
        let mut on_path = vec![false; self.n];
        let mut stack = vec![(self.root, false)];
        while let Some((v, exiting)) = stack.pop() {
            let NodeKind::Internal { var, children } = self.kinds[v] else {
                continue;
            };
            if exiting {
                on_path[var] = false;
                continue;
            }
            if on_path[var] {
                return Err(Error::RepeatedVariable {
                    var,
                    node: self.ids[v],
                });
            }
            on_path[var] = true;
            stack.push((v, true));
            stack.push((children[1], false));
            stack.push((children[0], false));
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of nodes (DTSize).
    pub fn size(&self) -> usize {
        self.kinds.len()
    }

    pub fn num_leaves(&self) -> usize {
        self.kinds.iter().filter(|k| matches!(k, NodeKind::Leaf { .. })).count()
    }

    pub fn num_internal(&self) -> usize {
        self.size() - self.num_leaves()
    }

    pub fn depth(&self) -> usize {
        self.level.iter().copied().max().unwrap_or(0)
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn root_id(&self) -> NodeId {
        self.ids[self.root]
    }

    pub fn id(&self, ix: usize) -> NodeId {
        self.ids[ix]
    }

    pub fn index_of(&self, id: NodeId) -> Option<usize> {
        self.ids.binary_search(&id).ok()
    }

    pub fn kind(&self, ix: usize) -> &NodeKind {
        &self.kinds[ix]
    }

    pub fn is_leaf(&self, ix: usize) -> bool {
        matches!(self.kinds[ix], NodeKind::Leaf { .. })
    }

    pub fn children(&self, ix: usize) -> Option<[usize; 2]> {
        match self.kinds[ix] {
            NodeKind::Internal { children, .. } => Some(children),
            NodeKind::Leaf { .. } => None,
        }
    }

    pub fn var(&self, ix: usize) -> Option<usize> {
        match self.kinds[ix] {
            NodeKind::Internal { var, .. } => Some(var),
            NodeKind::Leaf { .. } => None,
        }
    }

    /// Parent index and the bit of the edge leading here.
    pub fn parent(&self, ix: usize) -> Option<(usize, u8)> {
        self.parent[ix]
    }

    /// Distance from the root.
    pub fn level(&self, ix: usize) -> usize {
        self.level[ix]
    }

    /// Root first, 0-subtree before 1-subtree. Reversing it yields an
    /// order in which every child precedes its parent.
    pub fn preorder(&self) -> &[usize] {
        &self.preorder
    }

    pub fn leaves(&self) -> Vec<usize> {
        self.preorder.iter().copied().filter(|&v| self.is_leaf(v)).collect()
    }

    pub fn internal_nodes(&self) -> Vec<usize> {
        self.preorder.iter().copied().filter(|&v| !self.is_leaf(v)).collect()
    }

    /// All edges, in preorder of their parents.
    pub fn edges(&self) -> Vec<EdgeId> {
        self.internal_nodes()
            .into_iter()
            .flat_map(|v| [EdgeId::new(self.ids[v], 0), EdgeId::new(self.ids[v], 1)])
            .collect()
    }

    pub fn edge_of(&self, parent: usize, bit: u8) -> EdgeId {
        EdgeId::new(self.ids[parent], bit)
    }

    /// Dense index of the edge's child, if the edge exists in this tree.
    pub fn edge_child(&self, e: EdgeId) -> Option<usize> {
        let p = self.index_of(e.parent)?;
        match self.kinds[p] {
            NodeKind::Internal { children, .. } if e.bit <= 1 => Some(children[e.bit as usize]),
            _ => None,
        }
    }

    pub fn leaf_label(&self, ix: usize) -> Option<&str> {
        match &self.kinds[ix] {
            NodeKind::Leaf { label, .. } => Some(label),
            NodeKind::Internal { .. } => None,
        }
    }

    pub fn leaf_output(&self, ix: usize) -> Option<&str> {
        match &self.kinds[ix] {
            NodeKind::Leaf { out, .. } => out.as_deref(),
            NodeKind::Internal { .. } => None,
        }
    }

    /// The leaf's output as a bit, for trees computing Boolean functions.
    pub fn leaf_output_bit(&self, ix: usize) -> Result<bool> {
        match self.leaf_output(ix) {
            Some("0") => Ok(false),
            Some("1") => Ok(true),
            _ => Err(Error::MissingOutput(self.ids[ix])),
        }
    }

    fn check_len(&self, x: &[bool]) -> Result<()> {
        if x.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                got: x.len(),
            });
        }
        Ok(())
    }

    /// Dense index of the leaf reached on `x`.
    pub fn eval_leaf_ix(&self, x: &[bool]) -> Result<usize> {
        self.check_len(x)?;
        let mut v = self.root;
        while let NodeKind::Internal { var, children } = self.kinds[v] {
            v = children[usize::from(x[var])];
        }
        Ok(v)
    }

    /// The leaf reached on `x`, i.e. the value of f̃(x).
    pub fn eval_leaf(&self, x: &[bool]) -> Result<NodeId> {
        self.eval_leaf_ix(x).map(|v| self.ids[v])
    }

    /// The path P_x followed on input `x`.
    pub fn path_for_input(&self, x: &[bool]) -> Result<RootPath> {
        let leaf = self.eval_leaf_ix(x)?;
        Ok(self.path_to(leaf))
    }

    pub fn path_to(&self, leaf: usize) -> RootPath {
        let mut nodes = vec![leaf];
        let mut bits = Vec::new();
        let mut v = leaf;
        while let Some((p, b)) = self.parent[v] {
            nodes.push(p);
            bits.push(b);
            v = p;
        }
        nodes.reverse();
        bits.reverse();
        RootPath { nodes, bits }
    }

    /// Every root-to-leaf path, leaves in preorder.
    pub fn paths(&self) -> Vec<RootPath> {
        self.leaves().into_iter().map(|l| self.path_to(l)).collect()
    }

    pub fn path_edges(&self, p: &RootPath) -> Vec<EdgeId> {
        p.nodes
            .iter()
            .zip(&p.bits)
            .map(|(&v, &b)| self.edge_of(v, b))
            .collect()
    }

    /// Edges with exactly one endpoint on the path: the sibling of every
    /// path edge.
    pub fn deviating_edges(&self, p: &RootPath) -> BTreeSet<EdgeId> {
        p.nodes
            .iter()
            .zip(&p.bits)
            .map(|(&v, &b)| self.edge_of(v, 1 - b))
            .collect()
    }

    /// Number of nodes in the subtree rooted at each node, by dense index.
    pub fn subtree_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![1usize; self.size()];
        for &v in self.preorder.iter().rev() {
            if let Some([c0, c1]) = self.children(v) {
                sizes[v] = 1 + sizes[c0] + sizes[c1];
            }
        }
        sizes
    }

    /// The subtree rooted at `ix` as a tree of its own (same `n`, same ids).
    pub fn subtree(&self, ix: usize) -> DTree {
        let mut nodes = Vec::new();
        let mut stack = vec![ix];
        while let Some(v) = stack.pop() {
            nodes.push((self.ids[v], self.raw(v)));
            if let Some([c0, c1]) = self.children(v) {
                stack.push(c1);
                stack.push(c0);
            }
        }
        DTree::from_parts(self.n, nodes, self.ids[ix]).expect("subtrees of valid trees are valid")
    }

    fn raw(&self, v: usize) -> RawNode {
        match &self.kinds[v] {
            NodeKind::Internal { var, children } => RawNode::Internal {
                var: *var,
                zero: self.ids[children[0]],
                one: self.ids[children[1]],
            },
            NodeKind::Leaf { label, out } => RawNode::Leaf {
                label: label.clone(),
                out: out.clone(),
            },
        }
    }

    /// The same tree over `n >= self.n()` variables.
    pub fn widen(&self, n: usize) -> Result<DTree> {
        if n < self.n {
            return Err(Error::InvalidParameter(format!(
                "cannot shrink a tree over {} variables to {n}",
                self.n
            )));
        }
        let mut t = self.clone();
        t.n = n;
        Ok(t)
    }

    pub fn parse(text: &str) -> Result<DTree> {
        let doc: TreeDoc = serde_json::from_str(text)?;
        doc.into_tree()
    }

    pub fn to_doc(&self) -> TreeDoc {
        TreeDoc {
            n: self.n,
            root: self.ids[self.root].0,
            nodes: (0..self.size())
                .map(|v| {
                    let id = self.ids[v].0;
                    match self.raw(v) {
                        RawNode::Internal { var, zero, one } => NodeDoc {
                            id,
                            var: Some(var),
                            zero: Some(zero.0),
                            one: Some(one.0),
                            ..NodeDoc::default()
                        },
                        RawNode::Leaf { label, out } => NodeDoc {
                            id,
                            leaf: Some(label),
                            out,
                            ..NodeDoc::default()
                        },
                    }
                })
                .collect(),
        }
    }

    /// Canonical JSON: nodes sorted by id ascending.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_doc()).expect("tree documents always serialize")
    }
}

/// On-disk tree document.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TreeDoc {
    pub n: usize,
    pub root: u64,
    pub nodes: Vec<NodeDoc>,
}

/// Either `{id, var, zero, one}` or `{id, leaf, out?}`. Kept as one loose
/// struct so that a half-specified node produces a precise error.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeDoc {
    pub id: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub var: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zero: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub one: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub leaf: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<String>,
}

impl TreeDoc {
    pub fn into_tree(self) -> Result<DTree> {
        let mut nodes = Vec::with_capacity(self.nodes.len());
        for nd in self.nodes {
            let id = NodeId(nd.id);
            let raw = match (nd.var, nd.leaf) {
                (Some(_), Some(_)) => {
                    return Err(Error::Malformed(format!(
                        "node {id} has both \"var\" and \"leaf\""
                    )))
                }
                (None, None) => {
                    return Err(Error::Malformed(format!(
                        "node {id} has neither \"var\" nor \"leaf\""
                    )))
                }
                (Some(var), None) => {
                    if nd.out.is_some() {
                        return Err(Error::Malformed(format!(
                            "internal node {id} carries an \"out\" label"
                        )));
                    }
                    let zero = nd.zero.ok_or(Error::MissingChild {
                        node: id,
                        which: "zero",
                    })?;
                    let one = nd.one.ok_or(Error::MissingChild {
                        node: id,
                        which: "one",
                    })?;
                    RawNode::Internal {
                        var,
                        zero: NodeId(zero),
                        one: NodeId(one),
                    }
                }
                (None, Some(label)) => {
                    if nd.zero.is_some() || nd.one.is_some() {
                        return Err(Error::Malformed(format!("leaf {id} has children")));
                    }
                    RawNode::Leaf { label, out: nd.out }
                }
            };
            nodes.push((id, raw));
        }
        DTree::from_parts(self.n, nodes, NodeId(self.root))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::parse_bits;

    fn one_query() -> &'static str {
        r#"{"n":1,"root":0,"nodes":[
            {"id":0,"var":0,"zero":1,"one":2},
            {"id":1,"leaf":"a"},{"id":2,"leaf":"b"}]}"#
    }

    #[test]
    fn single_leaf_document() {
        let t = DTree::parse(r#"{"n":1,"root":0,"nodes":[{"id":0,"leaf":"L"}]}"#).unwrap();
        assert_eq!(t.size(), 1);
        assert_eq!(t.depth(), 0);
        let paths = t.paths();
        assert_eq!(paths.len(), 1);
        assert!(t.deviating_edges(&paths[0]).is_empty());
    }

    #[test]
    fn one_query_tree() {
        let t = DTree::parse(one_query()).unwrap();
        assert_eq!(t.size(), 3);
        assert_eq!(t.depth(), 1);
        let paths = t.paths();
        assert_eq!(paths.len(), 2);
        for p in &paths {
            let dev = t.deviating_edges(p);
            assert_eq!(dev.len(), 1);
            assert_eq!(*dev.iter().next().unwrap(), t.path_edges(p)[0].sibling());
        }
        assert_eq!(t.eval_leaf(&[true]).unwrap(), NodeId(2));
        assert!(matches!(
            t.eval_leaf(&[true, false]),
            Err(Error::LengthMismatch { expected: 1, got: 2 })
        ));
    }

    #[test]
    fn rejects_repeated_variable() {
        let text = r#"{"n":2,"root":0,"nodes":[
            {"id":0,"var":0,"zero":1,"one":2},
            {"id":1,"var":0,"zero":3,"one":4},
            {"id":2,"leaf":"c"},{"id":3,"leaf":"a"},{"id":4,"leaf":"b"}]}"#;
        let err = DTree::parse(text).unwrap_err();
        assert!(matches!(err, Error::RepeatedVariable { var: 0, .. }), "{err}");
        assert!(err.to_string().contains("repeated variable"));
    }

    #[test]
    fn structural_errors() {
        let dup = r#"{"n":1,"root":0,"nodes":[{"id":0,"leaf":"a"},{"id":0,"leaf":"b"}]}"#;
        assert!(matches!(DTree::parse(dup), Err(Error::DuplicateNode(NodeId(0)))));

        let dangling = r#"{"n":1,"root":0,"nodes":[{"id":0,"var":0,"zero":1,"one":9},{"id":1,"leaf":"a"}]}"#;
        assert!(matches!(
            DTree::parse(dangling),
            Err(Error::DanglingChild { child: NodeId(9), .. })
        ));

        let missing = r#"{"n":1,"root":0,"nodes":[{"id":0,"var":0,"zero":1},{"id":1,"leaf":"a"}]}"#;
        assert!(matches!(
            DTree::parse(missing),
            Err(Error::MissingChild { which: "one", .. })
        ));

        let shared = r#"{"n":2,"root":0,"nodes":[{"id":0,"var":0,"zero":1,"one":1},{"id":1,"leaf":"a"}]}"#;
        assert!(matches!(DTree::parse(shared), Err(Error::BadTreeShape { .. })));

        let cycle = r#"{"n":2,"root":0,"nodes":[{"id":0,"var":0,"zero":1,"one":2},
            {"id":1,"var":1,"zero":0,"one":3},{"id":2,"leaf":"a"},{"id":3,"leaf":"b"}]}"#;
        assert!(matches!(DTree::parse(cycle), Err(Error::BadTreeShape { .. })));

        let orphan = r#"{"n":1,"root":0,"nodes":[{"id":0,"leaf":"a"},{"id":5,"leaf":"b"}]}"#;
        assert!(matches!(DTree::parse(orphan), Err(Error::BadTreeShape { node: NodeId(5) })));

        let range = r#"{"n":1,"root":0,"nodes":[{"id":0,"var":3,"zero":1,"one":2},{"id":1,"leaf":"a"},{"id":2,"leaf":"b"}]}"#;
        assert!(matches!(DTree::parse(range), Err(Error::VariableOutOfRange { var: 3, .. })));

        assert!(matches!(DTree::parse("{not json"), Err(Error::Json(_))));
        assert!(DTree::parse(r#"{"n":0,"root":0,"nodes":[{"id":0,"leaf":"a"}]}"#).is_err());
    }

    #[test]
    fn canonical_serialization_is_stable() {
        let text = r#"{"n":2,"root":7,"nodes":[{"id":3,"leaf":"x","out":"1"},
            {"id":7,"var":1,"zero":3,"one":4},{"id":4,"leaf":"y"}]}"#;
        let t = DTree::parse(text).unwrap();
        let again = DTree::parse(&t.to_json()).unwrap();
        assert_eq!(t, again);
        assert_eq!(t.to_json(), again.to_json());
        assert_eq!(t.eval_leaf(&parse_bits("01").unwrap()).unwrap(), NodeId(4));
    }
}
