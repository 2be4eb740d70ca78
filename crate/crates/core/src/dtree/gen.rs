//! Tree generators: the worked examples, the separating families, and
//! seeded random trees.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{DTree, NodeId, RawNode};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenKind {
    OrList,
    AndChain,
    Parity,
    Complete,
    Spine,
    Random,
}

impl FromStr for GenKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "or-list" => GenKind::OrList,
            "and-chain" => GenKind::AndChain,
            "parity" => GenKind::Parity,
            "complete" => GenKind::Complete,
            "spine" => GenKind::Spine,
            "random" => GenKind::Random,
            other => return Err(Error::InvalidParameter(format!("unknown tree kind {other:?}"))),
        })
    }
}

impl fmt::Display for GenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GenKind::OrList => "or-list",
            GenKind::AndChain => "and-chain",
            GenKind::Parity => "parity",
            GenKind::Complete => "complete",
            GenKind::Spine => "spine",
            GenKind::Random => "random",
        })
    }
}

/// Parameters for [`DTree::generate`]. Which fields matter depends on the
/// kind: `n` for the chain/list/parity/spine families, `depth` for
/// `complete`, and `seed`, `budget` and `n` (variable count) for `random`.
#[derive(Debug, Clone, Default)]
pub struct GenParams {
    pub n: Option<usize>,
    pub depth: Option<usize>,
    pub seed: u64,
    pub budget: Option<usize>,
}

/// Hands out ids in preorder.
#[derive(Default)]
struct Builder {
    nodes: Vec<(NodeId, Option<RawNode>)>,
}

impl Builder {
    fn reserve(&mut self) -> NodeId {
        let id = NodeId(self.nodes.len() as u64);
        self.nodes.push((id, None));
        id
    }

    fn set(&mut self, id: NodeId, raw: RawNode) {
        self.nodes[id.0 as usize].1 = Some(raw);
    }

    fn leaf(&mut self, out: Option<&str>) -> NodeId {
        let id = self.reserve();
        self.set(
            id,
            RawNode::Leaf {
                label: format!("L{}", id.0),
                out: out.map(str::to_owned),
            },
        );
        id
    }

    /// Complete subtree of the given depth querying `first_var + level`;
    /// leaves get the parity of the path plus `parity_offset` when asked.
    fn complete(&mut self, depth: usize, first_var: usize, parity: Option<bool>) -> NodeId {
        if depth == 0 {
            return self.leaf(parity.map(|p| if p { "1" } else { "0" }));
        }
        let id = self.reserve();
        let zero = self.complete(depth - 1, first_var + 1, parity);
        let one = self.complete(depth - 1, first_var + 1, parity.map(|p| !p));
        self.set(
            id,
            RawNode::Internal {
                var: first_var,
                zero,
                one,
            },
        );
        id
    }

    fn finish(self, n: usize) -> DTree {
        let nodes = self
            .nodes
            .into_iter()
            .map(|(id, raw)| (id, raw.expect("every reserved node is filled in")))
            .collect();
        DTree::from_parts(n, nodes, NodeId(0)).expect("generators build valid trees")
    }
}

fn positive(name: &str, v: Option<usize>) -> Result<usize> {
    match v {
        Some(v) if v > 0 => Ok(v),
        Some(_) => Err(Error::InvalidParameter(format!("{name} must be positive"))),
        None => Err(Error::InvalidParameter(format!("{name} is required"))),
    }
}

impl DTree {
    pub fn generate(kind: GenKind, p: &GenParams) -> Result<DTree> {
        match kind {
            GenKind::OrList => DTree::or_list(positive("n", p.n)?),
            GenKind::AndChain => DTree::and_chain(positive("n", p.n)?),
            GenKind::Parity => DTree::parity(positive("n", p.n)?),
            GenKind::Complete => match p.depth {
                Some(d) => DTree::complete(d),
                None => Err(Error::InvalidParameter("depth is required".into())),
            },
            GenKind::Spine => DTree::spine(positive("n", p.n)?),
            GenKind::Random => DTree::random(
                p.seed,
                positive("budget", p.budget)?,
                p.n.unwrap_or(10).max(1),
            ),
        }
    }

    /// Decision list for OR: query x_0, x_1, ... in turn; a 1 answer ends
    /// in a leaf labelled 1, and the all-zeros path ends in a 0 leaf.
    pub fn or_list(n: usize) -> Result<DTree> {
        Self::chain(n, 1, "1", "0")
    }

    /// The AND decision tree: any 0 answer exits to a 0 leaf.
    pub fn and_chain(n: usize) -> Result<DTree> {
        Self::chain(n, 0, "0", "1")
    }

    fn chain(n: usize, exit_bit: u8, exit_out: &str, final_out: &str) -> Result<DTree> {
        positive("n", Some(n))?;
        let mut b = Builder::default();
        let mut pending: Option<(NodeId, usize)> = None;
        for var in 0..n {
            let id = b.reserve();
            let exit = b.leaf(Some(exit_out));
            if let Some((prev, prev_var)) = pending {
                set_chain(&mut b, prev, prev_var, exit_bit, id);
            }
            // Stash the exit leaf in a placeholder until the continuation exists.
            b.set(
                id,
                RawNode::Internal {
                    var,
                    zero: exit,
                    one: exit,
                },
            );
            pending = Some((id, var));
        }
        let (last, last_var) = pending.expect("n > 0");
        let tail = b.leaf(Some(final_out));
        set_chain(&mut b, last, last_var, exit_bit, tail);
        Ok(b.finish(n))
    }

    /// Complete tree of depth `n` on x_0..x_{n-1}, leaves labelled by the
    /// parity of the input.
    pub fn parity(n: usize) -> Result<DTree> {
        positive("n", Some(n))?;
        let mut b = Builder::default();
        b.complete(n, 0, Some(false));
        Ok(b.finish(n))
    }

    /// Complete tree of depth `d` (2^d leaves) querying x_k at level k.
    pub fn complete(d: usize) -> Result<DTree> {
        if d > 24 {
            return Err(Error::SizeCap {
                what: "complete tree depth",
                actual: d,
                limit: 24,
            });
        }
        let mut b = Builder::default();
        b.complete(d, 0, None);
        Ok(b.finish(d.max(1)))
    }

    /// A path of `n` internal nodes, each with a leaf hanging off its
    /// 0-edge, except the top node whose 0-edge carries a complete subtree
    /// with `n` leaves. `n` must be a power of two.
    pub fn spine(n: usize) -> Result<DTree> {
        positive("n", Some(n))?;
        if !n.is_power_of_two() {
            return Err(Error::InvalidParameter(format!(
                "spine size {n} is not a power of two"
            )));
        }
        let log = n.trailing_zeros() as usize;
        let mut b = Builder::default();
        let top = b.reserve();
        let sub = b.complete(log, n, None);
        let mut prev = top;
        let mut prev_zero = sub;
        for var in 1..n {
            let id = b.reserve();
            b.set(
                prev,
                RawNode::Internal {
                    var: var - 1,
                    zero: prev_zero,
                    one: id,
                },
            );
            prev = id;
            prev_zero = b.leaf(None);
        }
        let tail = b.leaf(None);
        b.set(
            prev,
            RawNode::Internal {
                var: n - 1,
                zero: prev_zero,
                one: tail,
            },
        );
        Ok(b.finish(n + log))
    }

    /// Seeded random tree with at most `budget` nodes over `n` variables.
    /// Leaves get random 0/1 outputs.
    pub fn random(seed: u64, budget: usize, n: usize) -> Result<DTree> {
        positive("budget", Some(budget))?;
        positive("n", Some(n))?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut b = Builder::default();
        let free: Vec<usize> = (0..n).collect();
        random_subtree(&mut b, &mut rng, (budget - 1) / 2, free);
        Ok(b.finish(n))
    }
}

/// Tree shape without variables.
#[derive(Clone)]
enum Shape {
    Leaf,
    Node(Box<Shape>, Box<Shape>),
}

fn shapes_with(k: usize, memo: &mut Vec<Option<Vec<Shape>>>) -> Vec<Shape> {
    if let Some(s) = &memo[k] {
        return s.clone();
    }
    let out = if k == 0 {
        vec![Shape::Leaf]
    } else {
        let mut out = Vec::new();
        for left in 0..k {
            for l in shapes_with(left, memo) {
                for r in shapes_with(k - 1 - left, memo) {
                    out.push(Shape::Node(Box::new(l.clone()), Box::new(r)));
                }
            }
        }
        out
    };
    memo[k] = Some(out.clone());
    out
}

fn build_shape(b: &mut Builder, s: &Shape, level: usize) -> NodeId {
    match s {
        Shape::Leaf => b.leaf(None),
        Shape::Node(l, r) => {
            let id = b.reserve();
            let zero = build_shape(b, l, level + 1);
            let one = build_shape(b, r, level + 1);
            b.set(id, RawNode::Internal { var: level, zero, one });
            id
        }
    }
}

impl DTree {
    /// Every tree shape with at most `max_internal` internal nodes, in order
    /// of size. Level `k` queries `x_k`; `n = max(max_internal, 1)`.
    pub fn all_shapes(max_internal: usize) -> Result<Vec<DTree>> {
        if max_internal > 8 {
            return Err(Error::SizeCap {
                what: "internal nodes for shape enumeration",
                actual: max_internal,
                limit: 8,
            });
        }
        let mut memo = vec![None; max_internal + 1];
        let mut out = Vec::new();
        for k in 0..=max_internal {
            for s in shapes_with(k, &mut memo) {
                let mut b = Builder::default();
                build_shape(&mut b, &s, 0);
                out.push(b.finish(max_internal.max(1)));
            }
        }
        Ok(out)
    }
}

fn set_chain(b: &mut Builder, node: NodeId, var: usize, exit_bit: u8, next: NodeId) {
    let Some(RawNode::Internal { zero: exit, .. }) = b.nodes[node.0 as usize].1.clone() else {
        unreachable!("chain nodes are internal");
    };
    let (zero, one) = if exit_bit == 0 { (exit, next) } else { (next, exit) };
    b.set(node, RawNode::Internal { var, zero, one });
}

fn random_subtree(b: &mut Builder, rng: &mut ChaCha8Rng, internal: usize, free: Vec<usize>) -> NodeId {
    if internal == 0 || free.is_empty() {
        let out = if rng.gen_bool(0.5) { "1" } else { "0" };
        return b.leaf(Some(out));
    }
    let id = b.reserve();
    let var = *free.choose(rng).expect("non-empty");
    let rest: Vec<usize> = free.into_iter().filter(|&v| v != var).collect();
    let left = rng.gen_range(0..internal);
    let zero = random_subtree(b, rng, left, rest.clone());
    let one = random_subtree(b, rng, internal - 1 - left, rest);
    b.set(id, RawNode::Internal { var, zero, one });
    id
}
