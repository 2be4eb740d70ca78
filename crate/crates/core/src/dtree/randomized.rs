//! Distributions over decision trees, relation tables, and exhaustive
//! correctness checks against a relation.

use std::collections::BTreeSet;

use serde::Serialize;

use super::{DTree, NodeId};
use crate::bits::{format_bits, index_to_bits};
use crate::error::{check_enum_limit, Error, Result};

/// Probabilities must sum to one within this tolerance.
pub const PROB_TOL: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct RandomizedDTree {
    support: Vec<(f64, DTree)>,
}

impl RandomizedDTree {
    pub fn new(support: Vec<(f64, DTree)>) -> Result<Self> {
        let Some((_, first)) = support.first() else {
            return Err(Error::InvalidParameter("empty support".into()));
        };
        let n = first.n();
        let mut total = 0.0;
        for (p, t) in &support {
            if !(*p > 0.0 && *p <= 1.0) {
                return Err(Error::InvalidParameter(format!("probability {p} is outside (0, 1]")));
            }
            if t.n() != n {
                return Err(Error::InvalidParameter(format!(
                    "support mixes trees over {n} and {} variables",
                    t.n()
                )));
            }
            total += p;
        }
        if (total - 1.0).abs() > PROB_TOL {
            return Err(Error::InvalidParameter(format!("probabilities sum to {total}, not 1")));
        }
        Ok(RandomizedDTree { support })
    }

    pub fn n(&self) -> usize {
        self.support[0].1.n()
    }

    pub fn support(&self) -> &[(f64, DTree)] {
        &self.support
    }

    /// RDTSize: the largest tree in the support.
    pub fn rdtsize(&self) -> usize {
        self.support.iter().map(|(_, t)| t.size()).max().unwrap_or(0)
    }
}

/// Allowed outputs per input, indexed by input index. `None` marks an
/// input outside the domain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationTable {
    n: usize,
    allowed: Vec<Option<BTreeSet<String>>>,
}

impl RelationTable {
    pub fn from_fn<F>(n: usize, mut f: F) -> Result<Self>
    where
        F: FnMut(&[bool]) -> Option<BTreeSet<String>>,
    {
        check_enum_limit(n)?;
        let mut allowed = Vec::with_capacity(1 << n);
        for i in 0..1u64 << n {
            let x = index_to_bits(i, n);
            let set = f(&x);
            if let Some(s) = &set {
                if s.is_empty() {
                    return Err(Error::InvalidParameter(format!(
                        "input {} has an empty set of allowed outputs",
                        format_bits(&x)
                    )));
                }
            }
            allowed.push(set);
        }
        Ok(RelationTable { n, allowed })
    }

    /// The relation of a total Boolean function: one allowed output per input.
    pub fn from_bool_fn<F>(n: usize, mut f: F) -> Result<Self>
    where
        F: FnMut(&[bool]) -> bool,
    {
        Self::from_fn(n, |x| {
            let label = if f(x) { "1" } else { "0" };
            Some(BTreeSet::from([label.to_owned()]))
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn allowed(&self, index: u64) -> Option<&BTreeSet<String>> {
        self.allowed[index as usize].as_ref()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RelationFailure {
    pub input: String,
    /// Probability of an output outside the allowed set (0 or 1 for a
    /// deterministic tree).
    pub error: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RelationReport {
    pub inputs_checked: u64,
    pub max_error: f64,
    pub failures: Vec<RelationFailure>,
    /// Leaves that no input in the domain reaches.
    pub unreachable_leaves: Vec<NodeId>,
    pub pass: bool,
}

/// Error threshold for randomized trees.
pub const RANDOMIZED_ERROR: f64 = 1.0 / 3.0;

fn check_n(n: usize, rel: &RelationTable) -> Result<()> {
    check_enum_limit(n)?;
    if rel.n != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: rel.n,
        });
    }
    Ok(())
}

impl DTree {
    /// Checks that the leaf reached on every input in the domain carries an
    /// allowed output label.
    pub fn verify_relation(&self, rel: &RelationTable) -> Result<RelationReport> {
        check_n(self.n, rel)?;
        let mut reached = vec![false; self.size()];
        let mut failures = Vec::new();
        let mut checked = 0;
        for i in 0..1u64 << self.n {
            let Some(ok) = rel.allowed(i) else { continue };
            checked += 1;
            let x = index_to_bits(i, self.n);
            let leaf = self.eval_leaf_ix(&x)?;
            reached[leaf] = true;
            let good = self.leaf_output(leaf).is_some_and(|o| ok.contains(o));
            if !good {
                failures.push(RelationFailure {
                    input: format_bits(&x),
                    error: 1.0,
                });
            }
        }
        let unreachable_leaves = self
            .leaves()
            .into_iter()
            .filter(|&l| !reached[l])
            .map(|l| self.ids[l])
            .collect();
        Ok(RelationReport {
            inputs_checked: checked,
            max_error: if failures.is_empty() { 0.0 } else { 1.0 },
            pass: failures.is_empty(),
            failures,
            unreachable_leaves,
        })
    }
}

impl RandomizedDTree {
    /// Exact error probability per input; fails if any exceeds 1/3.
    pub fn verify_relation(&self, rel: &RelationTable) -> Result<RelationReport> {
        let n = self.n();
        check_n(n, rel)?;
        let mut reached: Vec<Vec<bool>> = self.support.iter().map(|(_, t)| vec![false; t.size()]).collect();
        let mut failures = Vec::new();
        let mut max_error: f64 = 0.0;
        let mut checked = 0;
        for i in 0..1u64 << n {
            let Some(ok) = rel.allowed(i) else { continue };
            checked += 1;
            let x = index_to_bits(i, n);
            let mut error = 0.0;
            for ((p, t), seen) in self.support.iter().zip(reached.iter_mut()) {
                let leaf = t.eval_leaf_ix(&x)?;
                seen[leaf] = true;
                if !t.leaf_output(leaf).is_some_and(|o| ok.contains(o)) {
                    error += p;
                }
            }
            max_error = max_error.max(error);
            if error > RANDOMIZED_ERROR + PROB_TOL {
                failures.push(RelationFailure {
                    input: format_bits(&x),
                    error,
                });
            }
        }
        let mut unreachable_leaves = Vec::new();
        for ((_, t), seen) in self.support.iter().zip(&reached) {
            unreachable_leaves.extend(t.leaves().into_iter().filter(|&l| !seen[l]).map(|l| t.id(l)));
        }
        Ok(RelationReport {
            inputs_checked: checked,
            max_error,
            pass: failures.is_empty(),
            failures,
            unreachable_leaves,
        })
    }
}
