//! Decision-tree measures and the query-complexity certificates built from
//! them: rank and guessing complexity, the edge-weight program and its
//! optimum, span programs, dual adversary solutions, AND-OR trees with the
//! Prover-Delayer game, and formula conversion.

pub mod andor;
pub mod bits;
pub mod dtree;
pub mod dualadv;
pub mod error;
pub mod formula;
pub mod rank;
pub mod spanprog;
pub mod truth_table;
pub mod weights;

pub use dtree::{DTree, EdgeId, NodeId};
pub use error::{Error, Result};
pub use truth_table::TruthTable;
pub use weights::WeightMap;
