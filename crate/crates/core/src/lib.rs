//! Fault-tolerant lowest common ancestors on rooted trees.
//!
//! For a marked vertex set `M` and a fault budget `f`, `FLCA(M, f)` is the unique
//! smallest vertex set `M*` such that, for every set `F` of at most `f` failed vertices,
//! the root is cut off from all of `M` exactly when it is cut off from all of `M*`.
//! `FLCA(M, 1)` is `{LCA(M)}`, and `|FLCA(M, f)| <= 2^(f-1)` regardless of `|M|`.
//!
//! - [`tree`]: validated immutable rooted trees.
//! - [`index`]: pairwise LCA and level-ancestor queries.
//! - [`flca`]: the representative-set computation, indexed and offline, plus batch aggregation.
//! - [`oracle`]: brute-force covering, equivalence and minimum-set search for small trees.
//! - [`gen`]: tree and mark generators.
//!
//! ```
//! use flca::{gen, FlcaSolver, QuerySet};
//!
//! let tree = gen::full_binary(3);
//! let leaves = gen::leaves(&tree);
//! let mut solver = FlcaSolver::new(&tree);
//! let query = QuerySet::new(&tree, leaves, 3).unwrap();
//! let result = solver.solve(&query).unwrap();
//! assert_eq!(result.representatives.len(), 4);
//! ```

pub mod flca;
pub mod gen;
pub mod index;
pub mod oracle;
pub mod tree;

pub use crate::flca::{
    aggregate, compute_flca, compute_flca_offline, size_bound, FlcaError, FlcaResult, FlcaSolver,
    QueryScratch, QuerySet, StreamingFlca,
};
pub use crate::index::{AncestryIndex, IndexError};
pub use crate::oracle::{FaultSet, OracleError};
pub use crate::tree::{EulerTour, RootedTree, TreeError, VertexId};
