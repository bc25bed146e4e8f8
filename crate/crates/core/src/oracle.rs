//! Brute-force ground truth for small trees.
//!
//! Everything here works straight from the definitions by walking parent links or
//! traversing the tree, and never touches [`crate::index`] or [`crate::flca`]. The
//! enumerations are exponential; each entry point refuses instances past a fixed
//! guard with [`OracleError::InstanceTooLarge`] instead of sampling.

use std::collections::BTreeSet;

use itertools::Itertools;
use thiserror::Error;

use crate::tree::{RootedTree, VertexId};

/// Maximum number of fault sets an equivalence check may enumerate.
pub const ENUMERATION_LIMIT: u64 = 10_000_000;

/// Largest tree [`brute_force_flca`] searches (it visits all `2^n` candidate sets).
pub const BRUTE_FORCE_MAX_N: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("instance too large: {what} needs {required} steps, limit is {limit}")]
    InstanceTooLarge {
        what: &'static str,
        required: u64,
        limit: u64,
    },
    #[error("the marked set is empty")]
    EmptyMarkSet,
    #[error("vertex {vertex} is not in the tree (n = {n})")]
    InvalidVertex { vertex: usize, n: usize },
    #[error("({parent}, {child}) is not a tree edge")]
    NotAnEdge { parent: usize, child: usize },
}

/// Failed vertices and tree edges. Edges are `(parent, child)` pairs.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FaultSet {
    vertices: BTreeSet<VertexId>,
    edges: BTreeSet<(VertexId, VertexId)>,
}

impl FaultSet {
    pub fn new(
        tree: &RootedTree,
        vertices: impl IntoIterator<Item = VertexId>,
        edges: impl IntoIterator<Item = (VertexId, VertexId)>,
    ) -> Result<Self, OracleError> {
        let vertices: BTreeSet<VertexId> = vertices.into_iter().collect();
        check_ids(tree, vertices.iter())?;
        let edges: BTreeSet<(VertexId, VertexId)> = edges.into_iter().collect();
        for &(parent, child) in &edges {
            if !tree.contains(child) || tree.parent(child) != Some(parent) {
                return Err(OracleError::NotAnEdge {
                    parent: parent.index(),
                    child: child.index(),
                });
            }
        }
        Ok(Self { vertices, edges })
    }

    pub fn vertices_only(
        tree: &RootedTree,
        vertices: impl IntoIterator<Item = VertexId>,
    ) -> Result<Self, OracleError> {
        Self::new(tree, vertices, [])
    }

    pub fn vertices(&self) -> &BTreeSet<VertexId> {
        &self.vertices
    }

    pub fn edges(&self) -> &BTreeSet<(VertexId, VertexId)> {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.vertices.len() + self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

fn check_ids<'a>(
    tree: &RootedTree,
    ids: impl IntoIterator<Item = &'a VertexId>,
) -> Result<(), OracleError> {
    for &v in ids {
        if !tree.contains(v) {
            return Err(OracleError::InvalidVertex {
                vertex: v.index(),
                n: tree.len(),
            });
        }
    }
    Ok(())
}

/// `sum_{k <= f} C(n, k)`, saturating.
pub fn subsets_up_to(n: usize, f: usize) -> u64 {
    let mut total: u64 = 0;
    let mut binom: u64 = 1;
    for k in 0..=f.min(n) {
        total = total.saturating_add(binom);
        binom = binom.saturating_mul((n - k) as u64) / (k as u64 + 1);
    }
    total
}

fn guard(what: &'static str, required: u64, limit: u64) -> Result<(), OracleError> {
    if required > limit {
        Err(OracleError::InstanceTooLarge {
            what,
            required,
            limit,
        })
    } else {
        Ok(())
    }
}

/// True iff every vertex of `below` has an ancestor (itself included) in `above`.
///
/// Panics on ids outside the tree.
pub fn covers(tree: &RootedTree, above: &[VertexId], below: &[VertexId]) -> bool {
    let mut in_above = vec![false; tree.len()];
    for a in above {
        in_above[a.index()] = true;
    }
    covers_marked(tree, &in_above, below)
}

fn covers_marked(tree: &RootedTree, in_above: &[bool], below: &[VertexId]) -> bool {
    below.iter().all(|&b| {
        let mut cur = Some(b);
        while let Some(v) = cur {
            if in_above[v.index()] {
                return true;
            }
            cur = tree.parent(v);
        }
        false
    })
}

/// A vertex fault set of size at most `f` that covers exactly one of `m` and `n`, or
/// `None` when they are `f`-fault-equivalent. Fault sets are tried by increasing size,
/// then lexicographically.
pub fn distinguishing_fault_set(
    tree: &RootedTree,
    m: &[VertexId],
    n: &[VertexId],
    f: usize,
) -> Result<Option<Vec<VertexId>>, OracleError> {
    check_ids(tree, m.iter().chain(n))?;
    let size = tree.len();
    let f = f.min(size);
    guard(
        "vertex fault enumeration",
        subsets_up_to(size, f),
        ENUMERATION_LIMIT,
    )?;

    let mut in_fault = vec![false; size];
    for k in 0..=f {
        for faults in (0..size).combinations(k) {
            for &x in &faults {
                in_fault[x] = true;
            }
            let differs = covers_marked(tree, &in_fault, m) != covers_marked(tree, &in_fault, n);
            for &x in &faults {
                in_fault[x] = false;
            }
            if differs {
                return Ok(Some(faults.into_iter().map(VertexId::new).collect()));
            }
        }
    }
    Ok(None)
}

/// `m ~_f n`: every vertex fault set of size at most `f` covers both or neither.
pub fn equivalent(
    tree: &RootedTree,
    m: &[VertexId],
    n: &[VertexId],
    f: usize,
) -> Result<bool, OracleError> {
    distinguishing_fault_set(tree, m, n, f).map(|w| w.is_none())
}

/// Searches all vertex sets by increasing size, then lexicographically, for the
/// smallest one `f`-fault-equivalent to `marks`. Returns it in depth-first preorder
/// together with whether no other set of the same size is equivalent.
pub fn brute_force_flca(
    tree: &RootedTree,
    marks: &[VertexId],
    f: usize,
) -> Result<(Vec<VertexId>, bool), OracleError> {
    if marks.is_empty() {
        return Err(OracleError::EmptyMarkSet);
    }
    check_ids(tree, marks)?;
    let size = tree.len();
    guard(
        "candidate set enumeration",
        size as u64,
        BRUTE_FORCE_MAX_N as u64,
    )?;
    let f = f.min(size);
    guard(
        "vertex fault enumeration",
        subsets_up_to(size, f),
        ENUMERATION_LIMIT,
    )?;

    for k in 1..=size {
        let mut found: Option<Vec<VertexId>> = None;
        for candidate in (0..size).combinations(k) {
            let candidate: Vec<VertexId> = candidate.into_iter().map(VertexId::new).collect();
            if distinguishing_fault_set(tree, marks, &candidate, f)?.is_none() {
                if let Some(mut best) = found {
                    best.sort_by_key(|&v| tree.first_occurrence(v));
                    return Ok((best, false));
                }
                found = Some(candidate);
            }
        }
        if let Some(mut best) = found {
            best.sort_by_key(|&v| tree.first_occurrence(v));
            return Ok((best, true));
        }
    }
    unreachable!("marks are equivalent to themselves")
}

/// True iff some target is reachable from the root once the faulty vertices (with
/// their incident edges) and the faulty edges are removed.
pub fn connected_after_faults(tree: &RootedTree, targets: &[VertexId], faults: &FaultSet) -> bool {
    let n = tree.len();
    let mut is_target = vec![false; n];
    for t in targets {
        is_target[t.index()] = true;
    }
    let mut vertex_down = vec![false; n];
    for v in &faults.vertices {
        vertex_down[v.index()] = true;
    }
    if vertex_down[tree.root().index()] {
        return false;
    }
    let mut stack = vec![tree.root()];
    while let Some(v) = stack.pop() {
        if is_target[v.index()] {
            return true;
        }
        for &c in tree.children(v) {
            if !vertex_down[c.index()] && !faults.edges.contains(&(v, c)) {
                stack.push(c);
            }
        }
    }
    false
}

/// All tree edges as `(parent, child)` pairs, in child id order.
pub fn tree_edges(tree: &RootedTree) -> Vec<(VertexId, VertexId)> {
    tree.vertices()
        .filter_map(|c| tree.parent(c).map(|p| (p, c)))
        .collect()
}

/// A mixed vertex/edge fault set of size at most `f` after which the root reaches
/// exactly one of `m` and `n`, or `None` when none exists.
pub fn distinguishing_mixed_fault_set(
    tree: &RootedTree,
    m: &[VertexId],
    n: &[VertexId],
    f: usize,
) -> Result<Option<FaultSet>, OracleError> {
    check_ids(tree, m.iter().chain(n))?;
    let edges = tree_edges(tree);
    let elements = tree.len() + edges.len();
    let f = f.min(elements);
    guard(
        "mixed fault enumeration",
        subsets_up_to(elements, f),
        ENUMERATION_LIMIT,
    )?;

    for k in 0..=f {
        for picked in (0..elements).combinations(k) {
            let (vs, es): (Vec<usize>, Vec<usize>) =
                picked.into_iter().partition(|&i| i < tree.len());
            let faults = FaultSet {
                vertices: vs.into_iter().map(VertexId::new).collect(),
                edges: es.into_iter().map(|i| edges[i - tree.len()]).collect(),
            };
            if connected_after_faults(tree, m, &faults) != connected_after_faults(tree, n, &faults)
            {
                return Ok(Some(faults));
            }
        }
    }
    Ok(None)
}

/// Equivalence under mixed vertex and edge faults.
pub fn edge_fault_equivalent(
    tree: &RootedTree,
    m: &[VertexId],
    n: &[VertexId],
    f: usize,
) -> Result<bool, OracleError> {
    distinguishing_mixed_fault_set(tree, m, n, f).map(|w| w.is_none())
}
