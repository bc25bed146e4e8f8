//! Pairwise LCA and level-ancestor queries over a [`RootedTree`].
//!
//! | query         | structure                                   | build        | query    |
//! |---------------|---------------------------------------------|--------------|----------|
//! | `lca(u, v)`   | sparse-table RMQ over Euler tour depths     | O(n log n)   | O(1)     |
//! | `anc(u, l)`   | binary lifting, `jump[k][v]` = 2^k-th parent | O(n log n)   | O(log n) |
//!
//! The sparse table breaks depth ties towards the leftmost tour position.

use thiserror::Error;

use crate::tree::{EulerTour, RootedTree, VertexId};

const NONE: u32 = u32::MAX;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IndexError {
    #[error("the lca of an empty vertex set is undefined")]
    EmptySet,
}

#[derive(Debug, Clone)]
pub struct AncestryIndex<'t> {
    tree: &'t RootedTree,
    tour: EulerTour,
    // rmq[k][i]: leftmost position of minimum depth in tour[i .. i + 2^k].
    rmq: Vec<Vec<u32>>,
    jump: Vec<Vec<u32>>,
}

impl<'t> AncestryIndex<'t> {
    pub fn new(tree: &'t RootedTree) -> Self {
        let tour = tree.euler_tour();
        let rmq = build_sparse_table(&tour.tour_depth);

        let n = tree.len();
        let levels = ceil_log2(n);
        let mut jump: Vec<Vec<u32>> = Vec::with_capacity(levels);
        if levels > 0 {
            jump.push(
                (0..n)
                    .map(|v| {
                        tree.parent(VertexId::new(v))
                            .map_or(NONE, |p| p.index() as u32)
                    })
                    .collect(),
            );
        }
        for k in 1..levels {
            let prev = &jump[k - 1];
            let row = prev
                .iter()
                .map(|&mid| {
                    if mid == NONE {
                        NONE
                    } else {
                        prev[mid as usize]
                    }
                })
                .collect();
            jump.push(row);
        }

        Self {
            tree,
            tour,
            rmq,
            jump,
        }
    }

    #[inline]
    pub fn tree(&self) -> &'t RootedTree {
        self.tree
    }

    pub fn tour(&self) -> &EulerTour {
        &self.tour
    }

    pub fn rmq_levels(&self) -> usize {
        self.rmq.len()
    }

    pub fn rmq_row(&self, level: usize) -> &[u32] {
        &self.rmq[level]
    }

    pub fn jump_levels(&self) -> usize {
        self.jump.len()
    }

    /// The `2^level`-th ancestor of `v`, if the tree is deep enough.
    pub fn jump(&self, level: usize, v: VertexId) -> Option<VertexId> {
        match self.jump[level][v.index()] {
            NONE => None,
            a => Some(VertexId::new(a as usize)),
        }
    }

    /// Lowest common ancestor of `u` and `v`; `lca(u, u) = u`.
    #[inline]
    pub fn lca(&self, u: VertexId, v: VertexId) -> VertexId {
        let a = self.tour.first_occurrence[u.index()] as usize;
        let b = self.tour.first_occurrence[v.index()] as usize;
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        self.tour.order[self.range_min(lo, hi)]
    }

    /// Ancestor of `u` at depth `level`, absent when `depth(u) < level`.
    #[inline]
    pub fn anc(&self, u: VertexId, level: usize) -> Option<VertexId> {
        let depth = self.tree.depth(u);
        if level > depth {
            return None;
        }
        let mut climb = depth - level;
        let mut cur = u.index() as u32;
        let mut k = 0;
        while climb > 0 {
            if climb & 1 == 1 {
                cur = self.jump[k][cur as usize];
            }
            climb >>= 1;
            k += 1;
        }
        Some(VertexId::new(cur as usize))
    }

    /// `LCA(M)` by folding pairwise `lca` over the set.
    pub fn lca_of_set(&self, marks: &[VertexId]) -> Result<VertexId, IndexError> {
        let (&head, rest) = marks.split_first().ok_or(IndexError::EmptySet)?;
        Ok(rest.iter().fold(head, |acc, &v| self.lca(acc, v)))
    }

    /// Leftmost position of minimum depth in `tour[lo..=hi]`.
    #[inline]
    fn range_min(&self, lo: usize, hi: usize) -> usize {
        let k = floor_log2(hi - lo + 1);
        let left = self.rmq[k][lo];
        let right = self.rmq[k][hi + 1 - (1 << k)];
        let depth = &self.tour.tour_depth;
        if depth[left as usize] <= depth[right as usize] {
            left as usize
        } else {
            right as usize
        }
    }
}

fn build_sparse_table(depth: &[u32]) -> Vec<Vec<u32>> {
    let len = depth.len();
    let levels = floor_log2(len) + 1;
    let mut table: Vec<Vec<u32>> = Vec::with_capacity(levels);
    table.push((0..len as u32).collect());
    for k in 1..levels {
        let half = 1usize << (k - 1);
        let prev = &table[k - 1];
        let row = (0..=len - (1 << k))
            .map(|i| {
                let (l, r) = (prev[i], prev[i + half]);
                if depth[l as usize] <= depth[r as usize] {
                    l
                } else {
                    r
                }
            })
            .collect();
        table.push(row);
    }
    table
}

#[inline]
fn floor_log2(x: usize) -> usize {
    debug_assert!(x > 0);
    (usize::BITS - 1 - x.leading_zeros()) as usize
}

fn ceil_log2(x: usize) -> usize {
    if x <= 1 {
        0
    } else {
        floor_log2(x - 1) + 1
    }
}
