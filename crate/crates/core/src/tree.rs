//! Immutable rooted trees over dense vertex ids.
//!
//! A [`RootedTree`] is built once from a parent array and never changes. Construction
//! validates the parent links, lays children out in a CSR array (children of a vertex
//! keep the order in which they appear in the parent array) and records, for every
//! vertex, its depth and the interval `[first, last]` of positions it spans in the
//! Euler tour. The interval makes ancestry an O(1) containment test without having to
//! materialize the tour; [`RootedTree::euler_tour`] builds the tour itself when a
//! caller needs it (the LCA index does).

use std::fmt;

use thiserror::Error;

/// Dense vertex identifier in `0..n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(u32);

impl VertexId {
    /// Wraps a raw index. Validity is relative to a tree; see [`RootedTree::vertex`].
    #[inline]
    pub const fn new(index: usize) -> Self {
        Self(index as u32)
    }

    #[inline]
    pub const fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<VertexId> for usize {
    fn from(v: VertexId) -> usize {
        v.index()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("no root: the parent list is empty")]
    NoRoot,
    #[error("multiple roots: vertices {first} and {second} both have no parent")]
    MultipleRoots { first: usize, second: usize },
    #[error("cycle detected: vertex {vertex} lies on a parent cycle and never reaches a root")]
    CycleDetected { vertex: usize },
    #[error("parent out of range: vertex {vertex} names parent {parent}, but n = {n}")]
    ParentOutOfRange {
        vertex: usize,
        parent: usize,
        n: usize,
    },
    #[error("vertex {vertex} out of range for a tree with {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("tree too large: {n} vertices exceed the 32-bit id space")]
    TooManyVertices { n: usize },
}

/// Rooted tree with validated parent links.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootedTree {
    root: VertexId,
    parent: Vec<Option<VertexId>>,
    child_start: Vec<u32>,
    child_list: Vec<VertexId>,
    depth: Vec<u32>,
    // Euler tour positions of the first and last occurrence of each vertex.
    first: Vec<u32>,
    last: Vec<u32>,
    // Vertices in breadth-first order from the root.
    level_order: Vec<VertexId>,
}

/// Depth-first vertex sequence with re-entries after every child, `2n - 1` long.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EulerTour {
    pub order: Vec<VertexId>,
    pub first_occurrence: Vec<u32>,
    pub tour_depth: Vec<u32>,
}

impl EulerTour {
    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }
}

impl RootedTree {
    /// Builds a tree from `parents[v]`, the parent of `v` or `None` for the root.
    pub fn from_parents(parents: &[Option<usize>]) -> Result<Self, TreeError> {
        let n = parents.len();
        if n == 0 {
            return Err(TreeError::NoRoot);
        }
        if n >= u32::MAX as usize {
            return Err(TreeError::TooManyVertices { n });
        }

        let mut root = None;
        for (v, p) in parents.iter().enumerate() {
            match *p {
                None => match root {
                    None => root = Some(v),
                    Some(first) => return Err(TreeError::MultipleRoots { first, second: v }),
                },
                Some(p) if p >= n => {
                    return Err(TreeError::ParentOutOfRange {
                        vertex: v,
                        parent: p,
                        n,
                    })
                }
                Some(p) if p == v => return Err(TreeError::CycleDetected { vertex: v }),
                Some(_) => {}
            }
        }
        // With every vertex owning a parent the functional graph must close a cycle.
        let Some(root) = root else {
            return Err(TreeError::CycleDetected {
                vertex: vertex_on_cycle(parents, 0),
            });
        };

        let mut child_start = vec![0u32; n + 1];
        for p in parents.iter().flatten() {
            child_start[p + 1] += 1;
        }
        for v in 0..n {
            child_start[v + 1] += child_start[v];
        }
        let mut fill: Vec<u32> = child_start[..n].to_vec();
        let mut child_list = vec![VertexId(0); n - 1];
        for (v, p) in parents.iter().enumerate() {
            if let Some(p) = *p {
                child_list[fill[p] as usize] = VertexId(v as u32);
                fill[p] += 1;
            }
        }

        let mut depth = vec![u32::MAX; n];
        let mut level_order = Vec::with_capacity(n);
        depth[root] = 0;
        level_order.push(VertexId(root as u32));
        let mut head = 0;
        while head < level_order.len() {
            let v = level_order[head].index();
            head += 1;
            for &c in &child_list[child_start[v] as usize..child_start[v + 1] as usize] {
                depth[c.index()] = depth[v] + 1;
                level_order.push(c);
            }
        }
        if level_order.len() < n {
            let stray = depth
                .iter()
                .position(|&d| d == u32::MAX)
                .expect("unreached vertex");
            return Err(TreeError::CycleDetected {
                vertex: vertex_on_cycle(parents, stray),
            });
        }

        // A subtree of size s spans 2s - 1 tour positions.
        let mut size = vec![1u32; n];
        for &v in level_order.iter().rev() {
            if let Some(p) = parents[v.index()] {
                size[p] += size[v.index()];
            }
        }
        let mut first = vec![0u32; n];
        let mut last = vec![0u32; n];
        for &v in &level_order {
            let v = v.index();
            last[v] = first[v] + 2 * size[v] - 2;
            let mut next = first[v] + 1;
            for &c in &child_list[child_start[v] as usize..child_start[v + 1] as usize] {
                first[c.index()] = next;
                next += 2 * size[c.index()];
            }
        }

        Ok(Self {
            root: VertexId(root as u32),
            parent: parents
                .iter()
                .map(|p| p.map(|p| VertexId(p as u32)))
                .collect(),
            child_start,
            child_list,
            depth,
            first,
            last,
            level_order,
        })
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.parent.len()
    }

    /// Always false: a tree has at least its root.
    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn root(&self) -> VertexId {
        self.root
    }

    /// Checks a raw index against this tree.
    pub fn vertex(&self, index: usize) -> Result<VertexId, TreeError> {
        if index < self.len() {
            Ok(VertexId(index as u32))
        } else {
            Err(TreeError::VertexOutOfRange {
                vertex: index,
                n: self.len(),
            })
        }
    }

    #[inline]
    pub fn contains(&self, v: VertexId) -> bool {
        v.index() < self.len()
    }

    pub fn vertices(&self) -> impl ExactSizeIterator<Item = VertexId> + '_ {
        (0..self.len() as u32).map(VertexId)
    }

    #[inline]
    pub fn parent(&self, v: VertexId) -> Option<VertexId> {
        self.parent[v.index()]
    }

    #[inline]
    pub fn children(&self, v: VertexId) -> &[VertexId] {
        let v = v.index();
        &self.child_list[self.child_start[v] as usize..self.child_start[v + 1] as usize]
    }

    #[inline]
    pub fn depth(&self, v: VertexId) -> usize {
        self.depth[v.index()] as usize
    }

    pub fn max_depth(&self) -> usize {
        self.depth.iter().copied().max().unwrap_or(0) as usize
    }

    /// Position of the first occurrence of `v` in the Euler tour. Ascending order of
    /// this key is depth-first preorder.
    #[inline]
    pub fn first_occurrence(&self, v: VertexId) -> usize {
        self.first[v.index()] as usize
    }

    #[inline]
    pub fn subtree_size(&self, v: VertexId) -> usize {
        ((self.last[v.index()] - self.first[v.index()]) / 2 + 1) as usize
    }

    /// Vertices in breadth-first order from the root; parents precede children.
    pub fn level_order(&self) -> &[VertexId] {
        &self.level_order
    }

    /// The parent array this tree was built from.
    pub fn parent_indices(&self) -> Vec<Option<usize>> {
        self.parent.iter().map(|p| p.map(VertexId::index)).collect()
    }

    /// True iff `a` lies on the root path of `b`. Every vertex is its own ancestor.
    ///
    /// Panics if either id is out of range.
    #[inline]
    pub fn is_ancestor(&self, a: VertexId, b: VertexId) -> bool {
        let (a, b) = (a.index(), b.index());
        self.first[a] <= self.first[b] && self.last[b] <= self.last[a]
    }

    /// Same answer as [`is_ancestor`](Self::is_ancestor), by walking parent links up from `b`.
    pub fn is_ancestor_by_walk(&self, a: VertexId, b: VertexId) -> bool {
        let mut cur = Some(b);
        while let Some(v) = cur {
            if v == a {
                return true;
            }
            cur = self.parent(v);
        }
        false
    }

    /// Builds the Euler tour, visiting children in stored order.
    pub fn euler_tour(&self) -> EulerTour {
        let n = self.len();
        let mut order = Vec::with_capacity(2 * n - 1);
        let mut tour_depth = Vec::with_capacity(2 * n - 1);
        let mut first_occurrence = vec![0u32; n];

        // (vertex, index of the next child to descend into)
        let mut stack: Vec<(VertexId, usize)> = vec![(self.root, 0)];
        first_occurrence[self.root.index()] = 0;
        order.push(self.root);
        tour_depth.push(0);
        while let Some(top) = stack.last_mut() {
            let (v, next) = *top;
            let children = self.children(v);
            if next < children.len() {
                top.1 += 1;
                let c = children[next];
                first_occurrence[c.index()] = order.len() as u32;
                order.push(c);
                tour_depth.push(self.depth[c.index()]);
                stack.push((c, 0));
            } else {
                stack.pop();
                if let Some(&(p, _)) = stack.last() {
                    order.push(p);
                    tour_depth.push(self.depth[p.index()]);
                }
            }
        }

        EulerTour {
            order,
            first_occurrence,
            tour_depth,
        }
    }
}

/// Follows parent links `n` steps from `start`; the vertex reached lies on a cycle.
fn vertex_on_cycle(parents: &[Option<usize>], start: usize) -> usize {
    let mut v = start;
    for _ in 0..parents.len() {
        match parents[v] {
            Some(p) => v = p,
            None => break,
        }
    }
    v
}
