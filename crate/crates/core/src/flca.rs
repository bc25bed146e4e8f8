//! Minimum f-fault-equivalent representative sets.
//!
//! Given marks `M` and a fault budget `f`, [`compute_flca`] returns the unique smallest
//! set `M*` such that any `f` or fewer vertex faults separate the root from all of `M`
//! exactly when they separate it from all of `M*`. The recursion is:
//!
//! 1. `l = LCA(M)`; if `l` is marked, answer `{l}`.
//! 2. Bucket `M` by the child of `l` on the path to each mark. With `d` buckets
//!    (always at least two here), answer `{l}` if `d > f`.
//! 3. Otherwise answer the union of the recursion on every bucket with budget `f - d + 1`.
//!
//! Bucketing uses a per-vertex lookup table ([`QueryScratch`]) of switch bits and bucket
//! heads that is dirtied only at the children actually hit and restored before the
//! query returns, so a query never pays for the size of the tree. The recursion runs on
//! an explicit work stack over a single buffer: every bucket is written back in place
//! as a contiguous sub-range of its parent's range.
//!
//! [`compute_flca_offline`] produces the same set from the tree alone in O(n), and
//! [`aggregate`] / [`StreamingFlca`] fold marks in batch by batch.

use thiserror::Error;

use crate::index::AncestryIndex;
use crate::tree::{RootedTree, VertexId};

const NIL: u32 = u32::MAX;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FlcaError {
    #[error("the marked set is empty")]
    EmptyMarkSet,
    #[error("vertex {vertex} is not in the tree (n = {n})")]
    InvalidVertex { vertex: usize, n: usize },
    #[error("fault budget must be at least 1, got {f}")]
    InvalidBudget { f: usize },
    #[error("query scratch is not in its cleaned state")]
    ScratchDirty,
    #[error("query scratch sized for {scratch} vertices, tree has {n}")]
    ScratchSizeMismatch { scratch: usize, n: usize },
}

/// A deduplicated, validated marked set with its fault budget.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuerySet {
    marks: Vec<VertexId>,
    f: usize,
}

impl QuerySet {
    /// Validates `marks` against `tree`. Duplicates are dropped; the stored marks are
    /// sorted by id.
    pub fn new(
        tree: &RootedTree,
        marks: impl IntoIterator<Item = VertexId>,
        f: usize,
    ) -> Result<Self, FlcaError> {
        if f == 0 {
            return Err(FlcaError::InvalidBudget { f });
        }
        let mut marks: Vec<VertexId> = marks.into_iter().collect();
        if marks.is_empty() {
            return Err(FlcaError::EmptyMarkSet);
        }
        check_vertices(tree, &marks)?;
        marks.sort_unstable();
        marks.dedup();
        Ok(Self { marks, f })
    }

    pub fn from_indices(tree: &RootedTree, marks: &[usize], f: usize) -> Result<Self, FlcaError> {
        Self::new(tree, marks.iter().map(|&i| VertexId::new(i)), f)
    }

    pub fn marks(&self) -> &[VertexId] {
        &self.marks
    }

    pub fn f(&self) -> usize {
        self.f
    }
}

/// The representative set `M*` and the work spent finding it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlcaResult {
    /// Sorted by ascending Euler tour first occurrence (depth-first preorder).
    pub representatives: Vec<VertexId>,
    /// Number of recursive invocations, the top-level one included.
    pub recursion_calls: usize,
    /// Largest number of mark-bearing children seen at a branching LCA; 0 if none.
    pub max_branching: usize,
}

impl FlcaResult {
    pub fn len(&self) -> usize {
        self.representatives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.representatives.is_empty()
    }
}

/// `2^(f-1)`, the largest possible `|M*|` for budget `f`, saturating at `u64::MAX`
/// once `f - 1 >= 64`.
pub fn size_bound(f: usize) -> u64 {
    match f {
        0 => 0,
        f if f > 64 => u64::MAX,
        f => 1u64 << (f - 1),
    }
}

#[derive(Debug, Clone, Copy)]
struct ListNode {
    vertex: VertexId,
    next: u32,
}

#[derive(Debug, Clone, Copy)]
struct Task {
    start: usize,
    end: usize,
    budget: usize,
}

/// Per-vertex lookup table reused across queries.
///
/// At rest every switch bit is off and every bucket head is absent. A query turns on
/// the entries of the children it buckets marks under and clears them again before it
/// returns. One scratch serves one in-flight query.
#[derive(Debug, Clone)]
pub struct QueryScratch {
    switch_bits: Vec<bool>,
    bucket_ptr: Vec<u32>,
    touched: Vec<VertexId>,
    pool: Vec<ListNode>,
    work: Vec<VertexId>,
    tasks: Vec<Task>,
}

impl QueryScratch {
    pub fn new(n: usize) -> Self {
        Self {
            switch_bits: vec![false; n],
            bucket_ptr: vec![NIL; n],
            touched: Vec::new(),
            pool: Vec::new(),
            work: Vec::new(),
            tasks: Vec::new(),
        }
    }

    pub fn for_tree(tree: &RootedTree) -> Self {
        Self::new(tree.len())
    }

    pub fn len(&self) -> usize {
        self.switch_bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.switch_bits.is_empty()
    }

    pub fn switch_bit(&self, v: VertexId) -> bool {
        self.switch_bits[v.index()]
    }

    /// Head of the bucket list stored at `v`, as a handle into the node pool.
    pub fn bucket(&self, v: VertexId) -> Option<usize> {
        match self.bucket_ptr[v.index()] {
            NIL => None,
            h => Some(h as usize),
        }
    }

    /// Full O(n) scan for the cleaned state.
    pub fn is_clean(&self) -> bool {
        self.touched.is_empty()
            && self.pool.is_empty()
            && self.switch_bits.iter().all(|&b| !b)
            && self.bucket_ptr.iter().all(|&p| p == NIL)
    }

    /// Restores the cleaned state after an interrupted query.
    pub fn reset(&mut self) {
        for u in self.touched.drain(..) {
            self.switch_bits[u.index()] = false;
            self.bucket_ptr[u.index()] = NIL;
        }
        self.pool.clear();
        self.work.clear();
        self.tasks.clear();
    }

    /// O(1) entry check; entries are only dirtied through `touched`.
    fn looks_clean(&self) -> bool {
        self.touched.is_empty() && self.pool.is_empty()
    }
}

fn check_vertices(tree: &RootedTree, marks: &[VertexId]) -> Result<(), FlcaError> {
    match marks.iter().find(|v| !tree.contains(**v)) {
        Some(v) => Err(FlcaError::InvalidVertex {
            vertex: v.index(),
            n: tree.len(),
        }),
        None => Ok(()),
    }
}

fn sort_canonical(tree: &RootedTree, reps: &mut [VertexId]) {
    reps.sort_unstable_by_key(|&v| tree.first_occurrence(v));
}

/// Computes `FLCA(M, f)` with the lookup-table bucketing protocol.
pub fn compute_flca(
    index: &AncestryIndex<'_>,
    scratch: &mut QueryScratch,
    query: &QuerySet,
) -> Result<FlcaResult, FlcaError> {
    let tree = index.tree();
    if scratch.len() != tree.len() {
        return Err(FlcaError::ScratchSizeMismatch {
            scratch: scratch.len(),
            n: tree.len(),
        });
    }
    if !scratch.looks_clean() {
        return Err(FlcaError::ScratchDirty);
    }
    if query.marks.is_empty() {
        return Err(FlcaError::EmptyMarkSet);
    }
    if query.f == 0 {
        return Err(FlcaError::InvalidBudget { f: 0 });
    }
    check_vertices(tree, &query.marks)?;

    let QueryScratch {
        switch_bits,
        bucket_ptr,
        touched,
        pool,
        work,
        tasks,
    } = scratch;
    work.clear();
    work.extend_from_slice(&query.marks);
    tasks.clear();
    // Fault sets never exceed n vertices, so larger budgets behave like n.
    tasks.push(Task {
        start: 0,
        end: work.len(),
        budget: query.f.min(tree.len()),
    });

    let mut representatives = Vec::new();
    let mut recursion_calls = 0;
    let mut max_branching = 0;

    while let Some(Task { start, end, budget }) = tasks.pop() {
        recursion_calls += 1;
        let marks = &work[start..end];
        let lca = marks[1..]
            .iter()
            .fold(marks[0], |acc, &v| index.lca(acc, v));
        if marks.contains(&lca) {
            representatives.push(lca);
            continue;
        }

        let child_depth = tree.depth(lca) + 1;
        for &v in marks {
            let u = index
                .anc(v, child_depth)
                .expect("mark lies strictly below its lca")
                .index();
            let node = pool.len() as u32;
            if switch_bits[u] {
                pool.push(ListNode {
                    vertex: v,
                    next: bucket_ptr[u],
                });
            } else {
                switch_bits[u] = true;
                pool.push(ListNode {
                    vertex: v,
                    next: NIL,
                });
                touched.push(VertexId::new(u));
            }
            bucket_ptr[u] = node;
        }

        let d = touched.len();
        debug_assert!(d >= 2, "an unmarked lca branches");
        max_branching = max_branching.max(d);
        let keep_lca = d > budget;
        let child_budget = if keep_lca { 0 } else { budget - d + 1 };

        let mut pos = start;
        for u in touched.drain(..) {
            let mut cur = std::mem::replace(&mut bucket_ptr[u.index()], NIL);
            switch_bits[u.index()] = false;
            if keep_lca {
                continue;
            }
            let bucket_start = pos;
            while cur != NIL {
                let node = pool[cur as usize];
                work[pos] = node.vertex;
                pos += 1;
                cur = node.next;
            }
            tasks.push(Task {
                start: bucket_start,
                end: pos,
                budget: child_budget,
            });
        }
        pool.clear();
        if keep_lca {
            representatives.push(lca);
        }
    }

    sort_canonical(tree, &mut representatives);
    debug_assert!(representatives.len() as u64 <= size_bound(query.f));
    Ok(FlcaResult {
        representatives,
        recursion_calls,
        max_branching,
    })
}

/// Computes `FLCA(M, f)` from the tree alone in O(n): marked-subtree counts bottom-up,
/// then a top-down replay of the recursion along the children that carry marks.
pub fn compute_flca_offline(tree: &RootedTree, query: &QuerySet) -> Result<FlcaResult, FlcaError> {
    if query.marks.is_empty() {
        return Err(FlcaError::EmptyMarkSet);
    }
    if query.f == 0 {
        return Err(FlcaError::InvalidBudget { f: 0 });
    }
    check_vertices(tree, &query.marks)?;

    let n = tree.len();
    let mut marked = vec![false; n];
    for &m in &query.marks {
        marked[m.index()] = true;
    }
    let mut below = vec![0u32; n];
    for &v in tree.level_order().iter().rev() {
        below[v.index()] += u32::from(marked[v.index()]);
        if let Some(p) = tree.parent(v) {
            below[p.index()] += below[v.index()];
        }
    }

    let mut representatives = Vec::new();
    let mut recursion_calls = 0;
    let mut max_branching = 0;
    let mut live: Vec<VertexId> = Vec::new();
    let mut tasks: Vec<(VertexId, usize)> = vec![(tree.root(), query.f.min(n))];

    while let Some((top, budget)) = tasks.pop() {
        recursion_calls += 1;
        // Walk down to the lca of the marks under `top`: the first vertex that is
        // marked or has two or more mark-bearing children.
        let mut lca = top;
        loop {
            live.clear();
            if !marked[lca.index()] {
                live.extend(tree.children(lca).iter().filter(|c| below[c.index()] > 0));
            }
            match live.as_slice() {
                [only] => lca = *only,
                _ => break,
            }
        }
        if marked[lca.index()] {
            representatives.push(lca);
            continue;
        }
        let d = live.len();
        max_branching = max_branching.max(d);
        if d > budget {
            representatives.push(lca);
            continue;
        }
        // Same stack discipline as the indexed path: later children are popped first.
        tasks.extend(live.iter().map(|&c| (c, budget - d + 1)));
    }

    sort_canonical(tree, &mut representatives);
    Ok(FlcaResult {
        representatives,
        recursion_calls,
        max_branching,
    })
}

/// `FLCA(previous ∪ batch, f)` computed from the carried representatives of the
/// previous marks (`state`) and the new batch only.
pub fn aggregate(
    index: &AncestryIndex<'_>,
    scratch: &mut QueryScratch,
    state: Option<&FlcaResult>,
    batch: &[VertexId],
    f: usize,
) -> Result<FlcaResult, FlcaError> {
    let carried = state.map_or(&[][..], |s| s.representatives.as_slice());
    let query = QuerySet::new(index.tree(), carried.iter().chain(batch).copied(), f)?;
    compute_flca(index, scratch, &query)
}

/// Holds the running representative set while marks arrive in batches.
#[derive(Debug, Clone)]
pub struct StreamingFlca {
    f: usize,
    state: Option<FlcaResult>,
}

impl StreamingFlca {
    pub fn new(f: usize) -> Result<Self, FlcaError> {
        if f == 0 {
            return Err(FlcaError::InvalidBudget { f });
        }
        Ok(Self { f, state: None })
    }

    /// Folds `batch` into the carried state. An empty batch leaves it unchanged.
    pub fn push_batch(
        &mut self,
        index: &AncestryIndex<'_>,
        scratch: &mut QueryScratch,
        batch: &[VertexId],
    ) -> Result<&FlcaResult, FlcaError> {
        if !batch.is_empty() || self.state.is_none() {
            let next = aggregate(index, scratch, self.state.as_ref(), batch, self.f)?;
            self.state = Some(next);
        }
        Ok(self.state.as_ref().expect("state set above"))
    }

    /// Representatives carried between batches; empty before the first batch.
    pub fn carried(&self) -> &[VertexId] {
        self.state
            .as_ref()
            .map_or(&[], |s| s.representatives.as_slice())
    }

    pub fn result(&self) -> Option<&FlcaResult> {
        self.state.as_ref()
    }
}

/// An index plus one scratch: the usual way to run many queries against one tree.
#[derive(Debug, Clone)]
pub struct FlcaSolver<'t> {
    index: AncestryIndex<'t>,
    scratch: QueryScratch,
}

impl<'t> FlcaSolver<'t> {
    pub fn new(tree: &'t RootedTree) -> Self {
        Self {
            index: AncestryIndex::new(tree),
            scratch: QueryScratch::for_tree(tree),
        }
    }

    pub fn index(&self) -> &AncestryIndex<'t> {
        &self.index
    }

    pub fn scratch(&self) -> &QueryScratch {
        &self.scratch
    }

    pub fn solve(&mut self, query: &QuerySet) -> Result<FlcaResult, FlcaError> {
        compute_flca(&self.index, &mut self.scratch, query)
    }

    pub fn aggregate(
        &mut self,
        state: Option<&FlcaResult>,
        batch: &[VertexId],
        f: usize,
    ) -> Result<FlcaResult, FlcaError> {
        aggregate(&self.index, &mut self.scratch, state, batch, f)
    }

    pub fn push_batch(
        &mut self,
        stream: &mut StreamingFlca,
        batch: &[VertexId],
    ) -> Result<FlcaResult, FlcaError> {
        stream
            .push_batch(&self.index, &mut self.scratch, batch)
            .cloned()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;

    fn v(i: usize) -> VertexId {
        VertexId::new(i)
    }

    fn ids(xs: &[usize]) -> Vec<VertexId> {
        xs.iter().map(|&i| v(i)).collect()
    }

    fn heap_tree(n: usize) -> RootedTree {
        let parents: Vec<Option<usize>> = (0..n)
            .map(|i| if i == 0 { None } else { Some((i - 1) / 2) })
            .collect();
        RootedTree::from_parents(&parents).unwrap()
    }

    fn both(tree: &RootedTree, marks: &[usize], f: usize) -> Vec<VertexId> {
        let q = QuerySet::from_indices(tree, marks, f).unwrap();
        let mut solver = FlcaSolver::new(tree);
        let fast = solver.solve(&q).unwrap();
        let offline = compute_flca_offline(tree, &q).unwrap();
        assert_eq!(fast.representatives, offline.representatives);
        assert!(solver.scratch().is_clean());
        fast.representatives
    }

    #[test]
    fn budget_one_is_plain_lca() {
        let t = heap_tree(15);
        assert_eq!(both(&t, &[7, 10], 1), ids(&[1]));
        assert_eq!(both(&t, &[7, 14], 1), ids(&[0]));
        assert_eq!(both(&t, &[3, 8], 1), ids(&[3]));
    }

    #[test]
    fn full_binary_leaves_with_three_faults() {
        let t = heap_tree(15);
        let leaves: Vec<usize> = (7..15).collect();
        assert_eq!(both(&t, &leaves, 3), ids(&[3, 4, 5, 6]));
    }

    #[test]
    fn singleton_marks() {
        let t = heap_tree(15);
        for f in 1..6 {
            assert_eq!(both(&t, &[9], f), ids(&[9]));
        }
    }

    #[test]
    fn star_with_too_many_branches() {
        let t =
            RootedTree::from_parents(&[None, Some(0), Some(0), Some(0), Some(0), Some(0)]).unwrap();
        let marks = [1, 2, 3, 4, 5];
        let got = both(&t, &marks, 3);
        assert_eq!(got, ids(&[0]));
        let (brute, unique) = oracle::brute_force_flca(&t, &ids(&marks), 3).unwrap();
        assert_eq!(brute, got);
        assert!(unique);
    }

    #[test]
    fn two_leaves_under_a_path() {
        // 0 -> 1 -> {2, 3}
        let t = RootedTree::from_parents(&[None, Some(0), Some(1), Some(1)]).unwrap();
        let got = both(&t, &[2, 3], 2);
        assert_eq!(got, ids(&[2, 3]));
        let (brute, unique) = oracle::brute_force_flca(&t, &ids(&[2, 3]), 2).unwrap();
        assert_eq!(brute, got);
        assert!(unique);
    }

    #[test]
    fn stats_are_reported() {
        let t = heap_tree(15);
        let q = QuerySet::from_indices(&t, &(7..15).collect::<Vec<_>>(), 3).unwrap();
        let mut solver = FlcaSolver::new(&t);
        let r = solver.solve(&q).unwrap();
        // root and both depth-1 vertices split; the four depth-2 vertices have budget 1 and stop
        assert_eq!(r.recursion_calls, 1 + 2 + 4);
        assert_eq!(r.max_branching, 2);
        let off = compute_flca_offline(&t, &q).unwrap();
        assert_eq!(off.recursion_calls, r.recursion_calls);
        assert_eq!(off.max_branching, r.max_branching);
    }

    #[test]
    fn huge_budget_is_clamped() {
        let t = heap_tree(15);
        let leaves: Vec<usize> = (7..15).collect();
        let r = both(&t, &leaves, usize::MAX);
        assert_eq!(r, ids(&leaves));
        assert_eq!(size_bound(usize::MAX), u64::MAX);
        assert_eq!(size_bound(64), 1 << 63);
        assert_eq!(size_bound(1), 1);
    }

    #[test]
    fn query_set_validation() {
        let t = heap_tree(7);
        assert_eq!(
            QuerySet::from_indices(&t, &[], 2),
            Err(FlcaError::EmptyMarkSet)
        );
        assert_eq!(
            QuerySet::from_indices(&t, &[1], 0),
            Err(FlcaError::InvalidBudget { f: 0 })
        );
        assert_eq!(
            QuerySet::from_indices(&t, &[1, 7], 2),
            Err(FlcaError::InvalidVertex { vertex: 7, n: 7 })
        );
        let q = QuerySet::from_indices(&t, &[5, 3, 5, 3], 2).unwrap();
        assert_eq!(q.marks(), &ids(&[3, 5]));
    }

    #[test]
    fn query_against_a_smaller_tree() {
        let big = heap_tree(15);
        let small = heap_tree(7);
        let q = QuerySet::from_indices(&big, &[12], 2).unwrap();
        let mut solver = FlcaSolver::new(&small);
        assert_eq!(
            solver.solve(&q),
            Err(FlcaError::InvalidVertex { vertex: 12, n: 7 })
        );
        assert!(matches!(
            compute_flca_offline(&small, &q),
            Err(FlcaError::InvalidVertex { .. })
        ));

        let idx = AncestryIndex::new(&small);
        let mut wrong = QueryScratch::new(3);
        let q = QuerySet::from_indices(&small, &[1], 1).unwrap();
        assert_eq!(
            compute_flca(&idx, &mut wrong, &q),
            Err(FlcaError::ScratchSizeMismatch { scratch: 3, n: 7 })
        );
    }

    #[test]
    fn dirty_scratch_is_rejected_and_recoverable() {
        let t = heap_tree(7);
        let idx = AncestryIndex::new(&t);
        let mut scratch = QueryScratch::for_tree(&t);
        scratch.switch_bits[2] = true;
        scratch.bucket_ptr[2] = 0;
        scratch.touched.push(v(2));
        scratch.pool.push(ListNode {
            vertex: v(5),
            next: NIL,
        });
        assert!(!scratch.is_clean());
        let q = QuerySet::from_indices(&t, &[3, 4], 2).unwrap();
        assert_eq!(
            compute_flca(&idx, &mut scratch, &q),
            Err(FlcaError::ScratchDirty)
        );
        scratch.reset();
        assert!(scratch.is_clean());
        assert_eq!(
            compute_flca(&idx, &mut scratch, &q)
                .unwrap()
                .representatives,
            ids(&[3, 4])
        );
    }

    #[test]
    fn aggregation_basics() {
        let t = heap_tree(15);
        let mut solver = FlcaSolver::new(&t);
        let batch = ids(&[7, 8, 13]);
        let first = solver.aggregate(None, &batch, 2).unwrap();
        let q = QuerySet::new(&t, batch.iter().copied(), 2).unwrap();
        assert_eq!(
            first.representatives,
            solver.solve(&q).unwrap().representatives
        );

        let again = solver
            .aggregate(Some(&first), &first.representatives.clone(), 2)
            .unwrap();
        assert_eq!(again.representatives, first.representatives);

        assert_eq!(solver.aggregate(None, &[], 2), Err(FlcaError::EmptyMarkSet));
    }

    #[test]
    fn streaming_keeps_state() {
        let t = heap_tree(15);
        let mut solver = FlcaSolver::new(&t);
        let mut stream = StreamingFlca::new(2).unwrap();
        assert!(stream.carried().is_empty());
        solver.push_batch(&mut stream, &ids(&[7])).unwrap();
        assert_eq!(stream.carried(), &ids(&[7]));
        solver.push_batch(&mut stream, &ids(&[14])).unwrap();
        assert_eq!(stream.carried(), &ids(&[7, 14]));
        solver.push_batch(&mut stream, &ids(&[11])).unwrap();
        assert_eq!(stream.carried(), &ids(&[7, 2]));
        let before = stream.carried().to_vec();
        solver.push_batch(&mut stream, &[]).unwrap();
        assert_eq!(stream.carried(), &before);
        assert!(StreamingFlca::new(0).is_err());
    }
}
