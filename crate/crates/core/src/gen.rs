//! Tree and mark-set generators for fixtures, certification sweeps and benchmarks.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::tree::{RootedTree, VertexId};

/// Path `0 -> 1 -> ... -> n-1`.
pub fn path(n: usize) -> RootedTree {
    let parents: Vec<Option<usize>> = (0..n).map(|i| i.checked_sub(1)).collect();
    RootedTree::from_parents(&parents).expect("path parents are valid")
}

/// Root 0 with leaves `1..n`.
pub fn star(n: usize) -> RootedTree {
    let parents: Vec<Option<usize>> = (0..n).map(|i| (i > 0).then_some(0)).collect();
    RootedTree::from_parents(&parents).expect("star parents are valid")
}

/// Heap-ordered binary tree on `n` vertices: the parent of `i` is `(i - 1) / 2`.
/// Full exactly when `n = 2^(h+1) - 1`.
pub fn binary(n: usize) -> RootedTree {
    let parents: Vec<Option<usize>> = (0..n).map(|i| i.checked_sub(1).map(|j| j / 2)).collect();
    RootedTree::from_parents(&parents).expect("heap parents are valid")
}

/// Full binary tree of the given height (`2^(height+1) - 1` vertices).
pub fn full_binary(height: u32) -> RootedTree {
    binary((1usize << (height + 1)) - 1)
}

/// Random tree on `n` vertices with shuffled ids.
///
/// Vertex `i` (in insertion order) attaches to a uniform earlier vertex among the last
/// `w`, where the window `w` is itself drawn per tree, so draws range from deep
/// caterpillars (`w = 1` is a path) to shallow random recursive trees (`w = n`).
pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> RootedTree {
    assert!(n >= 1, "a tree needs at least one vertex");
    let window = rng.gen_range(1..=n);
    let mut label: Vec<usize> = (0..n).collect();
    label.shuffle(rng);
    let mut parents = vec![None; n];
    for i in 1..n {
        let p = rng.gen_range(i.saturating_sub(window)..i);
        parents[label[i]] = Some(label[p]);
    }
    RootedTree::from_parents(&parents).expect("generated parents are valid")
}

/// Uniform random recursive tree with `0` as the root: vertex `i` picks a parent in `0..i`.
pub fn random_recursive<R: Rng + ?Sized>(n: usize, rng: &mut R) -> RootedTree {
    assert!(n >= 1, "a tree needs at least one vertex");
    let parents: Vec<Option<usize>> = (0..n)
        .map(|i| (i > 0).then(|| rng.gen_range(0..i)))
        .collect();
    RootedTree::from_parents(&parents).expect("generated parents are valid")
}

/// `count` distinct uniform vertices (all of them if `count >= n`).
pub fn random_marks<R: Rng + ?Sized>(
    tree: &RootedTree,
    count: usize,
    rng: &mut R,
) -> Vec<VertexId> {
    let count = count.min(tree.len());
    rand::seq::index::sample(rng, tree.len(), count)
        .into_iter()
        .map(VertexId::new)
        .collect()
}

/// A non-empty random subset of vertices of random size.
pub fn random_mark_set<R: Rng + ?Sized>(tree: &RootedTree, rng: &mut R) -> Vec<VertexId> {
    let count = rng.gen_range(1..=tree.len());
    random_marks(tree, count, rng)
}

/// Leaves of `tree` in id order.
pub fn leaves(tree: &RootedTree) -> Vec<VertexId> {
    tree.vertices()
        .filter(|&v| tree.children(v).is_empty())
        .collect()
}
