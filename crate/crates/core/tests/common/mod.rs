#![allow(dead_code)]

use flca::{RootedTree, VertexId};
use proptest::prelude::*;
use proptest::sample::Index;

/// Parent lists of random trees with `1..=max_n` vertices and shuffled labels.
pub fn arb_parents(max_n: usize) -> impl Strategy<Value = Vec<Option<usize>>> {
    (1..=max_n).prop_flat_map(|n| {
        let links = proptest::collection::vec(any::<Index>(), n - 1);
        let labels = Just((0..n).collect::<Vec<usize>>()).prop_shuffle();
        (links, labels).prop_map(move |(links, label)| {
            let mut parents = vec![None; n];
            for (i, link) in links.iter().enumerate() {
                let child = i + 1;
                parents[label[child]] = Some(label[link.index(child)]);
            }
            parents
        })
    })
}

pub fn arb_tree(max_n: usize) -> impl Strategy<Value = RootedTree> {
    arb_parents(max_n).prop_map(|p| RootedTree::from_parents(&p).unwrap())
}

/// A tree, a non-empty mark set on it, and a budget in `1..=max_f`.
pub fn arb_instance(
    max_n: usize,
    max_f: usize,
) -> impl Strategy<Value = (RootedTree, Vec<VertexId>, usize)> {
    arb_tree(max_n).prop_flat_map(move |tree| {
        let n = tree.len();
        let marks = proptest::sample::subsequence((0..n).collect::<Vec<_>>(), 1..=n)
            .prop_map(|m| m.into_iter().map(VertexId::new).collect::<Vec<_>>());
        (Just(tree), marks, 1..=max_f)
    })
}

pub fn naive_lca(tree: &RootedTree, a: VertexId, b: VertexId) -> VertexId {
    let mut on_path = vec![false; tree.len()];
    let mut cur = Some(a);
    while let Some(x) = cur {
        on_path[x.index()] = true;
        cur = tree.parent(x);
    }
    let mut cur = b;
    while !on_path[cur.index()] {
        cur = tree.parent(cur).unwrap();
    }
    cur
}

pub fn naive_lca_of_set(tree: &RootedTree, marks: &[VertexId]) -> VertexId {
    marks[1..]
        .iter()
        .fold(marks[0], |acc, &v| naive_lca(tree, acc, v))
}

pub fn ids(xs: &[usize]) -> Vec<VertexId> {
    xs.iter().map(|&i| VertexId::new(i)).collect()
}
