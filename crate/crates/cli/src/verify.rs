//! Certification sweeps: the fast path against the brute-force oracle.

use std::fmt;

use flca::oracle::{self, BRUTE_FORCE_MAX_N};
use flca::{
    compute_flca_offline, gen, size_bound, FlcaResult, FlcaSolver, QuerySet, RootedTree, VertexId,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub n_max: usize,
    pub f_max: usize,
    pub instances: usize,
    pub seed: u64,
    pub edge_faults: bool,
    pub exhaustive_n: usize,
    /// Negative control: perturb every computed answer.
    pub corrupt: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VerifySummary {
    pub random_instances: usize,
    pub exhaustive_instances: usize,
    pub checks: usize,
}

#[derive(Debug, Clone)]
pub struct Instance {
    pub parents: Vec<Option<usize>>,
    pub marks: Vec<VertexId>,
    pub f: usize,
}

#[derive(Debug, Clone)]
pub struct Discrepancy {
    pub instance: Instance,
    pub computed: Vec<VertexId>,
    pub reason: String,
}

impl fmt::Display for Discrepancy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let inst = &self.instance;
        writeln!(f, "counterexample: {}", self.reason)?;
        writeln!(f, "tree {} v{}", inst.parents.len(), root_of(&inst.parents))?;
        for (c, p) in inst.parents.iter().enumerate() {
            if let Some(p) = p {
                writeln!(f, "v{c} v{p}")?;
            }
        }
        write!(f, "query {}", inst.f)?;
        for m in &inst.marks {
            write!(f, " v{m}")?;
        }
        writeln!(f)?;
        write!(f, "computed")?;
        for v in &self.computed {
            write!(f, " v{v}")?;
        }
        Ok(())
    }
}

fn root_of(parents: &[Option<usize>]) -> usize {
    parents.iter().position(Option::is_none).unwrap_or(0)
}

pub struct Verifier {
    config: VerifyConfig,
    checks: usize,
}

impl Verifier {
    pub fn new(config: VerifyConfig) -> Self {
        Self { config, checks: 0 }
    }

    pub fn run(mut self) -> Result<VerifySummary, Box<Discrepancy>> {
        let mut summary = VerifySummary::default();
        let mut rng = ChaCha8Rng::seed_from_u64(self.config.seed);
        let f_max = self.config.f_max.max(1);

        for _ in 0..self.config.instances {
            let n = rng.gen_range(1..=self.config.n_max.max(1));
            let tree = gen::random(n, &mut rng);
            let marks = gen::random_mark_set(&tree, &mut rng);
            let f = rng.gen_range(1..=f_max);
            let instance = Instance {
                parents: tree.parent_indices(),
                marks,
                f,
            };
            self.check_and_minimize(instance)?;
            summary.random_instances += 1;
        }

        // Every tree with parent(i) < i, every non-empty mark set, every budget.
        for n in 1..=self.config.exhaustive_n {
            let mut parents = first_recursive_tree(n);
            loop {
                for mask in 1u64..(1 << n) {
                    let marks: Vec<VertexId> = (0..n)
                        .filter(|i| mask >> i & 1 == 1)
                        .map(VertexId::new)
                        .collect();
                    for f in 1..=f_max {
                        let instance = Instance {
                            parents: parents.clone(),
                            marks: marks.clone(),
                            f,
                        };
                        self.check_and_minimize(instance)?;
                        summary.exhaustive_instances += 1;
                    }
                }
                if !next_recursive_tree(&mut parents) {
                    break;
                }
            }
        }

        summary.checks = self.checks;
        Ok(summary)
    }

    fn compute(&self, tree: &RootedTree, query: &QuerySet) -> FlcaResult {
        let mut result = FlcaSolver::new(tree).solve(query).expect("validated query");
        if self.config.corrupt {
            corrupt(tree, &mut result.representatives);
        }
        result
    }

    fn check_and_minimize(&mut self, instance: Instance) -> Result<(), Box<Discrepancy>> {
        match self.check(&instance) {
            Ok(()) => Ok(()),
            Err(first) => Err(Box::new(self.minimize(first))),
        }
    }

    fn check(&mut self, instance: &Instance) -> Result<(), Discrepancy> {
        let tree = RootedTree::from_parents(&instance.parents).expect("generated tree");
        let query =
            QuerySet::new(&tree, instance.marks.iter().copied(), instance.f).expect("valid marks");
        let result = self.compute(&tree, &query);
        let reps = &result.representatives;
        let fail = |reason: String| Discrepancy {
            instance: instance.clone(),
            computed: reps.clone(),
            reason,
        };
        let marks = query.marks();
        let f = instance.f;

        self.checks += 1;
        if reps.is_empty() || reps.len() > marks.len() || reps.len() as u64 > size_bound(f) {
            return Err(fail(format!(
                "size {} outside [1, min(|M| = {}, 2^(f-1))]",
                reps.len(),
                marks.len()
            )));
        }

        self.checks += 1;
        let lca = naive_lca(&tree, marks);
        if !oracle::covers(&tree, &[lca], reps) || !oracle::covers(&tree, reps, marks) {
            return Err(fail("not sandwiched between LCA(M) and M".into()));
        }

        if f == 1 {
            self.checks += 1;
            if reps.as_slice() != [lca] {
                return Err(fail(format!(
                    "f = 1 but result is not {{LCA(M)}} = {{v{lca}}}"
                )));
            }
        }

        self.checks += 1;
        match oracle::distinguishing_fault_set(&tree, marks, reps, f) {
            Ok(Some(faults)) => {
                let faults: Vec<String> = faults.iter().map(|v| format!("v{v}")).collect();
                return Err(fail(format!(
                    "fault set {{{}}} separates M from M*",
                    faults.join(" ")
                )));
            }
            Ok(None) => {}
            Err(e) => return Err(fail(format!("oracle refused: {e}"))),
        }

        if tree.len() <= BRUTE_FORCE_MAX_N {
            self.checks += 1;
            match oracle::brute_force_flca(&tree, marks, f) {
                Ok((best, unique)) => {
                    if !unique {
                        return Err(fail("minimum equivalent set is not unique".into()));
                    }
                    if &best != reps {
                        let best: Vec<String> = best.iter().map(|v| format!("v{v}")).collect();
                        return Err(fail(format!(
                            "brute force minimum is {{{}}}",
                            best.join(" ")
                        )));
                    }
                }
                Err(e) => return Err(fail(format!("oracle refused: {e}"))),
            }
        }

        self.checks += 1;
        let offline = compute_flca_offline(&tree, &query).expect("validated query");
        if &offline.representatives != reps {
            return Err(fail("offline computation disagrees".into()));
        }

        if self.config.edge_faults {
            self.checks += 1;
            match oracle::distinguishing_mixed_fault_set(&tree, marks, reps, f) {
                Ok(Some(faults)) => {
                    return Err(fail(format!(
                        "mixed fault set of {} vertices and {} edges separates M from M*",
                        faults.vertices().len(),
                        faults.edges().len()
                    )))
                }
                Ok(None) => {}
                Err(e) => return Err(fail(format!("oracle refused: {e}"))),
            }
        }
        Ok(())
    }

    /// Greedily deletes leaves, then marks, while some check still fails.
    fn minimize(&mut self, mut current: Discrepancy) -> Discrepancy {
        loop {
            let mut shrunk = false;
            let n = current.instance.parents.len();
            for leaf in (0..n).rev() {
                let Some(candidate) = without_leaf(&current.instance, leaf) else {
                    continue;
                };
                if let Err(d) = self.check(&candidate) {
                    current = d;
                    shrunk = true;
                    break;
                }
            }
            if shrunk {
                continue;
            }
            for i in 0..current.instance.marks.len() {
                if current.instance.marks.len() == 1 {
                    break;
                }
                let mut candidate = current.instance.clone();
                candidate.marks.remove(i);
                if let Err(d) = self.check(&candidate) {
                    current = d;
                    shrunk = true;
                    break;
                }
            }
            if !shrunk {
                return current;
            }
        }
    }
}

/// Removes non-root leaf `leaf` and renumbers the vertices above it. `None` if `leaf`
/// is the root or has children, or if its mark is the only one.
fn without_leaf(instance: &Instance, leaf: usize) -> Option<Instance> {
    let parents = &instance.parents;
    parents[leaf]?;
    if parents.contains(&Some(leaf)) {
        return None;
    }
    let marks: Vec<VertexId> = instance
        .marks
        .iter()
        .filter(|m| m.index() != leaf)
        .map(|m| {
            VertexId::new(if m.index() > leaf {
                m.index() - 1
            } else {
                m.index()
            })
        })
        .collect();
    if marks.is_empty() {
        return None;
    }
    let shift = |v: usize| if v > leaf { v - 1 } else { v };
    let parents = parents
        .iter()
        .enumerate()
        .filter(|&(v, _)| v != leaf)
        .map(|(_, p)| p.map(shift))
        .collect();
    Some(Instance {
        parents,
        marks,
        f: instance.f,
    })
}

/// The star, first in odometer order.
fn first_recursive_tree(n: usize) -> Vec<Option<usize>> {
    (0..n).map(|i| (i > 0).then_some(0)).collect()
}

/// Advances `parents` (with `parents[i] < i`) to the next such array in odometer order.
fn next_recursive_tree(parents: &mut [Option<usize>]) -> bool {
    for i in (2..parents.len()).rev() {
        let p = parents[i].expect("non-root");
        if p + 1 < i {
            parents[i] = Some(p + 1);
            for slot in &mut parents[i + 1..] {
                *slot = Some(0);
            }
            return true;
        }
    }
    false
}

fn naive_lca(tree: &RootedTree, marks: &[VertexId]) -> VertexId {
    let mut on_path = vec![0usize; tree.len()];
    for &m in marks {
        let mut cur = Some(m);
        while let Some(v) = cur {
            on_path[v.index()] += 1;
            cur = tree.parent(v);
        }
    }
    let mut cur = marks[0];
    while on_path[cur.index()] < marks.len() {
        cur = tree.parent(cur).expect("root is a common ancestor");
    }
    cur
}

/// Moves the first representative one step up (or down from the root), which always
/// yields a non-equivalent set of at most the same size.
fn corrupt(tree: &RootedTree, reps: &mut Vec<VertexId>) {
    let Some(&x) = reps.first() else { return };
    let moved = tree.parent(x).or_else(|| tree.children(x).first().copied());
    if let Some(y) = moved {
        reps[0] = y;
        reps.sort_by_key(|&v| tree.first_occurrence(v));
        reps.dedup();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config() -> VerifyConfig {
        VerifyConfig {
            n_max: 8,
            f_max: 3,
            instances: 60,
            seed: 1,
            edge_faults: false,
            exhaustive_n: 4,
            corrupt: false,
        }
    }

    #[test]
    fn recursive_tree_enumeration_counts() {
        for n in 1..=6usize {
            let mut parents = first_recursive_tree(n);
            let mut count = 1;
            while next_recursive_tree(&mut parents) {
                assert!(parents
                    .iter()
                    .enumerate()
                    .skip(1)
                    .all(|(i, p)| p.unwrap() < i));
                count += 1;
            }
            assert_eq!(count, (1..n).product::<usize>().max(1), "n = {n}");
        }
    }

    #[test]
    fn clean_sweep_passes() {
        let summary = Verifier::new(config()).run().unwrap();
        assert_eq!(summary.random_instances, 60);
        // 1 + 1 + 2 + 6 recursive trees with 1, 3, 7, 15 mark sets, three budgets each
        assert_eq!(summary.exhaustive_instances, 3 * (1 + 3 + 2 * 7 + 6 * 15));
        assert!(summary.checks > 0);
    }

    #[test]
    fn corrupted_answers_are_caught_and_minimized() {
        let d = Verifier::new(VerifyConfig {
            corrupt: true,
            ..config()
        })
        .run()
        .unwrap_err();
        // any two-vertex instance already fails, so minimization reaches one
        assert!(d.instance.parents.len() <= 2, "{d}");
        assert_eq!(d.instance.marks.len(), 1);
        assert!(d.to_string().starts_with("counterexample: "));
    }

    #[test]
    fn leaf_removal_renumbers() {
        let inst = Instance {
            parents: vec![None, Some(0), Some(1), Some(0)],
            marks: vec![VertexId::new(2), VertexId::new(3)],
            f: 2,
        };
        let smaller = without_leaf(&inst, 2).unwrap();
        assert_eq!(smaller.parents, vec![None, Some(0), Some(0)]);
        assert_eq!(smaller.marks, vec![VertexId::new(2)]);
        assert!(without_leaf(&inst, 1).is_none());
        assert!(without_leaf(&inst, 0).is_none());
    }
}
