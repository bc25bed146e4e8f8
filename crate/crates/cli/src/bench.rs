//! Timing harness: preprocessing time against `n`, query time against `|M|`.

use std::time::{Duration, Instant};

use flca::{gen, FlcaSolver, QuerySet, RootedTree};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub sizes: Vec<usize>,
    pub f: usize,
    pub marks: Vec<usize>,
    pub repeat: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BenchRow {
    pub n: usize,
    pub f: usize,
    pub m: usize,
    pub build_ns: u128,
    pub query_ns: u128,
}

impl BenchRow {
    pub fn csv(&self) -> String {
        format!(
            "bench,{},{},{},{},{}",
            self.n, self.f, self.m, self.build_ns, self.query_ns
        )
    }
}

fn median(mut samples: Vec<Duration>) -> Duration {
    samples.sort_unstable();
    samples[samples.len() / 2]
}

/// Minimum build time over `repeat` runs (tree validation plus index), and per mark
/// count the median query time over `repeat` fresh random mark sets.
pub fn run(config: &BenchConfig) -> Vec<BenchRow> {
    let repeat = config.repeat.max(1);
    let mut rows = Vec::new();
    for &n in &config.sizes {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ n as u64);
        let parents = gen::random_recursive(n, &mut rng).parent_indices();

        let mut build = Duration::MAX;
        let mut tree = None;
        for _ in 0..repeat {
            let start = Instant::now();
            let t = RootedTree::from_parents(&parents).expect("generated tree");
            let solver = FlcaSolver::new(&t);
            build = build.min(start.elapsed());
            drop(solver);
            tree = Some(t);
        }
        let tree = tree.expect("repeat >= 1");
        let mut solver = FlcaSolver::new(&tree);

        for &m in &config.marks {
            let samples: Vec<Duration> = (0..repeat)
                .map(|_| {
                    let marks = gen::random_marks(&tree, m.max(1), &mut rng);
                    let query = QuerySet::new(&tree, marks, config.f).expect("valid marks");
                    let start = Instant::now();
                    let result = solver.solve(&query).expect("valid query");
                    let elapsed = start.elapsed();
                    std::hint::black_box(result);
                    elapsed
                })
                .collect();
            rows.push(BenchRow {
                n,
                f: config.f,
                m: m.max(1).min(n),
                build_ns: build.as_nanos(),
                query_ns: median(samples).as_nanos(),
            });
        }
    }
    rows
}
