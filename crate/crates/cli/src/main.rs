use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use flca::oracle::{subsets_up_to, ENUMERATION_LIMIT};
use flca::{compute_flca_offline, gen, FlcaSolver, QuerySet};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

mod bench;
mod format;
mod verify;

use format::TreeFile;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: unknown label {label:?}")]
    UnknownLabel { line: usize, label: String },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::UnknownLabel { .. } => 3,
            _ => 2,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "flca",
    version,
    about = "Fault-tolerant lowest common ancestors on rooted trees"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Shape {
    Path,
    Star,
    Binary,
    Random,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Answer every query of QUERIES against TREE.
    Query {
        tree: PathBuf,
        queries: PathBuf,
        /// Use the O(n) per-query offline computation instead of the index.
        #[arg(long)]
        offline: bool,
        /// Print a `stats` line after every answer.
        #[arg(long)]
        stats: bool,
    },
    /// Certify the fast path against the brute-force oracle.
    Verify {
        #[arg(long, default_value_t = 10)]
        n_max: usize,
        #[arg(long, default_value_t = 3)]
        f_max: usize,
        #[arg(long, default_value_t = 1000)]
        instances: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also enumerate mixed vertex/edge fault sets.
        #[arg(long)]
        edge_faults: bool,
        /// Largest n for the exhaustive sweep over all small trees and mark sets.
        #[arg(long, default_value_t = 5)]
        exhaustive_n: usize,
        /// Perturb every computed answer (negative control).
        #[arg(long, hide = true)]
        corrupt: bool,
    },
    /// Write a tree file to standard output.
    Gen {
        #[arg(long, default_value_t = 16)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Shape::Random)]
        shape: Shape,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Time preprocessing and queries on random trees.
    Bench {
        /// Tree sizes, comma separated.
        #[arg(long, value_delimiter = ',', default_value = "1000000")]
        n: Vec<usize>,
        #[arg(long, default_value_t = 4)]
        f: usize,
        /// Mark-set sizes, comma separated.
        #[arg(long, value_delimiter = ',', default_value = "1000,10000,100000")]
        marks: Vec<usize>,
        #[arg(long, default_value_t = 5)]
        repeat: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

fn cmd_query(tree: &Path, queries: &Path, offline: bool, stats: bool) -> Result<String, CliError> {
    let file = TreeFile::parse(&read(tree)?)?;
    let queries = file.parse_queries(&read(queries)?)?;
    let mut solver = (!offline).then(|| FlcaSolver::new(&file.tree));
    let mut out = String::new();
    for q in queries {
        let query = QuerySet::new(&file.tree, q.marks, q.f).map_err(|e| CliError::Parse {
            line: q.line,
            message: e.to_string(),
        })?;
        let result = match solver.as_mut() {
            Some(solver) => solver.solve(&query),
            None => compute_flca_offline(&file.tree, &query),
        }
        .map_err(|e| CliError::Parse {
            line: q.line,
            message: e.to_string(),
        })?;
        write!(out, "flca {}", q.f).unwrap();
        for &v in &result.representatives {
            write!(out, " {}", file.label(v)).unwrap();
        }
        out.push('\n');
        if stats {
            writeln!(
                out,
                "stats recursion_calls={} max_branching={}",
                result.recursion_calls, result.max_branching
            )
            .unwrap();
        }
    }
    Ok(out)
}

fn cmd_gen(n: usize, shape: Shape, seed: u64) -> Result<String, CliError> {
    if n == 0 {
        return Err(CliError::Usage("--n must be at least 1".into()));
    }
    let tree = match shape {
        Shape::Path => gen::path(n),
        Shape::Star => gen::star(n),
        Shape::Binary => gen::binary(n),
        Shape::Random => gen::random(n, &mut ChaCha8Rng::seed_from_u64(seed)),
    };
    Ok(TreeFile::with_default_labels(tree).render())
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::Query {
            tree,
            queries,
            offline,
            stats,
        } => {
            print!("{}", cmd_query(&tree, &queries, offline, stats)?);
        }
        Command::Gen { n, shape, seed } => print!("{}", cmd_gen(n, shape, seed)?),
        Command::Verify {
            n_max,
            f_max,
            instances,
            seed,
            edge_faults,
            exhaustive_n,
            corrupt,
        } => {
            if n_max == 0 || f_max == 0 {
                return Err(CliError::Usage(
                    "--n-max and --f-max must be at least 1".into(),
                ));
            }
            let elements = if edge_faults { 2 * n_max - 1 } else { n_max };
            let needed = subsets_up_to(elements, f_max);
            if needed > ENUMERATION_LIMIT || exhaustive_n > 10 {
                return Err(CliError::Usage(format!(
                    "instance guards exceeded: {needed} fault sets per check (limit \
                     {ENUMERATION_LIMIT}), exhaustive n at most 10"
                )));
            }
            let config = verify::VerifyConfig {
                n_max,
                f_max,
                instances,
                seed,
                edge_faults,
                exhaustive_n,
                corrupt,
            };
            match verify::Verifier::new(config).run() {
                Ok(summary) => {
                    println!(
                        "verify: random instances={} (n<={n_max}, f<={f_max}, seed={seed})",
                        summary.random_instances
                    );
                    println!(
                        "verify: exhaustive instances={} (n<={exhaustive_n})",
                        summary.exhaustive_instances
                    );
                    println!(
                        "verify: edge faults {}",
                        if edge_faults { "enumerated" } else { "skipped" }
                    );
                    println!("verify: checks={} discrepancies=0", summary.checks);
                    println!("verify: PASS");
                }
                Err(d) => {
                    println!("{d}");
                    println!("verify: FAIL");
                    return Ok(ExitCode::from(1));
                }
            }
        }
        Command::Bench {
            n,
            f,
            marks,
            repeat,
            seed,
        } => {
            if f == 0 || n.contains(&0) {
                return Err(CliError::Usage("--n and --f must be at least 1".into()));
            }
            let rows = bench::run(&bench::BenchConfig {
                sizes: n,
                f,
                marks,
                repeat,
                seed,
            });
            for row in &rows {
                println!("{}", row.csv());
            }
            for pair in rows.windows(2).filter(|w| w[0].n == w[1].n) {
                eprintln!(
                    "n={} f={} marks {} -> {}: query time x{:.2}",
                    pair[0].n,
                    f,
                    pair[0].m,
                    pair[1].m,
                    pair[1].query_ns as f64 / pair[0].query_ns.max(1) as f64
                );
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("flca: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
