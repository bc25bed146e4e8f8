use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn flca(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_flca"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, body: &str) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

fn binary_fixture(dir: &TempDir) -> String {
    // labels: r, a/b at depth 1, c..f at depth 2, L1..L8 leaves
    let mut body = String::from("tree 15 r\na r\nb r\nc a\nd a\ne b\nf b\n");
    for (i, p) in ["c", "c", "d", "d", "e", "e", "f", "f"].iter().enumerate() {
        body.push_str(&format!("L{} {p}\n", i + 1));
    }
    write(dir, "binary.tree", &body)
}

#[test]
fn worst_case_fixture_query() {
    let dir = TempDir::new().unwrap();
    let tree = binary_fixture(&dir);
    let queries = write(
        &dir,
        "q.txt",
        "# all leaves\nquery 3 L1 L2 L3 L4 L5 L6 L7 L8\n\nquery 1 L1 L4 L2\nquery 2 L1 L8\n",
    );
    let out = flca(&["query", &tree, &queries]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "flca 3 c d e f\nflca 1 a\nflca 2 L1 L8\n");

    let offline = flca(&["query", &tree, &queries, "--offline"]);
    assert_eq!(stdout(&offline), stdout(&out));

    let again = flca(&["query", &tree, &queries]);
    assert_eq!(again.stdout, out.stdout);
}

#[test]
fn stats_lines() {
    let dir = TempDir::new().unwrap();
    let tree = binary_fixture(&dir);
    let queries = write(
        &dir,
        "q.txt",
        "query 3 L1 L2 L3 L4 L5 L6 L7 L8\nquery 4 c\n",
    );
    let out = flca(&["query", &tree, &queries, "--stats"]);
    assert_eq!(
        stdout(&out),
        "flca 3 c d e f\nstats recursion_calls=7 max_branching=2\n\
         flca 4 c\nstats recursion_calls=1 max_branching=0\n"
    );
}

#[test]
fn error_exit_codes() {
    let dir = TempDir::new().unwrap();
    let tree = binary_fixture(&dir);
    let unknown = write(&dir, "u.txt", "query 1 L1\nquery 2 L1 nope\n");
    let out = flca(&["query", &tree, &unknown]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));

    let bad_query = write(&dir, "b.txt", "query zero L1\n");
    assert_eq!(flca(&["query", &tree, &bad_query]).status.code(), Some(2));

    let bad_tree = write(&dir, "bad.tree", "tree 3 r\na r\na r\n");
    let out = flca(&["query", &bad_tree, &bad_query]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));

    let missing = dir.path().join("missing.tree");
    assert_eq!(
        flca(&["query", missing.to_str().unwrap(), &bad_query])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn gen_shapes() {
    let path = flca(&["gen", "--n", "3", "--shape", "path"]);
    assert_eq!(stdout(&path), "tree 3 v0\nv1 v0\nv2 v1\n");

    let binary = stdout(&flca(&["gen", "--shape", "binary", "--n", "15"]));
    assert_eq!(binary.lines().count(), 15);
    assert!(binary.contains("v14 v6\n"));

    let a = flca(&["gen", "--shape", "random", "--seed", "7"]);
    let b = flca(&["gen", "--shape", "random", "--seed", "7"]);
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(
        a.stdout,
        flca(&["gen", "--shape", "random", "--seed", "8"]).stdout
    );

    assert_eq!(flca(&["gen", "--n", "0"]).status.code(), Some(2));
    assert_eq!(flca(&["gen", "--shape", "hexagon"]).status.code(), Some(2));
}

#[test]
fn generated_files_parse_back() {
    let dir = TempDir::new().unwrap();
    for shape in ["path", "star", "binary", "random"] {
        let tree = write(
            &dir,
            "g.tree",
            &stdout(&flca(&["gen", "--n", "31", "--shape", shape])),
        );
        let labels: Vec<String> = (0..31).map(|i| format!("v{i}")).collect();
        let queries = write(&dir, "g.txt", &format!("query 1 {}\n", labels.join(" ")));
        let out = flca(&["query", &tree, &queries]);
        assert!(out.status.success(), "{shape}");
        // the lca of every vertex is the root
        let root = std::fs::read_to_string(Path::new(&tree)).unwrap();
        let root = root
            .lines()
            .next()
            .unwrap()
            .split_whitespace()
            .nth(2)
            .unwrap()
            .to_string();
        assert_eq!(stdout(&out), format!("flca 1 {root}\n"), "{shape}");
    }
}

#[test]
fn verify_passes_and_catches_corruption() {
    let out = flca(&[
        "verify",
        "--n-max",
        "10",
        "--f-max",
        "3",
        "--instances",
        "1000",
        "--seed",
        "7",
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("discrepancies=0"));

    let edges = flca(&["verify", "--edge-faults", "--n-max", "8", "--f-max", "2"]);
    assert!(edges.status.success());
    assert!(stdout(&edges).contains("edge faults enumerated"));

    let corrupt = flca(&["verify", "--corrupt", "--instances", "20"]);
    assert_eq!(corrupt.status.code(), Some(1));
    let text = stdout(&corrupt);
    assert!(text.starts_with("counterexample: "));
    assert!(text.contains("\nquery "));
}

#[test]
fn verify_rejects_unsatisfiable_guards() {
    let out = flca(&[
        "verify",
        "--n-max",
        "400",
        "--f-max",
        "4",
        "--instances",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bench_rows() {
    let out = flca(&[
        "bench",
        "--n",
        "2000,4000",
        "--f",
        "4",
        "--marks",
        "1,100",
        "--repeat",
        "3",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows.len(), 4);
    for row in &rows {
        let fields: Vec<&str> = row.split(',').collect();
        assert_eq!(fields[0], "bench");
        assert_eq!(fields.len(), 6);
        assert!(fields[4].parse::<u128>().is_ok() && fields[5].parse::<u128>().is_ok());
    }
    assert!(rows[0].starts_with("bench,2000,4,1,"));
}
