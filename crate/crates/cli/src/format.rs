//! Text formats.
//!
//! Tree file:
//!
//! ```text
//! tree <n> <root-label>
//! <child-label> <parent-label>     (n - 1 lines)
//! ```
//!
//! Query file: one `query <f> <label> <label> ...` per line. In both files blank lines
//! and lines starting with `#` are skipped. Labels are whitespace-free tokens; they get
//! dense ids in order of first appearance, the root label first.

use std::collections::HashMap;
use std::fmt::Write as _;

use flca::{RootedTree, VertexId};

use crate::CliError;

#[derive(Debug, Clone)]
pub struct TreeFile {
    pub tree: RootedTree,
    labels: Vec<String>,
    ids: HashMap<String, VertexId>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueryLine {
    pub line: usize,
    pub f: usize,
    pub marks: Vec<VertexId>,
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_err(line: usize, message: impl Into<String>) -> CliError {
    CliError::Parse {
        line,
        message: message.into(),
    }
}

impl TreeFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut lines = content_lines(text);
        let (header_line, header) = lines.next().ok_or_else(|| parse_err(1, "missing header"))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        let (n, root) = match fields.as_slice() {
            ["tree", n, root] => {
                let n: usize = n
                    .parse()
                    .map_err(|_| parse_err(header_line, format!("bad vertex count {n:?}")))?;
                if n == 0 {
                    return Err(parse_err(header_line, "a tree needs at least one vertex"));
                }
                (n, *root)
            }
            _ => return Err(parse_err(header_line, "expected `tree <n> <root-label>`")),
        };

        let mut labels: Vec<String> = vec![root.to_string()];
        let mut ids: HashMap<String, VertexId> =
            HashMap::from([(root.to_string(), VertexId::new(0))]);
        let mut parents: Vec<Option<usize>> = vec![None];
        let mut intern = |label: &str, parents: &mut Vec<Option<usize>>| -> usize {
            if let Some(id) = ids.get(label) {
                return id.index();
            }
            let id = labels.len();
            labels.push(label.to_string());
            ids.insert(label.to_string(), VertexId::new(id));
            parents.push(None);
            id
        };

        let mut edges = 0usize;
        let mut last_line = header_line;
        for (line, body) in lines {
            last_line = line;
            let fields: Vec<&str> = body.split_whitespace().collect();
            let [child, parent] = fields.as_slice() else {
                return Err(parse_err(line, "expected `<child-label> <parent-label>`"));
            };
            edges += 1;
            if edges > n - 1 {
                return Err(parse_err(
                    line,
                    format!("more than n - 1 = {} edge lines", n - 1),
                ));
            }
            if *child == root {
                return Err(parse_err(
                    line,
                    format!("root {root:?} cannot have a parent"),
                ));
            }
            let c = intern(child, &mut parents);
            let p = intern(parent, &mut parents);
            if parents[c].is_some() {
                return Err(parse_err(line, format!("{child:?} already has a parent")));
            }
            parents[c] = Some(p);
        }
        if edges != n - 1 {
            return Err(parse_err(
                last_line,
                format!("expected {} edge lines, found {edges}", n - 1),
            ));
        }
        if parents.len() != n {
            return Err(parse_err(
                last_line,
                format!("expected {n} distinct labels, found {}", parents.len()),
            ));
        }
        if let Some(orphan) = parents.iter().skip(1).position(Option::is_none) {
            return Err(parse_err(
                last_line,
                format!("{:?} never appears as a child", labels[orphan + 1]),
            ));
        }
        let tree =
            RootedTree::from_parents(&parents).map_err(|e| parse_err(last_line, e.to_string()))?;
        Ok(Self { tree, labels, ids })
    }

    /// Wraps a tree whose vertex `v` is labelled `v<id>`.
    pub fn with_default_labels(tree: RootedTree) -> Self {
        let labels: Vec<String> = tree.vertices().map(|v| format!("v{v}")).collect();
        let ids = labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.clone(), VertexId::new(i)))
            .collect();
        Self { tree, labels, ids }
    }

    pub fn label(&self, v: VertexId) -> &str {
        &self.labels[v.index()]
    }

    pub fn id(&self, label: &str) -> Option<VertexId> {
        self.ids.get(label).copied()
    }

    /// Header plus one line per non-root vertex in id order.
    pub fn render(&self) -> String {
        let tree = &self.tree;
        let mut out = String::new();
        writeln!(out, "tree {} {}", tree.len(), self.label(tree.root())).unwrap();
        for v in tree.vertices() {
            if let Some(p) = tree.parent(v) {
                writeln!(out, "{} {}", self.label(v), self.label(p)).unwrap();
            }
        }
        out
    }

    pub fn parse_queries(&self, text: &str) -> Result<Vec<QueryLine>, CliError> {
        let mut queries = Vec::new();
        for (line, body) in content_lines(text) {
            let mut fields = body.split_whitespace();
            if fields.next() != Some("query") {
                return Err(parse_err(line, "expected `query <f> <label> ...`"));
            }
            let f: usize = match fields.next().map(str::parse) {
                Some(Ok(f)) if f >= 1 => f,
                _ => return Err(parse_err(line, "fault budget must be an integer >= 1")),
            };
            let marks = fields
                .map(|label| {
                    self.id(label).ok_or_else(|| CliError::UnknownLabel {
                        line,
                        label: label.to_string(),
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            if marks.is_empty() {
                return Err(parse_err(line, "a query needs at least one marked label"));
            }
            queries.push(QueryLine { line, f, marks });
        }
        Ok(queries)
    }
}
