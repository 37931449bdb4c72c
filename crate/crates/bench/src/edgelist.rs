//! Plain-text instance files: a header line `n m` followed by `m` lines `j k`
//! with 0-indexed endpoints. Blank lines are ignored.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use qaoa_core::Graph;

use crate::error::{BenchError, Result};

pub fn to_edge_list(graph: &Graph) -> String {
    let mut out = format!("{} {}\n", graph.num_vertices(), graph.num_edges());
    for &(j, k) in graph.edges() {
        writeln!(out, "{j} {k}").unwrap();
    }
    out
}

/// Parses an edge list. The result carries no generator metadata.
pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());

    let (line, header) = lines.next().ok_or(BenchError::Format {
        line: 1,
        msg: "missing header".into(),
    })?;
    let [n, m] = parse_pair(line, header)?;

    let mut edges = Vec::with_capacity(m);
    for (line, l) in lines {
        if edges.len() == m {
            return Err(BenchError::Format {
                line,
                msg: format!("more than the declared {m} edges"),
            });
        }
        let [j, k] = parse_pair(line, l)?;
        edges.push((j, k));
    }
    if edges.len() != m {
        return Err(BenchError::Format {
            line: text.lines().count(),
            msg: format!("expected {m} edges, found {}", edges.len()),
        });
    }
    Graph::new(n, edges).map_err(|e| BenchError::Format {
        line,
        msg: e.to_string(),
    })
}

fn parse_pair(line: usize, text: &str) -> Result<[usize; 2]> {
    let fields: Vec<&str> = text.split_whitespace().collect();
    let bad = |msg: String| BenchError::Format { line, msg };
    if fields.len() != 2 {
        return Err(bad(format!("expected two integers, found {:?}", text)));
    }
    let parse = |s: &str| s.parse::<usize>().map_err(|e| bad(format!("{s:?}: {e}")));
    Ok([parse(fields[0])?, parse(fields[1])?])
}

pub fn write_edge_list(path: &Path, graph: &Graph) -> Result<()> {
    fs::write(path, to_edge_list(graph)).map_err(|e| BenchError::io(path, e))
}

pub fn read_edge_list(path: &Path) -> Result<Graph> {
    let text = fs::read_to_string(path).map_err(|e| BenchError::io(path, e))?;
    parse_edge_list(&text)
}
