//! Edge-list files: a header line `n m`, then `m` lines `u v`.
use std::fs;
use std::io::{self, Write};
use std::path::Path;

use mmest_core::{Graph, GraphError, StatsSnapshot};

#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

fn parse_pair(line: &str, number: usize) -> Result<(usize, usize), LoadError> {
    let bad = |message: String| LoadError::Parse { line: number, message };
    let mut fields = line.split_whitespace();
    let mut next = |what: &str| -> Result<usize, LoadError> {
        let field = fields.next().ok_or_else(|| bad(format!("missing {what}")))?;
        field.parse().map_err(|_| bad(format!("{what} {field:?} is not a non-negative integer")))
    };
    let pair = (next("first field")?, next("second field")?);
    if fields.next().is_some() {
        return Err(bad("expected exactly two fields".into()));
    }
    Ok(pair)
}

/// Blank lines are ignored; everything else must follow the format exactly.
pub fn parse_edge_list(text: &str) -> Result<Graph, LoadError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty());
    let (number, header) = lines.next().ok_or(LoadError::Parse {
        line: 1,
        message: "missing header `n m`".into(),
    })?;
    let (n, m) = parse_pair(header, number)?;
    let mut edges = Vec::with_capacity(m);
    for (number, line) in lines {
        if edges.len() == m {
            return Err(LoadError::Parse {
                line: number,
                message: format!("more than the {m} edges announced in the header"),
            });
        }
        edges.push(parse_pair(line, number)?);
    }
    if edges.len() != m {
        return Err(LoadError::Parse {
            line: text.lines().count(),
            message: format!("header announces {m} edges, found {}", edges.len()),
        });
    }
    Ok(Graph::from_edges(n, &edges)?)
}

pub fn load_graph(path: &Path) -> Result<Graph, LoadError> {
    parse_edge_list(&fs::read_to_string(path)?)
}

pub fn write_edge_list(g: &Graph, mut out: impl Write) -> io::Result<()> {
    writeln!(out, "{} {}", g.vertex_count(), g.edge_count())?;
    for (u, v) in g.edges() {
        writeln!(out, "{u} {v}")?;
    }
    out.flush()
}

pub fn save_graph(g: &Graph, path: &Path) -> io::Result<()> {
    write_edge_list(g, io::BufWriter::new(fs::File::create(path)?))
}

/// `{list_probes, matrix_probes, per_vertex: [...]}`.
pub fn stats_json(stats: &StatsSnapshot) -> String {
    serde_json::to_string(stats).expect("stats serialize")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let g = Graph::from_edges(4, &[(0, 1), (2, 3), (1, 2)]).unwrap();
        let mut buf = Vec::new();
        write_edge_list(&g, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "4 3\n0 1\n1 2\n2 3\n");
        let back = parse_edge_list(&text).unwrap();
        assert_eq!(back.edges().collect::<Vec<_>>(), g.edges().collect::<Vec<_>>());
    }

    #[test]
    fn rejects_malformed_input() {
        for text in ["", "3", "3 1\n0 x\n", "3 2\n0 1\n", "3 1\n0 1\n1 2\n", "3 1\n0 1 2\n"] {
            assert!(matches!(parse_edge_list(text), Err(LoadError::Parse { .. })), "{text:?}");
        }
        for text in ["3 1\n0 3\n", "3 1\n1 1\n", "3 2\n0 1\n1 0\n"] {
            assert!(matches!(parse_edge_list(text), Err(LoadError::Graph(_))), "{text:?}");
        }
    }
}
