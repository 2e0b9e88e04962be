//! Plain-text edge lists:
//!
//! ```text
//! # nodes=3 edges=2
//! 0 1
//! 1 2
//! ```
//!
//! One `u v` pair per line with `u < v`.

use std::io::{self, BufRead, Write};

use thiserror::Error;

use super::{Graph, GraphError, NodeId};

#[derive(Debug, Error)]
pub enum EdgeListError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

impl EdgeListError {
    fn parse(line: usize, message: impl Into<String>) -> Self {
        Self::Parse {
            line,
            message: message.into(),
        }
    }
}

pub fn save_edge_list<W: Write>(g: &Graph, mut sink: W) -> io::Result<()> {
    writeln!(sink, "# nodes={} edges={}", g.node_count(), g.edge_count())?;
    for (u, v) in g.edges() {
        writeln!(sink, "{u} {v}")?;
    }
    sink.flush()
}

fn parse_header(line: &str) -> Option<(usize, usize)> {
    let rest = line.strip_prefix('#')?.trim();
    let mut nodes = None;
    let mut edges = None;
    for field in rest.split_whitespace() {
        match field.split_once('=')? {
            ("nodes", v) => nodes = Some(v.parse().ok()?),
            ("edges", v) => edges = Some(v.parse().ok()?),
            _ => return None,
        }
    }
    Some((nodes?, edges?))
}

pub fn load_edge_list<R: BufRead>(source: R) -> Result<Graph, EdgeListError> {
    let mut lines = source.lines();
    let header = match lines.next() {
        Some(line) => line?,
        None => return Err(EdgeListError::parse(1, "missing header")),
    };
    let (node_count, declared_edges) =
        parse_header(header.trim()).ok_or_else(|| EdgeListError::parse(1, "expected `# nodes=N edges=E` header"))?;

    let mut edges: Vec<(NodeId, NodeId)> = Vec::with_capacity(declared_edges);
    let mut line_of: Vec<usize> = Vec::with_capacity(declared_edges);
    for (idx, line) in lines.enumerate() {
        let lineno = idx + 2;
        let line = line?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut fields = line.split_whitespace();
        let (Some(a), Some(b), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(EdgeListError::parse(lineno, format!("expected `u v`, got `{line}`")));
        };
        let parse = |s: &str| {
            s.parse::<NodeId>()
                .map_err(|_| EdgeListError::parse(lineno, format!("invalid node id `{s}`")))
        };
        let (u, v) = (parse(a)?, parse(b)?);
        if u >= v {
            return Err(EdgeListError::parse(
                lineno,
                format!("edge `{u} {v}` must satisfy u < v"),
            ));
        }
        if v >= node_count {
            return Err(EdgeListError::parse(
                lineno,
                format!("node {v} out of range for nodes={node_count}"),
            ));
        }
        edges.push((u, v));
        line_of.push(lineno);
    }
    if edges.len() != declared_edges {
        return Err(EdgeListError::parse(
            1,
            format!("header declares {declared_edges} edges, found {}", edges.len()),
        ));
    }

    Graph::from_edges(node_count, edges.iter().copied()).map_err(|e| match e {
        GraphError::DuplicateEdge(u, v) => {
            let lineno = edges
                .iter()
                .zip(&line_of)
                .filter(|(&e, _)| e == (u, v))
                .map(|(_, &l)| l)
                .nth(1)
                .unwrap_or(1);
            EdgeListError::parse(lineno, format!("duplicate edge `{u} {v}`"))
        }
        other => EdgeListError::parse(1, other.to_string()),
    })
}
