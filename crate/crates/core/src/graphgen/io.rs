//! Edge-list text format: a header line `n m`, then `m` lines `u v` with
//! `0 <= u < v < n`, single spaces, LF line endings.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::{Graph, GraphError};

pub fn format_edge_list(graph: &Graph) -> String {
    let mut out = String::with_capacity(16 + graph.m() * 12);
    writeln!(out, "{} {}", graph.n(), graph.m()).unwrap();
    for (u, v) in graph.edges() {
        writeln!(out, "{u} {v}").unwrap();
    }
    out
}

pub fn write_edge_list(graph: &Graph, path: impl AsRef<Path>) -> Result<(), GraphError> {
    fs::write(path, format_edge_list(graph))?;
    Ok(())
}

pub fn read_edge_list(path: impl AsRef<Path>) -> Result<Graph, GraphError> {
    parse_edge_list(&fs::read_to_string(path)?)
}

pub fn parse_edge_list(text: &str) -> Result<Graph, GraphError> {
    let body = text.strip_suffix('\n').unwrap_or(text);
    let mut lines = body.split('\n').enumerate().map(|(i, l)| (i + 1, l));

    let (_, header) = lines
        .next()
        .ok_or_else(|| parse_error(1, "missing header"))?;
    let [n, m] = parse_pair(1, header)?;

    let mut edges = Vec::with_capacity(m);
    for (line, text) in lines {
        let [u, v] = parse_pair(line, text)?;
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        if u > v {
            return Err(parse_error(line, "endpoints must be listed as u < v"));
        }
        if v >= n {
            return Err(GraphError::VertexOutOfRange { v, n });
        }
        edges.push((u, v));
    }
    if edges.len() != m {
        return Err(GraphError::EdgeCountMismatch {
            expected: m,
            found: edges.len(),
        });
    }
    Graph::from_edges(n, &edges)
}

fn parse_pair(line: usize, text: &str) -> Result<[usize; 2], GraphError> {
    let mut fields = text.split(' ');
    let mut next = || -> Result<usize, GraphError> {
        let field = fields
            .next()
            .ok_or_else(|| parse_error(line, "expected two integers"))?;
        if field.is_empty() || !field.bytes().all(|b| b.is_ascii_digit()) {
            return Err(parse_error(line, &format!("invalid integer `{field}`")));
        }
        field
            .parse()
            .map_err(|_| parse_error(line, &format!("integer `{field}` out of range")))
    };
    let pair = [next()?, next()?];
    if fields.next().is_some() {
        return Err(parse_error(line, "expected exactly two integers"));
    }
    Ok(pair)
}

fn parse_error(line: usize, reason: &str) -> GraphError {
    GraphError::Parse {
        line,
        reason: reason.to_string(),
    }
}
