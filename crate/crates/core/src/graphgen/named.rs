use std::fmt;
use std::str::FromStr;

use super::{Graph, GraphError};

/// Small graphs with a fixed vertex numbering.
///
/// * `K4`: vertices 0..4, every pair adjacent.
/// * `K33`: parts {0, 1, 2} and {3, 4, 5}.
/// * `cycle(k)`: edges i -- i+1 and k-1 -- 0; needs k >= 3.
/// * `complete(k)`: every pair of 0..k.
/// * `path(k)`: edges i -- i+1 for i < k-1.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NamedGraph {
    K4,
    K33,
    Cycle(usize),
    Complete(usize),
    Path(usize),
}

impl FromStr for NamedGraph {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        match s {
            "K4" => return Ok(Self::K4),
            "K33" => return Ok(Self::K33),
            _ => {}
        }
        let unknown = || GraphError::UnknownName(s.to_string());
        let (name, rest) = s.split_once('(').ok_or_else(unknown)?;
        let k: usize = rest
            .strip_suffix(')')
            .and_then(|k| k.trim().parse().ok())
            .ok_or_else(unknown)?;
        match name {
            "cycle" => Ok(Self::Cycle(k)),
            "complete" => Ok(Self::Complete(k)),
            "path" => Ok(Self::Path(k)),
            _ => Err(unknown()),
        }
    }
}

impl fmt::Display for NamedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::K4 => write!(f, "K4"),
            Self::K33 => write!(f, "K33"),
            Self::Cycle(k) => write!(f, "cycle({k})"),
            Self::Complete(k) => write!(f, "complete({k})"),
            Self::Path(k) => write!(f, "path({k})"),
        }
    }
}

pub fn named_graph(name: NamedGraph) -> Result<Graph, GraphError> {
    let edges: Vec<(usize, usize)> = match name {
        NamedGraph::K4 => return named_graph(NamedGraph::Complete(4)),
        NamedGraph::K33 => (0..3).flat_map(|u| (3..6).map(move |v| (u, v))).collect(),
        NamedGraph::Complete(k) => {
            check_param("complete", k, 1)?;
            (0..k)
                .flat_map(|u| (u + 1..k).map(move |v| (u, v)))
                .collect()
        }
        NamedGraph::Path(k) => {
            check_param("path", k, 1)?;
            (1..k).map(|v| (v - 1, v)).collect()
        }
        NamedGraph::Cycle(k) => {
            // k = 1, 2 would need a loop or a double edge
            check_param("cycle", k, 3)?;
            (0..k).map(|v| (v, (v + 1) % k)).collect()
        }
    };
    let n = match name {
        NamedGraph::K33 => 6,
        NamedGraph::Cycle(k) | NamedGraph::Complete(k) | NamedGraph::Path(k) => k,
        NamedGraph::K4 => unreachable!(),
    };
    Graph::from_edges(n, &edges)
}

fn check_param(name: &'static str, k: usize, min: usize) -> Result<(), GraphError> {
    if k < min {
        Err(GraphError::InvalidParameter { name, k })
    } else {
        Ok(())
    }
}
