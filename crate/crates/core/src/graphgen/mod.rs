//! Immutable undirected simple graphs in compressed adjacency form, plus the
//! generators and file formats used by the simulations.

mod io;
mod named;
mod random;

pub use io::{format_edge_list, parse_edge_list, read_edge_list, write_edge_list};
pub use named::{named_graph, NamedGraph};
pub use random::{
    erdos_renyi_with_rng, gen_erdos_renyi, gen_random_regular, random_regular_with_rng,
    RegularSampler, MAX_PAIRING_DEGREE,
};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("no {d}-regular graph on {n} vertices: n*d is odd")]
    OddDegreeSum { n: usize, d: usize },
    #[error("degree {d} must be smaller than the vertex count {n}")]
    DegreeTooLarge { n: usize, d: usize },
    #[error("edge density {d} must lie in [0, {n}]")]
    InvalidDensity { n: usize, d: f64 },
    #[error("vertex {v} out of range for a graph with {n} vertices")]
    VertexOutOfRange { v: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {0} {1}")]
    DuplicateEdge(usize, usize),
    #[error("unknown graph name `{0}`")]
    UnknownName(String),
    #[error("invalid parameter {k} for {name}")]
    InvalidParameter { name: &'static str, k: usize },
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("header declares {expected} edges but {found} were listed")]
    EdgeCountMismatch { expected: usize, found: usize },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Undirected simple graph stored as CSR: the neighbors of `v` are
/// `neighbors[offsets[v]..offsets[v + 1]]`, sorted ascending.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Graph {
    offsets: Vec<usize>,
    neighbors: Vec<u32>,
}

impl Graph {
    /// Builds a graph from an undirected edge list, rejecting loops,
    /// duplicates and out-of-range endpoints.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::VertexOutOfRange { v: w, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            adjacency[u].push(v as u32);
            adjacency[v].push(u as u32);
        }
        for (u, list) in adjacency.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                let v = w[0] as usize;
                return Err(GraphError::DuplicateEdge(u.min(v), u.max(v)));
            }
        }
        Ok(Self::from_sorted_adjacency(adjacency))
    }

    /// Caller guarantees symmetric, loop-free, duplicate-free sorted lists.
    pub(crate) fn from_sorted_adjacency(adjacency: Vec<Vec<u32>>) -> Self {
        let mut offsets = Vec::with_capacity(adjacency.len() + 1);
        offsets.push(0);
        let total = adjacency.iter().map(Vec::len).sum();
        let mut neighbors = Vec::with_capacity(total);
        for list in adjacency {
            neighbors.extend_from_slice(&list);
            offsets.push(neighbors.len());
        }
        Self { offsets, neighbors }
    }

    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    /// Number of undirected edges.
    pub fn m(&self) -> usize {
        self.neighbors.len() / 2
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.neighbors[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && v < self.n() && self.neighbors(u).binary_search(&(v as u32)).is_ok()
    }

    /// Edges `(u, v)` with `u < v`, in ascending lexicographic order. This is
    /// the canonical edge indexing used by [`crate::dynamics::EdgeColoring`].
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n()).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .map(|&v| v as usize)
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }

    /// The common degree if every vertex has the same degree.
    pub fn regular_degree(&self) -> Option<usize> {
        let d = if self.n() == 0 { 0 } else { self.degree(0) };
        (0..self.n()).all(|v| self.degree(v) == d).then_some(d)
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n()).map(|v| self.degree(v)).max().unwrap_or(0)
    }
}
