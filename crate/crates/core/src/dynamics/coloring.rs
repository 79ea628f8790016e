use super::{DynamicsError, SpinState};
use crate::graphgen::Graph;

/// Red/blue labelling of the edges of a graph, indexed in the order of
/// [`Graph::edges`]. Red marks an edge whose endpoints disagree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeColoring {
    red: Vec<bool>,
    deg_red: Vec<u32>,
    deg_blue: Vec<u32>,
}

impl EdgeColoring {
    pub fn from_red(graph: &Graph, red: Vec<bool>) -> Result<Self, DynamicsError> {
        if red.len() != graph.m() {
            return Err(DynamicsError::ColoringLength {
                expected: graph.m(),
                found: red.len(),
            });
        }
        let mut deg_red = vec![0u32; graph.n()];
        for ((u, v), &r) in graph.edges().zip(&red) {
            if r {
                deg_red[u] += 1;
                deg_red[v] += 1;
            }
        }
        let deg_blue = (0..graph.n())
            .map(|v| graph.degree(v) as u32 - deg_red[v])
            .collect();
        Ok(Self {
            red,
            deg_red,
            deg_blue,
        })
    }

    pub fn from_state(graph: &Graph, state: &SpinState) -> Result<Self, DynamicsError> {
        state.check_len(graph)?;
        state.check_no_zeros()?;
        let x = state.values();
        let red = graph.edges().map(|(u, v)| x[u] != x[v]).collect();
        Self::from_red(graph, red)
    }

    pub fn red(&self) -> &[bool] {
        &self.red
    }

    pub fn deg_red(&self, v: usize) -> usize {
        self.deg_red[v] as usize
    }

    pub fn deg_blue(&self, v: usize) -> usize {
        self.deg_blue[v] as usize
    }

    /// Every red edge becomes blue and vice versa.
    pub fn swap_colors(&self) -> Self {
        Self {
            red: self.red.iter().map(|r| !r).collect(),
            deg_red: self.deg_blue.clone(),
            deg_blue: self.deg_red.clone(),
        }
    }

    /// A vertex with a strict majority of red edges.
    fn majority_red(&self, v: usize) -> bool {
        self.deg_red[v] > self.deg_blue[v]
    }
}

pub fn coloring_from_state(
    graph: &Graph,
    state: &SpinState,
) -> Result<EdgeColoring, DynamicsError> {
    EdgeColoring::from_state(graph, state)
}

/// MD seen on edges: an edge changes color iff exactly one endpoint has more
/// than half of its edges red.
pub fn edge_dynamics_step(graph: &Graph, coloring: &EdgeColoring) -> EdgeColoring {
    let red = graph
        .edges()
        .zip(&coloring.red)
        .map(|((u, v), &r)| r ^ (coloring.majority_red(u) != coloring.majority_red(v)))
        .collect();
    EdgeColoring::from_red(graph, red).expect("edge count unchanged")
}
