//! Synchronous majority dynamics (MD), majority dynamics with zeros (MD0),
//! the sequential swap process, and the red/blue edge view of MD.
//!
//! All synchronous steppers read one buffer and write another; updating in
//! place would change the dynamics.

mod coloring;
mod limit;
mod state;
mod swap;

pub use coloring::{coloring_from_state, edge_dynamics_step, EdgeColoring};
pub use limit::{
    default_max_steps, oscillating_fraction, run_to_limit_cycle, run_to_limit_cycle_observed,
    LimitCycle,
};
pub use state::{format_trajectory_line, SpinState};
pub use swap::{run_swap_process, swap_step, SwapProcess};

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::graphgen::Graph;

#[derive(Debug, Error)]
pub enum DynamicsError {
    #[error("state has length {found} but the graph has {expected} vertices")]
    LengthMismatch { expected: usize, found: usize },
    #[error("vertex {0} is neutral; the rule needs a +1/-1 state")]
    ZeroEntry(usize),
    #[error("invalid spin value {value} at vertex {vertex}")]
    InvalidValue { vertex: usize, value: i8 },
    #[error("invalid spin character `{0}`")]
    InvalidChar(char),
    #[error("vertex {v} out of range for a graph with {n} vertices")]
    VertexOutOfRange { v: usize, n: usize },
    #[error("coloring has {found} edge labels but the graph has {expected} edges")]
    ColoringLength { expected: usize, found: usize },
    #[error("no limit cycle of period <= 2 within {steps} steps")]
    NonConvergence {
        steps: usize,
        last: SpinState,
        previous: SpinState,
    },
}

/// Synchronous update rule.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Stepper {
    /// Adopt the sign of the neighbor sum, keep the value on a zero sum.
    Md,
    /// Move one step toward the sign of the neighbor sum, clipped to [-1, 1].
    Md0,
}

impl Stepper {
    /// Writes the successor of `src` into `dst`. Both slices have length n.
    pub fn step_into(self, graph: &Graph, src: &[i8], dst: &mut [i8]) {
        match self {
            Self::Md => md_step_into(graph, src, dst),
            Self::Md0 => md0_step_into(graph, src, dst),
        }
    }

    fn check(self, graph: &Graph, state: &SpinState) -> Result<(), DynamicsError> {
        state.check_len(graph)?;
        if self == Self::Md {
            state.check_no_zeros()?;
        }
        Ok(())
    }
}

impl fmt::Display for Stepper {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Md => "md",
            Self::Md0 => "md0",
        })
    }
}

impl FromStr for Stepper {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "md" => Ok(Self::Md),
            "md0" => Ok(Self::Md0),
            other => Err(format!("unknown dynamics `{other}`")),
        }
    }
}

#[inline]
pub(crate) fn neighbor_sum(graph: &Graph, values: &[i8], v: usize) -> i32 {
    graph
        .neighbors(v)
        .iter()
        .map(|&u| values[u as usize] as i32)
        .sum()
}

fn md_step_into(graph: &Graph, src: &[i8], dst: &mut [i8]) {
    for (v, out) in dst.iter_mut().enumerate() {
        let sum = neighbor_sum(graph, src, v);
        *out = if sum == 0 { src[v] } else { sum.signum() as i8 };
    }
}

fn md0_step_into(graph: &Graph, src: &[i8], dst: &mut [i8]) {
    for (v, out) in dst.iter_mut().enumerate() {
        let sum = neighbor_sum(graph, src, v);
        *out = (src[v] + sum.signum() as i8).clamp(-1, 1);
    }
}

/// One synchronous MD step.
pub fn md_step(graph: &Graph, state: &SpinState) -> Result<SpinState, DynamicsError> {
    step(Stepper::Md, graph, state)
}

/// One synchronous MD0 step.
pub fn md0_step(graph: &Graph, state: &SpinState) -> Result<SpinState, DynamicsError> {
    step(Stepper::Md0, graph, state)
}

pub fn step(
    stepper: Stepper,
    graph: &Graph,
    state: &SpinState,
) -> Result<SpinState, DynamicsError> {
    stepper.check(graph, state)?;
    let mut next = vec![0; graph.n()];
    stepper.step_into(graph, state.values(), &mut next);
    Ok(SpinState::from_trusted(next))
}

/// A vertex is unsatisfied when strictly more of its neighbors sit in the
/// other part than in its own. Ties are satisfied.
pub fn is_unsatisfied(graph: &Graph, state: &SpinState, v: usize) -> Result<bool, DynamicsError> {
    state.check_len(graph)?;
    if v >= graph.n() {
        return Err(DynamicsError::VertexOutOfRange { v, n: graph.n() });
    }
    let values = state.values();
    for u in std::iter::once(v).chain(graph.neighbors(v).iter().map(|&u| u as usize)) {
        if values[u] == 0 {
            return Err(DynamicsError::ZeroEntry(u));
        }
    }
    Ok(unsatisfied_unchecked(graph, values, v))
}

#[inline]
pub(crate) fn unsatisfied_unchecked(graph: &Graph, values: &[i8], v: usize) -> bool {
    // opposite - same = -x_v * sum
    -(values[v] as i32) * neighbor_sum(graph, values, v) > 0
}

/// Number of edges whose endpoints lie in different parts.
pub fn cut_size(graph: &Graph, state: &SpinState) -> Result<usize, DynamicsError> {
    state.check_len(graph)?;
    state.check_no_zeros()?;
    let x = state.values();
    Ok(graph.edges().filter(|&(u, v)| x[u] != x[v]).count())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphgen::{named_graph, NamedGraph};

    fn named(name: NamedGraph) -> Graph {
        named_graph(name).unwrap()
    }

    fn s(text: &str) -> SpinState {
        text.parse().unwrap()
    }

    #[test]
    fn unsatisfied_examples() {
        let k4 = named(NamedGraph::K4);
        assert!(is_unsatisfied(&k4, &s("++--"), 0).unwrap());
        let c4 = named(NamedGraph::Cycle(4));
        for v in 0..4 {
            assert!(!is_unsatisfied(&c4, &s("++++"), v).unwrap());
        }
        let c6 = named(NamedGraph::Cycle(6));
        assert!(!is_unsatisfied(&c6, &s("+++---"), 0).unwrap());
    }

    #[test]
    fn unsatisfied_rejects_zeros_and_bad_vertices() {
        let p3 = named(NamedGraph::Path(3));
        assert!(matches!(
            is_unsatisfied(&p3, &s("+0+"), 0),
            Err(DynamicsError::ZeroEntry(1))
        ));
        assert!(matches!(
            is_unsatisfied(&p3, &s("0++"), 0),
            Err(DynamicsError::ZeroEntry(0))
        ));
        // zeros away from the neighborhood are irrelevant
        assert!(!is_unsatisfied(&p3, &s("++0"), 0).unwrap());
        assert!(matches!(
            is_unsatisfied(&p3, &s("+++"), 3),
            Err(DynamicsError::VertexOutOfRange { .. })
        ));
        assert!(matches!(
            is_unsatisfied(&p3, &s("++"), 0),
            Err(DynamicsError::LengthMismatch { .. })
        ));
    }

    #[test]
    fn md_step_examples() {
        let c4 = named(NamedGraph::Cycle(4));
        assert_eq!(md_step(&c4, &s("+-+-")).unwrap(), s("-+-+"));
        let k4 = named(NamedGraph::K4);
        assert_eq!(md_step(&k4, &s("++--")).unwrap(), s("--++"));
        let k33 = named(NamedGraph::K33);
        assert_eq!(md_step(&k33, &s("++++++")).unwrap(), s("++++++"));
        assert_eq!(md_step(&k33, &s("------")).unwrap(), s("------"));
    }

    #[test]
    fn md_step_keeps_value_on_tie() {
        // vertex 0 of cycle(6) sees +1 and -1
        let c6 = named(NamedGraph::Cycle(6));
        let next = md_step(&c6, &s("+++---")).unwrap();
        assert_eq!(next, s("+++---"));
        // every vertex of an arc of length >= 2 has a tie or a majority for itself
        let next = md_step(&c6, &s("-++---")).unwrap();
        assert_eq!(next, s("-++---"));
        // a lone + in a cycle faces two - neighbors and flips
        assert_eq!(md_step(&c6, &s("+-----")).unwrap(), s("------"));
    }

    #[test]
    fn md_step_rejects_zeros() {
        let c4 = named(NamedGraph::Cycle(4));
        assert!(matches!(
            md_step(&c4, &s("+0+-")),
            Err(DynamicsError::ZeroEntry(1))
        ));
    }

    #[test]
    fn md0_step_examples() {
        let k4 = named(NamedGraph::K4);
        assert_eq!(md0_step(&k4, &s("0000")).unwrap(), s("0000"));
        assert_eq!(md0_step(&k4, &s("++--")).unwrap(), s("0000"));
        let p3 = named(NamedGraph::Path(3));
        let one = md0_step(&p3, &s("+00")).unwrap();
        assert_eq!(one, s("++0"));
        assert_eq!(md0_step(&p3, &one).unwrap(), s("+++"));
    }

    #[test]
    fn md0_step_moves_one_level() {
        // the -1 center surrounded by +1 becomes 0, not +1; the leaves see
        // only the center and drop to 0 as well
        let star = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        assert_eq!(md0_step(&star, &s("-+++")).unwrap(), s("0000"));
        // a neutral vertex with a tie stays neutral
        let p3 = named(NamedGraph::Path(3));
        assert_eq!(md0_step(&p3, &s("+0-")).unwrap(), s("+0-"));
    }

    #[test]
    fn md0_step_shape_mismatch() {
        let k4 = named(NamedGraph::K4);
        assert!(matches!(
            md0_step(&k4, &s("+++")),
            Err(DynamicsError::LengthMismatch {
                expected: 4,
                found: 3
            })
        ));
    }

    #[test]
    fn cut_size_examples() {
        let c4 = named(NamedGraph::Cycle(4));
        assert_eq!(cut_size(&c4, &s("+-+-")).unwrap(), 4);
        assert_eq!(cut_size(&c4, &s("----")).unwrap(), 0);
        let k4 = named(NamedGraph::K4);
        assert_eq!(cut_size(&k4, &s("++--")).unwrap(), 4);
    }

    #[test]
    fn stepper_names() {
        assert_eq!("md".parse::<Stepper>().unwrap(), Stepper::Md);
        assert_eq!(Stepper::Md0.to_string(), "md0");
        assert!("swap".parse::<Stepper>().is_err());
    }
}
