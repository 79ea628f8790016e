use rand::Rng;

use super::{DynamicsError, SpinState};
use crate::graphgen::Graph;

const ABSENT: u32 = u32::MAX;

/// Sequential dynamics that flips one uniformly random unsatisfied vertex per
/// step. Every flip lowers the cut size by at least one, so the process stops
/// after at most `m` steps at a state with no unsatisfied vertex.
///
/// Per-vertex disagreement counts and the unsatisfied set are maintained
/// incrementally, so a step costs `O(deg)`.
#[derive(Clone, Debug)]
pub struct SwapProcess<'g> {
    graph: &'g Graph,
    state: SpinState,
    /// Number of neighbors in the opposite part.
    disagree: Vec<u32>,
    /// Unsatisfied vertices, ascending when freshly built.
    unsatisfied: Vec<u32>,
    position: Vec<u32>,
    cut: usize,
    steps: usize,
}

impl<'g> SwapProcess<'g> {
    pub fn new(graph: &'g Graph, initial: SpinState) -> Result<Self, DynamicsError> {
        initial.check_len(graph)?;
        initial.check_no_zeros()?;
        let x = initial.values();
        let disagree: Vec<u32> = (0..graph.n())
            .map(|v| {
                graph
                    .neighbors(v)
                    .iter()
                    .filter(|&&u| x[u as usize] != x[v])
                    .count() as u32
            })
            .collect();
        let cut = disagree.iter().map(|&c| c as usize).sum::<usize>() / 2;
        let mut process = Self {
            graph,
            state: initial,
            disagree,
            unsatisfied: Vec::new(),
            position: vec![ABSENT; graph.n()],
            cut,
            steps: 0,
        };
        for v in 0..graph.n() {
            process.refresh(v);
        }
        Ok(process)
    }

    pub fn state(&self) -> &SpinState {
        &self.state
    }

    pub fn into_state(self) -> SpinState {
        self.state
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn cut_size(&self) -> usize {
        self.cut
    }

    pub fn unsatisfied_count(&self) -> usize {
        self.unsatisfied.len()
    }

    pub fn is_finished(&self) -> bool {
        self.unsatisfied.is_empty()
    }

    /// Flips one uniformly chosen unsatisfied vertex and returns it, or
    /// returns `None` at a fixed point without touching `rng`.
    pub fn step<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Option<usize> {
        if self.unsatisfied.is_empty() {
            return None;
        }
        let v = self.unsatisfied[rng.random_range(0..self.unsatisfied.len())] as usize;
        self.flip(v);
        Some(v)
    }

    /// Runs until a fixed point or until `steps()` reaches `limit`.
    pub fn run_until<R: Rng + ?Sized>(&mut self, rng: &mut R, limit: usize) {
        while self.steps < limit && self.step(rng).is_some() {}
    }

    /// Runs to the fixed point and returns the total number of steps.
    pub fn run<R: Rng + ?Sized>(&mut self, rng: &mut R) -> usize {
        while self.step(rng).is_some() {}
        self.steps
    }

    fn flip(&mut self, v: usize) {
        let deg = self.graph.degree(v) as u32;
        let before = self.disagree[v];
        self.disagree[v] = deg - before;
        self.cut = self.cut + (deg - before) as usize - before as usize;
        self.state.flip(v);
        let new_value = self.state.get(v);
        for &u in self.graph.neighbors(v) {
            let u = u as usize;
            if self.state.get(u) == new_value {
                self.disagree[u] -= 1;
            } else {
                self.disagree[u] += 1;
            }
            self.refresh(u);
        }
        self.refresh(v);
        self.steps += 1;
    }

    fn refresh(&mut self, v: usize) {
        let unsatisfied = 2 * self.disagree[v] as usize > self.graph.degree(v);
        let present = self.position[v] != ABSENT;
        if unsatisfied && !present {
            self.position[v] = self.unsatisfied.len() as u32;
            self.unsatisfied.push(v as u32);
        } else if !unsatisfied && present {
            let slot = self.position[v] as usize;
            let last = *self.unsatisfied.last().unwrap();
            self.unsatisfied.swap_remove(slot);
            if last as usize != v {
                self.position[last as usize] = slot as u32;
            }
            self.position[v] = ABSENT;
        }
    }
}

/// One swap step from `state`, or `None` if no vertex is unsatisfied. The
/// flipped vertex is drawn uniformly from the unsatisfied vertices listed in
/// ascending order.
pub fn swap_step<R: Rng + ?Sized>(
    graph: &Graph,
    state: &SpinState,
    rng: &mut R,
) -> Result<Option<SpinState>, DynamicsError> {
    let mut process = SwapProcess::new(graph, state.clone())?;
    Ok(process.step(rng).map(|_| process.into_state()))
}

/// Runs the swap process to its fixed point; returns the final state and the
/// number of flips performed.
pub fn run_swap_process<R: Rng + ?Sized>(
    graph: &Graph,
    initial: &SpinState,
    rng: &mut R,
) -> Result<(SpinState, usize), DynamicsError> {
    let mut process = SwapProcess::new(graph, initial.clone())?;
    let steps = process.run(rng);
    Ok((process.into_state(), steps))
}
