use super::{DynamicsError, SpinState, Stepper};
use crate::graphgen::Graph;

/// The periodic regime a synchronous trajectory settles into.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LimitCycle {
    /// State at time `t_converge`.
    pub state_a: SpinState,
    /// State at time `t_converge + 1`; equal to `state_a` for a fixed point.
    pub state_b: SpinState,
    /// 1 for a fixed point, 2 for a two-cycle.
    pub period: u8,
    /// Number of steps before the trajectory enters the cycle.
    pub t_converge: usize,
    /// Vertices whose value differs between the two cycle states.
    pub oscillating: Vec<bool>,
}

impl LimitCycle {
    fn new(state_a: SpinState, state_b: SpinState, period: u8, t_converge: usize) -> Self {
        let oscillating = state_a
            .values()
            .iter()
            .zip(state_b.values())
            .map(|(a, b)| a != b)
            .collect();
        Self {
            state_a,
            state_b,
            period,
            t_converge,
            oscillating,
        }
    }

    pub fn n(&self) -> usize {
        self.oscillating.len()
    }

    pub fn oscillating_count(&self) -> usize {
        self.oscillating.iter().filter(|&&o| o).count()
    }

    pub fn oscillating_fraction(&self) -> f64 {
        if self.n() == 0 {
            0.0
        } else {
            self.oscillating_count() as f64 / self.n() as f64
        }
    }

    /// Oscillating vertices with exactly one oscillating neighbor, i.e. the
    /// leaves of the subgraph induced by the oscillating set.
    pub fn oscillating_leaves(&self, graph: &Graph) -> Vec<usize> {
        (0..self.n())
            .filter(|&v| self.oscillating[v])
            .filter(|&v| {
                graph
                    .neighbors(v)
                    .iter()
                    .filter(|&&u| self.oscillating[u as usize])
                    .count()
                    == 1
            })
            .collect()
    }
}

pub fn oscillating_fraction(cycle: &LimitCycle) -> f64 {
    cycle.oscillating_fraction()
}

/// Default step cap: `10 m + 100`.
pub fn default_max_steps(graph: &Graph) -> usize {
    10 * graph.m() + 100
}

/// Iterates `stepper` from `initial` until the newest state equals one of the
/// previous two, or `max_steps` steps have been taken.
pub fn run_to_limit_cycle(
    graph: &Graph,
    initial: &SpinState,
    stepper: Stepper,
    max_steps: usize,
) -> Result<LimitCycle, DynamicsError> {
    run_to_limit_cycle_observed(graph, initial, stepper, max_steps, |_, _| {})
}

/// Like [`run_to_limit_cycle`], calling `observe(t, x_t)` for the initial
/// state and every state produced afterwards.
pub fn run_to_limit_cycle_observed<F>(
    graph: &Graph,
    initial: &SpinState,
    stepper: Stepper,
    max_steps: usize,
    mut observe: F,
) -> Result<LimitCycle, DynamicsError>
where
    F: FnMut(usize, &SpinState),
{
    stepper.check(graph, initial)?;
    observe(0, initial);

    // x_{t-2}, x_{t-1}, x_t
    let mut older: Option<SpinState> = None;
    let mut prev = initial.clone();
    let mut cur = SpinState::from_trusted(vec![0; graph.n()]);
    for t in 1..=max_steps {
        stepper.step_into(graph, prev.values(), cur.values_mut());
        observe(t, &cur);
        if cur == prev {
            return Ok(LimitCycle::new(cur, prev, 1, t - 1));
        }
        if older.as_ref() == Some(&cur) {
            return Ok(LimitCycle::new(cur, prev, 2, t - 2));
        }
        // rotate buffers; the oldest one is recycled as the next output
        let recycled = older.replace(prev).unwrap_or_else(|| cur.clone());
        prev = std::mem::replace(&mut cur, recycled);
    }
    Err(DynamicsError::NonConvergence {
        steps: max_steps,
        last: prev,
        previous: older.unwrap_or_else(|| initial.clone()),
    })
}
