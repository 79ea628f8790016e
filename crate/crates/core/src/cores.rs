//! Cores inside one part of a regular graph.
//!
//! A core of a `d`-regular graph is a vertex set in which every member has at
//! least `d/2` neighbors inside the set (`ceil(d/2)` for odd `d`). The
//! largest core contained in a given part is found by peeling: repeatedly
//! drop members with fewer than `d/2` neighbors left in the part. The result
//! does not depend on the removal order.

use std::collections::VecDeque;

use thiserror::Error;

use crate::dynamics::{DynamicsError, SpinState, Stepper};
use crate::graphgen::Graph;

#[derive(Debug, Error)]
pub enum CoreError {
    #[error("core search needs a regular graph")]
    NotRegular,
    #[error("part mask has length {found} but the graph has {expected} vertices")]
    PartLength { expected: usize, found: usize },
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoreResult {
    /// Membership mask of the surviving core.
    pub in_core: Vec<bool>,
    /// Vertices of the part in the order they were removed.
    pub peel_order: Vec<usize>,
}

impl CoreResult {
    pub fn core_vertices(&self) -> Vec<usize> {
        (0..self.in_core.len())
            .filter(|&v| self.in_core[v])
            .collect()
    }

    pub fn len(&self) -> usize {
        self.in_core.iter().filter(|&&c| c).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.in_core.iter().any(|&c| c)
    }
}

/// `true` when `inside` neighbors are enough to stay in a core of degree `d`.
#[inline]
pub fn meets_core_threshold(inside: usize, d: usize) -> bool {
    2 * inside >= d
}

/// Largest core contained in `part` (given as a membership mask).
pub fn peel_to_core(graph: &Graph, part: &[bool]) -> Result<CoreResult, CoreError> {
    let d = graph.regular_degree().ok_or(CoreError::NotRegular)?;
    if part.len() != graph.n() {
        return Err(CoreError::PartLength {
            expected: graph.n(),
            found: part.len(),
        });
    }
    let mut in_core = part.to_vec();
    let mut inside: Vec<u32> = (0..graph.n())
        .map(|v| {
            if part[v] {
                graph
                    .neighbors(v)
                    .iter()
                    .filter(|&&u| part[u as usize])
                    .count() as u32
            } else {
                0
            }
        })
        .collect();

    let mut queued = vec![false; graph.n()];
    let mut queue: VecDeque<usize> = VecDeque::new();
    for v in 0..graph.n() {
        if part[v] && !meets_core_threshold(inside[v] as usize, d) {
            queued[v] = true;
            queue.push_back(v);
        }
    }

    // inside-degrees only decrease, so a queued vertex stays removable
    let mut peel_order = Vec::new();
    while let Some(v) = queue.pop_front() {
        in_core[v] = false;
        peel_order.push(v);
        for &u in graph.neighbors(v) {
            let u = u as usize;
            if !in_core[u] {
                continue;
            }
            inside[u] -= 1;
            if !queued[u] && !meets_core_threshold(inside[u] as usize, d) {
                queued[u] = true;
                queue.push_back(u);
            }
        }
    }
    Ok(CoreResult {
        in_core,
        peel_order,
    })
}

fn positive_part(state: &SpinState) -> Vec<bool> {
    state.values().iter().map(|&x| x == 1).collect()
}

/// Whether the `+1` part of `state` contains a nonempty core.
pub fn has_positive_core(graph: &Graph, state: &SpinState) -> Result<bool, CoreError> {
    Ok(!peel_to_core(graph, &positive_part(state))?.is_empty())
}

/// Both parts nonempty and no vertex has a strict majority of its neighbors
/// in the other part. States with neutral entries are not bipartitions and
/// never qualify.
pub fn is_internal_cut(graph: &Graph, state: &SpinState) -> bool {
    let x = state.values();
    if x.len() != graph.n() || x.contains(&0) {
        return false;
    }
    let has_both = x.contains(&1) && x.contains(&-1);
    has_both && (0..graph.n()).all(|v| !crate::dynamics::unsatisfied_unchecked(graph, x, v))
}

/// Runs `k` MD0 steps from a `+1/-1` state, sends every neutral vertex to
/// the negative part, and looks for a core in the positive part.
pub fn md0_core_probe(graph: &Graph, initial: &SpinState, k: usize) -> Result<bool, CoreError> {
    if initial.len() != graph.n() {
        return Err(DynamicsError::LengthMismatch {
            expected: graph.n(),
            found: initial.len(),
        }
        .into());
    }
    if let Some(v) = initial.values().iter().position(|&x| x == 0) {
        return Err(DynamicsError::ZeroEntry(v).into());
    }
    let mut cur = initial.values().to_vec();
    let mut next = vec![0; graph.n()];
    for _ in 0..k {
        Stepper::Md0.step_into(graph, &cur, &mut next);
        std::mem::swap(&mut cur, &mut next);
    }
    let probed = SpinState::new(cur)?.zeros_to_negative();
    has_positive_core(graph, &probed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::md0_step;
    use crate::graphgen::{gen_random_regular, named_graph, NamedGraph};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn s(text: &str) -> SpinState {
        text.parse().unwrap()
    }

    fn mask(n: usize, members: &[usize]) -> Vec<bool> {
        let mut m = vec![false; n];
        for &v in members {
            m[v] = true;
        }
        m
    }

    /// Union of every subset of `part` whose members all meet the threshold.
    /// Valid sets are closed under union, so this is the maximum core.
    fn brute_force_core(graph: &Graph, part: &[bool]) -> Vec<bool> {
        let d = graph.regular_degree().unwrap();
        let members: Vec<usize> = (0..graph.n()).filter(|&v| part[v]).collect();
        let mut union = vec![false; graph.n()];
        for bits in 1u32..(1 << members.len()) {
            let set = mask(
                graph.n(),
                &members
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| bits >> i & 1 == 1)
                    .map(|(_, &v)| v)
                    .collect::<Vec<_>>(),
            );
            let valid = (0..graph.n()).filter(|&v| set[v]).all(|v| {
                let inside = graph
                    .neighbors(v)
                    .iter()
                    .filter(|&&u| set[u as usize])
                    .count();
                meets_core_threshold(inside, d)
            });
            if valid {
                for v in 0..graph.n() {
                    union[v] |= set[v];
                }
            }
        }
        union
    }

    #[test]
    fn k4_whole_graph_is_a_core() {
        let k4 = named_graph(NamedGraph::K4).unwrap();
        let core = peel_to_core(&k4, &[true; 4]).unwrap();
        assert_eq!(core.core_vertices(), vec![0, 1, 2, 3]);
        assert!(core.peel_order.is_empty());
    }

    #[test]
    fn single_vertex_has_no_core() {
        let g = gen_random_regular(50, 3, 2).unwrap();
        for v in [0, 17, 49] {
            let core = peel_to_core(&g, &mask(50, &[v])).unwrap();
            assert!(core.is_empty());
            assert_eq!(core.peel_order, vec![v]);
        }
    }

    #[test]
    fn cycle_arc_is_a_core() {
        let c5 = named_graph(NamedGraph::Cycle(5)).unwrap();
        for start in 0..5 {
            let arc = [start, (start + 1) % 5, (start + 2) % 5];
            let core = peel_to_core(&c5, &mask(5, &arc)).unwrap();
            assert_eq!(core.in_core, mask(5, &arc));
        }
    }

    #[test]
    fn rejects_irregular_graphs_and_bad_masks() {
        let p3 = named_graph(NamedGraph::Path(3)).unwrap();
        assert!(matches!(
            peel_to_core(&p3, &[true; 3]),
            Err(CoreError::NotRegular)
        ));
        let k4 = named_graph(NamedGraph::K4).unwrap();
        assert!(matches!(
            peel_to_core(&k4, &[true; 3]),
            Err(CoreError::PartLength { .. })
        ));
    }

    #[test]
    fn matches_brute_force_on_small_graphs() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for (n, d) in [
            (6, 3),
            (8, 3),
            (10, 3),
            (12, 3),
            (8, 4),
            (10, 4),
            (12, 5),
            (9, 2),
        ] {
            for _ in 0..20 {
                let g = gen_random_regular(n, d, rng.random()).unwrap();
                let part: Vec<bool> = (0..n).map(|_| rng.random_bool(0.6)).collect();
                let core = peel_to_core(&g, &part).unwrap();
                assert_eq!(core.in_core, brute_force_core(&g, &part), "n={n} d={d}");
                let removed: usize = core.peel_order.len();
                assert_eq!(removed + core.len(), part.iter().filter(|&&p| p).count());
            }
        }
    }

    #[test]
    fn positive_core_examples() {
        let g = gen_random_regular(100, 5, 4).unwrap();
        assert!(has_positive_core(&g, &SpinState::constant(100, 1)).unwrap());
        assert!(!has_positive_core(&g, &SpinState::constant(100, -1)).unwrap());
    }

    #[test]
    fn internal_cut_examples() {
        let c6 = named_graph(NamedGraph::Cycle(6)).unwrap();
        assert!(is_internal_cut(&c6, &s("+++---")));
        assert!(!is_internal_cut(&c6, &s("++++++")));
        assert!(!is_internal_cut(&c6, &s("+-+-+-")));
        assert!(!is_internal_cut(&c6, &s("+++0--")));
    }

    #[test]
    fn k4_and_k33_admit_no_internal_cut() {
        for name in [NamedGraph::K4, NamedGraph::K33] {
            let g = named_graph(name).unwrap();
            let n = g.n();
            for bits in 0u32..(1 << n) {
                let x = (0..n)
                    .map(|v| if bits >> v & 1 == 1 { 1 } else { -1 })
                    .collect();
                assert!(!is_internal_cut(&g, &SpinState::new(x).unwrap()));
            }
        }
    }

    #[test]
    fn md0_probe_with_zero_steps_is_the_plain_check() {
        let g = gen_random_regular(400, 3, 6).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let x = SpinState::random(400, &mut rng);
            assert_eq!(
                md0_core_probe(&g, &x, 0).unwrap(),
                has_positive_core(&g, &x).unwrap()
            );
        }
    }

    #[test]
    fn md0_probe_follows_the_dynamics() {
        let g = gen_random_regular(300, 5, 9).unwrap();
        let x = SpinState::random(300, &mut ChaCha8Rng::seed_from_u64(2));
        let mut y = x.clone();
        for k in 0..6 {
            let expected = has_positive_core(&g, &y.zeros_to_negative()).unwrap();
            assert_eq!(md0_core_probe(&g, &x, k).unwrap(), expected, "k={k}");
            y = md0_step(&g, &y).unwrap();
        }
        assert!(md0_core_probe(&g, &SpinState::constant(300, 1), 4).unwrap());
    }

    #[test]
    fn md0_probe_rejects_neutral_start() {
        let k4 = named_graph(NamedGraph::K4).unwrap();
        assert!(matches!(
            md0_core_probe(&k4, &s("+0++"), 1),
            Err(CoreError::Dynamics(DynamicsError::ZeroEntry(1)))
        ));
    }
}
