use std::fmt::Write as _;

use crate::dynamics::{DynamicsError, SpinState, Stepper};
use crate::graphgen::Graph;

/// MD0 steps covered by a census signature.
pub const CENSUS_STEPS: usize = 4;
/// Number of distinct signatures `(x^0, ..., x^4)` over {-1, 0, +1}.
pub const CENSUS_TYPES: usize = 243;

/// Count of vertices per MD0 trajectory signature `(x^0, x^1, x^2, x^3, x^4)`.
///
/// Signature index is base 3 with `x^0` most significant and digits
/// `- = 0`, `0 = 1`, `+ = 2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeCensus {
    counts: Vec<u64>,
}

impl Default for TypeCensus {
    fn default() -> Self {
        Self {
            counts: vec![0; CENSUS_TYPES],
        }
    }
}

impl TypeCensus {
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn get(&self, signature: &str) -> Option<u64> {
        signature_index(signature).map(|i| self.counts[i])
    }

    pub fn merge(&mut self, other: &TypeCensus) {
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
    }

    /// `signature,count` CSV with all 243 signatures in index order.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("signature,count\n");
        for (i, count) in self.counts.iter().enumerate() {
            writeln!(out, "{},{count}", signature_string(i)).unwrap();
        }
        out
    }
}

pub fn signature_string(index: usize) -> String {
    let mut chars = ['-'; CENSUS_STEPS + 1];
    let mut rest = index;
    for slot in chars.iter_mut().rev() {
        *slot = ['-', '0', '+'][rest % 3];
        rest /= 3;
    }
    chars.iter().collect()
}

pub fn signature_index(signature: &str) -> Option<usize> {
    if signature.chars().count() != CENSUS_STEPS + 1 {
        return None;
    }
    signature.chars().try_fold(0, |acc, c| {
        let digit = match c {
            '-' => 0,
            '0' => 1,
            '+' => 2,
            _ => return None,
        };
        Some(acc * 3 + digit)
    })
}

/// Runs four MD0 steps from a `+1/-1` state and tallies each vertex's
/// trajectory signature. Returns the census and the state after the last step.
pub fn md0_type_census(
    graph: &Graph,
    initial: &SpinState,
) -> Result<(TypeCensus, SpinState), DynamicsError> {
    if initial.len() != graph.n() {
        return Err(DynamicsError::LengthMismatch {
            expected: graph.n(),
            found: initial.len(),
        });
    }
    if let Some(v) = initial.values().iter().position(|&x| x == 0) {
        return Err(DynamicsError::ZeroEntry(v));
    }
    let digit = |x: i8| (x + 1) as usize;
    let mut index: Vec<usize> = initial.values().iter().map(|&x| digit(x)).collect();
    let mut cur = initial.values().to_vec();
    let mut next = vec![0; graph.n()];
    for _ in 0..CENSUS_STEPS {
        Stepper::Md0.step_into(graph, &cur, &mut next);
        std::mem::swap(&mut cur, &mut next);
        for (idx, &x) in index.iter_mut().zip(&cur) {
            *idx = *idx * 3 + digit(x);
        }
    }
    let mut census = TypeCensus::default();
    for i in index {
        census.counts[i] += 1;
    }
    Ok((census, SpinState::new(cur)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::md0_step;
    use crate::graphgen::{gen_random_regular, named_graph, NamedGraph};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn signature_encoding() {
        assert_eq!(signature_string(0), "-----");
        assert_eq!(signature_string(242), "+++++");
        assert_eq!(signature_string(1), "----0");
        for i in 0..CENSUS_TYPES {
            assert_eq!(signature_index(&signature_string(i)), Some(i));
        }
        assert_eq!(signature_index("++++"), None);
        assert_eq!(signature_index("++x++"), None);
    }

    #[test]
    fn unanimous_start_has_a_single_type() {
        let g = gen_random_regular(60, 3, 1).unwrap();
        let (census, last) = md0_type_census(&g, &SpinState::constant(60, 1)).unwrap();
        assert_eq!(census.get("+++++"), Some(60));
        assert_eq!(census.total(), 60);
        assert_eq!(last, SpinState::constant(60, 1));
    }

    #[test]
    fn counts_match_direct_trajectories() {
        let g = gen_random_regular(500, 5, 3).unwrap();
        let x0 = SpinState::random(500, &mut ChaCha8Rng::seed_from_u64(8));
        let (census, last) = md0_type_census(&g, &x0).unwrap();
        assert_eq!(census.total(), 500);

        let mut trajectory = vec![x0.clone()];
        for _ in 0..CENSUS_STEPS {
            let next = md0_step(&g, trajectory.last().unwrap()).unwrap();
            trajectory.push(next);
        }
        assert_eq!(&last, trajectory.last().unwrap());
        let mut expected = TypeCensus::default();
        for v in 0..500 {
            let sig: String = trajectory
                .iter()
                .map(|x| ['-', '0', '+'][(x.get(v) + 1) as usize])
                .collect();
            expected.counts[signature_index(&sig).unwrap()] += 1;
        }
        assert_eq!(census, expected);
        // x^0 is never neutral
        for i in 0..CENSUS_TYPES {
            if signature_string(i).starts_with('0') {
                assert_eq!(census.counts()[i], 0);
            }
        }
    }

    #[test]
    fn csv_lists_every_signature() {
        let k4 = named_graph(NamedGraph::K4).unwrap();
        let (census, _) = md0_type_census(&k4, &"++--".parse().unwrap()).unwrap();
        let csv = census.to_csv();
        assert_eq!(csv.lines().count(), 244);
        assert!(csv.starts_with("signature,count\n-----,0\n"));
        // ++-- on K4: every vertex moves to 0 and stays there
        assert_eq!(census.get("+0000"), Some(2));
        assert_eq!(census.get("-0000"), Some(2));
    }

    #[test]
    fn rejects_neutral_start() {
        let k4 = named_graph(NamedGraph::K4).unwrap();
        assert!(md0_type_census(&k4, &"+0+-".parse().unwrap()).is_err());
    }
}
