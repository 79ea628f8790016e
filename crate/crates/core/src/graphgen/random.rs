use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Graph, GraphError};

/// Largest degree for which [`RegularSampler::Auto`] uses exact pairing.
/// Pairing succeeds with probability about `exp(-(d^2 - 1) / 4)`, which is
/// roughly 1/6000 attempts at `d = 6` and 1/160000 at `d = 7`.
pub const MAX_PAIRING_DEGREE: usize = 6;

/// Algorithm used to sample random regular graphs.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum RegularSampler {
    /// Configuration model with full restart on any loop or multi-edge.
    /// Exactly uniform over simple regular graphs.
    Pairing,
    /// Steger–Wormald: repeatedly pair the remaining stubs at random,
    /// keeping only pairs that create a new simple edge. Asymptotically
    /// uniform for fixed `d`; restarts only when no admissible pair is left.
    StegerWormald,
    /// `Pairing` for `d <= MAX_PAIRING_DEGREE`, `StegerWormald` above.
    #[default]
    Auto,
}

impl RegularSampler {
    fn resolve(self, d: usize) -> Self {
        match self {
            Self::Auto if d <= MAX_PAIRING_DEGREE => Self::Pairing,
            Self::Auto => Self::StegerWormald,
            other => other,
        }
    }
}

/// Random simple `d`-regular graph on `n` vertices using
/// [`RegularSampler::Auto`].
pub fn gen_random_regular(n: usize, d: usize, seed: u64) -> Result<Graph, GraphError> {
    random_regular_with_rng(
        n,
        d,
        RegularSampler::Auto,
        &mut ChaCha8Rng::seed_from_u64(seed),
    )
}

pub fn random_regular_with_rng<R: Rng + ?Sized>(
    n: usize,
    d: usize,
    sampler: RegularSampler,
    rng: &mut R,
) -> Result<Graph, GraphError> {
    if (n * d) % 2 == 1 {
        return Err(GraphError::OddDegreeSum { n, d });
    }
    if d >= n && !(n == 0 || d == 0) {
        return Err(GraphError::DegreeTooLarge { n, d });
    }
    let mut table = SlotTable::new(n, d);
    match sampler.resolve(d) {
        RegularSampler::Pairing => pairing(&mut table, rng),
        _ => while !steger_wormald(&mut table, rng) {},
    }
    Ok(table.into_graph())
}

/// Fixed-width adjacency rows: `slots[v*d..v*d + filled[v]]`.
struct SlotTable {
    d: usize,
    slots: Vec<u32>,
    filled: Vec<usize>,
}

impl SlotTable {
    fn new(n: usize, d: usize) -> Self {
        Self {
            d,
            slots: vec![0; n * d],
            filled: vec![0; n],
        }
    }

    fn n(&self) -> usize {
        self.filled.len()
    }

    fn clear(&mut self) {
        self.filled.fill(0);
    }

    fn admissible(&self, u: usize, v: usize) -> bool {
        u != v && !self.slots[u * self.d..u * self.d + self.filled[u]].contains(&(v as u32))
    }

    fn push(&mut self, u: usize, v: usize) {
        self.slots[u * self.d + self.filled[u]] = v as u32;
        self.filled[u] += 1;
        self.slots[v * self.d + self.filled[v]] = u as u32;
        self.filled[v] += 1;
    }

    fn stubs(&self) -> Vec<u32> {
        (0..self.n() as u32)
            .flat_map(|v| std::iter::repeat_n(v, self.d))
            .collect()
    }

    fn into_graph(self) -> Graph {
        let d = self.d;
        let adjacency = (0..self.n())
            .map(|v| {
                let mut list = self.slots[v * d..(v + 1) * d].to_vec();
                list.sort_unstable();
                list
            })
            .collect();
        Graph::from_sorted_adjacency(adjacency)
    }
}

/// Uniform perfect matching of the stubs built one pair at a time, restarting
/// from scratch as soon as a loop or a repeated edge appears. Conditioned on
/// success the matching is uniform, hence so is the graph.
fn pairing<R: Rng + ?Sized>(table: &mut SlotTable, rng: &mut R) {
    // only the multiset of stub owners matters
    let mut stubs = table.stubs();
    let len = stubs.len();
    'attempt: loop {
        table.clear();
        let mut i = 0;
        while i < len {
            let j = rng.random_range(i + 1..len);
            stubs.swap(i + 1, j);
            let (u, v) = (stubs[i] as usize, stubs[i + 1] as usize);
            if !table.admissible(u, v) {
                continue 'attempt;
            }
            table.push(u, v);
            i += 2;
        }
        return;
    }
}

/// One Steger–Wormald attempt; false means it got stuck and must restart.
fn steger_wormald<R: Rng + ?Sized>(table: &mut SlotTable, rng: &mut R) -> bool {
    table.clear();
    let mut stubs = table.stubs();
    while !stubs.is_empty() {
        stubs.shuffle(rng);
        let mut leftover: BTreeMap<u32, usize> = BTreeMap::new();
        for pair in stubs.chunks_exact(2) {
            let (u, v) = (pair[0] as usize, pair[1] as usize);
            if table.admissible(u, v) {
                table.push(u, v);
            } else {
                *leftover.entry(pair[0]).or_default() += 1;
                *leftover.entry(pair[1]).or_default() += 1;
            }
        }
        if !leftover.is_empty() && !has_admissible_pair(table, &leftover) {
            return false;
        }
        stubs = leftover
            .into_iter()
            .flat_map(|(v, count)| std::iter::repeat_n(v, count))
            .collect();
    }
    true
}

fn has_admissible_pair(table: &SlotTable, leftover: &BTreeMap<u32, usize>) -> bool {
    let vertices: Vec<usize> = leftover.keys().map(|&v| v as usize).collect();
    vertices
        .iter()
        .enumerate()
        .any(|(i, &u)| vertices[i + 1..].iter().any(|&v| table.admissible(u, v)))
}

/// Erdős–Rényi graph `G(n, d/n)`: every pair is an edge independently with
/// probability `d / n`.
///
/// Uses geometric skipping over the pairs `(w, v)`, `w < v`, enumerated in
/// order of `v` then `w`. Each skip length consumes one uniform draw.
pub fn gen_erdos_renyi(n: usize, d: f64, seed: u64) -> Result<Graph, GraphError> {
    erdos_renyi_with_rng(n, d, &mut ChaCha8Rng::seed_from_u64(seed))
}

pub fn erdos_renyi_with_rng<R: Rng + ?Sized>(
    n: usize,
    d: f64,
    rng: &mut R,
) -> Result<Graph, GraphError> {
    if !(d >= 0.0 && d <= n as f64) {
        return Err(GraphError::InvalidDensity { n, d });
    }
    let mut adjacency: Vec<Vec<u32>> = vec![Vec::new(); n];
    let mut add = |w: usize, v: usize| {
        adjacency[w].push(v as u32);
        adjacency[v].push(w as u32);
    };
    let p = if n == 0 { 0.0 } else { d / n as f64 };

    if p >= 1.0 {
        for v in 1..n {
            for w in 0..v {
                add(w, v);
            }
        }
    } else if p > 0.0 {
        let log_q = (-p).ln_1p();
        let mut v = 1usize;
        let mut w: i64 = -1;
        while v < n {
            let r: f64 = rng.random();
            let skip = ((-r).ln_1p() / log_q).floor();
            // a skip past every remaining pair ends the sweep
            let remaining = (n * n) as f64;
            if skip >= remaining {
                break;
            }
            w += 1 + skip as i64;
            while w >= v as i64 && v < n {
                w -= v as i64;
                v += 1;
            }
            if v < n {
                add(w as usize, v);
            }
        }
    }

    for list in &mut adjacency {
        list.sort_unstable();
    }
    Ok(Graph::from_sorted_adjacency(adjacency))
}
