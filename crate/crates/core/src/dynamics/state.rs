use std::fmt;
use std::str::FromStr;

use rand::Rng;

use super::DynamicsError;
use crate::graphgen::Graph;

/// Per-vertex configuration over {-1, 0, +1}. Displayed and parsed as a
/// string over `-`, `0`, `+`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SpinState(Vec<i8>);

impl SpinState {
    pub fn new(values: Vec<i8>) -> Result<Self, DynamicsError> {
        if let Some((vertex, &value)) = values.iter().enumerate().find(|(_, x)| x.abs() > 1) {
            return Err(DynamicsError::InvalidValue { vertex, value });
        }
        Ok(Self(values))
    }

    pub(crate) fn from_trusted(values: Vec<i8>) -> Self {
        debug_assert!(values.iter().all(|x| x.abs() <= 1));
        Self(values)
    }

    pub fn constant(n: usize, value: i8) -> Self {
        assert!(value.abs() <= 1, "spin value out of range");
        Self(vec![value; n])
    }

    /// Independent uniform +1/-1 per vertex.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        Self((0..n).map(|_| if rng.random() { 1 } else { -1 }).collect())
    }

    pub fn values(&self) -> &[i8] {
        &self.0
    }

    /// Writers must keep every entry in {-1, 0, +1}.
    pub(crate) fn values_mut(&mut self) -> &mut [i8] {
        &mut self.0
    }

    pub fn into_values(self) -> Vec<i8> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, v: usize) -> i8 {
        self.0[v]
    }

    pub fn flip(&mut self, v: usize) {
        self.0[v] = -self.0[v];
    }

    pub fn count(&self, value: i8) -> usize {
        self.0.iter().filter(|&&x| x == value).count()
    }

    /// Every neutral vertex moved to the negative part.
    pub fn zeros_to_negative(&self) -> Self {
        Self(
            self.0
                .iter()
                .map(|&x| if x == 0 { -1 } else { x })
                .collect(),
        )
    }

    pub fn is_unanimous(&self) -> bool {
        self.0.windows(2).all(|w| w[0] == w[1])
    }

    pub(crate) fn check_len(&self, graph: &Graph) -> Result<(), DynamicsError> {
        if self.len() == graph.n() {
            Ok(())
        } else {
            Err(DynamicsError::LengthMismatch {
                expected: graph.n(),
                found: self.len(),
            })
        }
    }

    pub(crate) fn check_no_zeros(&self) -> Result<(), DynamicsError> {
        match self.0.iter().position(|&x| x == 0) {
            Some(v) => Err(DynamicsError::ZeroEntry(v)),
            None => Ok(()),
        }
    }
}

pub(crate) fn spin_char(x: i8) -> char {
    match x {
        -1 => '-',
        0 => '0',
        _ => '+',
    }
}

impl fmt::Display for SpinState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let text: String = self.0.iter().map(|&x| spin_char(x)).collect();
        f.write_str(&text)
    }
}

impl fmt::Debug for SpinState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SpinState({self})")
    }
}

impl FromStr for SpinState {
    type Err = DynamicsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.chars()
            .map(|c| match c {
                '-' => Ok(-1),
                '0' => Ok(0),
                '+' => Ok(1),
                other => Err(DynamicsError::InvalidChar(other)),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Self)
    }
}

/// One line of a trajectory dump: `step <t> <values>`.
pub fn format_trajectory_line(t: usize, state: &SpinState) -> String {
    format!("step {t} {state}")
}
