use std::collections::BTreeMap;
use std::fmt;

use super::TrialRecord;

/// Two-sided 95% normal quantile.
const Z95: f64 = 1.959_963_984_540_054;

/// Wilson score interval for a binomial proportion at 95% confidence.
pub fn wilson_interval(successes: usize, trials: usize) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = Z95 * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Proportion {
    pub successes: usize,
    pub trials: usize,
}

impl Proportion {
    pub fn from_flags(flags: impl IntoIterator<Item = bool>) -> Option<Self> {
        let mut p = Self {
            successes: 0,
            trials: 0,
        };
        for flag in flags {
            p.trials += 1;
            p.successes += flag as usize;
        }
        (p.trials > 0).then_some(p)
    }

    pub fn estimate(&self) -> f64 {
        self.successes as f64 / self.trials as f64
    }

    pub fn wilson(&self) -> (f64, f64) {
        wilson_interval(self.successes, self.trials)
    }
}

impl fmt::Display for Proportion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (lo, hi) = self.wilson();
        write!(
            f,
            "{:.3} [{:.3}, {:.3}] ({}/{})",
            self.estimate(),
            lo,
            hi,
            self.successes,
            self.trials
        )
    }
}

/// Aggregates for one `(d, n, k)` point of a sweep.
#[derive(Clone, Debug)]
pub struct GroupSummary {
    pub d: f64,
    pub n: usize,
    pub k: Option<usize>,
    pub records: usize,
    pub cap_hits: usize,
    pub mean_oscillating_fraction: Option<f64>,
    /// Share of converged trials whose oscillating fraction is at most 0.05.
    pub nearly_frozen: Option<Proportion>,
    pub positive_core: Option<Proportion>,
    pub internal_cut: Option<Proportion>,
    pub mean_swap_steps: Option<f64>,
}

impl fmt::Display for GroupSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "d={} n={}", self.d, self.n)?;
        if let Some(k) = self.k {
            write!(f, " k={k}")?;
        }
        write!(f, " trials={}", self.records)?;
        if self.cap_hits > 0 {
            write!(f, " cap_hits={}", self.cap_hits)?;
        }
        if let Some(mean) = self.mean_oscillating_fraction {
            write!(f, " mean_osc={mean:.4}")?;
        }
        if let Some(p) = &self.nearly_frozen {
            write!(f, " osc<=0.05: {p}")?;
        }
        if let Some(p) = &self.positive_core {
            write!(f, " positive_core: {p}")?;
        }
        if let Some(p) = &self.internal_cut {
            write!(f, " internal_cut: {p}")?;
        }
        if let Some(mean) = self.mean_swap_steps {
            write!(f, " mean_swap_steps={mean:.1}")?;
        }
        Ok(())
    }
}

fn mean(values: &[f64]) -> Option<f64> {
    (!values.is_empty()).then(|| values.iter().sum::<f64>() / values.len() as f64)
}

/// Groups records by `(d, n, k)` in order of first appearance.
pub fn summarize(records: &[TrialRecord]) -> Vec<GroupSummary> {
    let mut order: Vec<(u64, usize, Option<usize>)> = Vec::new();
    let mut groups: BTreeMap<(u64, usize, Option<usize>), Vec<&TrialRecord>> = BTreeMap::new();
    for r in records {
        let key = (r.d.to_bits(), r.n, r.k);
        groups
            .entry(key)
            .or_insert_with(|| {
                order.push(key);
                Vec::new()
            })
            .push(r);
    }
    order
        .into_iter()
        .map(|key| {
            let rs = &groups[&key];
            let fractions: Vec<f64> = rs.iter().filter_map(|r| r.oscillating_fraction).collect();
            let steps: Vec<f64> = rs
                .iter()
                .filter_map(|r| r.swap_steps.map(|s| s as f64))
                .collect();
            GroupSummary {
                d: f64::from_bits(key.0),
                n: key.1,
                k: key.2,
                records: rs.len(),
                cap_hits: rs.iter().filter(|r| r.cap_hit).count(),
                mean_oscillating_fraction: mean(&fractions),
                nearly_frozen: Proportion::from_flags(fractions.iter().map(|&f| f <= 0.05)),
                positive_core: Proportion::from_flags(
                    rs.iter().filter_map(|r| r.has_positive_core),
                ),
                internal_cut: Proportion::from_flags(
                    rs.iter().filter_map(|r| r.reached_internal_cut),
                ),
                mean_swap_steps: mean(&steps),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wilson_reference_values() {
        // closed form evaluated independently: 50/100 -> 0.5 +- 0.0962
        let (lo, hi) = wilson_interval(50, 100);
        assert!((lo - 0.403_831).abs() < 1e-5, "{lo}");
        assert!((hi - 0.596_169).abs() < 1e-5, "{hi}");
        // 100/100 -> upper bound 1, lower 0.96301
        let (lo, hi) = wilson_interval(100, 100);
        assert!((lo - 0.963_007).abs() < 1e-5, "{lo}");
        assert_eq!(hi, 1.0);
        let (lo, hi) = wilson_interval(0, 10);
        assert_eq!(lo, 0.0);
        assert!((hi - 0.277_533).abs() < 1e-5, "{hi}");
    }

    #[test]
    fn proportion_display() {
        let p = Proportion::from_flags([true, true, false, true]).unwrap();
        assert_eq!(p.estimate(), 0.75);
        assert!(p.to_string().starts_with("0.750 ["));
        assert!(Proportion::from_flags(std::iter::empty()).is_none());
    }
}
