//! Seeded Monte-Carlo sweeps over `(d, n)` points.
//!
//! Every trial draws all of its randomness (graph, initial state, swap
//! choices) from one ChaCha8 stream seeded by [`trial_seed`], so a record
//! can be recomputed from `(master_seed, kind, d, n, trial_index)` alone and
//! the output does not depend on how trials are scheduled across workers.

mod census;
mod record;
mod stats;

pub use census::{
    md0_type_census, signature_index, signature_string, TypeCensus, CENSUS_STEPS, CENSUS_TYPES,
};
pub use record::{records_to_csv, write_records_csv, TrialRecord, CSV_HEADER};
pub use stats::{summarize, wilson_interval, GroupSummary, Proportion};

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::cores::{has_positive_core, is_internal_cut, CoreError};
use crate::dynamics::{
    default_max_steps, run_to_limit_cycle, DynamicsError, LimitCycle, SpinState, Stepper,
    SwapProcess,
};
use crate::graphgen::{
    erdos_renyi_with_rng, random_regular_with_rng, Graph, GraphError, RegularSampler,
};

/// Trials per `(d, n)` point when none is given.
pub const DEFAULT_TRIALS: usize = 100;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("invalid experiment config: {0}")]
    InvalidConfig(String),
    #[error("{kind} is not handled by {runner}")]
    WrongKind {
        kind: ExperimentKind,
        runner: &'static str,
    },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("worker pool: {0}")]
    Pool(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExperimentKind {
    OscillationRegular,
    OscillationEr,
    CoreAfterMd,
    SwapInternalCut,
    SwapCoreVsSteps,
    Md0CoreVsK,
    Md0TypeCensus,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 7] = [
        Self::OscillationRegular,
        Self::OscillationEr,
        Self::CoreAfterMd,
        Self::SwapInternalCut,
        Self::SwapCoreVsSteps,
        Self::Md0CoreVsK,
        Self::Md0TypeCensus,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::OscillationRegular => "oscillation-regular",
            Self::OscillationEr => "oscillation-er",
            Self::CoreAfterMd => "core-after-md",
            Self::SwapInternalCut => "swap-internal-cut",
            Self::SwapCoreVsSteps => "swap-core-vs-steps",
            Self::Md0CoreVsK => "md0-core-vs-k",
            Self::Md0TypeCensus => "md0-type-census",
        }
    }

    /// Stable numeric tag mixed into trial seeds. Never renumber.
    pub fn seed_tag(self) -> u64 {
        match self {
            Self::OscillationRegular => 1,
            Self::OscillationEr => 2,
            Self::CoreAfterMd => 3,
            Self::SwapInternalCut => 4,
            Self::SwapCoreVsSteps => 5,
            Self::Md0CoreVsK => 6,
            Self::Md0TypeCensus => 7,
        }
    }

    pub fn uses_regular_graphs(self) -> bool {
        self != Self::OscillationEr
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExperimentKind {
    type Err = ExperimentError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| ExperimentError::InvalidConfig(format!("unknown kind `{s}`")))
    }
}

/// Swap-process checkpoint: an absolute step count or a multiple of `n`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Checkpoint {
    Steps(usize),
    PerVertex(f64),
}

impl Checkpoint {
    pub fn resolve(self, n: usize) -> usize {
        match self {
            Self::Steps(s) => s,
            Self::PerVertex(f) => (f * n as f64).round() as usize,
        }
    }
}

impl FromStr for Checkpoint {
    type Err = ExperimentError;

    /// `1500` or `0.15n`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ExperimentError::InvalidConfig(format!("invalid checkpoint `{s}`"));
        match s.strip_suffix('n') {
            Some(f) => {
                let f: f64 = f.parse().map_err(|_| bad())?;
                if f.is_finite() && f >= 0.0 {
                    Ok(Self::PerVertex(f))
                } else {
                    Err(bad())
                }
            }
            None => s.parse().map(Self::Steps).map_err(|_| bad()),
        }
    }
}

impl fmt::Display for Checkpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Steps(s) => write!(f, "{s}"),
            Self::PerVertex(x) => write!(f, "{x}n"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    /// Degrees for regular kinds, average degrees for `oscillation-er`.
    pub d_values: Vec<f64>,
    pub n_values: Vec<usize>,
    pub trials: usize,
    /// MD0 step counts for `md0-core-vs-k`.
    pub k_values: Vec<usize>,
    /// Swap-step checkpoints for `swap-core-vs-steps`.
    pub checkpoints: Vec<Checkpoint>,
    pub master_seed: u64,
    /// Step cap for synchronous runs; `None` means `10 m + 100` per graph.
    pub max_steps: Option<usize>,
    pub sampler: RegularSampler,
}

impl ExperimentConfig {
    pub fn new(kind: ExperimentKind, master_seed: u64) -> Self {
        Self {
            kind,
            d_values: Vec::new(),
            n_values: Vec::new(),
            trials: DEFAULT_TRIALS,
            k_values: Vec::new(),
            checkpoints: Vec::new(),
            master_seed,
            max_steps: None,
            sampler: RegularSampler::Auto,
        }
    }

    pub fn with_points(mut self, d_values: &[f64], n_values: &[usize]) -> Self {
        self.d_values = d_values.to_vec();
        self.n_values = n_values.to_vec();
        self
    }

    pub fn with_trials(mut self, trials: usize) -> Self {
        self.trials = trials;
        self
    }

    pub fn with_k_values(mut self, k_values: &[usize]) -> Self {
        self.k_values = k_values.to_vec();
        self
    }

    pub fn with_checkpoints(mut self, checkpoints: &[Checkpoint]) -> Self {
        self.checkpoints = checkpoints.to_vec();
        self
    }

    pub fn validate(&self) -> Result<(), ExperimentError> {
        let invalid = |msg: String| Err(ExperimentError::InvalidConfig(msg));
        if self.trials == 0 {
            return invalid("trials must be at least 1".into());
        }
        if self.d_values.is_empty() || self.n_values.is_empty() {
            return invalid("at least one d and one n value are required".into());
        }
        for &n in &self.n_values {
            for &d in &self.d_values {
                if self.kind.uses_regular_graphs() {
                    if !(d >= 0.0 && d.fract() == 0.0) {
                        return invalid(format!("{}: degree {d} is not an integer", self.kind));
                    }
                    let d = d as usize;
                    if (n * d) % 2 == 1 {
                        return invalid(format!("n*d must be even (n={n}, d={d})"));
                    }
                    if d >= n {
                        return invalid(format!("d must be smaller than n (n={n}, d={d})"));
                    }
                } else if !(d >= 0.0 && d <= n as f64) {
                    return invalid(format!("average degree {d} must lie in [0, {n}]"));
                }
            }
        }
        match self.kind {
            ExperimentKind::Md0CoreVsK => {
                if self.k_values.is_empty() {
                    return invalid("md0-core-vs-k needs k values".into());
                }
                if !self.k_values.windows(2).all(|w| w[0] <= w[1]) {
                    return invalid("k values must be sorted ascending".into());
                }
            }
            ExperimentKind::Md0TypeCensus => {
                if self.k_values.iter().any(|&k| k != CENSUS_STEPS) {
                    return invalid(format!("the type census always uses k={CENSUS_STEPS}"));
                }
            }
            ExperimentKind::SwapCoreVsSteps => {
                if self.checkpoints.is_empty() {
                    return invalid("swap-core-vs-steps needs checkpoints".into());
                }
                for &n in &self.n_values {
                    let resolved: Vec<usize> =
                        self.checkpoints.iter().map(|c| c.resolve(n)).collect();
                    if !resolved.windows(2).all(|w| w[0] <= w[1]) {
                        return invalid("checkpoints must be sorted ascending".into());
                    }
                }
            }
            _ => {}
        }
        Ok(())
    }

    /// Work units in output order: d-major, then n, then trial index.
    fn units(&self) -> Vec<TrialUnit> {
        let mut units = Vec::new();
        for &d in &self.d_values {
            for &n in &self.n_values {
                for trial_index in 0..self.trials {
                    units.push(TrialUnit {
                        d,
                        n,
                        trial_index,
                        trial_seed: trial_seed(self.master_seed, self.kind, d, n, trial_index),
                    });
                }
            }
        }
        units
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// `s = splitmix64(master)`, then `s = splitmix64(s ^ field)` for the kind
/// tag, the bits of `d` as an IEEE-754 double, `n`, and the trial index.
pub fn trial_seed(
    master_seed: u64,
    kind: ExperimentKind,
    d: f64,
    n: usize,
    trial_index: usize,
) -> u64 {
    [kind.seed_tag(), d.to_bits(), n as u64, trial_index as u64]
        .into_iter()
        .fold(splitmix64(master_seed), |s, field| splitmix64(s ^ field))
}

#[derive(Clone, Copy, Debug)]
struct TrialUnit {
    d: f64,
    n: usize,
    trial_index: usize,
    trial_seed: u64,
}

/// Runs every trial of `config` on a pool of `workers` threads (all
/// available cores when `None`). Records come back in unit order whatever
/// the pool size.
pub fn run_experiment(
    config: &ExperimentConfig,
    workers: Option<usize>,
) -> Result<Vec<TrialRecord>, ExperimentError> {
    config.validate()?;
    let units = config.units();
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(w) = workers {
        builder = builder.num_threads(w.max(1));
    }
    let pool = builder
        .build()
        .map_err(|e| ExperimentError::Pool(e.to_string()))?;
    let per_unit: Vec<Vec<TrialRecord>> = pool.install(|| {
        units
            .par_iter()
            .map(|unit| run_trial(config, unit))
            .collect::<Result<_, _>>()
    })?;
    Ok(per_unit.into_iter().flatten().collect())
}

fn check_kind(
    config: &ExperimentConfig,
    allowed: &[ExperimentKind],
    runner: &'static str,
) -> Result<(), ExperimentError> {
    if allowed.contains(&config.kind) {
        Ok(())
    } else {
        Err(ExperimentError::WrongKind {
            kind: config.kind,
            runner,
        })
    }
}

/// Oscillating fraction and convergence time of MD from a random start, on
/// random regular or Erdős–Rényi graphs.
pub fn run_oscillation_histogram(
    config: &ExperimentConfig,
    workers: Option<usize>,
) -> Result<Vec<TrialRecord>, ExperimentError> {
    check_kind(
        config,
        &[
            ExperimentKind::OscillationRegular,
            ExperimentKind::OscillationEr,
        ],
        "run_oscillation_histogram",
    )?;
    run_experiment(config, workers)
}

/// Positive core at the MD limit cycle.
pub fn run_core_after_md(
    config: &ExperimentConfig,
    workers: Option<usize>,
) -> Result<Vec<TrialRecord>, ExperimentError> {
    check_kind(config, &[ExperimentKind::CoreAfterMd], "run_core_after_md")?;
    run_experiment(config, workers)
}

/// Swap-process fixed points, or positive cores at swap-step checkpoints.
pub fn run_swap_experiments(
    config: &ExperimentConfig,
    workers: Option<usize>,
) -> Result<Vec<TrialRecord>, ExperimentError> {
    check_kind(
        config,
        &[
            ExperimentKind::SwapInternalCut,
            ExperimentKind::SwapCoreVsSteps,
        ],
        "run_swap_experiments",
    )?;
    run_experiment(config, workers)
}

/// Positive core after `k` MD0 steps, one record per trial and `k`.
pub fn run_md0_core_vs_k(
    config: &ExperimentConfig,
    workers: Option<usize>,
) -> Result<Vec<TrialRecord>, ExperimentError> {
    check_kind(config, &[ExperimentKind::Md0CoreVsK], "run_md0_core_vs_k")?;
    run_experiment(config, workers)
}

/// Sum of the per-trial censuses of a `md0-type-census` run.
pub fn aggregate_census(records: &[TrialRecord]) -> TypeCensus {
    let mut total = TypeCensus::default();
    for census in records.iter().filter_map(|r| r.census.as_deref()) {
        total.merge(census);
    }
    total
}

fn run_trial(
    config: &ExperimentConfig,
    unit: &TrialUnit,
) -> Result<Vec<TrialRecord>, ExperimentError> {
    let mut rng = ChaCha8Rng::seed_from_u64(unit.trial_seed);
    let graph = if config.kind.uses_regular_graphs() {
        random_regular_with_rng(unit.n, unit.d as usize, config.sampler, &mut rng)?
    } else {
        erdos_renyi_with_rng(unit.n, unit.d, &mut rng)?
    };
    let initial = SpinState::random(unit.n, &mut rng);
    let base = TrialRecord::new(
        config.kind,
        unit.d,
        unit.n,
        unit.trial_index,
        unit.trial_seed,
    );
    let max_steps = config
        .max_steps
        .unwrap_or_else(|| default_max_steps(&graph));

    let records = match config.kind {
        ExperimentKind::OscillationRegular | ExperimentKind::OscillationEr => {
            let mut record = base;
            if let Some(cycle) = limit_cycle(&graph, &initial, max_steps, &mut record)? {
                record.set_cycle(&cycle);
            }
            vec![record]
        }
        ExperimentKind::CoreAfterMd => {
            let mut record = base;
            if let Some(cycle) = limit_cycle(&graph, &initial, max_steps, &mut record)? {
                record.set_cycle(&cycle);
                record.has_positive_core = Some(has_positive_core(&graph, &cycle.state_a)?);
            }
            vec![record]
        }
        ExperimentKind::SwapInternalCut => {
            let mut process = SwapProcess::new(&graph, initial)?;
            let steps = process.run(&mut rng);
            let mut record = base;
            record.swap_steps = Some(steps);
            record.reached_internal_cut = Some(is_internal_cut(&graph, process.state()));
            vec![record]
        }
        ExperimentKind::SwapCoreVsSteps => {
            let mut process = SwapProcess::new(&graph, initial)?;
            let mut records = Vec::with_capacity(config.checkpoints.len());
            for checkpoint in &config.checkpoints {
                let target = checkpoint.resolve(unit.n);
                process.run_until(&mut rng, target);
                let mut record = base.clone();
                record.k = Some(target);
                record.swap_steps = Some(process.steps());
                record.has_positive_core = Some(has_positive_core(&graph, process.state())?);
                records.push(record);
            }
            records
        }
        ExperimentKind::Md0CoreVsK => {
            let mut records = Vec::with_capacity(config.k_values.len());
            let mut cur = initial.into_values();
            let mut next = vec![0; unit.n];
            let mut done = 0;
            for &k in &config.k_values {
                while done < k {
                    Stepper::Md0.step_into(&graph, &cur, &mut next);
                    std::mem::swap(&mut cur, &mut next);
                    done += 1;
                }
                let probed = SpinState::new(cur.clone())?.zeros_to_negative();
                let mut record = base.clone();
                record.k = Some(k);
                record.has_positive_core = Some(has_positive_core(&graph, &probed)?);
                records.push(record);
            }
            records
        }
        ExperimentKind::Md0TypeCensus => {
            let (census, last) = md0_type_census(&graph, &initial)?;
            let mut record = base;
            record.k = Some(CENSUS_STEPS);
            record.has_positive_core = Some(has_positive_core(&graph, &last.zeros_to_negative())?);
            record.census = Some(Box::new(census));
            vec![record]
        }
    };
    Ok(records)
}

/// MD limit cycle, or `None` after flagging the record when the cap is hit.
fn limit_cycle(
    graph: &Graph,
    initial: &SpinState,
    max_steps: usize,
    record: &mut TrialRecord,
) -> Result<Option<LimitCycle>, ExperimentError> {
    match run_to_limit_cycle(graph, initial, Stepper::Md, max_steps) {
        Ok(cycle) => Ok(Some(cycle)),
        Err(DynamicsError::NonConvergence { .. }) => {
            record.cap_hit = true;
            Ok(None)
        }
        Err(e) => Err(e.into()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(kind: ExperimentKind) -> ExperimentConfig {
        ExperimentConfig::new(kind, 42)
            .with_points(&[3.0], &[200])
            .with_trials(5)
    }

    #[test]
    fn kind_names_round_trip() {
        for kind in ExperimentKind::ALL {
            assert_eq!(kind.name().parse::<ExperimentKind>().unwrap(), kind);
        }
        assert!("figure-9".parse::<ExperimentKind>().is_err());
        let tags: std::collections::HashSet<u64> =
            ExperimentKind::ALL.iter().map(|k| k.seed_tag()).collect();
        assert_eq!(tags.len(), 7);
    }

    #[test]
    fn checkpoint_parsing() {
        assert_eq!(
            "1500".parse::<Checkpoint>().unwrap(),
            Checkpoint::Steps(1500)
        );
        assert_eq!(
            "0.15n".parse::<Checkpoint>().unwrap(),
            Checkpoint::PerVertex(0.15)
        );
        assert_eq!(Checkpoint::PerVertex(0.15).resolve(10_000), 1500);
        assert_eq!(Checkpoint::PerVertex(0.45).resolve(10_000), 4500);
        for bad in ["", "n", "-1n", "1.5", "x"] {
            assert!(bad.parse::<Checkpoint>().is_err(), "{bad}");
        }
    }

    #[test]
    fn trial_seed_depends_on_every_field() {
        let base = trial_seed(7, ExperimentKind::CoreAfterMd, 5.0, 1000, 3);
        assert_eq!(
            base,
            trial_seed(7, ExperimentKind::CoreAfterMd, 5.0, 1000, 3)
        );
        for other in [
            trial_seed(8, ExperimentKind::CoreAfterMd, 5.0, 1000, 3),
            trial_seed(7, ExperimentKind::OscillationRegular, 5.0, 1000, 3),
            trial_seed(7, ExperimentKind::CoreAfterMd, 7.0, 1000, 3),
            trial_seed(7, ExperimentKind::CoreAfterMd, 5.0, 1001, 3),
            trial_seed(7, ExperimentKind::CoreAfterMd, 5.0, 1000, 4),
        ] {
            assert_ne!(base, other);
        }
    }

    #[test]
    fn splitmix_reference_value() {
        // first output of the reference SplitMix64 generator seeded with 0
        assert_eq!(splitmix64(0), 0xE220_A839_7B1D_CDAF);
    }

    #[test]
    fn validation() {
        assert!(config(ExperimentKind::OscillationRegular)
            .validate()
            .is_ok());
        let mut c = config(ExperimentKind::OscillationRegular);
        c.trials = 0;
        assert!(c.validate().is_err());
        let c = config(ExperimentKind::OscillationRegular).with_points(&[3.0], &[201]);
        assert!(c.validate().is_err());
        let c = config(ExperimentKind::CoreAfterMd).with_points(&[3.5], &[200]);
        assert!(c.validate().is_err());
        let c = config(ExperimentKind::OscillationEr).with_points(&[3.5], &[201]);
        assert!(c.validate().is_ok());
        let c = config(ExperimentKind::OscillationEr).with_points(&[300.0], &[201]);
        assert!(c.validate().is_err());
        assert!(config(ExperimentKind::Md0CoreVsK).validate().is_err());
        let c = config(ExperimentKind::Md0CoreVsK).with_k_values(&[3, 1]);
        assert!(c.validate().is_err());
        assert!(config(ExperimentKind::SwapCoreVsSteps).validate().is_err());
        let c = config(ExperimentKind::SwapCoreVsSteps)
            .with_checkpoints(&[Checkpoint::PerVertex(0.5), Checkpoint::Steps(10)]);
        assert!(c.validate().is_err());
        let c = config(ExperimentKind::Md0TypeCensus).with_k_values(&[3]);
        assert!(c.validate().is_err());
    }

    #[test]
    fn runners_check_kind() {
        let c = config(ExperimentKind::SwapInternalCut);
        assert!(matches!(
            run_core_after_md(&c, Some(1)),
            Err(ExperimentError::WrongKind { .. })
        ));
        assert!(run_swap_experiments(&c, Some(1)).is_ok());
    }

    #[test]
    fn oscillation_records() {
        let records =
            run_oscillation_histogram(&config(ExperimentKind::OscillationRegular), Some(1))
                .unwrap();
        assert_eq!(records.len(), 5);
        for (i, r) in records.iter().enumerate() {
            assert_eq!(r.trial_index, i);
            assert_eq!(r.trial_seed, trial_seed(42, r.kind, 3.0, 200, i));
            assert!(matches!(r.period, Some(1 | 2)));
            let f = r.oscillating_fraction.unwrap();
            assert!((0.0..=1.0).contains(&f));
            assert!(r.has_positive_core.is_none());
        }
    }

    #[test]
    fn cap_hits_are_flagged() {
        let mut c = config(ExperimentKind::OscillationRegular);
        c.max_steps = Some(0);
        let records = run_experiment(&c, Some(1)).unwrap();
        assert!(records.iter().all(|r| r.cap_hit && r.period.is_none()));
    }

    #[test]
    fn per_checkpoint_and_per_k_records() {
        let c = config(ExperimentKind::SwapCoreVsSteps).with_checkpoints(&[
            Checkpoint::Steps(0),
            Checkpoint::PerVertex(0.2),
            Checkpoint::Steps(100_000),
        ]);
        let records = run_experiment(&c, Some(1)).unwrap();
        assert_eq!(records.len(), 15);
        for trial in records.chunks(3) {
            assert_eq!(trial[0].k, Some(0));
            assert_eq!(trial[0].swap_steps, Some(0));
            assert_eq!(trial[1].k, Some(40));
            assert!(trial[1].swap_steps.unwrap() <= 40);
            // past the fixed point the step count stops growing
            assert!(trial[2].swap_steps.unwrap() <= 300);
        }

        let c = config(ExperimentKind::Md0CoreVsK).with_k_values(&[0, 2, 2, 4]);
        let records = run_experiment(&c, Some(1)).unwrap();
        assert_eq!(records.len(), 20);
        assert_eq!(records[1].has_positive_core, records[2].has_positive_core);
    }

    #[test]
    fn census_records_sum_to_n() {
        let records = run_experiment(&config(ExperimentKind::Md0TypeCensus), Some(1)).unwrap();
        for r in &records {
            assert_eq!(r.census.as_ref().unwrap().total(), 200);
            assert_eq!(r.k, Some(4));
        }
        assert_eq!(aggregate_census(&records).total(), 1000);
    }

    #[test]
    fn er_trials_run() {
        let c = ExperimentConfig::new(ExperimentKind::OscillationEr, 1)
            .with_points(&[2.5], &[300])
            .with_trials(4);
        let records = run_experiment(&c, Some(2)).unwrap();
        assert_eq!(records.len(), 4);
        assert!(records.iter().all(|r| r.period.is_some()));
    }
}
