use std::fmt::Write as _;
use std::io;

use super::{ExperimentKind, TypeCensus};
use crate::dynamics::LimitCycle;

pub const CSV_HEADER: &str = "kind,d,n,trial_index,trial_seed,T_converge,period,oscillating_fraction,has_positive_core,reached_internal_cut,swap_steps,k";

/// Outcome of one trial (or one trial at one `k` / checkpoint). Fields that
/// do not apply to the experiment kind stay `None`.
#[derive(Clone, Debug, PartialEq)]
pub struct TrialRecord {
    pub kind: ExperimentKind,
    pub d: f64,
    pub n: usize,
    pub trial_index: usize,
    pub trial_seed: u64,
    pub t_converge: Option<usize>,
    pub period: Option<u8>,
    pub oscillating_fraction: Option<f64>,
    pub has_positive_core: Option<bool>,
    pub reached_internal_cut: Option<bool>,
    pub swap_steps: Option<usize>,
    /// MD0 steps, or the swap-step checkpoint for `swap-core-vs-steps`.
    pub k: Option<usize>,
    pub census: Option<Box<TypeCensus>>,
    /// The synchronous run hit its step cap before reaching a limit cycle.
    pub cap_hit: bool,
}

impl TrialRecord {
    pub fn new(
        kind: ExperimentKind,
        d: f64,
        n: usize,
        trial_index: usize,
        trial_seed: u64,
    ) -> Self {
        Self {
            kind,
            d,
            n,
            trial_index,
            trial_seed,
            t_converge: None,
            period: None,
            oscillating_fraction: None,
            has_positive_core: None,
            reached_internal_cut: None,
            swap_steps: None,
            k: None,
            census: None,
            cap_hit: false,
        }
    }

    pub(crate) fn set_cycle(&mut self, cycle: &LimitCycle) {
        self.t_converge = Some(cycle.t_converge);
        self.period = Some(cycle.period);
        self.oscillating_fraction = Some(cycle.oscillating_fraction());
    }

    /// One CSV data row, without the trailing newline.
    pub fn csv_row(&self) -> String {
        fn opt<T: ToString>(v: Option<T>) -> String {
            v.map(|v| v.to_string()).unwrap_or_default()
        }
        let flag = |b: Option<bool>| opt(b.map(u8::from));
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            self.kind,
            self.d,
            self.n,
            self.trial_index,
            self.trial_seed,
            opt(self.t_converge),
            opt(self.period),
            self.oscillating_fraction
                .map(|f| format!("{f:.10}"))
                .unwrap_or_default(),
            flag(self.has_positive_core),
            flag(self.reached_internal_cut),
            opt(self.swap_steps),
            opt(self.k),
        )
    }
}

pub fn records_to_csv(records: &[TrialRecord]) -> String {
    let mut out = String::with_capacity(CSV_HEADER.len() + 1 + records.len() * 96);
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in records {
        writeln!(out, "{}", r.csv_row()).unwrap();
    }
    out
}

pub fn write_records_csv<W: io::Write>(mut writer: W, records: &[TrialRecord]) -> io::Result<()> {
    writer.write_all(records_to_csv(records).as_bytes())?;
    writer.flush()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn row_formatting() {
        let mut r = TrialRecord::new(ExperimentKind::CoreAfterMd, 5.0, 1000, 3, 123);
        r.t_converge = Some(17);
        r.period = Some(2);
        r.oscillating_fraction = Some(0.4987);
        r.has_positive_core = Some(false);
        assert_eq!(
            r.csv_row(),
            "core-after-md,5,1000,3,123,17,2,0.4987000000,0,,,"
        );
        let mut r = TrialRecord::new(ExperimentKind::OscillationEr, 2.5, 10, 0, u64::MAX);
        r.reached_internal_cut = Some(true);
        r.swap_steps = Some(4);
        r.k = Some(0);
        assert_eq!(
            r.csv_row(),
            "oscillation-er,2.5,10,0,18446744073709551615,,,,,1,4,0"
        );
    }

    #[test]
    fn header_and_rows() {
        let records = vec![TrialRecord::new(
            ExperimentKind::SwapInternalCut,
            5.0,
            10,
            0,
            1,
        )];
        let csv = records_to_csv(&records);
        assert_eq!(csv.lines().next(), Some(CSV_HEADER));
        assert_eq!(csv.lines().count(), 2);
        assert!(csv.ends_with('\n'));
        let mut buf = Vec::new();
        write_records_csv(&mut buf, &records).unwrap();
        assert_eq!(buf, csv.as_bytes());
    }

    #[test]
    fn small_fractions_keep_six_significant_digits() {
        let mut r = TrialRecord::new(ExperimentKind::OscillationRegular, 3.0, 100_000, 0, 1);
        r.oscillating_fraction = Some(1.0 / 30_000.0);
        assert!(r.csv_row().contains(",0.0000333333,"));
    }
}
