//! Run reports: one text line per run plus a JSON sidecar with the journal
//! and audit details.

use std::collections::BTreeMap;
use std::time::Duration;

use serde::Serialize;

use crate::tape::SubRun;

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub instance: String,
    pub algorithm: String,
    pub result: String,
    pub oracle: Option<String>,
    /// `None` when no oracle was consulted.
    pub agrees: Option<bool>,
    /// Compression events by case, summed over every tape run.
    pub events: BTreeMap<String, usize>,
    pub bits_saved: u64,
    /// Every tape the algorithm touched was restored bit for bit.
    pub restored: bool,
    /// Uniqueness checks made, and how many did not find exactly one value.
    pub audit_checks: usize,
    pub audit_violations: usize,
    pub wall_ms: f64,
    pub runs: Vec<SubRun>,
}

impl RunReport {
    pub fn new(instance: impl Into<String>, algorithm: impl Into<String>, result: impl Into<String>, runs: Vec<SubRun>, wall: Duration) -> Self {
        let mut events = BTreeMap::new();
        let mut bits_saved = 0;
        let (mut checks, mut violations) = (0, 0);
        for run in &runs {
            for (case, count) in &run.summary.events {
                *events.entry(case.clone()).or_insert(0) += count;
            }
            bits_saved += run.summary.bits_saved;
            for ev in &run.audit {
                checks += 1;
                violations += usize::from(ev.candidates != 1);
            }
        }
        RunReport {
            instance: instance.into(),
            algorithm: algorithm.into(),
            result: result.into(),
            oracle: None,
            agrees: None,
            events,
            bits_saved,
            restored: runs.iter().all(|r| r.restored),
            audit_checks: checks,
            audit_violations: violations,
            wall_ms: wall.as_secs_f64() * 1e3,
            runs,
        }
    }

    /// A run that ended in an error.
    pub fn failed(instance: impl Into<String>, algorithm: impl Into<String>, error: impl std::fmt::Display, wall: Duration) -> Self {
        let mut r = RunReport::new(instance, algorithm, format!("error: {error}"), Vec::new(), wall);
        r.agrees = Some(false);
        r
    }

    pub fn with_oracle(mut self, oracle: impl Into<String>, agrees: bool) -> Self {
        self.oracle = Some(oracle.into());
        self.agrees = Some(agrees);
        self
    }

    pub fn passed(&self) -> bool {
        self.restored && self.agrees != Some(false) && self.audit_violations == 0
    }

    pub fn line(&self) -> String {
        let events: Vec<String> = self.events.iter().map(|(k, v)| format!("{k}={v}")).collect();
        let oracle = match (&self.oracle, self.agrees) {
            (Some(o), Some(true)) => format!(" oracle={o} (agree)"),
            (Some(o), _) => format!(" oracle={o} (DISAGREE)"),
            _ => String::new(),
        };
        format!(
            "{} {} {}: {}{} | events [{}] saved={}b restored={} {:.1}ms",
            if self.passed() { "ok  " } else { "FAIL" },
            self.algorithm,
            self.instance,
            self.result,
            oracle,
            events.join(" "),
            self.bits_saved,
            self.restored,
            self.wall_ms
        )
    }
}

pub fn reports_to_json(reports: &[RunReport]) -> String {
    serde_json::to_string_pretty(reports).expect("reports serialize")
}
