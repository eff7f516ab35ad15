//! Verification report: flat list of checks plus run metadata.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize)]
pub struct Entry {
    pub check_id: String,
    pub params: BTreeMap<String, Value>,
    pub metric: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Entry {
    /// `pass ⇔ metric ≤ tolerance`, false for a non-finite metric.
    pub fn new(check_id: impl Into<String>, metric: f64, tolerance: f64) -> Self {
        Self {
            check_id: check_id.into(),
            params: BTreeMap::new(),
            metric,
            tolerance,
            pass: metric.is_finite() && metric <= tolerance,
        }
    }

    /// A check that `value > threshold`, stored as `−value ≤ −threshold`.
    pub fn exceeds(check_id: impl Into<String>, value: f64, threshold: f64) -> Self {
        Self::new(check_id, -value, -threshold).param("direction", "value > -tolerance")
    }

    /// A check that could not be evaluated.
    pub fn failed(check_id: impl Into<String>, tolerance: f64, reason: impl ToString) -> Self {
        Self::new(check_id, f64::INFINITY, tolerance).param("error", reason.to_string())
    }

    pub fn param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.params.insert(key.to_owned(), value.into());
        self
    }

    /// [`Entry::new`] from a fallible measurement.
    pub fn measured(
        check_id: impl Into<String>,
        metric: lawsonlab::Result<f64>,
        tolerance: f64,
    ) -> Self {
        match metric {
            Ok(m) => Self::new(check_id, m, tolerance),
            Err(e) => Self::failed(check_id, tolerance, e),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema: u32,
    pub version: &'static str,
    pub suite: String,
    pub node_count: usize,
    pub fd_step: f64,
    pub seed: u64,
    pub metric_scale: f64,
    pub passed: bool,
    pub entries: Vec<Entry>,
}

impl Report {
    pub fn new(suite: &str, meta: &RunMeta, mut entries: Vec<Entry>) -> Self {
        entries.sort_by(|a, b| a.check_id.cmp(&b.check_id));
        Self {
            schema: SCHEMA_VERSION,
            version: env!("CARGO_PKG_VERSION"),
            suite: suite.to_owned(),
            node_count: meta.node_count,
            fd_step: meta.fd_step,
            seed: meta.seed,
            metric_scale: meta.metric_scale,
            passed: entries.iter().all(|e| e.pass),
            entries,
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &Entry> {
        self.entries.iter().filter(|e| !e.pass)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// One line per entry, then a summary line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            out += &format!(
                "{} {:<44} metric={:.3e} tol={:.1e}\n",
                if e.pass { "PASS" } else { "FAIL" },
                e.check_id,
                e.metric,
                e.tolerance
            );
        }
        let failed = self.failures().count();
        out += &format!(
            "{}: {}/{} checks passed\n",
            self.suite,
            self.entries.len() - failed,
            self.entries.len()
        );
        out
    }
}

/// Settings shared by every suite of a run.
#[derive(Debug, Clone, Copy)]
pub struct RunMeta {
    pub seed: u64,
    pub node_count: usize,
    pub fd_step: f64,
    pub metric_scale: f64,
}
