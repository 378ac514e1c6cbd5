//! Machine-readable reports (`curvpos.report/v1`).
//!
//! Field order is fixed by the struct layout, maps are ordered, and timings
//! are only present when requested, so identical inputs give byte-identical
//! JSON.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use curvpos_core::positivity::Verdict;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::exit;

pub const REPORT_SCHEMA: &str = "curvpos.report/v1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub schema: String,
    pub tool: Tool,
    pub command: String,
    pub input: Input,
    pub seed: u64,
    pub tolerance: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bundle: Option<BundleInfo>,
    pub verdicts: Vec<VerdictRecord>,
    pub checks: Vec<Check>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timings: Option<BTreeMap<String, f64>>,
    pub outcome: Outcome,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tool {
    pub name: String,
    pub version: String,
}

impl Tool {
    pub fn current() -> Self {
        Self { name: env!("CARGO_PKG_NAME").into(), version: env!("CARGO_PKG_VERSION").into() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Input {
    /// `sha256:<hex>` of the spec bytes, or of `suite:<name>`.
    pub digest: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub suite: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BundleInfo {
    pub base_dim: usize,
    pub rank: usize,
}

/// Witness component `u^{iα}` with 1-based indices.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessEntry {
    pub base: usize,
    pub fiber: usize,
    pub re: f64,
    pub im: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerdictRecord {
    pub label: String,
    pub test: String,
    pub classification: String,
    pub margin: f64,
    pub max_value: f64,
    pub tolerance: f64,
    pub method: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub starts_used: Option<usize>,
    pub inconclusive: bool,
    pub witness: Vec<WitnessEntry>,
}

impl VerdictRecord {
    pub fn new(label: impl Into<String>, test: &str, v: &Verdict, rank: usize) -> Self {
        let witness = v
            .witness
            .iter()
            .enumerate()
            .map(|(p, z)| WitnessEntry { base: p / rank + 1, fiber: p % rank + 1, re: z.re, im: z.im })
            .collect();
        Self {
            label: label.into(),
            test: test.into(),
            classification: v.classification.as_str().into(),
            margin: v.margin,
            max_value: v.max_value,
            tolerance: v.tolerance,
            method: v.method.as_str().into(),
            starts_used: v.starts_used,
            inconclusive: v.inconclusive,
            witness,
        }
    }

    pub fn is_positive(&self) -> bool {
        self.classification == "positive"
    }

    /// Non-positivity is settled when the test was exact or converged, or
    /// when the witness already gives a value below `-tolerance`.
    pub fn is_refuted(&self) -> bool {
        !self.is_positive() && (!self.inconclusive || self.margin < -self.tolerance)
    }
}

/// A named numeric check with its acceptance condition in words.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub expected: String,
    pub passed: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, value: f64, expected: impl Into<String>, passed: bool) -> Self {
        Self { name: name.into(), value, expected: expected.into(), passed }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Outcome {
    pub status: String,
    pub exit_code: i32,
}

impl Outcome {
    /// Certification outcome: every verdict must be positive; a shortfall
    /// that is only an unconverged Griffiths search is inconclusive.
    pub fn from_certification(verdicts: &[VerdictRecord], checks: &[Check]) -> Self {
        let failed = checks.iter().any(|c| !c.passed) || verdicts.iter().any(VerdictRecord::is_refuted);
        if failed {
            Self { status: "not_positive".into(), exit_code: exit::NOT_POSITIVE }
        } else if verdicts.iter().any(|v| v.inconclusive) {
            Self { status: "inconclusive".into(), exit_code: exit::INCONCLUSIVE }
        } else {
            Self { status: "positive".into(), exit_code: exit::POSITIVE }
        }
    }

    /// Suite outcome: decided by the checks alone.
    pub fn from_checks(checks: &[Check]) -> Self {
        if checks.iter().all(|c| c.passed) {
            Self { status: "passed".into(), exit_code: exit::POSITIVE }
        } else {
            Self { status: "failed".into(), exit_code: exit::NOT_POSITIVE }
        }
    }
}

pub fn sha256_digest(bytes: &[u8]) -> String {
    format!("sha256:{}", hex::encode(Sha256::digest(bytes)))
}

/// Pretty JSON, newline-terminated.
pub fn to_json(report: &Report) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}

pub fn from_json(text: &str) -> serde_json::Result<Report> {
    serde_json::from_str(text)
}

/// Human-readable summary.
pub fn render_text(report: &Report) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} {} {}", report.tool.name, report.tool.version, report.command);
    match &report.input.suite {
        Some(name) => {
            let _ = writeln!(out, "suite {name}, seed {}", report.seed);
        }
        None => {
            let _ = writeln!(out, "input {}, seed {}", report.input.digest, report.seed);
        }
    }
    if let Some(b) = report.bundle {
        let _ = writeln!(out, "bundle: base_dim {}, rank {}", b.base_dim, b.rank);
    }
    let width = report.verdicts.iter().map(|v| v.label.len()).max().unwrap_or(0);
    for v in &report.verdicts {
        let _ = writeln!(
            out,
            "  {:width$}  {:<13} margin {:>+.6e}  {}{}",
            v.label,
            v.classification,
            v.margin,
            v.method,
            if v.inconclusive { " (inconclusive)" } else { "" },
        );
    }
    let width = report.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
    for c in &report.checks {
        let _ = writeln!(
            out,
            "  {} {:width$}  {:.6e}  ({})",
            if c.passed { "ok  " } else { "FAIL" },
            c.name,
            c.value,
            c.expected
        );
    }
    if let Some(t) = &report.timings {
        for (name, secs) in t {
            let _ = writeln!(out, "  time {name}: {secs:.3}s");
        }
    }
    let _ = writeln!(out, "{} (exit {})", report.outcome.status, report.outcome.exit_code);
    out
}
