use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::config::Expectation;

/// Residuals under this multiple of the tolerance may pass with a warning
/// when the computation itself flagged an accuracy problem.
pub const WARNING_SLACK: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    PassWithWarning,
    Fail,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::PassWithWarning => "pass-with-warning",
            Status::Fail => "fail",
        }
    }

    pub fn passed(self) -> bool {
        self != Status::Fail
    }
}

/// What a check is for. Identity checks test the mathematical statement and
/// are compared against the expectation; consistency checks must always hold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Identity,
    Consistency,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub role: Role,
    pub residual: f64,
    pub tolerance: f64,
    pub status: Status,
}

impl Check {
    pub fn new(name: impl Into<String>, role: Role, residual: f64, tolerance: f64, accuracy_warning: bool) -> Self {
        let within = |t: f64| residual < t || residual == 0.0;
        let status = match (within(tolerance), accuracy_warning) {
            (true, false) => Status::Pass,
            (true, true) => Status::PassWithWarning,
            (false, true) if within(WARNING_SLACK * tolerance) => Status::PassWithWarning,
            _ => Status::Fail,
        };
        Check { name: name.into(), role, residual, tolerance, status }
    }

    pub fn identity(name: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        Check::new(name, Role::Identity, residual, tolerance, false)
    }

    /// A yes/no condition recorded as residual 0 or 1.
    pub fn condition(name: impl Into<String>, holds: bool) -> Self {
        Check::new(name, Role::Consistency, if holds { 0.0 } else { 1.0 }, 0.0, false)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CharacterRow {
    pub label: String,
    pub residual: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FullSpace {
    pub residual: f64,
    pub pass: bool,
}

/// Non-deterministic data, excluded from comparisons.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct Metadata {
    pub wall_time_s: f64,
    pub timestamp_unix: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub experiment: String,
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub group: Option<String>,
    pub expect: Expectation,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub characters: Option<Vec<CharacterRow>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub full_space: Option<FullSpace>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub joint_consistent: Option<bool>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty", default)]
    pub details: BTreeMap<String, serde_json::Value>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub warnings: Vec<String>,
    /// Whether every identity check held.
    pub identity_holds: bool,
    pub status: Status,
    pub metadata: Metadata,
}

impl Report {
    pub fn new(experiment: impl Into<String>, kind: &str, expect: Expectation) -> Self {
        Report {
            experiment: experiment.into(),
            kind: kind.into(),
            group: None,
            expect,
            checks: Vec::new(),
            characters: None,
            full_space: None,
            joint_consistent: None,
            details: BTreeMap::new(),
            warnings: Vec::new(),
            identity_holds: true,
            status: Status::Pass,
            metadata: Metadata::default(),
        }
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn detail(&mut self, key: &str, value: impl Serialize) {
        self.details.insert(key.into(), serde_json::to_value(value).unwrap_or(serde_json::Value::Null));
    }

    /// Sets `identity_holds` and `status` from the checks and the expectation.
    /// With `expect: fail` the report passes when some identity check fails.
    pub fn finalize(&mut self) {
        let identity: Vec<&Check> = self.checks.iter().filter(|c| c.role == Role::Identity).collect();
        self.identity_holds = identity.iter().all(|c| c.status.passed());
        let consistent = self.checks.iter().filter(|c| c.role == Role::Consistency).all(|c| c.status.passed());
        let warned = self.checks.iter().any(|c| c.status == Status::PassWithWarning);
        let expected = match self.expect {
            Expectation::Pass => self.identity_holds,
            Expectation::Fail => !identity.is_empty() && !self.identity_holds,
        };
        self.status = match (consistent && expected, warned) {
            (false, _) => Status::Fail,
            (true, true) => Status::PassWithWarning,
            (true, false) => Status::Pass,
        };
    }

    /// The report as JSON without the metadata field.
    pub fn deterministic_json(&self) -> String {
        let mut v = serde_json::to_value(self).expect("reports serialize");
        if let Some(o) = v.as_object_mut() {
            o.remove("metadata");
        }
        serde_json::to_string_pretty(&v).expect("reports serialize")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub passed_with_warning: usize,
    pub failed: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct Batch {
    pub reports: Vec<Report>,
    pub summary: Summary,
}

impl Batch {
    pub fn new(reports: Vec<Report>) -> Self {
        let mut s = Summary { total: reports.len(), ..Summary::default() };
        for r in &reports {
            match r.status {
                Status::Pass => s.passed += 1,
                Status::PassWithWarning => s.passed_with_warning += 1,
                Status::Fail => s.failed += 1,
            }
        }
        Batch { reports, summary: s }
    }

    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Markdown,
}

impl std::str::FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "md" | "markdown" => Ok(Format::Markdown),
            _ => Err(format!("unknown format '{s}' (json, csv, md)")),
        }
    }
}

/// One flattened CSV line: a check of a report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CsvRow {
    pub experiment: String,
    pub kind: String,
    pub check: String,
    pub role: Role,
    pub residual: f64,
    pub tolerance: f64,
    pub check_status: Status,
    pub report_status: Status,
}

pub fn flatten(batch: &Batch) -> Vec<CsvRow> {
    batch
        .reports
        .iter()
        .flat_map(|r| {
            r.checks.iter().map(move |c| CsvRow {
                experiment: r.experiment.clone(),
                kind: r.kind.clone(),
                check: c.name.clone(),
                role: c.role,
                residual: c.residual,
                tolerance: c.tolerance,
                check_status: c.status,
                report_status: r.status,
            })
        })
        .collect()
}

pub fn to_csv(batch: &Batch) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let rows = flatten(batch);
    if rows.is_empty() {
        w.write_record(["experiment", "kind", "check", "role", "residual", "tolerance", "check_status", "report_status"])
            .expect("in-memory write");
    }
    for row in rows {
        w.serialize(row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory write")).expect("csv is utf-8")
}

pub fn parse_csv(text: &str) -> csv::Result<Vec<CsvRow>> {
    csv::Reader::from_reader(text.as_bytes()).deserialize().collect()
}

pub fn to_markdown(batch: &Batch) -> String {
    let s = &batch.summary;
    let mut out = String::new();
    let _ = writeln!(out, "# Verification report\n");
    let _ = writeln!(
        out,
        "{} experiments: {} pass, {} pass with warning, {} fail\n",
        s.total, s.passed, s.passed_with_warning, s.failed
    );
    if batch.reports.is_empty() {
        return out;
    }
    let _ = writeln!(out, "| experiment | kind | expect | checks passed | status |");
    let _ = writeln!(out, "|---|---|---|---|---|");
    for r in &batch.reports {
        let ok = r.checks.iter().filter(|c| c.status.passed()).count();
        let expect = match r.expect {
            Expectation::Pass => "pass",
            Expectation::Fail => "fail",
        };
        let _ = writeln!(out, "| {} | {} | {expect} | {ok}/{} | {} |", r.experiment, r.kind, r.checks.len(), r.status.name());
    }
    for r in &batch.reports {
        let _ = writeln!(out, "\n## {}\n", r.experiment);
        let _ = writeln!(out, "| check | residual | tolerance | status |");
        let _ = writeln!(out, "|---|---|---|---|");
        for c in &r.checks {
            let _ = writeln!(out, "| {} | {:.3e} | {:.1e} | {} |", c.name, c.residual, c.tolerance, c.status.name());
        }
        for w in &r.warnings {
            let _ = writeln!(out, "\nwarning: {w}");
        }
    }
    out
}

pub fn render(batch: &Batch, fmt: Format) -> String {
    match fmt {
        Format::Json => {
            let mut s = if batch.reports.len() == 1 {
                serde_json::to_string_pretty(&batch.reports[0])
            } else {
                serde_json::to_string_pretty(batch)
            }
            .expect("reports serialize");
            s.push('\n');
            s
        }
        Format::Csv => to_csv(batch),
        Format::Markdown => to_markdown(batch),
    }
}

/// Writes the batch to `path`, or to stdout when no path is given.
pub fn emit_report(batch: &Batch, fmt: Format, path: Option<&Path>) -> anyhow::Result<()> {
    let text = render(batch, fmt);
    match path {
        Some(p) => {
            std::fs::write(p, text).map_err(|e| anyhow::anyhow!("cannot write {}: {e}", p.display()))?;
        }
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Batch {
        let mut r = Report::new("t", "transfer-product", Expectation::Pass);
        r.push(Check::identity("trivial", 1.25e-15, 1e-9));
        r.push(Check::new("berezin", Role::Identity, 3e-6, 1e-6, true));
        r.push(Check::condition("joint_consistent", true));
        r.finalize();
        Batch::new(vec![r])
    }

    #[test]
    fn warnings_within_slack() {
        let b = sample();
        assert_eq!(b.reports[0].checks[1].status, Status::PassWithWarning);
        assert_eq!(b.reports[0].status, Status::PassWithWarning);
        assert_eq!(Check::new("x", Role::Identity, 2e-5, 1e-6, true).status, Status::Fail);
        assert_eq!(Check::new("x", Role::Identity, 2e-6, 1e-6, false).status, Status::Fail);
    }

    #[test]
    fn expected_failures() {
        let mut r = Report::new("neg", "lemma-pr", Expectation::Fail);
        r.push(Check::identity("operator", 0.5, 1e-9));
        r.push(Check::condition("agreement", true));
        r.finalize();
        assert!(!r.identity_holds);
        assert_eq!(r.status, Status::Pass);
        r.checks[1] = Check::condition("agreement", false);
        r.finalize();
        assert_eq!(r.status, Status::Fail);
    }

    #[test]
    fn csv_round_trip() {
        let b = sample();
        let text = to_csv(&b);
        assert_eq!(parse_csv(&text).unwrap(), flatten(&b));
        assert!(parse_csv(&to_csv(&Batch::new(vec![]))).unwrap().is_empty());
    }

    #[test]
    fn empty_report_renders() {
        let b = Batch::new(vec![]);
        assert!(to_markdown(&b).contains("0 experiments"));
        let v: serde_json::Value = serde_json::from_str(&render(&b, Format::Json)).unwrap();
        assert_eq!(v["summary"]["total"], 0);
    }
}
