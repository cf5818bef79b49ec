//! Structured verification results shared by every module and the CLI.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

/// How far a check is from holding.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Residual {
    /// The identity holds exactly.
    ExactZero,
    /// Exact nonzero residual, rendered as text; `index` locates the first
    /// offending coefficient when that makes sense.
    Exact { value: String, index: Option<i64> },
    /// Largest absolute deviation of a floating-point check.
    MaxAbs { value: f64 },
    /// Nothing to measure (structural or skipped checks).
    None,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub residual: Residual,
    /// Truncation order for series checks.
    pub order: Option<u32>,
    pub tolerance: Option<f64>,
    /// Wall time in milliseconds; left empty unless timing is requested so
    /// that reports are reproducible byte for byte.
    pub wall_ms: Option<f64>,
    /// Free-form extra data (computed constants, scalars, ...).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    pub fn exact(name: impl Into<String>, residual: Option<(String, Option<i64>)>) -> Self {
        let (status, residual) = match residual {
            None => (Status::Pass, Residual::ExactZero),
            Some((value, index)) => (Status::Fail, Residual::Exact { value, index }),
        };
        Check { name: name.into(), status, residual, order: None, tolerance: None, wall_ms: None, detail: None }
    }

    pub fn numeric(name: impl Into<String>, value: f64, tol: f64) -> Self {
        let status = if value.is_finite() && value < tol { Status::Pass } else { Status::Fail };
        Check {
            name: name.into(),
            status,
            residual: Residual::MaxAbs { value },
            order: None,
            tolerance: Some(tol),
            wall_ms: None,
            detail: None,
        }
    }

    pub fn flag(name: impl Into<String>, ok: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            residual: Residual::None,
            order: None,
            tolerance: None,
            wall_ms: None,
            detail: Some(detail.into()),
        }
    }

    pub fn skipped(name: impl Into<String>, why: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            status: Status::Skipped,
            residual: Residual::None,
            order: None,
            tolerance: None,
            wall_ms: None,
            detail: Some(why.into()),
        }
    }

    pub fn with_order(mut self, order: u32) -> Self {
        self.order = Some(order);
        self
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub suite: String,
    pub checks: Vec<Check>,
    /// Wall time per block in milliseconds, filled only on request.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub timings: BTreeMap<String, f64>,
}

impl Report {
    pub fn new(suite: impl Into<String>) -> Self {
        Report { suite: suite.into(), checks: Vec::new(), timings: BTreeMap::new() }
    }

    pub fn push(&mut self, c: Check) {
        self.checks.push(c);
    }

    /// Run `f`, stamp its wall time, and record the check.
    pub fn timed(&mut self, record_time: bool, f: impl FnOnce() -> Check) {
        let t = Instant::now();
        let mut c = f();
        if record_time {
            c.wall_ms = Some(t.elapsed().as_secs_f64() * 1e3);
        }
        self.checks.push(c);
    }

    /// Run a block that produces a whole report, merge it, and record its
    /// wall time under `label` when asked.
    pub fn timed_block<E>(
        &mut self,
        record_time: bool,
        label: &str,
        f: impl FnOnce() -> Result<Report, E>,
    ) -> Result<(), E> {
        let t = Instant::now();
        let sub = f()?;
        if record_time {
            self.timings.insert(label.to_string(), t.elapsed().as_secs_f64() * 1e3);
        }
        self.extend(sub);
        Ok(())
    }

    pub fn extend(&mut self, other: Report) {
        self.timings.extend(other.timings);
        let prefix = other.suite;
        for mut c in other.checks {
            if !prefix.is_empty() && prefix != self.suite {
                c.name = format!("{prefix}/{}", c.name);
            }
            self.checks.push(c);
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }

    pub fn sorted(mut self) -> Self {
        self.checks.sort_by(|a, b| a.name.cmp(&b.name));
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.clone().sorted()).expect("report serializes")
    }

    /// One line per check.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.clone().sorted().checks {
            let status = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Skipped => "SKIP",
            };
            let residual = match &c.residual {
                Residual::ExactZero => "residual=0".to_string(),
                Residual::Exact { value, index: Some(i) } => format!("residual={value} at index {i}"),
                Residual::Exact { value, index: None } => format!("residual={value}"),
                Residual::MaxAbs { value } => format!("max|err|={value:.3e}"),
                Residual::None => String::new(),
            };
            let mut line = format!("{status}  {}  {residual}", c.name);
            if let Some(o) = c.order {
                line.push_str(&format!("  order={o}"));
            }
            if let Some(t) = c.tolerance {
                line.push_str(&format!("  tol={t:e}"));
            }
            if let Some(w) = c.wall_ms {
                line.push_str(&format!("  {w:.1}ms"));
            }
            if let Some(d) = &c.detail {
                line.push_str(&format!("  [{d}]"));
            }
            out.push_str(line.trim_end());
            out.push('\n');
        }
        for (label, ms) in &self.timings {
            out.push_str(&format!("TIME  {label}  {ms:.1}ms\n"));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_is_sorted_and_round_trips() {
        let mut r = Report::new("demo");
        r.push(Check::exact("b", None));
        r.push(Check::exact("a", Some(("3".into(), Some(2)))));
        let s = r.to_json();
        let back: Report = serde_json::from_str(&s).unwrap();
        assert_eq!(back.checks[0].name, "a");
        assert!(!back.passed());
        assert_eq!(r.to_text().lines().count(), 2);
        assert!(r.to_text().contains("residual=3 at index 2"));
    }
}
