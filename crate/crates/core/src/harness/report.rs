use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::config::{OutputFormat, RunConfig, Suite};
use crate::error::{Error, Result};
use crate::operators::Calibration;

/// Residuals below this carry no convergence information.
const ROUND_OFF: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckKind {
    /// Final residual `<= threshold`.
    AtMost,
    /// Final value `>= threshold`.
    AtLeast,
    /// Every step shrinks, allowing relative growth up to `threshold`.
    Decreasing,
    /// Smallest observed convergence order `>= threshold`.
    MinOrder,
    /// Reported only.
    Info,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub statement: String,
    pub kind: CheckKind,
    /// Ladder entries the residuals were measured at (empty for sampled checks).
    pub nodes: Vec<usize>,
    pub residuals: Vec<f64>,
    /// `log(r_i / r_{i+1}) / log(N_{i+1} / N_i)`, present for ladders of length >= 3.
    pub orders: Vec<f64>,
    pub threshold: Option<f64>,
    pub hard: bool,
    pub passed: bool,
    pub flag: Option<String>,
}

/// Residuals of one quantity across a ladder.
#[derive(Clone, Debug)]
pub struct Series {
    pub name: String,
    pub statement: String,
    pub nodes: Vec<usize>,
    pub residuals: Vec<f64>,
}

impl Series {
    pub fn new(name: &str, statement: &str) -> Self {
        Series { name: name.into(), statement: statement.into(), nodes: vec![], residuals: vec![] }
    }

    pub fn single(name: &str, statement: &str, value: f64) -> Self {
        Series { name: name.into(), statement: statement.into(), nodes: vec![], residuals: vec![value] }
    }

    pub fn push(&mut self, nodes: usize, value: f64) {
        self.nodes.push(nodes);
        self.residuals.push(value);
    }

    pub fn last(&self) -> Option<f64> {
        self.residuals.last().copied()
    }

    /// Convergence orders, only for ladders of three or more values above
    /// round-off.
    pub fn orders(&self) -> Vec<f64> {
        if self.residuals.len() < 3
            || self.nodes.len() != self.residuals.len()
            || self.residuals.iter().any(|r| *r < ROUND_OFF)
        {
            return vec![];
        }
        let orders: Vec<f64> = self
            .residuals
            .windows(2)
            .zip(self.nodes.windows(2))
            .map(|(r, m)| (r[0] / r[1]).ln() / (m[1] as f64 / m[0] as f64).ln())
            .collect();
        if orders.iter().all(|o| o.is_finite()) {
            orders
        } else {
            vec![]
        }
    }
}

impl Check {
    pub fn new(series: &Series, kind: CheckKind, threshold: Option<f64>, hard: bool) -> Self {
        let orders = series.orders();
        let mut flag = None;
        let finite = series.residuals.iter().all(|r| r.is_finite());
        let residuals = if finite {
            series.residuals.clone()
        } else {
            flag = Some("non-finite".to_string());
            series.residuals.iter().map(|r| if r.is_finite() { *r } else { f64::MAX }).collect()
        };
        let last = residuals.last().copied();
        let passed = finite
            && match (kind, threshold, last) {
                (CheckKind::Info, _, _) => true,
                (_, None, _) | (_, _, None) => false,
                (CheckKind::AtMost, Some(t), Some(r)) => r <= t,
                (CheckKind::AtLeast, Some(t), Some(r)) => r >= t,
                (CheckKind::Decreasing, Some(t), _) => {
                    residuals.len() >= 2 && residuals.windows(2).all(|w| w[1] < w[0] * (1.0 + t))
                }
                (CheckKind::MinOrder, Some(t), _) => {
                    !orders.is_empty() && orders.iter().all(|o| *o >= t)
                }
            };
        Check {
            name: series.name.clone(),
            statement: series.statement.clone(),
            kind,
            nodes: series.nodes.clone(),
            residuals,
            orders,
            threshold: if kind == CheckKind::Info { None } else { threshold },
            hard: hard && kind != CheckKind::Info,
            passed,
            flag,
        }
    }

    pub fn with_flag(mut self, flag: Option<&str>) -> Self {
        if let Some(f) = flag {
            self.flag = Some(f.to_string());
        }
        self
    }

    /// Renames the check (the series name stays the threshold key).
    pub fn named(mut self, name: &str) -> Self {
        self.name = name.to_string();
        self
    }

    pub fn last(&self) -> Option<f64> {
        self.residuals.last().copied()
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Report {
    pub suite: Suite,
    pub anchor: String,
    pub config: RunConfig,
    pub surface: Option<String>,
    pub checks: Vec<Check>,
    pub calibration: Option<Calibration>,
    pub passed: bool,
}

impl Report {
    pub fn new(config: &RunConfig) -> Self {
        Report {
            suite: config.suite,
            anchor: config.suite.anchor().to_string(),
            config: config.clone(),
            surface: None,
            checks: vec![],
            calibration: None,
            passed: true,
        }
    }

    pub fn push(&mut self, check: Check) {
        self.passed &= check.passed || !check.hard;
        self.checks.push(check);
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn hard_failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| c.hard && !c.passed).collect()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// One row per check.
    pub fn to_csv(&self) -> String {
        fn join<T: ToString>(v: &[T]) -> String {
            v.iter().map(T::to_string).collect::<Vec<_>>().join(";")
        }
        fn field(s: &str) -> String {
            if s.contains([',', '"', '\n']) {
                format!("\"{}\"", s.replace('"', "\"\""))
            } else {
                s.to_string()
            }
        }
        let mut out = String::from("suite,check,statement,kind,nodes,residuals,orders,threshold,hard,passed,flag\n");
        for c in &self.checks {
            let kind = serde_json::to_value(c.kind).ok().and_then(|v| v.as_str().map(str::to_string)).unwrap_or_default();
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{}",
                self.suite,
                field(&c.name),
                field(&c.statement),
                kind,
                join(&c.nodes),
                join(&c.residuals),
                join(&c.orders),
                c.threshold.map(|t| t.to_string()).unwrap_or_default(),
                c.hard,
                c.passed,
                field(c.flag.as_deref().unwrap_or(""))
            );
        }
        out
    }

    pub fn render(&self, format: OutputFormat) -> Result<String> {
        match format {
            OutputFormat::Json => self.to_json(),
            OutputFormat::Csv => Ok(self.to_csv()),
        }
    }

    /// Writes the rendered report to `path`.
    pub fn emit(&self, format: OutputFormat, path: &Path) -> Result<()> {
        let text = self.render(format)?;
        std::fs::write(path, text).map_err(|e| Error::Config(format!("cannot write {}: {e}", path.display())))
    }

    /// Human-readable one-line-per-check summary.
    pub fn summary(&self) -> String {
        let mut out = format!("{} [{}]\n", self.suite, self.surface.as_deref().unwrap_or("-"));
        for c in &self.checks {
            let status = match (c.passed, c.hard) {
                (true, _) => "ok",
                (false, true) => "FAIL",
                (false, false) => "warn",
            };
            let values = c.residuals.iter().map(|r| format!("{r:.3e}")).collect::<Vec<_>>().join(" ");
            let _ = write!(out, "  {status:<4} {:<28} {values}", c.name);
            if let Some(t) = c.threshold {
                let _ = write!(out, "  ({:?} {t:e})", c.kind);
            }
            if !c.orders.is_empty() {
                let _ = write!(out, "  orders {}", c.orders.iter().map(|o| format!("{o:.2}")).collect::<Vec<_>>().join(" "));
            }
            if let Some(f) = &c.flag {
                let _ = write!(out, "  [{f}]");
            }
            out.push('\n');
        }
        let _ = writeln!(out, "  => {}", if self.passed { "passed" } else { "FAILED" });
        out
    }
}
