//! JSON-described experiments producing CSV and JSON reports.
//!
//! A config names one experiment kind, its parameters, a seed and optional
//! tolerance overrides. Everything is validated before any work starts.
//! Records are emitted in a fixed order and the CSV carries no timing, so
//! identical configs give byte-identical CSV.

mod kinds;
mod registry;

pub use registry::{list_registry, lookup, RegistryEntry};

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exec::Strategy;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("invalid config: {0}")]
    Config(String),
    #[error("unknown registry name {0:?}")]
    UnknownName(String),
    #[error("{0}")]
    Module(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl ExperimentError {
    /// Process exit status for this error (check failures use 1).
    pub fn exit_code(&self) -> i32 {
        2
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    VerifySymbolic,
    IndexShift,
    Homotopy,
    Transgression,
    Resolvent,
    Derivative,
    DiracSchatten,
    Scaling,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 8] = [
        ExperimentKind::VerifySymbolic,
        ExperimentKind::IndexShift,
        ExperimentKind::Homotopy,
        ExperimentKind::Transgression,
        ExperimentKind::Resolvent,
        ExperimentKind::Derivative,
        ExperimentKind::DiracSchatten,
        ExperimentKind::Scaling,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            ExperimentKind::VerifySymbolic => "verify-symbolic",
            ExperimentKind::IndexShift => "index-shift",
            ExperimentKind::Homotopy => "homotopy",
            ExperimentKind::Transgression => "transgression",
            ExperimentKind::Resolvent => "resolvent",
            ExperimentKind::Derivative => "derivative",
            ExperimentKind::DiracSchatten => "dirac-schatten",
            ExperimentKind::Scaling => "scaling",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub name: String,
    pub kind: ExperimentKind,
    #[serde(default)]
    pub parameters: serde_json::Map<String, serde_json::Value>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
}

impl ExperimentConfig {
    /// Parses and validates (including the kind-specific parameters).
    pub fn from_json_str(src: &str) -> Result<Self, ExperimentError> {
        let cfg: ExperimentConfig =
            serde_json::from_str(src).map_err(|e| ExperimentError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> Result<Self, ExperimentError> {
        Self::from_json_str(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<(), ExperimentError> {
        if self.name.is_empty()
            || !self.name.chars().all(|c| c.is_ascii_alphanumeric() || matches!(c, '-' | '_' | '.'))
        {
            return Err(ExperimentError::Config(format!(
                "name {:?} must be non-empty and use only letters, digits, '-', '_' or '.'",
                self.name
            )));
        }
        let allowed = kinds::tolerance_keys(self.kind);
        for (k, v) in &self.tolerances {
            if !allowed.contains(&k.as_str()) {
                return Err(ExperimentError::Config(format!(
                    "tolerance {k:?} is not used by {} (allowed: {allowed:?})",
                    self.kind.name()
                )));
            }
            if !(*v > 0.0) || !v.is_finite() {
                return Err(ExperimentError::Config(format!("tolerance {k:?} = {v} must be positive and finite")));
            }
        }
        kinds::Plan::parse(self).map(|_| ())
    }

    pub(crate) fn tolerance(&self, key: &str, default: f64) -> f64 {
        self.tolerances.get(key).copied().unwrap_or(default)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckRecord {
    pub check_id: String,
    /// The identity or property this record checks, written as a formula.
    pub anchor: String,
    pub value: f64,
    pub bound: Option<f64>,
    pub tolerance: f64,
    pub pass: bool,
}

impl CheckRecord {
    pub fn new(id: impl Into<String>, anchor: &str, value: f64, bound: Option<f64>, tolerance: f64, pass: bool) -> Self {
        CheckRecord { check_id: id.into(), anchor: anchor.to_string(), value, bound, tolerance, pass }
    }

    /// Passes iff `value <= tolerance`.
    pub fn below(id: impl Into<String>, anchor: &str, value: f64, tolerance: f64) -> Self {
        Self::new(id, anchor, value, None, tolerance, value <= tolerance)
    }

    /// Exact check: passes iff `value == 0`.
    pub fn exact(id: impl Into<String>, anchor: &str, value: f64) -> Self {
        Self::new(id, anchor, value, None, 0.0, value == 0.0)
    }
}

/// An auxiliary table written next to the report.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Table {
    pub suffix: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunReport {
    pub name: String,
    pub kind: ExperimentKind,
    pub seed: u64,
    pub records: Vec<CheckRecord>,
    pub tables: Vec<Table>,
    pub pass: bool,
    pub elapsed_seconds: f64,
}

/// Twelve significant digits.
pub fn fmt_value(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{x:.11e}")
    }
}

fn csv_string(header: &[&str], rows: impl Iterator<Item = Vec<String>>) -> String {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(&r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
}

impl RunReport {
    pub fn exit_code(&self) -> i32 {
        if self.pass {
            0
        } else {
            1
        }
    }

    /// Columns `check_id, anchor, value, bound, tolerance, pass`.
    pub fn to_csv(&self) -> String {
        csv_string(
            &["check_id", "anchor", "value", "bound", "tolerance", "pass"],
            self.records.iter().map(|r| {
                vec![
                    r.check_id.clone(),
                    r.anchor.clone(),
                    fmt_value(r.value),
                    r.bound.map(fmt_value).unwrap_or_default(),
                    fmt_value(r.tolerance),
                    r.pass.to_string(),
                ]
            }),
        )
    }

    pub fn table_csv(table: &Table) -> String {
        let header: Vec<&str> = table.header.iter().map(String::as_str).collect();
        csv_string(&header, table.rows.iter().cloned())
    }

    pub fn summary(&self) -> String {
        let failed = self.records.iter().filter(|r| !r.pass).count();
        let mut s = String::new();
        let _ = write!(
            s,
            "{} ({}): {} checks, {} failed, {}",
            self.name,
            self.kind.name(),
            self.records.len(),
            failed,
            if self.pass { "PASS" } else { "FAIL" }
        );
        s
    }

    /// Writes `<name>.csv`, `<name>.json` and `<name>_<suffix>.csv` for each
    /// table. Returns the paths written.
    pub fn write_artifacts(&self, dir: &Path) -> Result<Vec<PathBuf>, ExperimentError> {
        std::fs::create_dir_all(dir)?;
        let mut paths = Vec::new();
        let csv_path = dir.join(format!("{}.csv", self.name));
        std::fs::write(&csv_path, self.to_csv())?;
        paths.push(csv_path);
        let json_path = dir.join(format!("{}.json", self.name));
        std::fs::write(&json_path, serde_json::to_string_pretty(self)? + "\n")?;
        paths.push(json_path);
        for t in &self.tables {
            let p = dir.join(format!("{}_{}.csv", self.name, t.suffix));
            std::fs::write(&p, Self::table_csv(t))?;
            paths.push(p);
        }
        Ok(paths)
    }
}

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    /// Where artifacts go; nothing is written when absent.
    pub out_dir: Option<PathBuf>,
    /// Directory that relative file references in the config resolve
    /// against.
    pub base_dir: Option<PathBuf>,
    pub strategy: Strategy,
}

/// Runs one experiment. Errors are configuration or contract violations;
/// failed checks are reported through [`RunReport::pass`].
pub fn run(cfg: &ExperimentConfig, opts: &RunOptions) -> Result<RunReport, ExperimentError> {
    cfg.validate()?;
    let start = Instant::now();
    let plan = kinds::Plan::parse(cfg)?;
    let (records, tables) = plan.execute(cfg, opts)?;
    let pass = records.iter().all(|r| r.pass);
    let report = RunReport {
        name: cfg.name.clone(),
        kind: cfg.kind,
        seed: cfg.seed,
        records,
        tables,
        pass,
        elapsed_seconds: start.elapsed().as_secs_f64(),
    };
    if let Some(dir) = &opts.out_dir {
        report.write_artifacts(dir)?;
    }
    Ok(report)
}
