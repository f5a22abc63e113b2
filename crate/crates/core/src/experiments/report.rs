use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::conditions::{ConditionReport, Verdict};
use crate::error::{Error, Result};
use crate::extremal::RatioRow;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// JSON number, or `"inf"`/`"-inf"`/`"nan"` for non-finite values.
pub fn real(x: f64) -> Value {
    serde_json::Number::from_f64(x).map(Value::Number).unwrap_or_else(|| {
        Value::String(if x.is_nan() { "nan" } else if x > 0.0 { "inf" } else { "-inf" }.into())
    })
}

/// Everything one experiment run produced. Contains no timestamps, so equal
/// inputs give byte-identical JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub experiment: String,
    pub version: String,
    pub equation_tag: String,
    pub file_stem: String,
    pub parameters: BTreeMap<String, Value>,
    /// Conditions that must hold before the numbers mean anything.
    pub gates: Vec<ConditionReport>,
    pub gates_pass: bool,
    /// Other condition checks reported as results.
    pub checks: Vec<ConditionReport>,
    /// Main table, written as the CSV artifact.
    pub rows: Vec<RatioRow>,
    /// Secondary tables, one CSV each.
    pub tables: BTreeMap<String, Vec<RatioRow>>,
    pub summary: BTreeMap<String, Value>,
    pub notes: Vec<String>,
}

impl ExperimentReport {
    pub(crate) fn new(experiment: &str, equation_tag: &str, file_stem: String) -> Self {
        ExperimentReport {
            experiment: experiment.into(),
            version: VERSION.into(),
            equation_tag: equation_tag.into(),
            file_stem,
            parameters: BTreeMap::new(),
            gates: Vec::new(),
            gates_pass: true,
            checks: Vec::new(),
            rows: Vec::new(),
            tables: BTreeMap::new(),
            summary: BTreeMap::new(),
            notes: Vec::new(),
        }
    }

    pub(crate) fn param(&mut self, key: &str, v: impl Into<Value>) {
        self.parameters.insert(key.into(), v.into());
    }

    pub(crate) fn gate(&mut self, r: ConditionReport) {
        self.gates_pass &= r.verdict == Verdict::Holds;
        self.gates.push(r);
    }

    pub(crate) fn set(&mut self, key: &str, x: f64) {
        self.summary.insert(key.into(), real(x));
    }

    pub(crate) fn flag(&mut self, key: &str, b: bool) {
        self.summary.insert(key.into(), Value::Bool(b));
    }

    /// A summary entry as a number, if present and numeric.
    pub fn number(&self, key: &str) -> Option<f64> {
        match self.summary.get(key)? {
            Value::Number(x) => x.as_f64(),
            Value::String(s) if s == "inf" => Some(f64::INFINITY),
            _ => None,
        }
    }

    pub fn boolean(&self, key: &str) -> Option<bool> {
        self.summary.get(key)?.as_bool()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }
}

/// `{experiment}-{n}-{p}-{q}`.
pub(crate) fn stem(experiment: &str, n: usize, p: f64, q: f64) -> String {
    format!("{experiment}-{n}-{p}-{q}")
}

fn io(e: impl std::fmt::Display) -> Error {
    Error::Io(e.to_string())
}

fn write_rows(path: &Path, rows: &[RatioRow]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(io)?;
    w.write_record(["parameter", "lhs", "rhs", "ratio"]).map_err(io)?;
    for r in rows {
        w.write_record([r.parameter, r.lhs, r.rhs, r.ratio].map(|x| x.to_string())).map_err(io)?;
    }
    w.flush()?;
    Ok(())
}

/// Write `{stem}.json`, `{stem}.csv`, one `{stem}-{table}.csv` per secondary
/// table and a `{stem}.meta.json` sidecar holding the timestamp.
pub fn write_artifacts(report: &ExperimentReport, dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let stem = &report.file_stem;
    let mut files = Vec::new();
    let json = dir.join(format!("{stem}.json"));
    std::fs::write(&json, report.to_json() + "\n")?;
    files.push(json);
    let csv = dir.join(format!("{stem}.csv"));
    write_rows(&csv, &report.rows)?;
    files.push(csv);
    for (name, rows) in &report.tables {
        let p = dir.join(format!("{stem}-{name}.csv"));
        write_rows(&p, rows)?;
        files.push(p);
    }
    let created = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    let names: Vec<String> = files
        .iter()
        .filter_map(|f| f.file_name().map(|s| s.to_string_lossy().into_owned()))
        .collect();
    let meta = serde_json::json!({ "created_unix": created, "version": VERSION, "files": names });
    let m = dir.join(format!("{stem}.meta.json"));
    std::fs::write(&m, serde_json::to_string_pretty(&meta).map_err(io)? + "\n")?;
    files.push(m);
    Ok(files)
}
