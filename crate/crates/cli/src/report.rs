use std::io::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::config::ExperimentConfig;
use crate::CliError;

pub const TOOL: &str = "qbsc";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// One asserted inequality `lhs <= rhs + tol`, aggregated over `cases`
/// instances; `lhs`/`rhs` are taken from the case with the smallest slack.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub tol: f64,
    pub pass: bool,
    /// `rhs - lhs`
    pub slack: f64,
    pub cases: usize,
    pub failures: usize,
}

impl CheckRecord {
    pub fn single(name: impl Into<String>, lhs: f64, rhs: f64, tol: f64) -> Self {
        let mut t = Tally::new(name, tol, false);
        t.push(lhs, rhs);
        t.finish()
    }
}

/// Accumulates cases of one inequality.
#[derive(Debug, Clone)]
pub struct Tally {
    name: String,
    tol: f64,
    /// Negate every right-hand side (harness self-test).
    fault: bool,
    worst: Option<(f64, f64)>,
    cases: usize,
    failures: usize,
}

impl Tally {
    pub fn new(name: impl Into<String>, tol: f64, fault: bool) -> Self {
        Self {
            name: name.into(),
            tol,
            fault,
            worst: None,
            cases: 0,
            failures: 0,
        }
    }

    pub fn push(&mut self, lhs: f64, rhs: f64) {
        let rhs = if self.fault { -rhs } else { rhs };
        self.cases += 1;
        // NaN never passes
        if !(lhs <= rhs + self.tol) {
            self.failures += 1;
        }
        let slack = rhs - lhs;
        let worse = match self.worst {
            None => true,
            Some((l, r)) => slack < r - l || slack.is_nan(),
        };
        if worse {
            self.worst = Some((lhs, rhs));
        }
    }

    pub fn finish(self) -> CheckRecord {
        let (lhs, rhs) = self.worst.unwrap_or((f64::NAN, f64::NAN));
        CheckRecord {
            name: self.name,
            lhs,
            rhs,
            tol: self.tol,
            pass: self.cases > 0 && self.failures == 0,
            slack: rhs - lhs,
            cases: self.cases,
            failures: self.failures,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReportEnvelope {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub config: ExperimentConfig,
    pub records: Vec<CheckRecord>,
    pub payload: serde_json::Value,
    pub pass: bool,
    pub wall_time_ms: Option<u64>,
}

impl ReportEnvelope {
    pub fn new(command: &str, config: &ExperimentConfig, records: Vec<CheckRecord>, payload: serde_json::Value) -> Self {
        let pass = records.iter().all(|r| r.pass);
        Self {
            tool: TOOL.to_string(),
            version: VERSION.to_string(),
            command: command.to_string(),
            config: config.clone(),
            records,
            payload,
            pass,
            wall_time_ms: None,
        }
    }

    pub fn to_json(&self) -> Result<String, CliError> {
        let mut s = serde_json::to_string_pretty(self).map_err(|e| CliError::Io(e.to_string()))?;
        s.push('\n');
        Ok(s)
    }
}

/// Comma-separated table with LF line endings; numbers go through [`num`].
#[derive(Debug, Clone, PartialEq)]
pub struct CsvTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

/// 12 significant digits in scientific notation.
pub fn num(v: f64) -> String {
    format!("{v:.11e}")
}

impl CsvTable {
    pub fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn render(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

/// `report.json` -> `report.csv`
pub fn csv_path(out: &Path) -> PathBuf {
    out.with_extension("csv")
}

/// Write through a temporary file in the same directory, then rename.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let name = path
        .file_name()
        .ok_or_else(|| CliError::Usage(format!("output path {} has no file name", path.display())))?;
    let tmp = dir.join(format!(".{}.tmp{}", name.to_string_lossy(), std::process::id()));
    let io = |e: std::io::Error| CliError::Io(format!("{}: {e}", path.display()));
    {
        let mut f = std::fs::File::create(&tmp).map_err(io)?;
        f.write_all(contents.as_bytes()).map_err(io)?;
        f.sync_all().map_err(io)?;
    }
    std::fs::rename(&tmp, path).map_err(|e| {
        let _ = std::fs::remove_file(&tmp);
        io(e)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tally_keeps_worst_case() {
        let mut t = Tally::new("x", 1e-9, false);
        t.push(0.1, 0.5);
        t.push(0.4, 0.45);
        t.push(0.0, 1.0);
        let r = t.finish();
        assert!(r.pass);
        assert_eq!((r.lhs, r.rhs, r.cases), (0.4, 0.45, 3));
        let mut t = Tally::new("x", 1e-9, true);
        t.push(0.1, 0.5);
        let r = t.finish();
        assert!(!r.pass);
        assert_eq!(r.failures, 1);
        assert!(!Tally::new("empty", 0.0, false).finish().pass);
    }

    #[test]
    fn csv_format() {
        let mut t = CsvTable::new(&["a", "b"]);
        t.push(vec![num(0.0), num(1.0 / 3.0)]);
        t.push(vec![num(-2.5e-7), num(12345.678)]);
        assert_eq!(
            t.render(),
            "a,b\n0.00000000000e0,3.33333333333e-1\n-2.50000000000e-7,1.23456780000e4\n"
        );
    }

    #[test]
    fn atomic_write_replaces() {
        let tmp = tempfile::tempdir().unwrap();
        let dir = tmp.path();
        let p = dir.join("r.json");
        write_atomic(&p, "one").unwrap();
        write_atomic(&p, "two").unwrap();
        assert_eq!(std::fs::read_to_string(&p).unwrap(), "two");
        assert_eq!(std::fs::read_dir(dir).unwrap().count(), 1);
    }
}
