//! Check records, JSON reports and CSV curves, with atomic file output.

use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::Path;

use crate::error::{Error, Result};

/// One named numerical check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CheckEntry {
    pub name: String,
    pub paper_ref: String,
    pub measured: Option<f64>,
    pub expected: Option<f64>,
    pub tolerance: Option<f64>,
    pub pass: bool,
}

fn finite(v: f64) -> Option<f64> {
    v.is_finite().then_some(v)
}

impl CheckEntry {
    /// Passes iff |measured - expected| <= tol.
    pub fn close(
        name: impl Into<String>,
        reference: impl Into<String>,
        measured: f64,
        expected: f64,
        tol: f64,
    ) -> Self {
        let pass = (measured - expected).abs() <= tol;
        Self {
            name: name.into(),
            paper_ref: reference.into(),
            measured: finite(measured),
            expected: finite(expected),
            tolerance: finite(tol),
            pass,
        }
    }

    /// A nonnegative residual that must not exceed `tol`.
    pub fn residual(name: impl Into<String>, reference: impl Into<String>, measured: f64, tol: f64) -> Self {
        Self::close(name, reference, measured, 0.0, tol)
    }

    /// Passes iff measured <= bound.
    pub fn at_most(name: impl Into<String>, reference: impl Into<String>, measured: f64, bound: f64) -> Self {
        Self {
            name: name.into(),
            paper_ref: reference.into(),
            measured: finite(measured),
            expected: finite(bound),
            tolerance: Some(0.0),
            pass: measured <= bound,
        }
    }

    /// Pass/fail flag with a recorded value.
    pub fn flag(name: impl Into<String>, reference: impl Into<String>, pass: bool, measured: f64) -> Self {
        Self {
            name: name.into(),
            paper_ref: reference.into(),
            measured: finite(measured),
            expected: None,
            tolerance: None,
            pass,
        }
    }

    /// Informational value; always passes.
    pub fn record(name: impl Into<String>, reference: impl Into<String>, measured: f64) -> Self {
        Self::flag(name, reference, measured.is_finite(), measured)
    }
}

/// An ordered list of checks.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub checks: Vec<CheckEntry>,
}

impl CheckReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, entry: CheckEntry) {
        self.checks.push(entry);
    }

    pub fn extend(&mut self, other: CheckReport) {
        self.checks.extend(other.checks);
    }

    pub fn all_pass(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.pass)
    }

    pub fn get(&self, name: &str) -> Option<&CheckEntry> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckEntry> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

impl FromIterator<CheckEntry> for CheckReport {
    fn from_iter<I: IntoIterator<Item = CheckEntry>>(iter: I) -> Self {
        Self {
            checks: iter.into_iter().collect(),
        }
    }
}

impl rayon::iter::FromParallelIterator<CheckEntry> for CheckReport {
    fn from_par_iter<I: rayon::iter::IntoParallelIterator<Item = CheckEntry>>(iter: I) -> Self {
        Self {
            checks: Vec::from_par_iter(iter),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct GridInfo {
    pub x_max: f64,
    pub n: usize,
}

/// The JSON document written by `verify`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub model: String,
    pub seed: u64,
    pub grid: GridInfo,
    pub checks: Vec<CheckEntry>,
}

impl SuiteReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))
    }

    pub fn passed(&self) -> usize {
        self.checks.iter().filter(|c| c.pass).count()
    }
}

/// Write `contents` to `path` via a temporary sibling and a rename.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let io = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
        _ => std::path::PathBuf::from("."),
    };
    let name = path
        .file_name()
        .ok_or_else(|| io(std::io::Error::new(std::io::ErrorKind::InvalidInput, "no file name")))?;
    let tmp = dir.join(format!(".{}.tmp{}", name.to_string_lossy(), std::process::id()));
    let mut file = fs::File::create(&tmp).map_err(io)?;
    file.write_all(contents).map_err(io)?;
    file.sync_all().map_err(io)?;
    drop(file);
    fs::rename(&tmp, path).map_err(|e| {
        let _ = fs::remove_file(&tmp);
        io(e)
    })
}

/// Format a number with 17 significant digits.
pub fn sig17(v: f64) -> String {
    format!("{v:.16e}")
}

/// CSV text with a header line and 17-significant-digit fields.
pub fn csv_string(header: &[&str], rows: &[Vec<f64>]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        let line: Vec<String> = row.iter().map(|&v| sig17(v)).collect();
        let _ = writeln!(out, "{}", line.join(","));
    }
    out
}

pub fn write_csv(path: &Path, header: &[&str], rows: &[Vec<f64>]) -> Result<()> {
    write_atomic(path, csv_string(header, rows).as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_has_seventeen_digits() {
        let s = csv_string(&["x", "y"], &[vec![1.0 / 3.0, -2.0]]);
        let line = s.lines().nth(1).unwrap();
        let first = line.split(',').next().unwrap();
        let mantissa = first.split('e').next().unwrap();
        assert_eq!(mantissa.chars().filter(|c| c.is_ascii_digit()).count(), 17);
        assert_eq!(first.parse::<f64>().unwrap(), 1.0 / 3.0);
    }

    #[test]
    fn empty_report_does_not_pass() {
        assert!(!CheckReport::new().all_pass());
    }

    #[test]
    fn nan_measurement_fails_and_serializes() {
        let c = CheckEntry::residual("r", "x", f64::NAN, 1.0);
        assert!(!c.pass);
        assert!(serde_json::to_string(&c).unwrap().contains("\"measured\":null"));
    }

    #[test]
    fn atomic_write_replaces_file() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("r.json");
        write_atomic(&p, b"one").unwrap();
        write_atomic(&p, b"two").unwrap();
        assert_eq!(fs::read_to_string(&p).unwrap(), "two");
        assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
