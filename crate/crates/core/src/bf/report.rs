//! Scaling reports, CSV rows and JSON summaries.

use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};

pub const CSV_HEADER: &str = "check,group,epsilon,delta,seed,S,deltaS,slope";

/// One sample: S is the size of the compared quantity (the action value for
/// the BF check), deltaS the residual. Fit rows carry seed "fit" and the slope.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub check: String,
    pub group: String,
    pub epsilon: Option<f64>,
    pub delta: Option<f64>,
    pub seed: Option<u64>,
    pub s: Option<f64>,
    pub delta_s: f64,
    pub slope: Option<f64>,
}

fn num(x: Option<f64>) -> String {
    x.map(|v| format!("{v:.10e}")).unwrap_or_default()
}

impl Row {
    pub fn to_csv(&self) -> String {
        let seed = self.seed.map(|s| s.to_string()).unwrap_or_else(|| "fit".into());
        format!(
            "{},{},{},{},{},{},{},{}",
            self.check,
            self.group,
            num(self.epsilon),
            num(self.delta),
            seed,
            num(self.s),
            num(Some(self.delta_s)),
            num(self.slope)
        )
    }
}

/// One pass/fail quantity inside a check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Measure {
    pub check: String,
    pub pass: bool,
    pub slope: Option<f64>,
    pub expected: f64,
    pub max_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct CheckReport {
    pub name: String,
    pub rows: Vec<Row>,
    pub measures: Vec<Measure>,
    /// Diagnostic lines that do not affect the pass flag.
    pub notes: Vec<String>,
}

impl CheckReport {
    pub fn pass(&self) -> bool {
        !self.measures.is_empty() && self.measures.iter().all(|m| m.pass)
    }

    pub fn measure(&self, name: &str) -> Option<&Measure> {
        self.measures.iter().find(|m| m.check == name)
    }

    pub fn merge(&mut self, other: CheckReport) {
        self.rows.extend(other.rows);
        self.measures.extend(other.measures);
        self.notes.extend(other.notes);
    }

    pub fn csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            let _ = writeln!(out, "{}", r.to_csv());
        }
        out
    }

    /// JSON array with one {"check","pass","slope","expected","max_residual"} object per measure.
    pub fn json(&self) -> String {
        serde_json::to_string_pretty(&self.measures).unwrap_or_else(|_| "[]".into()) + "\n"
    }

    pub fn summary_lines(&self) -> Vec<String> {
        self.measures
            .iter()
            .map(|m| {
                let slope = m.slope.map(|s| format!(" slope={s:.3} expected>={:.2}", m.expected)).unwrap_or_default();
                format!(
                    "{} {}{} max_residual={:.3e}",
                    if m.pass { "PASS" } else { "FAIL" },
                    m.check,
                    slope,
                    m.max_residual
                )
            })
            .collect()
    }

    /// Writes `<name>.csv` and `<name>.json` into `dir`.
    pub fn write(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join(format!("{}.csv", self.name)), self.csv())?;
        std::fs::write(dir.join(format!("{}.json", self.name)), self.json())?;
        Ok(())
    }
}

/// Concatenates every per-check CSV in `dir` (by file name, header once) into
/// `dir/report.csv` and returns its contents.
pub fn merge_reports(dir: &Path) -> Result<String> {
    if !dir.is_dir() {
        return Err(Error::Io(format!("{} is not a directory", dir.display())));
    }
    let mut files: Vec<_> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "csv") && p.file_name().is_some_and(|n| n != "report.csv"))
        .collect();
    files.sort();
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for f in files {
        let text = std::fs::read_to_string(&f)?;
        for line in text.lines().filter(|l| !l.is_empty() && *l != CSV_HEADER) {
            out.push_str(line);
            out.push('\n');
        }
    }
    std::fs::write(dir.join("report.csv"), &out)?;
    Ok(out)
}

/// Least-squares slope of log y against log x.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.max(f64::MIN_POSITIVE).ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}
