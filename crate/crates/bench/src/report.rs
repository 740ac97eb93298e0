//! CSV, JSON and markdown renderings of a benchmark outcome.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{BenchError, Result};
use crate::runner::{BenchOutcome, BenchRow, CellFailure, SummaryCell};

pub const CSV_HEADER: [&str; 8] = [
    "instance",
    "solver",
    "seed",
    "best_quality",
    "best_known",
    "diff_percent",
    "elapsed_ms",
    "formatted_time",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
    Markdown,
}

impl ReportFormat {
    pub fn extension(self) -> &'static str {
        match self {
            ReportFormat::Csv => "csv",
            ReportFormat::Json => "json",
            ReportFormat::Markdown => "md",
        }
    }
}

impl FromStr for ReportFormat {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            "markdown" | "md" => Ok(ReportFormat::Markdown),
            _ => Err(BenchError::UnknownFormat(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReportOptions {
    /// When false, CSV drops `elapsed_ms`/`formatted_time` and markdown drops
    /// the time table, so runs can be compared byte for byte.
    pub timing: bool,
}

impl Default for ReportOptions {
    fn default() -> Self {
        Self { timing: true }
    }
}

/// JSON report document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JsonReport {
    pub rows: Vec<BenchRow>,
    pub summary: Vec<SummaryCell>,
    pub failures: Vec<CellFailure>,
}

fn fmt_diff(d: Option<f64>) -> String {
    d.map(|d| format!("{d:.2}")).unwrap_or_default()
}

pub fn emit_report(outcome: &BenchOutcome, format: ReportFormat, options: ReportOptions) -> Result<Vec<u8>> {
    if outcome.rows.is_empty() {
        return Err(BenchError::EmptyReport);
    }
    match format {
        ReportFormat::Csv => csv_report(&outcome.rows, options),
        ReportFormat::Json => {
            let doc = JsonReport {
                rows: outcome.rows.clone(),
                summary: outcome.summary.clone(),
                failures: outcome.failures.clone(),
            };
            let mut out = serde_json::to_vec_pretty(&doc)?;
            out.push(b'\n');
            Ok(out)
        }
        ReportFormat::Markdown => Ok(markdown_report(outcome, options).into_bytes()),
    }
}

fn csv_report(rows: &[BenchRow], options: ReportOptions) -> Result<Vec<u8>> {
    let columns = if options.timing { 8 } else { 6 };
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&CSV_HEADER[..columns])?;
    for r in rows {
        let record = [
            r.instance.clone(),
            r.solver.to_string(),
            r.seed.to_string(),
            r.best_quality.to_string(),
            r.best_known.map(|k| k.to_string()).unwrap_or_default(),
            fmt_diff(r.diff_percent),
            r.elapsed_ms.to_string(),
            r.formatted_time.clone(),
        ];
        w.write_record(&record[..columns])?;
    }
    w.into_inner().map_err(|e| BenchError::Io(e.into_error()))
}

pub fn parse_json_report(bytes: &[u8]) -> Result<JsonReport> {
    Ok(serde_json::from_slice(bytes)?)
}

fn table(outcome: &BenchOutcome, title: &str, first: &str, cell: impl Fn(&SummaryCell) -> String) -> String {
    let mut out = format!("## {title}\n\n| {first} |");
    for s in &outcome.solvers {
        let _ = write!(out, " {s} |");
    }
    out.push_str("\n|---|");
    out.push_str(&"---|".repeat(outcome.solvers.len()));
    out.push('\n');
    for name in &outcome.instances {
        let _ = write!(out, "| {name} |");
        for &s in &outcome.solvers {
            let text = outcome.cell(name, s).map(&cell).unwrap_or_else(|| "n/a".into());
            let _ = write!(out, " {text} |");
        }
        out.push('\n');
    }
    out
}

fn markdown_report(outcome: &BenchOutcome, options: ReportOptions) -> String {
    let runs = outcome.rows.iter().map(|r| r.seed).collect::<std::collections::BTreeSet<_>>().len();
    let mut out = format!("# QAP benchmark\n\nBest quality over {runs} seed(s) per cell.\n\n");
    out.push_str(&table(outcome, "Relative difference to best known", "Problem", |c| {
        c.diff_percent
            .map(|d| format!("{d:.2}%"))
            .unwrap_or_else(|| c.best_quality.to_string())
    }));
    if options.timing {
        out.push('\n');
        out.push_str(&table(outcome, "Execution time (mm:ss.t, median over seeds)", "Problem", |c| {
            c.formatted_time.clone()
        }));
    }
    if !outcome.failures.is_empty() {
        out.push_str("\n## Failed cells\n\n");
        for f in &outcome.failures {
            let _ = writeln!(out, "- {} / {} / seed {}: {}", f.instance, f.solver, f.seed, f.error);
        }
    }
    out
}

