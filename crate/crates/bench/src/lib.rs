//! Benchmark harness: runs an (instance, solver, seed) matrix and renders
//! the results as CSV, JSON, markdown tables and SVG charts.

pub mod chart;
pub mod error;
pub mod metrics;
pub mod plan;
pub mod report;
pub mod runner;

pub use chart::{emit_chart, ChartMetric};
pub use error::{BenchError, Result};
pub use metrics::{format_duration, median, relative_difference};
pub use plan::BenchPlan;
pub use report::{emit_report, parse_json_report, JsonReport, ReportFormat, ReportOptions};
pub use runner::{run_bench, summarize, BenchOutcome, BenchRow, CellFailure, SummaryCell};
