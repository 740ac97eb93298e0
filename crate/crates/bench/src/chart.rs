//! Grouped bar charts rendered as plain SVG.

use std::fmt::Write as _;
use std::str::FromStr;

use qap_core::SolverId;

use crate::error::{BenchError, Result};
use crate::runner::SummaryCell;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChartMetric {
    Diff,
    Time,
}

impl ChartMetric {
    pub fn as_str(self) -> &'static str {
        match self {
            ChartMetric::Diff => "diff",
            ChartMetric::Time => "time",
        }
    }

    fn axis_label(self) -> &'static str {
        match self {
            ChartMetric::Diff => "Relative difference to best known (%)",
            ChartMetric::Time => "Median execution time (s)",
        }
    }

    fn value(self, cell: &SummaryCell) -> Option<f64> {
        match self {
            ChartMetric::Diff => cell.diff_percent,
            ChartMetric::Time => Some(cell.median_elapsed_ms as f64 / 1000.0),
        }
    }
}

impl FromStr for ChartMetric {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "diff" => Ok(ChartMetric::Diff),
            "time" => Ok(ChartMetric::Time),
            _ => Err(BenchError::UnknownMetric(s.to_string())),
        }
    }
}

const PALETTE: [&str; 3] = ["#4e79a7", "#f28e2b", "#59a14f"];
const BAR_WIDTH: f64 = 18.0;
const GROUP_GAP: f64 = 16.0;
const PLOT_HEIGHT: f64 = 300.0;
const LEFT: f64 = 70.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 90.0;
const RIGHT: f64 = 110.0;

fn colour(solver: SolverId) -> &'static str {
    match solver {
        SolverId::Ga => PALETTE[0],
        SolverId::Ts => PALETTE[1],
        SolverId::Sa => PALETTE[2],
    }
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Rounds `max` up to 1, 2 or 5 times a power of ten.
fn nice_ceiling(max: f64) -> f64 {
    if max <= 0.0 {
        return 1.0;
    }
    let magnitude = 10f64.powf(max.log10().floor());
    [1.0, 2.0, 5.0, 10.0]
        .iter()
        .map(|m| m * magnitude)
        .find(|&v| v >= max)
        .unwrap_or(10.0 * magnitude)
}

/// One group per instance and one `<rect class="bar">` per summary cell, in
/// summary order. Cells without a value (diff of an instance with no best
/// known quality) get a zero-height bar labelled `n/a`.
pub fn emit_chart(summary: &[SummaryCell], metric: ChartMetric) -> Result<String> {
    if summary.is_empty() {
        return Err(BenchError::EmptyReport);
    }
    let mut instances: Vec<&str> = Vec::new();
    let mut solvers: Vec<SolverId> = Vec::new();
    for c in summary {
        if !instances.contains(&c.instance.as_str()) {
            instances.push(&c.instance);
        }
        if !solvers.contains(&c.solver) {
            solvers.push(c.solver);
        }
    }
    solvers.sort();

    let group_width = BAR_WIDTH * solvers.len() as f64 + GROUP_GAP;
    let plot_width = group_width * instances.len() as f64;
    let width = LEFT + plot_width + RIGHT;
    let height = TOP + PLOT_HEIGHT + BOTTOM;
    let top_value = nice_ceiling(summary.iter().filter_map(|c| metric.value(c)).fold(0.0, f64::max));
    let y = |v: f64| TOP + PLOT_HEIGHT - v.max(0.0) / top_value * PLOT_HEIGHT;
    let base = TOP + PLOT_HEIGHT;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(s, r#"<rect x="0" y="0" width="{width:.0}" height="{height:.0}" fill="white"/>"#);

    for tick in 0..=5 {
        let v = top_value * tick as f64 / 5.0;
        let ty = y(v);
        let _ = writeln!(
            s,
            r##"<line class="grid" x1="{LEFT:.1}" y1="{ty:.1}" x2="{:.1}" y2="{ty:.1}" stroke="#dddddd"/>"##,
            LEFT + plot_width
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{}</text>"#,
            LEFT - 6.0,
            ty + 4.0,
            trim_number(v)
        );
    }
    let _ = writeln!(
        s,
        r#"<line x1="{LEFT:.1}" y1="{TOP:.1}" x2="{LEFT:.1}" y2="{base:.1}" stroke="black"/>"#
    );
    let _ = writeln!(
        s,
        r#"<line x1="{LEFT:.1}" y1="{base:.1}" x2="{:.1}" y2="{base:.1}" stroke="black"/>"#,
        LEFT + plot_width
    );
    let _ = writeln!(
        s,
        r#"<text class="axis-label" x="16" y="{:.1}" text-anchor="middle" transform="rotate(-90 16 {:.1})">{}</text>"#,
        TOP + PLOT_HEIGHT / 2.0,
        TOP + PLOT_HEIGHT / 2.0,
        escape(metric.axis_label())
    );
    let _ = writeln!(
        s,
        r#"<text class="axis-label" x="{:.1}" y="{:.1}" text-anchor="middle">Problem</text>"#,
        LEFT + plot_width / 2.0,
        height - 12.0
    );

    for (g, name) in instances.iter().enumerate() {
        let gx = LEFT + g as f64 * group_width + GROUP_GAP / 2.0;
        let _ = writeln!(s, r#"<g class="group" data-instance="{}">"#, escape(name));
        for c in summary.iter().filter(|c| c.instance == *name) {
            let slot = solvers.iter().position(|&id| id == c.solver).unwrap_or(0);
            let x = gx + slot as f64 * BAR_WIDTH;
            let (top, label) = match metric.value(c) {
                Some(v) => (y(v), trim_number(v)),
                None => (base, "n/a".to_string()),
            };
            let _ = writeln!(
                s,
                r#"<rect class="bar" x="{x:.1}" y="{top:.1}" width="{:.1}" height="{:.1}" fill="{}"><title>{} {}: {}</title></rect>"#,
                BAR_WIDTH - 2.0,
                base - top,
                colour(c.solver),
                escape(name),
                c.solver,
                label
            );
        }
        let cx = gx + BAR_WIDTH * solvers.len() as f64 / 2.0;
        let _ = writeln!(
            s,
            r#"<text x="{cx:.1}" y="{:.1}" text-anchor="end" transform="rotate(-45 {cx:.1} {:.1})">{}</text>"#,
            base + 14.0,
            base + 14.0,
            escape(name)
        );
        s.push_str("</g>\n");
    }

    for (i, &id) in solvers.iter().enumerate() {
        let lx = LEFT + plot_width + 16.0;
        let ly = TOP + 10.0 + i as f64 * 18.0;
        let _ = writeln!(
            s,
            r#"<rect class="legend" x="{lx:.1}" y="{:.1}" width="12" height="12" fill="{}"/>"#,
            ly - 10.0,
            colour(id)
        );
        let _ = writeln!(s, r#"<text x="{:.1}" y="{ly:.1}">{id}</text>"#, lx + 18.0);
    }
    s.push_str("</svg>\n");
    Ok(s)
}

fn trim_number(v: f64) -> String {
    let text = format!("{v:.2}");
    text.trim_end_matches('0').trim_end_matches('.').to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cell(instance: &str, solver: SolverId, diff: Option<f64>, ms: u64) -> SummaryCell {
        SummaryCell {
            instance: instance.into(),
            solver,
            runs: 1,
            best_quality: 10,
            best_known: diff.map(|_| 10),
            diff_percent: diff,
            median_elapsed_ms: ms,
            formatted_time: crate::metrics::format_duration(ms),
        }
    }

    #[test]
    fn single_cell_single_bar() {
        let svg = emit_chart(&[cell("had12", SolverId::Ga, Some(1.5), 10)], ChartMetric::Diff).unwrap();
        assert_eq!(svg.matches(r#"class="bar""#).count(), 1);
        assert!(svg.contains("Relative difference"));
    }

    #[test]
    fn nice_ceilings() {
        assert_eq!(nice_ceiling(0.0), 1.0);
        assert_eq!(nice_ceiling(3.2), 5.0);
        assert_eq!(nice_ceiling(78.0), 100.0);
        assert_eq!(nice_ceiling(0.15), 0.2);
    }

    #[test]
    fn missing_values_and_parsing() {
        let svg = emit_chart(&[cell("x", SolverId::Sa, None, 1500)], ChartMetric::Diff).unwrap();
        assert!(svg.contains("n/a"));
        assert!(emit_chart(&[], ChartMetric::Time).is_err());
        assert_eq!("TIME".parse::<ChartMetric>().unwrap(), ChartMetric::Time);
        assert!(matches!("speed".parse::<ChartMetric>(), Err(BenchError::UnknownMetric(_))));
    }
}
