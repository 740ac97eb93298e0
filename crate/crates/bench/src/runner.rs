use qap_core::qaplib::{self, best_known, instance_path};
use qap_core::{run, Cost, Instance, SolverId};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{BenchError, Result};
use crate::metrics::{format_duration, median, relative_difference};
use crate::plan::BenchPlan;

/// One (instance, solver, seed) run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub instance: String,
    pub solver: SolverId,
    pub seed: u64,
    pub best_quality: Cost,
    /// `None` for instances outside the best-known registry.
    pub best_known: Option<Cost>,
    pub diff_percent: Option<f64>,
    pub elapsed_ms: u64,
    pub formatted_time: String,
}

/// Per (instance, solver) aggregate: best quality over seeds, median time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryCell {
    pub instance: String,
    pub solver: SolverId,
    pub runs: usize,
    pub best_quality: Cost,
    pub best_known: Option<Cost>,
    pub diff_percent: Option<f64>,
    pub median_elapsed_ms: u64,
    pub formatted_time: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellFailure {
    pub instance: String,
    pub solver: SolverId,
    pub seed: u64,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchOutcome {
    /// Instance and solver order of the plan, used to lay out reports.
    pub instances: Vec<String>,
    pub solvers: Vec<SolverId>,
    pub rows: Vec<BenchRow>,
    pub summary: Vec<SummaryCell>,
    pub failures: Vec<CellFailure>,
}

impl BenchOutcome {
    pub fn is_success(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn cell(&self, instance: &str, solver: SolverId) -> Option<&SummaryCell> {
        self.summary.iter().find(|c| c.instance == instance && c.solver == solver)
    }
}

fn row_for(inst: &Instance, solver: SolverId, seed: u64, best_quality: Cost, elapsed_ms: u64) -> Result<BenchRow> {
    let known = best_known(inst.name()).ok();
    let diff_percent = match known {
        Some(k) => Some(relative_difference(best_quality, k)?),
        None => None,
    };
    Ok(BenchRow {
        instance: inst.name().to_string(),
        solver,
        seed,
        best_quality,
        best_known: known,
        diff_percent,
        elapsed_ms,
        formatted_time: format_duration(elapsed_ms),
    })
}

/// Groups rows by (instance, solver) in plan order.
pub fn summarize(rows: &[BenchRow], instances: &[String], solvers: &[SolverId]) -> Result<Vec<SummaryCell>> {
    let mut cells = Vec::new();
    for name in instances {
        let name = name.to_ascii_lowercase();
        for &solver in solvers {
            let members: Vec<&BenchRow> = rows.iter().filter(|r| r.instance == name && r.solver == solver).collect();
            let Some(best) = members.iter().map(|r| r.best_quality).min() else {
                continue;
            };
            let times: Vec<u64> = members.iter().map(|r| r.elapsed_ms).collect();
            let median_elapsed_ms = median(&times).unwrap_or(0);
            let best_known = members[0].best_known;
            let diff_percent = match best_known {
                Some(k) => Some(relative_difference(best, k)?),
                None => None,
            };
            cells.push(SummaryCell {
                instance: name.clone(),
                solver,
                runs: members.len(),
                best_quality: best,
                best_known,
                diff_percent,
                median_elapsed_ms,
                formatted_time: format_duration(median_elapsed_ms),
            });
        }
    }
    Ok(cells)
}

/// Runs every cell of `plan` on a pool of `plan.parallelism` workers.
///
/// Instances are read from the plan's `data_dir`, falling back to
/// [`qaplib::resolve_data_dir`].
/// A cell that cannot run is recorded in `failures` without affecting the
/// others. Rows come back in plan order regardless of scheduling.
pub fn run_bench(plan: &BenchPlan) -> Result<BenchOutcome> {
    plan.validate()?;
    let dir = qaplib::resolve_data_dir(plan.data_dir.as_deref());
    let loaded: Vec<std::result::Result<Instance, String>> = plan
        .instances
        .iter()
        .map(|name| qaplib::load_instance(&instance_path(&dir, name)).map_err(|e| e.to_string()))
        .collect();

    let cells: Vec<(usize, SolverId, u64)> = (0..plan.instances.len())
        .flat_map(|i| plan.solvers.iter().flat_map(move |&s| plan.seeds.iter().map(move |&seed| (i, s, seed))))
        .collect();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(plan.parallelism)
        .build()
        .map_err(|e| BenchError::Pool(e.to_string()))?;

    let results: Vec<std::result::Result<BenchRow, CellFailure>> = pool.install(|| {
        cells
            .par_iter()
            .map(|&(i, solver, seed)| {
                let fail = |error: String| CellFailure {
                    instance: plan.instances[i].to_ascii_lowercase(),
                    solver,
                    seed,
                    error,
                };
                let inst = loaded[i].as_ref().map_err(|e| fail(e.clone()))?;
                let result = run(inst, &plan.config_for(solver), &plan.stop_for(solver), seed).map_err(|e| fail(e.to_string()))?;
                row_for(inst, solver, seed, result.best_cost, result.elapsed_ms).map_err(|e| fail(e.to_string()))
            })
            .collect()
    });

    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for r in results {
        match r {
            Ok(row) => rows.push(row),
            Err(f) => failures.push(f),
        }
    }
    let summary = summarize(&rows, &plan.instances, &plan.solvers)?;
    Ok(BenchOutcome {
        instances: plan.instances.iter().map(|s| s.to_ascii_lowercase()).collect(),
        solvers: plan.solvers.clone(),
        rows,
        summary,
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(instance: &str, solver: SolverId, seed: u64, q: Cost, ms: u64) -> BenchRow {
        let inst = Instance::new(instance, 1, vec![0], vec![0]).unwrap();
        row_for(&inst, solver, seed, q, ms).unwrap()
    }

    #[test]
    fn summary_takes_min_quality_and_median_time() {
        let rows = vec![
            row("had12", SolverId::Ts, 1, 1700, 30),
            row("had12", SolverId::Ts, 2, 1660, 10),
            row("had12", SolverId::Ts, 3, 1680, 20),
            row("had12", SolverId::Ga, 1, 1652, 500),
        ];
        let cells = summarize(&rows, &["had12".into()], &[SolverId::Ga, SolverId::Ts]).unwrap();
        assert_eq!(cells.len(), 2);
        assert_eq!(cells[0].solver, SolverId::Ga);
        assert_eq!(cells[0].diff_percent, Some(0.0));
        assert_eq!(cells[1].best_quality, 1660);
        assert_eq!(cells[1].median_elapsed_ms, 20);
        assert_eq!(cells[1].runs, 3);
        assert_eq!(cells[1].diff_percent, Some(relative_difference(1660, 1652).unwrap()));
    }

    #[test]
    fn unknown_instances_have_no_diff() {
        let r = row("mystery", SolverId::Sa, 1, 10, 0);
        assert_eq!(r.best_known, None);
        assert_eq!(r.diff_percent, None);
        assert_eq!(r.formatted_time, "00:00.0");
    }
}
