use std::path::PathBuf;

use qap_core::ga::GaConfig;
use qap_core::qaplib::TABLE1_INSTANCES;
use qap_core::sa::SaConfig;
use qap_core::ts::TsConfig;
use qap_core::{SolverConfig, SolverId, StopCondition};
use serde::{Deserialize, Serialize};

use crate::error::{BenchError, Result};

/// Wall-clock cap per (instance, solver, seed) cell in the built-in plan.
pub const TABLE1_CELL_LIMIT_MS: u64 = 60_000;

pub const DEFAULT_SEEDS: [u64; 5] = [1, 2, 3, 4, 5];

fn default_seeds() -> Vec<u64> {
    DEFAULT_SEEDS.to_vec()
}

fn default_parallelism() -> usize {
    1
}

fn default_solvers() -> Vec<SolverId> {
    SolverId::ALL.to_vec()
}

/// A benchmark matrix: every instance is solved by every solver once per seed.
///
/// Plan files are JSON documents with these field names; everything except
/// `instances` has a default.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchPlan {
    pub instances: Vec<String>,
    #[serde(default = "default_solvers")]
    pub solvers: Vec<SolverId>,
    #[serde(default = "default_seeds")]
    pub seeds: Vec<u64>,
    #[serde(default)]
    pub ga: GaConfig,
    #[serde(default)]
    pub ts: TsConfig,
    #[serde(default)]
    pub sa: SaConfig,
    /// Overrides every solver's default iteration budget.
    #[serde(default)]
    pub max_iterations: Option<u64>,
    #[serde(default)]
    pub time_limit_ms: Option<u64>,
    #[serde(default = "default_parallelism")]
    pub parallelism: usize,
    /// Directory holding `<name>.dat` files; resolved by the caller when absent.
    #[serde(default)]
    pub data_dir: Option<PathBuf>,
}

impl BenchPlan {
    pub fn new(instances: Vec<String>) -> Self {
        Self {
            instances,
            solvers: default_solvers(),
            seeds: default_seeds(),
            ga: GaConfig::default(),
            ts: TsConfig::default(),
            sa: SaConfig::default(),
            max_iterations: None,
            time_limit_ms: None,
            parallelism: default_parallelism(),
            data_dir: None,
        }
    }

    /// The twelve real-life instances, all three solvers, five seeds, default
    /// parameters and a per-cell time cap.
    pub fn table1() -> Self {
        Self {
            time_limit_ms: Some(TABLE1_CELL_LIMIT_MS),
            ..Self::new(TABLE1_INSTANCES.iter().map(|s| s.to_string()).collect())
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let plan: Self = serde_json::from_str(text)?;
        plan.validate()?;
        Ok(plan)
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |m: &str| Err(BenchError::Plan(m.to_string()));
        if self.instances.is_empty() {
            return fail("no instances");
        }
        if self.solvers.is_empty() {
            return fail("no solvers");
        }
        if self.seeds.is_empty() {
            return fail("no seeds");
        }
        if self.parallelism == 0 {
            return fail("parallelism must be >= 1");
        }
        for id in &self.solvers {
            self.config_for(*id).validate()?;
        }
        Ok(())
    }

    pub fn config_for(&self, solver: SolverId) -> SolverConfig {
        match solver {
            SolverId::Ga => SolverConfig::Ga(self.ga.clone()),
            SolverId::Ts => SolverConfig::Ts(self.ts.clone()),
            SolverId::Sa => SolverConfig::Sa(self.sa.clone()),
        }
    }

    pub fn stop_for(&self, solver: SolverId) -> StopCondition {
        StopCondition {
            max_iterations: Some(self.max_iterations.unwrap_or(solver.default_max_iterations())),
            time_limit_ms: self.time_limit_ms,
            target_quality: None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table1_plan_shape() {
        let plan = BenchPlan::table1();
        assert_eq!(plan.instances.len(), 12);
        assert_eq!(plan.solvers, vec![SolverId::Ga, SolverId::Ts, SolverId::Sa]);
        assert_eq!(plan.seeds.len(), 5);
        assert!(plan.validate().is_ok());
        assert_eq!(plan.stop_for(SolverId::Ts).max_iterations, Some(20_000));
        assert_eq!(plan.stop_for(SolverId::Ga).time_limit_ms, Some(TABLE1_CELL_LIMIT_MS));
    }

    #[test]
    fn json_plan_defaults_and_validation() {
        let plan = BenchPlan::from_json(r#"{"instances": ["had12"], "solvers": ["TS"], "max_iterations": 10}"#).unwrap();
        assert_eq!(plan.seeds, DEFAULT_SEEDS.to_vec());
        assert_eq!(plan.stop_for(SolverId::Ts).max_iterations, Some(10));
        assert!(BenchPlan::from_json(r#"{"instances": []}"#).is_err());
        assert!(BenchPlan::from_json(r#"{"instances": ["a"], "parallelism": 0}"#).is_err());
        assert!(BenchPlan::from_json(r#"{"instances": ["a"], "bogus": 1}"#).is_err());
        assert!(BenchPlan::from_json(r#"{"instances": ["a"], "ga": {"population_size": 1}}"#).is_err());
    }
}
