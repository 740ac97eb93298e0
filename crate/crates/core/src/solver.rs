//! Common solver contract: configuration, stop conditions, run results and
//! best-so-far traces.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::assignment::Assignment;
use crate::error::{QapError, Result};
use crate::ga::GaConfig;
use crate::instance::QapInstance;
use crate::objective::evaluate;
use crate::sa::SaConfig;
use crate::scalar::Weight;
use crate::ts::TsConfig;
use crate::Cost;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SolverId {
    #[serde(rename = "GA")]
    Ga,
    #[serde(rename = "TS")]
    Ts,
    #[serde(rename = "SA")]
    Sa,
}

impl SolverId {
    pub const ALL: [SolverId; 3] = [SolverId::Ga, SolverId::Ts, SolverId::Sa];

    /// Iteration budget used when none is given: generations for GA, moves
    /// for TS, and for SA a safety cap on proposals (SA normally ends when
    /// the temperature reaches its floor).
    pub fn default_max_iterations(self) -> u64 {
        match self {
            SolverId::Ga => 1_000,
            SolverId::Ts => 20_000,
            SolverId::Sa => 100_000_000,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SolverId::Ga => "GA",
            SolverId::Ts => "TS",
            SolverId::Sa => "SA",
        }
    }
}

impl fmt::Display for SolverId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SolverId {
    type Err = QapError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ga" => Ok(SolverId::Ga),
            "ts" => Ok(SolverId::Ts),
            "sa" => Ok(SolverId::Sa),
            _ => Err(QapError::Config(format!("unknown solver '{s}' (expected ga, ts or sa)"))),
        }
    }
}

/// When a run ends. At least one of `max_iterations` and `time_limit_ms`
/// must be set; `target_quality` additionally stops as soon as the best cost
/// is at or below the target.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StopCondition<W = Cost> {
    #[serde(default)]
    pub max_iterations: Option<u64>,
    #[serde(default)]
    pub time_limit_ms: Option<u64>,
    #[serde(default)]
    pub target_quality: Option<W>,
}

impl<W: Weight> StopCondition<W> {
    pub fn iterations(max: u64) -> Self {
        Self {
            max_iterations: Some(max),
            time_limit_ms: None,
            target_quality: None,
        }
    }

    pub fn time_limit(ms: u64) -> Self {
        Self {
            max_iterations: None,
            time_limit_ms: Some(ms),
            target_quality: None,
        }
    }

    pub fn default_for(solver: SolverId) -> Self {
        Self::iterations(solver.default_max_iterations())
    }

    pub fn with_time_limit(mut self, ms: u64) -> Self {
        self.time_limit_ms = Some(ms);
        self
    }

    pub fn with_target(mut self, target: W) -> Self {
        self.target_quality = Some(target);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_iterations.is_none() && self.time_limit_ms.is_none() {
            return Err(QapError::Config(
                "stop condition needs max_iterations or time_limit_ms".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TracePoint<W> {
    pub iteration: u64,
    pub cost: W,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult<W = Cost> {
    pub solver: SolverId,
    pub best: Assignment,
    pub best_cost: W,
    pub iterations_executed: u64,
    pub elapsed_ms: u64,
    /// Best-so-far cost at the start, at every improvement, and at the end.
    pub trace: Vec<TracePoint<W>>,
    pub seed: u64,
}

impl<W: Weight> RunResult<W> {
    /// `true` when the trace never increases.
    pub fn trace_is_monotone(&self) -> bool {
        self.trace.windows(2).all(|w| w[1].cost <= w[0].cost && w[1].iteration >= w[0].iteration)
    }
}

/// Algorithm-specific parameters; the variant selects the solver.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "solver")]
pub enum SolverConfig {
    #[serde(rename = "GA")]
    Ga(GaConfig),
    #[serde(rename = "TS")]
    Ts(TsConfig),
    #[serde(rename = "SA")]
    Sa(SaConfig),
}

impl SolverConfig {
    pub fn default_for(solver: SolverId) -> Self {
        match solver {
            SolverId::Ga => SolverConfig::Ga(GaConfig::default()),
            SolverId::Ts => SolverConfig::Ts(TsConfig::default()),
            SolverId::Sa => SolverConfig::Sa(SaConfig::default()),
        }
    }

    pub fn id(&self) -> SolverId {
        match self {
            SolverConfig::Ga(_) => SolverId::Ga,
            SolverConfig::Ts(_) => SolverId::Ts,
            SolverConfig::Sa(_) => SolverId::Sa,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            SolverConfig::Ga(c) => c.validate(),
            SolverConfig::Ts(c) => c.validate(),
            SolverConfig::Sa(c) => c.validate(),
        }
    }
}

/// Runs the solver selected by `config`. Identical arguments give identical
/// results apart from `elapsed_ms` (and, with a time limit, the point where
/// the run was cut).
pub fn run<W: Weight>(
    inst: &QapInstance<W>,
    config: &SolverConfig,
    stop: &StopCondition<W>,
    seed: u64,
) -> Result<RunResult<W>> {
    match config {
        SolverConfig::Ga(c) => crate::ga::ga_run(inst, c, stop, seed),
        SolverConfig::Ts(c) => crate::ts::ts_run(inst, c, stop, seed),
        SolverConfig::Sa(c) => crate::sa::sa_run(inst, c, stop, seed),
    }
}

/// Best-so-far bookkeeping and stop checks shared by the solvers.
pub(crate) struct Search<'a, W> {
    inst: &'a QapInstance<W>,
    stop: &'a StopCondition<W>,
    started: Instant,
    time_limit: Option<Duration>,
    best: Assignment,
    best_cost: W,
    trace: Vec<TracePoint<W>>,
}

impl<'a, W: Weight> Search<'a, W> {
    pub fn started_at(
        started: Instant,
        inst: &'a QapInstance<W>,
        stop: &'a StopCondition<W>,
        initial: Assignment,
        cost: W,
    ) -> Self {
        Self {
            inst,
            stop,
            started,
            time_limit: stop.time_limit_ms.map(Duration::from_millis),
            best: initial,
            best_cost: cost,
            trace: vec![TracePoint { iteration: 0, cost }],
        }
    }

    /// Records `candidate` if it beats the best so far; returns whether it did.
    pub fn offer(&mut self, iteration: u64, candidate: &Assignment, cost: W) -> bool {
        if cost < self.best_cost {
            self.best_cost = cost;
            self.best.clone_from(candidate);
            self.trace.push(TracePoint { iteration, cost });
            true
        } else {
            false
        }
    }

    pub fn target_reached(&self) -> bool {
        self.stop.target_quality.is_some_and(|t| self.best_cost <= t)
    }

    pub fn time_up(&self) -> bool {
        self.time_limit.is_some_and(|limit| self.started.elapsed() >= limit)
    }

    pub fn iterations_exhausted(&self, done: u64) -> bool {
        self.stop.max_iterations.is_some_and(|max| done >= max)
    }

    /// Full stop check after `done` iterations.
    pub fn should_stop(&self, done: u64) -> bool {
        self.iterations_exhausted(done) || self.target_reached() || self.time_up()
    }

    pub fn finish(mut self, solver: SolverId, iterations: u64, seed: u64) -> Result<RunResult<W>> {
        let elapsed_ms = self.started.elapsed().as_millis() as u64;
        let checked = evaluate(self.inst, &self.best)?;
        if W::EXACT && checked != self.best_cost {
            return Err(QapError::Domain(format!(
                "{solver}: tracked best cost {} disagrees with re-evaluation {checked}",
                self.best_cost
            )));
        }
        self.best_cost = checked;
        let last = self.trace.last_mut().expect("trace starts non-empty");
        if last.iteration != iterations || last.cost != checked {
            if last.cost < checked {
                // float re-evaluation may nudge the final value; keep the trace monotone
                last.cost = checked;
            }
            self.trace.push(TracePoint {
                iteration: iterations,
                cost: checked,
            });
        }
        Ok(RunResult {
            solver,
            best: self.best,
            best_cost: checked,
            iterations_executed: iterations,
            elapsed_ms,
            trace: self.trace,
            seed,
        })
    }
}
