//! Simulated annealing with Metropolis acceptance and geometric cooling.
//!
//! Every proposal is a uniformly random swap. Improving moves are always
//! accepted; a worsening move of size `delta` is accepted with probability
//! `exp(-delta / T)`. After `moves_per_temperature` proposals the temperature
//! is multiplied by `alpha`, and the run ends once `T <= epsilon`.

use std::time::Instant;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::assignment::{random_assignment, Assignment, SwapMove};
use crate::error::{QapError, Result};
use crate::instance::QapInstance;
use crate::objective::{evaluate_unchecked, swap_delta_unchecked};
use crate::rng::seeded_rng;
use crate::scalar::Weight;
use crate::solver::{RunResult, Search, SolverId, StopCondition};

/// Random swaps sampled to calibrate the initial temperature.
pub const CALIBRATION_SAMPLES: usize = 100;

/// Acceptance probability targeted for the mean worsening move at `T0`.
pub const CALIBRATION_ACCEPTANCE: f64 = 0.8;

const TIME_CHECK_EVERY: u64 = 64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SaConfig {
    /// Starting temperature; `None` calibrates it from the instance.
    pub initial_temperature: Option<f64>,
    pub alpha: f64,
    pub epsilon: f64,
    /// Proposals per temperature level; `None` means `100 * n`.
    pub moves_per_temperature: Option<usize>,
}

impl Default for SaConfig {
    fn default() -> Self {
        Self {
            initial_temperature: None,
            alpha: 0.95,
            epsilon: 1e-3,
            moves_per_temperature: None,
        }
    }
}

impl SaConfig {
    pub fn validate(&self) -> Result<()> {
        let err = |m: String| Err(QapError::Config(m));
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return err(format!("alpha must lie in (0, 1), got {}", self.alpha));
        }
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return err(format!("epsilon must be positive, got {}", self.epsilon));
        }
        if let Some(t0) = self.initial_temperature {
            if !(t0.is_finite() && t0 > self.epsilon) {
                return err(format!(
                    "initial_temperature must exceed epsilon ({}), got {t0}",
                    self.epsilon
                ));
            }
        }
        if self.moves_per_temperature == Some(0) {
            return err("moves_per_temperature must be >= 1".into());
        }
        Ok(())
    }

    pub fn moves_for(&self, n: usize) -> u64 {
        self.moves_per_temperature.unwrap_or(100 * n).max(1) as u64
    }
}

/// `1` for `delta <= 0`, otherwise `exp(-delta / t)`.
pub fn acceptance_probability<W: Weight>(delta: W, t: f64) -> Result<f64> {
    if !t.is_finite() || t <= 0.0 {
        return Err(QapError::Domain(format!("temperature must be positive and finite, got {t}")));
    }
    if delta <= W::zero() {
        Ok(1.0)
    } else {
        Ok((-delta.as_f64() / t).exp())
    }
}

/// Metropolis rule: improving and neutral moves are always taken, a worsening
/// move is taken when a uniform draw falls below `exp(-delta / t)`. Draws from
/// `rng` only for worsening moves.
pub fn metropolis_accept<W: Weight, R: Rng + ?Sized>(delta: W, t: f64, rng: &mut R) -> bool {
    delta <= W::zero() || rng.random::<f64>() < (-delta.as_f64() / t).exp()
}

/// Number of `T <- alpha * T` updates until `T <= epsilon`, counted by
/// performing the multiplications.
pub fn cooling_steps(t0: f64, alpha: f64, epsilon: f64) -> u64 {
    let mut t = t0;
    let mut steps = 0;
    while t > epsilon {
        t *= alpha;
        steps += 1;
    }
    steps
}

/// Picks `T0` so that the mean worsening delta over [`CALIBRATION_SAMPLES`]
/// random swaps of `start` is accepted with probability
/// [`CALIBRATION_ACCEPTANCE`]. Falls back to `max(1, 10 * epsilon)` when no
/// sampled swap worsens the cost or the result would not exceed `epsilon`.
pub fn calibrate_temperature<W: Weight, R: Rng + ?Sized>(
    inst: &QapInstance<W>,
    start: &Assignment,
    epsilon: f64,
    rng: &mut R,
) -> f64 {
    let n = inst.n();
    let fallback = (10.0 * epsilon).max(1.0);
    if n < 2 {
        return fallback;
    }
    let (mut sum, mut count) = (0.0, 0usize);
    for _ in 0..CALIBRATION_SAMPLES {
        let m = SwapMove::random(n, rng);
        let delta = swap_delta_unchecked(inst, start.as_slice(), m.i, m.j);
        if delta > W::zero() {
            sum += delta.as_f64();
            count += 1;
        }
    }
    if count == 0 {
        return fallback;
    }
    let t0 = (sum / count as f64) / -CALIBRATION_ACCEPTANCE.ln();
    if t0 > epsilon && t0.is_finite() {
        t0
    } else {
        fallback
    }
}

/// Outcome of an annealing run with schedule details.
#[derive(Debug, Clone, PartialEq)]
pub struct SaReport<W> {
    pub result: RunResult<W>,
    pub initial_temperature: f64,
    pub final_temperature: f64,
    /// Completed `T <- alpha * T` updates.
    pub cooling_steps: u64,
}

pub fn sa_run<W: Weight>(inst: &QapInstance<W>, cfg: &SaConfig, stop: &StopCondition<W>, seed: u64) -> Result<RunResult<W>> {
    sa_run_detailed(inst, cfg, stop, seed).map(|r| r.result)
}

pub fn sa_run_detailed<W: Weight>(
    inst: &QapInstance<W>,
    cfg: &SaConfig,
    stop: &StopCondition<W>,
    seed: u64,
) -> Result<SaReport<W>> {
    cfg.validate()?;
    stop.validate()?;
    let started = Instant::now();
    let n = inst.n();
    let mut rng = seeded_rng(seed);
    let mut current = random_assignment(n, &mut rng);
    let mut cost = evaluate_unchecked(inst, current.as_slice());
    let t0 = cfg
        .initial_temperature
        .unwrap_or_else(|| calibrate_temperature(inst, &current, cfg.epsilon, &mut rng));
    let per_level = cfg.moves_for(n);
    let mut search = Search::started_at(started, inst, stop, current.clone(), cost);

    let mut temperature = t0;
    let mut steps = 0u64;
    let mut iteration = 0u64;
    'anneal: while n >= 2 && temperature > cfg.epsilon {
        for _ in 0..per_level {
            if search.iterations_exhausted(iteration)
                || search.target_reached()
                || (iteration.is_multiple_of(TIME_CHECK_EVERY) && search.time_up())
            {
                break 'anneal;
            }
            let m = SwapMove::random(n, &mut rng);
            let delta = swap_delta_unchecked(inst, current.as_slice(), m.i, m.j);
            iteration += 1;
            if metropolis_accept(delta, temperature, &mut rng) {
                current.swap_unchecked(m);
                cost += delta;
                search.offer(iteration, &current, cost);
            }
        }
        let exact = evaluate_unchecked(inst, current.as_slice());
        if W::EXACT {
            assert_eq!(exact, cost, "annealing delta accumulation drifted");
        }
        cost = exact;
        temperature *= cfg.alpha;
        steps += 1;
    }

    Ok(SaReport {
        result: search.finish(SolverId::Sa, iteration, seed)?,
        initial_temperature: t0,
        final_temperature: temperature,
        cooling_steps: steps,
    })
}
