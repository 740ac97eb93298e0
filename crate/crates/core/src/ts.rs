//! Tabu search over the swap neighborhood.
//!
//! Tabu attributes are (facility, location) pairs: after facilities `i` and
//! `j` leave locations `a` and `b`, putting `i` back on `a` or `j` back on `b`
//! is forbidden for `tenure` iterations unless the move beats the best cost
//! found so far.

use std::time::Instant;

use rand::seq::index;
use serde::{Deserialize, Serialize};

use crate::assignment::{random_assignment, Assignment, SwapMove};
use crate::error::{QapError, Result};
use crate::instance::QapInstance;
use crate::objective::{evaluate_unchecked, SwapDeltaTable};
use crate::rng::{seeded_rng, QapRng};
use crate::scalar::Weight;
use crate::solver::{RunResult, Search, SolverId, StopCondition};

/// How often the incrementally tracked current cost is checked against a
/// full evaluation.
const RESYNC_EVERY: u64 = 1000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TsConfig {
    /// Iterations an attribute stays tabu; `None` means the instance size.
    pub tenure: Option<usize>,
    /// Fraction of the swap neighborhood scanned per iteration, in (0, 1].
    pub candidate_fraction: f64,
}

impl Default for TsConfig {
    fn default() -> Self {
        Self {
            tenure: None,
            candidate_fraction: 1.0,
        }
    }
}

impl TsConfig {
    pub fn validate(&self) -> Result<()> {
        if self.tenure == Some(0) {
            return Err(QapError::Config("tenure must be >= 1".into()));
        }
        if !(self.candidate_fraction > 0.0 && self.candidate_fraction <= 1.0) {
            return Err(QapError::Config(format!(
                "candidate_fraction must lie in (0, 1], got {}",
                self.candidate_fraction
            )));
        }
        Ok(())
    }

    pub fn tenure_for(&self, n: usize) -> u64 {
        self.tenure.unwrap_or(n).max(1) as u64
    }
}

/// Expiry table over (facility, location) attributes. An attribute is tabu
/// at iteration `t` iff its expiry is greater than `t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TabuList {
    n: usize,
    expiry: Vec<u64>,
}

impl TabuList {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            expiry: vec![0; n * n],
        }
    }

    pub fn expiry(&self, facility: usize, location: usize) -> u64 {
        self.expiry[facility * self.n + location]
    }

    pub fn is_tabu(&self, facility: usize, location: usize, iteration: u64) -> bool {
        self.expiry(facility, location) > iteration
    }

    pub fn forbid(&mut self, facility: usize, location: usize, until: u64) {
        self.expiry[facility * self.n + location] = until;
    }

    /// Latest expiry among the attributes `m` would restore on `a`.
    pub fn move_expiry(&self, a: &Assignment, m: SwapMove) -> u64 {
        self.expiry(m.i, a.location(m.j)).max(self.expiry(m.j, a.location(m.i)))
    }

    /// Whether `m` would put either facility back on a location it recently left.
    pub fn move_is_tabu(&self, a: &Assignment, m: SwapMove, iteration: u64) -> bool {
        self.move_expiry(a, m) > iteration
    }

    /// Non-tabu moves are admissible; tabu moves only when they reach a cost
    /// strictly below the best found so far.
    pub fn is_admissible<W: Weight>(&self, a: &Assignment, m: SwapMove, iteration: u64, move_cost: W, best_cost: W) -> bool {
        !self.move_is_tabu(a, m, iteration) || move_cost < best_cost
    }
}

/// What one tabu-search iteration did.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TsStep<W> {
    pub mv: SwapMove,
    pub cost: W,
    pub was_tabu: bool,
    /// The move was tabu and admitted through aspiration.
    pub aspirated: bool,
    /// No candidate was admissible; the tabu move expiring soonest was taken.
    pub fallback: bool,
}

pub struct TsState<'a, W> {
    inst: &'a QapInstance<W>,
    rng: QapRng,
    moves: Vec<SwapMove>,
    sample_size: usize,
    tenure: u64,
    current: Assignment,
    current_cost: W,
    best_cost: W,
    deltas: SwapDeltaTable<W>,
    tabu: TabuList,
    iteration: u64,
}

impl<'a, W: Weight> TsState<'a, W> {
    pub fn new(inst: &'a QapInstance<W>, cfg: &TsConfig, seed: u64) -> Result<Self> {
        cfg.validate()?;
        let n = inst.n();
        let mut rng = seeded_rng(seed);
        let current = random_assignment(n, &mut rng);
        let current_cost = evaluate_unchecked(inst, current.as_slice());
        let moves: Vec<SwapMove> = SwapMove::all(n).collect();
        let sample_size = ((cfg.candidate_fraction * moves.len() as f64).ceil() as usize).clamp(1.min(moves.len()), moves.len());
        Ok(Self {
            inst,
            rng,
            sample_size,
            tenure: cfg.tenure_for(n),
            deltas: SwapDeltaTable::new(inst, &current)?,
            tabu: TabuList::new(n),
            current,
            current_cost,
            best_cost: current_cost,
            moves,
            iteration: 0,
        })
    }

    pub fn current(&self) -> &Assignment {
        &self.current
    }

    pub fn current_cost(&self) -> W {
        self.current_cost
    }

    pub fn best_cost(&self) -> W {
        self.best_cost
    }

    pub fn tabu(&self) -> &TabuList {
        &self.tabu
    }

    pub fn iteration(&self) -> u64 {
        self.iteration
    }

    pub fn tenure(&self) -> u64 {
        self.tenure
    }

    /// `false` when the neighborhood is empty (n < 2).
    pub fn can_move(&self) -> bool {
        !self.moves.is_empty()
    }

    /// Cost of every candidate `m` from the current assignment.
    pub fn neighbor_cost(&self, m: SwapMove) -> W {
        self.current_cost + self.deltas.get(m)
    }

    fn candidates(&mut self) -> Vec<SwapMove> {
        if self.sample_size >= self.moves.len() {
            return self.moves.clone();
        }
        let mut picked = index::sample(&mut self.rng, self.moves.len(), self.sample_size).into_vec();
        picked.sort_unstable();
        picked.into_iter().map(|k| self.moves[k]).collect()
    }

    /// Moves to the best admissible neighbor (even if worse than the current
    /// assignment). Ties go to the first move in lexicographic order.
    pub fn step(&mut self) -> TsStep<W> {
        let t = self.iteration;
        let mut best: Option<(SwapMove, W, bool)> = None;
        let mut fallback: Option<(SwapMove, W, u64)> = None;
        for m in self.candidates() {
            let cost = self.neighbor_cost(m);
            let tabu = self.tabu.move_is_tabu(&self.current, m, t);
            if self.tabu.is_admissible(&self.current, m, t, cost, self.best_cost) {
                if best.is_none_or(|(_, c, _)| cost < c) {
                    best = Some((m, cost, tabu));
                }
            } else {
                let expiry = self.tabu.move_expiry(&self.current, m);
                if fallback.is_none_or(|(_, c, e)| expiry < e || (expiry == e && cost < c)) {
                    fallback = Some((m, cost, expiry));
                }
            }
        }
        let (mv, cost, was_tabu, used_fallback) = match (best, fallback) {
            (Some((m, c, tabu)), _) => (m, c, tabu, false),
            (None, Some((m, c, _))) => (m, c, true, true),
            (None, None) => unreachable!("step requires a non-empty neighborhood"),
        };

        let until = t + self.tenure + 1;
        self.tabu.forbid(mv.i, self.current.location(mv.i), until);
        self.tabu.forbid(mv.j, self.current.location(mv.j), until);
        self.current.swap_unchecked(mv);
        self.deltas.apply(self.inst, &self.current, mv);
        self.current_cost = cost;
        if cost < self.best_cost {
            self.best_cost = cost;
        }
        self.iteration += 1;

        if self.iteration.is_multiple_of(RESYNC_EVERY) {
            let exact = evaluate_unchecked(self.inst, self.current.as_slice());
            if W::EXACT {
                assert_eq!(exact, self.current_cost, "tabu search delta accumulation drifted");
            }
            self.current_cost = exact;
        }

        TsStep {
            mv,
            cost,
            was_tabu,
            aspirated: was_tabu && !used_fallback,
            fallback: used_fallback,
        }
    }
}

pub fn ts_run<W: Weight>(inst: &QapInstance<W>, cfg: &TsConfig, stop: &StopCondition<W>, seed: u64) -> Result<RunResult<W>> {
    stop.validate()?;
    let started = Instant::now();
    let mut state = TsState::new(inst, cfg, seed)?;
    let mut search = Search::started_at(started, inst, stop, state.current().clone(), state.current_cost());
    while state.can_move() && !search.should_stop(state.iteration()) {
        let step = state.step();
        search.offer(state.iteration(), state.current(), step.cost);
    }
    search.finish(SolverId::Ts, state.iteration(), seed)
}
