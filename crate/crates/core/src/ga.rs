//! Generational genetic algorithm over permutations.
//!
//! Each generation: tournament-select parents, order crossover with
//! probability `crossover_rate`, swap mutation with probability
//! `mutation_rate`, then the next population is the `elite_count` best
//! parents followed by the best offspring, truncated to `population_size`.

use std::time::Instant;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::assignment::{random_assignment, Assignment, SwapMove};
use crate::error::{QapError, Result};
use crate::instance::QapInstance;
use crate::objective::evaluate_unchecked;
use crate::rng::{seeded_rng, QapRng};
use crate::scalar::Weight;
use crate::solver::{RunResult, Search, SolverId, StopCondition};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GaConfig {
    pub population_size: usize,
    pub crossover_rate: f64,
    pub mutation_rate: f64,
    pub tournament_size: usize,
    pub elite_count: usize,
}

impl Default for GaConfig {
    fn default() -> Self {
        Self {
            population_size: 100,
            crossover_rate: 0.9,
            mutation_rate: 0.2,
            tournament_size: 3,
            elite_count: 2,
        }
    }
}

impl GaConfig {
    pub fn validate(&self) -> Result<()> {
        let err = |m: String| Err(QapError::Config(m));
        if self.population_size < 2 {
            return err(format!("population_size must be >= 2, got {}", self.population_size));
        }
        for (name, p) in [("crossover_rate", self.crossover_rate), ("mutation_rate", self.mutation_rate)] {
            if !(0.0..=1.0).contains(&p) {
                return err(format!("{name} must lie in [0, 1], got {p}"));
            }
        }
        if self.tournament_size == 0 || self.tournament_size > self.population_size {
            return err(format!(
                "tournament_size must lie in 1..={}, got {}",
                self.population_size, self.tournament_size
            ));
        }
        if self.elite_count >= self.population_size {
            return err(format!(
                "elite_count must be < population_size ({}), got {}",
                self.population_size, self.elite_count
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Member<W> {
    pub assignment: Assignment,
    pub cost: W,
}

/// A fixed-size population with cached costs.
#[derive(Debug, Clone, PartialEq)]
pub struct Population<W> {
    members: Vec<Member<W>>,
}

impl<W: Weight> Population<W> {
    pub fn members(&self) -> &[Member<W>] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Lowest-cost member; the earliest one on ties.
    pub fn best(&self) -> &Member<W> {
        let mut best = &self.members[0];
        for m in &self.members[1..] {
            if m.cost < best.cost {
                best = m;
            }
        }
        best
    }
}

/// Order crossover (OX) with explicit cut points: child one keeps
/// `p1[lo..=hi]` in place and fills the remaining positions, starting after
/// `hi` and wrapping, with the missing values in the order they appear in
/// `p2` (also read from `hi + 1`). Child two swaps the parents' roles.
pub fn order_crossover_at(p1: &Assignment, p2: &Assignment, lo: usize, hi: usize) -> Result<(Assignment, Assignment)> {
    let n = p1.len();
    if p2.len() != n {
        return Err(QapError::DimensionMismatch {
            assignment: p2.len(),
            instance: n,
        });
    }
    if lo > hi || hi >= n {
        return Err(QapError::IndexOutOfRange { index: hi.max(lo), n });
    }
    Ok((
        ox_child(p1.as_slice(), p2.as_slice(), lo, hi),
        ox_child(p2.as_slice(), p1.as_slice(), lo, hi),
    ))
}

fn ox_child(keep: &[usize], other: &[usize], lo: usize, hi: usize) -> Assignment {
    let n = keep.len();
    let mut child = vec![0; n];
    let mut used = vec![false; n];
    for k in lo..=hi {
        child[k] = keep[k];
        used[keep[k]] = true;
    }
    let mut pos = (hi + 1) % n;
    for t in 0..n {
        let v = other[(hi + 1 + t) % n];
        if !used[v] {
            used[v] = true;
            child[pos] = v;
            pos = (pos + 1) % n;
        }
    }
    Assignment::from_vec_unchecked(child)
}

/// Order crossover with uniformly drawn cut points.
pub fn order_crossover<R: Rng + ?Sized>(p1: &Assignment, p2: &Assignment, rng: &mut R) -> Result<(Assignment, Assignment)> {
    let n = p1.len();
    if p2.len() != n {
        return Err(QapError::DimensionMismatch {
            assignment: p2.len(),
            instance: n,
        });
    }
    if n == 0 {
        return Ok((p1.clone(), p2.clone()));
    }
    let a = rng.random_range(0..n);
    let b = rng.random_range(0..n);
    order_crossover_at(p1, p2, a.min(b), a.max(b))
}

/// Exchanges one uniformly chosen pair of distinct facilities. No-op for n < 2.
pub fn swap_mutation<R: Rng + ?Sized>(a: &Assignment, rng: &mut R) -> Assignment {
    let mut out = a.clone();
    if out.len() >= 2 {
        out.swap_unchecked(SwapMove::random(out.len(), rng));
    }
    out
}

/// Stepwise GA state; [`ga_run`] drives it under a stop condition.
pub struct GaState<'a, W> {
    inst: &'a QapInstance<W>,
    cfg: GaConfig,
    rng: QapRng,
    population: Population<W>,
    generation: u64,
}

impl<'a, W: Weight> GaState<'a, W> {
    /// Draws the initial population.
    pub fn new(inst: &'a QapInstance<W>, cfg: &GaConfig, seed: u64) -> Result<Self> {
        cfg.validate()?;
        let mut rng = seeded_rng(seed);
        let members = (0..cfg.population_size)
            .map(|_| {
                let assignment = random_assignment(inst.n(), &mut rng);
                let cost = evaluate_unchecked(inst, assignment.as_slice());
                Member { assignment, cost }
            })
            .collect();
        Ok(Self {
            inst,
            cfg: cfg.clone(),
            rng,
            population: Population { members },
            generation: 0,
        })
    }

    pub fn population(&self) -> &Population<W> {
        &self.population
    }

    pub fn generation(&self) -> u64 {
        self.generation
    }

    fn tournament(&mut self) -> usize {
        let size = self.population.len();
        let mut winner = self.rng.random_range(0..size);
        for _ in 1..self.cfg.tournament_size {
            let challenger = self.rng.random_range(0..size);
            if self.population.members[challenger].cost < self.population.members[winner].cost {
                winner = challenger;
            }
        }
        winner
    }

    fn offspring_of(&mut self, child: Assignment) -> Member<W> {
        let assignment = if self.rng.random::<f64>() < self.cfg.mutation_rate {
            swap_mutation(&child, &mut self.rng)
        } else {
            child
        };
        let cost = evaluate_unchecked(self.inst, assignment.as_slice());
        Member { assignment, cost }
    }

    /// Produces the next generation.
    pub fn step(&mut self) {
        let size = self.cfg.population_size;
        let mut offspring = Vec::with_capacity(size + 1);
        while offspring.len() < size {
            let (i, j) = (self.tournament(), self.tournament());
            let (p1, p2) = (&self.population.members[i].assignment, &self.population.members[j].assignment);
            let (c1, c2) = if self.rng.random::<f64>() < self.cfg.crossover_rate {
                order_crossover(p1, p2, &mut self.rng).expect("population members share one length")
            } else {
                (p1.clone(), p2.clone())
            };
            offspring.push(self.offspring_of(c1));
            if offspring.len() < size {
                offspring.push(self.offspring_of(c2));
            }
        }

        let by_cost = |a: &Member<W>, b: &Member<W>| a.cost.partial_cmp(&b.cost).unwrap_or(std::cmp::Ordering::Equal);
        let mut parents = std::mem::take(&mut self.population.members);
        parents.sort_by(by_cost);
        offspring.sort_by(by_cost);
        parents.truncate(self.cfg.elite_count);
        parents.extend(offspring.into_iter().take(size - self.cfg.elite_count));
        self.population.members = parents;
        self.generation += 1;
    }
}

pub fn ga_run<W: Weight>(inst: &QapInstance<W>, cfg: &GaConfig, stop: &StopCondition<W>, seed: u64) -> Result<RunResult<W>> {
    stop.validate()?;
    let started = Instant::now();
    let mut state = GaState::new(inst, cfg, seed)?;
    let best = state.population().best().clone();
    let mut search = Search::started_at(started, inst, stop, best.assignment, best.cost);
    while !search.should_stop(state.generation()) {
        state.step();
        let best = state.population().best();
        search.offer(state.generation(), &best.assignment, best.cost);
    }
    search.finish(SolverId::Ga, state.generation(), seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::HashMap;

    fn perm(v: &[usize]) -> Assignment {
        Assignment::new(v.to_vec()).unwrap()
    }

    #[test]
    fn ox_worked_example() {
        // keep p1[2..=4] = [2,3,4]; fill from p2 starting after position 4
        let p1 = perm(&[0, 1, 2, 3, 4, 5, 6]);
        let p2 = perm(&[6, 4, 2, 0, 5, 1, 3]);
        let (c1, c2) = order_crossover_at(&p1, &p2, 2, 4).unwrap();
        // p2 from index 5: 1,3,6,4,2,0,5 -> missing {0,1,5,6} in order 1,6,0,5
        assert_eq!(c1.as_slice(), &[0, 5, 2, 3, 4, 1, 6]);
        // p1 from index 5: 5,6,0,1,2,3,4 -> missing values in order 6,1,3,4
        assert_eq!(c2.as_slice(), &[3, 4, 2, 0, 5, 6, 1]);
    }

    #[test]
    fn ox_identical_parents_reproduce_them() {
        let mut rng = seeded_rng(1);
        let p = random_assignment(9, &mut rng);
        for _ in 0..20 {
            let (a, b) = order_crossover(&p, &p, &mut rng).unwrap();
            assert_eq!(a, p);
            assert_eq!(b, p);
        }
    }

    #[test]
    fn ox_n2_enumeration() {
        let p1 = perm(&[0, 1]);
        let p2 = perm(&[1, 0]);
        for (lo, hi) in [(0, 0), (0, 1), (1, 1)] {
            let (a, b) = order_crossover_at(&p1, &p2, lo, hi).unwrap();
            for c in [a, b] {
                assert!(c == p1 || c == p2);
            }
        }
    }

    #[test]
    fn ox_length_mismatch() {
        let mut rng = seeded_rng(0);
        assert!(order_crossover(&perm(&[0, 1]), &perm(&[0, 1, 2]), &mut rng).is_err());
    }

    #[test]
    fn mutation_changes_exactly_two_positions() {
        let mut rng = seeded_rng(4);
        assert_eq!(swap_mutation(&perm(&[0]), &mut rng), perm(&[0]));
        let a = random_assignment(10, &mut rng);
        for _ in 0..50 {
            let b = swap_mutation(&a, &mut rng);
            let diff = a.as_slice().iter().zip(b.as_slice()).filter(|(x, y)| x != y).count();
            assert_eq!(diff, 2);
        }
    }

    #[test]
    fn mutation_pair_frequencies_n3() {
        let mut rng = seeded_rng(77);
        let a = perm(&[0, 1, 2]);
        let mut counts: HashMap<Vec<usize>, usize> = HashMap::new();
        for _ in 0..3000 {
            *counts.entry(swap_mutation(&a, &mut rng).into_vec()).or_default() += 1;
        }
        assert_eq!(counts.len(), 3);
        for c in counts.values() {
            assert!((*c as f64 / 3000.0 - 1.0 / 3.0).abs() <= 0.05);
        }
    }

    #[test]
    fn config_validation() {
        let ok = GaConfig::default();
        assert!(ok.validate().is_ok());
        for bad in [
            GaConfig { population_size: 1, tournament_size: 1, elite_count: 0, ..ok.clone() },
            GaConfig { crossover_rate: 1.5, ..ok.clone() },
            GaConfig { mutation_rate: -0.1, ..ok.clone() },
            GaConfig { tournament_size: 0, ..ok.clone() },
            GaConfig { tournament_size: 101, ..ok.clone() },
            GaConfig { elite_count: 100, ..ok.clone() },
        ] {
            assert!(matches!(bad.validate(), Err(QapError::Config(_))), "{bad:?}");
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn ox_offspring_are_permutations(seed in any::<u64>(), n in 1usize..=10) {
            let mut rng = seeded_rng(seed);
            let p1 = random_assignment(n, &mut rng);
            let p2 = random_assignment(n, &mut rng);
            let (a, b) = order_crossover(&p1, &p2, &mut rng).unwrap();
            prop_assert!(Assignment::new(a.into_vec()).is_ok());
            prop_assert!(Assignment::new(b.into_vec()).is_ok());
        }
    }
}
