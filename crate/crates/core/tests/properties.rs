use std::path::PathBuf;

use proptest::prelude::*;
use qap_core::ga::{GaConfig, GaState};
use qap_core::qaplib::{self, best_known, load_instance, load_solution, validate_solution};
use qap_core::rng::{seeded_rng, QapRng};
use qap_core::sa::SaConfig;
use qap_core::ts::TsConfig;
use qap_core::{
    evaluate, random_assignment, run, swap_delta, Assignment, Instance, QapInstance, SolverConfig, SolverId,
    StopCondition, SwapMove,
};
use rand::Rng;

fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/qaplib")
}

fn random_instance(n: usize, rng: &mut QapRng) -> Instance {
    let mut m = || (0..n * n).map(|_| rng.random_range(0..50)).collect::<Vec<i64>>();
    let flow = m();
    let distance = m();
    QapInstance::new("rand", n, flow, distance).unwrap()
}

/// Quadruple sum over the expanded 0/1 matrix x[i][j] = (perm[i] == j).
fn brute_force_cost(inst: &Instance, a: &Assignment) -> i64 {
    let n = inst.n();
    let x = |i: usize, j: usize| i64::from(a.location(i) == j);
    let mut total = 0;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    total += inst.flow(i, k) * inst.distance(j, l) * x(i, j) * x(k, l);
                }
            }
        }
    }
    total
}

proptest! {
    #[test]
    fn evaluate_matches_expanded_binary_form(seed in any::<u64>(), n in 1usize..=6) {
        let mut rng = seeded_rng(seed);
        let inst = random_instance(n, &mut rng);
        let a = random_assignment(n, &mut rng);
        prop_assert_eq!(evaluate(&inst, &a).unwrap(), brute_force_cost(&inst, &a));
    }

    #[test]
    fn relabeling_facilities_preserves_cost(seed in any::<u64>(), n in 1usize..=6) {
        let mut rng = seeded_rng(seed);
        let inst = random_instance(n, &mut rng);
        let a = random_assignment(n, &mut rng);
        // facility i becomes facility sigma[i]
        let sigma = random_assignment(n, &mut rng);
        let mut flow = vec![0; n * n];
        let mut perm = vec![0; n];
        for i in 0..n {
            perm[sigma.location(i)] = a.location(i);
            for k in 0..n {
                flow[sigma.location(i) * n + sigma.location(k)] = inst.flow(i, k);
            }
        }
        let relabeled = QapInstance::new("r", n, flow, inst.distance_matrix().to_vec()).unwrap();
        let moved = Assignment::new(perm).unwrap();
        prop_assert_eq!(evaluate(&relabeled, &moved).unwrap(), evaluate(&inst, &a).unwrap());
    }

    #[test]
    fn swap_delta_is_full_reevaluation_difference(seed in any::<u64>(), n in 2usize..=8) {
        let mut rng = seeded_rng(seed);
        let inst = random_instance(n, &mut rng);
        let a = random_assignment(n, &mut rng);
        let base = evaluate(&inst, &a).unwrap();
        for m in SwapMove::all(n) {
            let after = evaluate(&inst, &a.apply_swap(m).unwrap()).unwrap();
            prop_assert_eq!(swap_delta(&inst, &a, m).unwrap(), after - base);
        }
    }
}

#[test]
fn chr12c_solution_reproduces_best_known() {
    let inst = load_instance(&data_dir().join("chr12c.dat")).unwrap();
    assert_eq!(inst.n(), 12);
    assert_eq!(inst.name(), "chr12c");
    let sol = load_solution(&data_dir().join("chr12c.sln")).unwrap();
    let check = validate_solution(&inst, &sol).unwrap();
    assert!(check.matches());
    assert_eq!(check.cost, best_known("chr12c").unwrap());
    assert_eq!(check.cost, 11_156);
}

#[test]
fn bundled_instances_round_trip_and_reflow() {
    for entry in std::fs::read_dir(data_dir()).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().and_then(|e| e.to_str()) != Some("dat") {
            continue;
        }
        let text = std::fs::read_to_string(&path).unwrap();
        let inst = load_instance(&path).unwrap();
        let reflowed = text.split_whitespace().collect::<Vec<_>>().join("\n");
        assert_eq!(qaplib::parse_instance(&reflowed, inst.name()).unwrap(), inst);
        assert_eq!(qaplib::parse_instance(&qaplib::serialize_instance(&inst), inst.name()).unwrap(), inst);
        // worst case n^2 * max f * max d must stay far inside i64
        let n = inst.n() as i128;
        assert!(n * n * inst.max_flow() as i128 * inst.max_distance() as i128 <= i64::MAX as i128);
    }
}

#[test]
fn zero_budget_runs_return_the_seeded_start() {
    let inst = random_instance(9, &mut seeded_rng(1));
    let stop = StopCondition::iterations(0);

    let ga = run(&inst, &SolverConfig::default_for(SolverId::Ga), &stop, 1).unwrap();
    let init = GaState::new(&inst, &GaConfig::default(), 1).unwrap();
    assert_eq!(ga.best_cost, init.population().best().cost);
    assert_eq!(ga.iterations_executed, 0);

    for id in [SolverId::Ts, SolverId::Sa] {
        let r = run(&inst, &SolverConfig::default_for(id), &stop, 7).unwrap();
        assert_eq!(r.best, random_assignment(9, &mut seeded_rng(7)), "{id}");
        assert_eq!(r.iterations_executed, 0);
    }
}

#[test]
fn invalid_configs_fail_before_searching() {
    let inst = random_instance(5, &mut seeded_rng(2));
    let stop = StopCondition::iterations(10);
    let bad = [
        SolverConfig::Ga(GaConfig { population_size: 1, ..GaConfig::default() }),
        SolverConfig::Ts(TsConfig { tenure: Some(0), ..TsConfig::default() }),
        SolverConfig::Sa(SaConfig { alpha: 1.2, ..SaConfig::default() }),
    ];
    for cfg in bad {
        assert!(matches!(run(&inst, &cfg, &stop, 0), Err(qap_core::QapError::Config(_))));
    }
    let no_budget = StopCondition { max_iterations: None, time_limit_ms: None, target_quality: None };
    assert!(run(&inst, &SolverConfig::default_for(SolverId::Ts), &no_budget, 0).is_err());
}

#[test]
fn runs_are_deterministic_feasible_monotone_and_within_budget() {
    let mut rng = seeded_rng(3);
    let inst = random_instance(10, &mut rng);
    for id in SolverId::ALL {
        let cfg = SolverConfig::default_for(id);
        let stop = StopCondition::iterations(300);
        let a = run(&inst, &cfg, &stop, 42).unwrap();
        let b = run(&inst, &cfg, &stop, 42).unwrap();
        assert_eq!(a.best, b.best, "{id}");
        assert_eq!(a.best_cost, b.best_cost);
        assert_eq!(a.trace, b.trace);
        assert!(a.trace_is_monotone());
        assert!(a.iterations_executed <= 300);
        assert!(Assignment::new(a.best.clone().into_vec()).is_ok());
        assert_eq!(a.best_cost, evaluate(&inst, &a.best).unwrap());
        assert_eq!(a.trace.last().unwrap().cost, a.best_cost);
    }
}

#[test]
fn time_limits_are_respected() {
    let inst = random_instance(40, &mut seeded_rng(4));
    for id in SolverId::ALL {
        let stop = StopCondition::time_limit(150);
        let r = run(&inst, &SolverConfig::default_for(id), &stop, 1).unwrap();
        // one iteration of slack: a GA generation or a TS scan at n=40 is well under 100ms
        assert!(r.elapsed_ms <= 250, "{id} took {}ms", r.elapsed_ms);
    }
}

#[test]
fn target_quality_stops_early() {
    let inst = random_instance(8, &mut seeded_rng(5));
    let start = evaluate(&inst, &random_assignment(8, &mut seeded_rng(9))).unwrap();
    let stop = StopCondition::iterations(100_000).with_target(start);
    let r = run(&inst, &SolverConfig::default_for(SolverId::Ts), &stop, 9).unwrap();
    assert_eq!(r.iterations_executed, 0);
}

#[test]
fn ga_population_is_constant_and_elitism_is_monotone() {
    let inst = random_instance(12, &mut seeded_rng(6));
    let cfg = GaConfig { population_size: 30, ..GaConfig::default() };
    let mut state = GaState::new(&inst, &cfg, 8).unwrap();
    let mut best = state.population().best().cost;
    for _ in 0..60 {
        state.step();
        assert_eq!(state.population().len(), 30);
        let now = state.population().best().cost;
        assert!(now <= best);
        best = now;
        for m in state.population().members() {
            assert!(Assignment::new(m.assignment.clone().into_vec()).is_ok());
            assert_eq!(m.cost, evaluate(&inst, &m.assignment).unwrap());
        }
    }
    let mut again = GaState::new(&inst, &cfg, 8).unwrap();
    for _ in 0..60 {
        again.step();
    }
    assert_eq!(again.population(), state.population());
}

#[test]
fn float_instances_are_supported_by_every_solver() {
    let mut rng = seeded_rng(7);
    let n = 7;
    let inst = QapInstance::<f64>::new(
        "float",
        n,
        (0..n * n).map(|_| rng.random_range(0.0..3.0)).collect(),
        (0..n * n).map(|_| rng.random_range(0.0..3.0)).collect(),
    )
    .unwrap();
    for id in SolverId::ALL {
        let r = run(&inst, &SolverConfig::default_for(id), &StopCondition::iterations(2000), 1).unwrap();
        assert!(r.trace_is_monotone());
        assert!((r.best_cost - evaluate(&inst, &r.best).unwrap()).abs() < 1e-9);
    }
}
