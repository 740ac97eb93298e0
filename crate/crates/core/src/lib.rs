//! Quadratic assignment problem toolkit.
//!
//! Assign `n` facilities to `n` locations minimizing
//! `sum_i sum_k flow(i, k) * distance(loc(i), loc(k))`. The crate provides
//! the instance model and objective with O(n) swap deltas, QAPLIB readers,
//! and three metaheuristics behind one interface: a genetic algorithm
//! ([`ga`]), tabu search ([`ts`]) and simulated annealing ([`sa`]).
//!
//! The model is generic over the [`Weight`] scalar. QAPLIB data is integral,
//! so the aliases below fix it to `i64`.

pub mod assignment;
pub mod error;
pub mod ga;
pub mod instance;
pub mod objective;
pub mod qaplib;
pub mod rng;
pub mod sa;
pub mod scalar;
pub mod solver;
pub mod ts;

pub use assignment::{random_assignment, Assignment, SwapMove};
pub use error::{QapError, Result};
pub use instance::QapInstance;
pub use objective::{evaluate, swap_delta, SwapDeltaTable};
pub use scalar::Weight;
pub use solver::{run, RunResult, SolverConfig, SolverId, StopCondition, TracePoint};

/// Objective values of integral instances.
pub type Cost = i64;

/// Integral instance, as read from QAPLIB.
pub type Instance = QapInstance<i64>;

/// Instance with real-valued flows and distances.
pub type FloatInstance = QapInstance<f64>;
