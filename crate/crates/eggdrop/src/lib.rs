//! Exact minimax solver for the generalized egg dropping problem.
//!
//! Given `N` candidate floors and `K` identical items that break when
//! dropped from above an unknown threshold floor, this crate computes the
//! minimum worst-case number of tests `T*` that always identifies the
//! threshold, reconstructs the optimal drop policy without any transition
//! tables, and validates both against brute-force oracles and exhaustive
//! adversarial simulation.
//!
//! Modules:
//! - [`capacity`]: exact `E(T, K)` partial binomial sums, their
//!   incremental recurrences, and saturation against a comparison target.
//! - [`solver`]: the three-phase `O(log N)` computation of `T*`.
//! - [`baseline`]: quadratic DP, capacity-table DP, and binary-search
//!   reference solvers.
//! - [`policy`]: constant-space retracing of the optimal decision tree.
//! - [`verify`]: exhaustive per-threshold simulation and linear-time
//!   mapping of the full tree.

use thiserror::Error as ThisError;

pub mod baseline;
pub mod capacity;
pub mod policy;
pub mod solver;
pub mod verify;

/// Input validation failures. Everything past validation is total; state
/// corruption aborts instead of surfacing as an error value.
#[derive(Debug, ThisError, PartialEq, Eq)]
pub enum Error {
    #[error("at least one test item is required")]
    ZeroItems,
    #[error("items {0} exceeds the supported maximum {max}", max = capacity::MAX_ITEMS)]
    TooManyItems(u32),
    #[error("floors {0} exceeds the supported maximum {max}", max = capacity::MAX_FLOORS)]
    TooManyFloors(u64),
    #[error("the policy needs at least one floor to locate a threshold")]
    NoFloors,
}

pub use baseline::{solve_binomial_bsearch, solve_dp_capacity, solve_dp_slow};
pub use capacity::{
    advance_state, capacity_full_row, capacity_with_term, ideal_tests, Cap, ProblemInstance,
    MAX_FLOORS, MAX_ITEMS,
};
pub use policy::{init_policy, split_state, DropOutcome, PolicyMode, PolicyState, StateSplit};
pub use solver::{
    phase2_bound, phase2_search, phase3_scan, solve_analytic, CachedState, Phase2Result,
    SolveOutcome, SolvePhase, TerminalState,
};
pub use verify::{check_optimality, map_policy_tree, simulate, SimulationReport, ThresholdTrace, TreeDefect};
