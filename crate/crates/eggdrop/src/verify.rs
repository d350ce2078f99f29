//! Exhaustive adversarial validation of the policy engine: replay the
//! policy against every possible threshold, and map the whole decision
//! tree in one linear traversal to prove identification, budget
//! compliance, and tightness of the computed test budget.

use serde::Serialize;
use thiserror::Error;

use crate::policy::{init_policy, DropOutcome, PolicyState};
use crate::solver::solve_analytic;
use crate::capacity::ProblemInstance;

/// Structural defects a decision-tree traversal can surface.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum TreeDefect {
    #[error("drop floor {floor} outside the open interval ({safe}, {brk})")]
    OutOfRangeDrop { floor: u64, safe: u64, brk: u64 },
    #[error("leaf resolved threshold {got}, expected {expected}")]
    LeafOutOfOrder { got: u64, expected: u64 },
    #[error("tree produced {got} leaves, expected {expected}")]
    LeafCount { got: u64, expected: u64 },
}

/// Full record of one simulated run against a fixed ground-truth
/// threshold.
#[derive(Debug, Clone)]
pub struct ThresholdTrace {
    /// Ground-truth highest safe floor fed to the adversary rule.
    pub threshold: u64,
    pub drops: Vec<(u64, DropOutcome)>,
    pub tests_used: u64,
    pub breaks_used: u32,
    /// What the policy reported; must equal `threshold`.
    pub identified: u64,
}

/// Aggregate statistics of the complete decision tree.
#[derive(Debug, Clone, Serialize)]
pub struct SimulationReport {
    pub floors: u64,
    pub items: u32,
    pub t_star: u64,
    /// Deepest leaf; tightness means this equals `t_star`.
    pub max_tests: u64,
    /// Lowest threshold attaining `max_tests`.
    pub worst_threshold: u64,
    /// Always `floors + 1` for a sound tree.
    pub total_leaves: u64,
    /// Tree nodes touched by the traversal (internal plus leaves).
    pub nodes_visited: u64,
    /// `depth_histogram[d]` = number of thresholds resolved in `d` tests.
    pub depth_histogram: Vec<u64>,
}

/// Drive the policy against the deterministic adversary "the item breaks
/// exactly above `threshold`" until resolution.
pub fn simulate(instance: ProblemInstance, threshold: u64) -> ThresholdTrace {
    assert!(
        threshold <= instance.floors(),
        "threshold {threshold} outside [0, {}]",
        instance.floors()
    );
    let mut state = init_policy(instance).expect("simulation needs at least one floor");
    let budget = state.tests_left();

    let mut drops = Vec::new();
    let mut breaks_used: u32 = 0;
    while state.resolved_threshold().is_none() {
        let floor = state.next_drop();
        let outcome = if floor > threshold {
            DropOutcome::Broke
        } else {
            DropOutcome::Survived
        };
        if outcome == DropOutcome::Broke {
            breaks_used += 1;
        }
        drops.push((floor, outcome));
        state = state.apply_outcome(floor, outcome);
        assert!(
            drops.len() as u64 <= budget,
            "policy exceeded its own budget of {budget} tests"
        );
    }

    ThresholdTrace {
        threshold,
        tests_used: drops.len() as u64,
        breaks_used,
        identified: state.resolved_threshold().expect("loop exits resolved"),
        drops,
    }
}

/// Walk the entire decision tree once, sharing policy states along the
/// depth-first spine instead of replaying a root-to-leaf run per
/// threshold.
///
/// Visits every internal node exactly once, so the whole map costs
/// `O(floors)` state transitions. Leaves are checked to appear in
/// threshold order `0, 1, ..., floors`, which proves every threshold is
/// identified correctly.
pub fn map_policy_tree(instance: ProblemInstance) -> Result<SimulationReport, TreeDefect> {
    assert!(instance.floors() >= 1, "tree mapping needs at least one floor");
    let t_star = solve_analytic(instance).t_star;
    let root = init_policy(instance).expect("floors checked above");

    let mut stack: Vec<(PolicyState, u64)> = vec![(root, 0)];
    let mut nodes_visited: u64 = 0;
    let mut leaves: u64 = 0;
    let mut histogram: Vec<u64> = Vec::new();
    let mut max_tests: u64 = 0;
    let mut worst_threshold: u64 = 0;

    while let Some((state, depth)) = stack.pop() {
        nodes_visited += 1;
        if let Some(threshold) = state.resolved_threshold() {
            if threshold != leaves {
                return Err(TreeDefect::LeafOutOfOrder {
                    got: threshold,
                    expected: leaves,
                });
            }
            leaves += 1;
            if histogram.len() <= depth as usize {
                histogram.resize(depth as usize + 1, 0);
            }
            histogram[depth as usize] += 1;
            if depth > max_tests {
                max_tests = depth;
                worst_threshold = threshold;
            }
            continue;
        }

        let floor = state.next_drop();
        if floor <= state.highest_safe() || floor >= state.lowest_break() {
            return Err(TreeDefect::OutOfRangeDrop {
                floor,
                safe: state.highest_safe(),
                brk: state.lowest_break(),
            });
        }
        // push the surviving branch first so breaking branches (lower
        // thresholds) pop first and leaves stream out in order
        stack.push((state.apply_outcome(floor, DropOutcome::Survived), depth + 1));
        stack.push((state.apply_outcome(floor, DropOutcome::Broke), depth + 1));
    }

    if leaves != instance.floors() + 1 {
        return Err(TreeDefect::LeafCount {
            got: leaves,
            expected: instance.floors() + 1,
        });
    }

    Ok(SimulationReport {
        floors: instance.floors(),
        items: instance.items(),
        t_star,
        max_tests,
        worst_threshold,
        total_leaves: leaves,
        nodes_visited,
        depth_histogram: histogram,
    })
}

/// True when the mapped tree is exactly as deep as the computed budget and
/// (at desk scale) the analytic answer matches the quadratic DP oracle.
pub fn check_optimality(instance: ProblemInstance) -> bool {
    assert!(
        instance.floors() <= 100_000,
        "desk-scale guard: exhaustive check beyond 10^5 floors"
    );
    let outcome = solve_analytic(instance);
    let report = match map_policy_tree(instance) {
        Ok(report) => report,
        Err(_) => return false,
    };
    let mut ok = report.max_tests == outcome.t_star;
    if instance.floors() <= 5000 && instance.items() <= 16 {
        ok &= crate::baseline::solve_dp_slow(instance) == outcome.t_star;
    }
    ok
}
