//! Constant-space reconstruction of the optimal drop policy.
//!
//! The solver finishes holding `E(t, k)` and `C(t, k)` for the final
//! budget. Those two numbers are enough to climb back down the decision
//! tree: splitting them yields the capacities of the surviving and
//! breaking sub-domains, which in turn give the next floor to test and the
//! state after either outcome, all in constant time per step. Once the
//! remaining items cover the remaining interval information-theoretically,
//! the policy hands over to plain binary-search midpoints.

use crate::capacity::{exact_div, ideal_tests, Cap, ProblemInstance};
use crate::solver::solve_analytic;
use crate::Error;

/// Result of one drop.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DropOutcome {
    Broke,
    Survived,
}

impl std::fmt::Display for DropOutcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DropOutcome::Broke => write!(f, "broke"),
            DropOutcome::Survived => write!(f, "survived"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolicyMode {
    /// Tracking exact capacities through the split recurrences.
    Analytic,
    /// Items no longer bind; plain midpoint bisection.
    Bisect,
    /// The threshold is pinned down.
    Resolved,
}

/// The four sub-domain quantities isolated from one `(E, C)` pair:
///
/// ```text
/// break_boundary = C(t-1, k-1) = C(t, k) * k / t
/// stay_boundary  = C(t-1, k)   = C(t, k) - break_boundary
/// stay_capacity  = E(t-1, k)   = (E(t, k) + stay_boundary - 1) / 2
/// break_capacity = E(t-1, k-1) = E(t, k) - stay_capacity - 1
/// ```
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StateSplit {
    pub stay_capacity: Cap,
    pub stay_boundary: Cap,
    pub break_capacity: Cap,
    pub break_boundary: Cap,
}

/// Partition an exact `(E(t, k), C(t, k))` pair into the surviving and
/// breaking sub-domain capacities. Both divisions are exact for
/// consistent inputs; a nonzero remainder aborts, since it can only mean
/// the state was corrupted.
pub fn split_state(capacity: Cap, boundary: Cap, tests: u64, items: u32) -> StateSplit {
    assert!(tests >= 1 && items >= 1, "split needs live resources");
    let e = capacity.exact_value();
    let b = boundary.exact_value();

    let break_boundary = exact_div(
        b.checked_mul(u128::from(items))
            .expect("boundary product overflowed 128 bits"),
        u128::from(tests),
    );
    let stay_boundary = b - break_boundary;
    let stay_capacity = exact_div(e + stay_boundary - 1, 2);
    let break_capacity = e - stay_capacity - 1;

    StateSplit {
        stay_capacity: Cap::exact(stay_capacity),
        stay_boundary: Cap::exact(stay_boundary),
        break_capacity: Cap::exact(break_capacity),
        break_boundary: Cap::exact(break_boundary),
    }
}

/// Live retracing state between drops.
///
/// `highest_safe` and `lowest_break` bracket the unknown threshold; in
/// analytic mode `capacity`/`boundary` are the exact `E`/`C` of the
/// remaining budget and always cover the open interval between them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PolicyState {
    tests_left: u64,
    items_left: u32,
    capacity: Cap,
    boundary: Cap,
    highest_safe: u64,
    lowest_break: u64,
    mode: PolicyMode,
}

/// Seed the retracing state for an instance.
///
/// Instances that went through the full solve start in analytic mode from
/// the terminal capacities. A single item starts analytic as well, from
/// the closed-form sequential state `E(N, 1) = C(N, 1) = N`. Instances
/// whose item budget already covers the information bound carry no
/// terminal state and start directly in bisect mode.
pub fn init_policy(instance: ProblemInstance) -> Result<PolicyState, Error> {
    let floors = instance.floors();
    if floors == 0 {
        return Err(Error::NoFloors);
    }
    let items = instance.items();
    let outcome = solve_analytic(instance);
    let lowest_break = floors + 1;

    let state = if items == 1 {
        PolicyState {
            tests_left: floors,
            items_left: 1,
            capacity: Cap::exact(u128::from(floors)),
            boundary: Cap::exact(u128::from(floors)),
            highest_safe: 0,
            lowest_break,
            mode: PolicyMode::Analytic,
        }
    } else if let Some(terminal) = outcome.terminal {
        PolicyState {
            tests_left: terminal.tests,
            items_left: items,
            capacity: terminal.capacity,
            boundary: terminal.boundary,
            highest_safe: 0,
            lowest_break,
            mode: PolicyMode::Analytic,
        }
    } else {
        PolicyState {
            tests_left: outcome.t_star,
            items_left: items,
            capacity: Cap::ZERO,
            boundary: Cap::ZERO,
            highest_safe: 0,
            lowest_break,
            mode: PolicyMode::Bisect,
        }
    };
    Ok(state)
}

/// `ceil(log2(gap))`: tests needed to separate `gap` outcomes.
fn bisect_tests_needed(gap: u64) -> u32 {
    debug_assert!(gap >= 2);
    ideal_tests(gap - 1)
}

impl PolicyState {
    pub fn tests_left(&self) -> u64 {
        self.tests_left
    }

    pub fn items_left(&self) -> u32 {
        self.items_left
    }

    pub fn highest_safe(&self) -> u64 {
        self.highest_safe
    }

    pub fn lowest_break(&self) -> u64 {
        self.lowest_break
    }

    pub fn mode(&self) -> PolicyMode {
        self.mode
    }

    /// Exact `(E, C)` of the remaining budget, present in analytic mode.
    pub fn algebraic_state(&self) -> Option<(Cap, Cap)> {
        (self.mode == PolicyMode::Analytic).then_some((self.capacity, self.boundary))
    }

    /// The highest safe floor once resolved, absent otherwise.
    pub fn resolved_threshold(&self) -> Option<u64> {
        (self.mode == PolicyMode::Resolved).then_some(self.highest_safe)
    }

    /// The optimal next floor to test, strictly inside the open interval
    /// `(highest_safe, lowest_break)`.
    ///
    /// Analytic mode places the drop so that a break leaves exactly the
    /// sub-domain `E(t-1, k-1)` can cover; bisect mode takes the midpoint.
    pub fn next_drop(&self) -> u64 {
        assert!(
            self.mode != PolicyMode::Resolved,
            "no drop left to make: the threshold is resolved"
        );
        let gap = self.lowest_break - self.highest_safe;
        debug_assert!(gap >= 2);
        assert!(self.tests_left >= 1, "test budget exhausted while unresolved");

        match self.mode {
            PolicyMode::Analytic => {
                let split = split_state(self.capacity, self.boundary, self.tests_left, self.items_left);
                let reach = split.break_capacity.exact_value();
                let reach = u64::try_from(reach).unwrap_or(u64::MAX);
                let by_capacity = self.highest_safe.saturating_add(reach).saturating_add(1);
                by_capacity.min(self.lowest_break - 1)
            }
            PolicyMode::Bisect => self.highest_safe + gap / 2,
            PolicyMode::Resolved => unreachable!(),
        }
    }

    /// Pure transition to the state after dropping at `floor` with the
    /// given outcome. `floor` must lie strictly inside the current open
    /// interval (it normally comes from [`Self::next_drop`]).
    pub fn apply_outcome(&self, floor: u64, outcome: DropOutcome) -> PolicyState {
        assert!(
            self.mode != PolicyMode::Resolved,
            "cannot apply an outcome to a resolved state"
        );
        assert!(
            self.highest_safe < floor && floor < self.lowest_break,
            "drop floor {floor} outside the open interval ({}, {})",
            self.highest_safe,
            self.lowest_break
        );
        assert!(self.tests_left >= 1, "test budget exhausted while unresolved");

        let mut next = *self;
        next.tests_left -= 1;

        if self.mode == PolicyMode::Analytic {
            let split = split_state(self.capacity, self.boundary, self.tests_left, self.items_left);
            match outcome {
                DropOutcome::Broke => {
                    next.items_left -= 1;
                    next.capacity = split.break_capacity;
                    next.boundary = split.break_boundary;
                    next.lowest_break = floor;
                }
                DropOutcome::Survived => {
                    next.capacity = split.stay_capacity;
                    next.boundary = split.stay_boundary;
                    next.highest_safe = floor;
                }
            }
        } else {
            match outcome {
                DropOutcome::Broke => {
                    next.items_left -= 1;
                    next.lowest_break = floor;
                }
                DropOutcome::Survived => {
                    next.highest_safe = floor;
                }
            }
        }

        let gap = next.lowest_break - next.highest_safe;
        if gap == 1 {
            next.mode = PolicyMode::Resolved;
            return next;
        }

        assert!(
            next.items_left >= 1,
            "items exhausted while the interval is unresolved"
        );
        if next.mode == PolicyMode::Analytic {
            if next.items_left >= bisect_tests_needed(gap) {
                next.mode = PolicyMode::Bisect;
            } else {
                // the remaining capacity must still cover the unknown gap
                debug_assert!(next.capacity.meets(u128::from(gap - 1)));
            }
        }
        next
    }
}
