//! Three-phase analytic computation of the minimax test budget.
//!
//! `T*` is the least `T` with `E(T, K) >= N`. Rather than binary-searching
//! every candidate test count, the solver
//!
//! 1. short-circuits when the item budget already covers the binary-search
//!    lower bound `ceil(log2(N + 1))`,
//! 2. binary-searches over multiples of the item count, `T = K * M`, inside
//!    the envelope `M <= 2^(ceil(T_ideal / K))` that provably brackets the
//!    answer, caching the last capacity state seen below `N`, and
//! 3. walks the remaining gap of at most `K` steps with the constant-time
//!    capacity recurrences.
//!
//! The phase counters are part of the result so the iteration bounds of
//! phases 2 and 3 stay observable and testable.

use serde::Serialize;

use crate::capacity::{advance_state, capacity_with_term, ideal_tests, Cap, ProblemInstance};

/// Which path produced the answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SolvePhase {
    /// `N <= 1` or `K == 1`: the answer is `N` outright.
    Trivial,
    /// Items cover the information bound; the answer is `ceil(log2(N+1))`.
    Phase1,
    /// Bounded multiplier search plus incremental scan.
    Phase3,
}

impl std::fmt::Display for SolvePhase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SolvePhase::Trivial => write!(f, "trivial"),
            SolvePhase::Phase1 => write!(f, "phase1"),
            SolvePhase::Phase3 => write!(f, "phase3"),
        }
    }
}

/// Final solver state: `capacity = E(tests, items)` and
/// `boundary = C(tests, items)`, both exact. The policy engine seeds its
/// retracing from this.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TerminalState {
    pub tests: u64,
    pub items: u32,
    pub capacity: Cap,
    pub boundary: Cap,
}

/// A consistent `(E(tests, K), C(tests, K))` snapshot cached by phase 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CachedState {
    pub tests: u64,
    pub capacity: Cap,
    pub boundary: Cap,
}

/// Output of the bounded multiplier search.
#[derive(Debug, Clone, Copy)]
pub struct Phase2Result {
    /// Snapshot at `tests = items * (multiplier - 1)`, the greatest
    /// evaluated state still below the floor count.
    pub cached: CachedState,
    /// Least `M` with `E(K * M, K) >= N`.
    pub multiplier: u64,
    /// Binary-search iterations performed.
    pub splits: u32,
}

/// Full solver result with phase instrumentation.
#[derive(Debug, Clone, Copy)]
pub struct SolveOutcome {
    pub t_star: u64,
    /// Present exactly when the solve ran through phase 3.
    pub terminal: Option<TerminalState>,
    pub phase: SolvePhase,
    pub phase2_splits: u32,
    pub phase3_steps: u32,
}

/// Minimum worst-case number of tests for the instance.
///
/// Accepts `floors == 0` (returns 0). Runs in `O(log N)` arithmetic steps.
pub fn solve_analytic(instance: ProblemInstance) -> SolveOutcome {
    let floors = instance.floors();
    let items = instance.items();

    if floors <= 1 || items == 1 {
        return SolveOutcome {
            t_star: floors,
            terminal: None,
            phase: SolvePhase::Trivial,
            phase2_splits: 0,
            phase3_steps: 0,
        };
    }

    let t_ideal = ideal_tests(floors);
    if items >= t_ideal {
        return SolveOutcome {
            t_star: u64::from(t_ideal),
            terminal: None,
            phase: SolvePhase::Phase1,
            phase2_splits: 0,
            phase3_steps: 0,
        };
    }

    let bracket = phase2_search(floors, items);
    let (terminal, steps) = phase3_scan(floors, items, bracket.cached);
    SolveOutcome {
        t_star: terminal.tests,
        terminal: Some(terminal),
        phase: SolvePhase::Phase3,
        phase2_splits: bracket.splits,
        phase3_steps: steps,
    }
}

/// Upper end of the multiplier envelope, `M_max = 2^(ceil(T_ideal / K))`.
///
/// `E(K * M_max, K) >= M_max^K >= 2^T_ideal > N`, so the multiplier search
/// over `[1, M_max]` always brackets the answer.
pub fn phase2_bound(floors: u64, items: u32) -> u64 {
    let t_ideal = ideal_tests(floors);
    assert!(
        items < t_ideal,
        "multiplier search requires a binding item constraint"
    );
    1u64 << t_ideal.div_ceil(items)
}

/// Binary search for the least multiplier `M` with `E(K * M, K) >= N`,
/// caching the evaluated state each time the capacity falls short.
///
/// Requires `items < ideal_tests(floors)`, which guarantees
/// `E(K, K) = 2^K - 1 < N`: the cache branch is then taken at least once,
/// and the returned snapshot is exactly the state at `K * (M - 1)`.
pub fn phase2_search(floors: u64, items: u32) -> Phase2Result {
    let clamp = u128::from(floors);
    let mut lo: u64 = 1;
    let mut hi: u64 = phase2_bound(floors, items);
    let mut cached: Option<CachedState> = None;
    let mut splits: u32 = 0;

    while lo < hi {
        splits += 1;
        let mid = lo + (hi - lo) / 2;
        let tests_mid = u64::from(items)
            .checked_mul(mid)
            .expect("multiplier envelope stays inside u64");
        let (capacity, boundary) = capacity_with_term(tests_mid, items, clamp);
        if capacity.meets(clamp) {
            hi = mid;
        } else {
            // full-loop path: capacity and trailing term are both exact
            lo = mid + 1;
            cached = Some(CachedState {
                tests: tests_mid,
                capacity,
                boundary,
            });
        }
    }

    let cached = cached.expect("phase 1 guard broken: no multiplier fell below the floor count");
    Phase2Result {
        cached,
        multiplier: lo,
        splits,
    }
}

/// Advance the cached state one test at a time until the capacity covers
/// the floor count. The multiplier bracket keeps this to at most `items`
/// steps; exceeding that is a contract violation.
pub fn phase3_scan(floors: u64, items: u32, cached: CachedState) -> (TerminalState, u32) {
    let clamp = u128::from(floors);
    let mut capacity = cached.capacity;
    let mut boundary = cached.boundary;
    let mut tests = cached.tests;
    let mut steps: u32 = 0;

    while !capacity.meets(clamp) {
        (capacity, boundary, tests) = advance_state(capacity, boundary, tests, items);
        steps += 1;
        assert!(
            steps <= items,
            "incremental scan exceeded the item count: the cached bracket was wrong"
        );
    }

    (
        TerminalState {
            tests,
            items,
            capacity,
            boundary,
        },
        steps,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::baseline::{solve_binomial_bsearch, solve_dp_slow};
    use proptest::prelude::*;

    fn instance(floors: u64, items: u32) -> ProblemInstance {
        ProblemInstance::new(floors, items).unwrap()
    }

    #[test]
    fn solve_examples() {
        assert_eq!(solve_analytic(instance(100, 2)).t_star, 14);

        let one = solve_analytic(instance(1, 5));
        assert_eq!(one.t_star, 1);
        assert_eq!(one.phase, SolvePhase::Trivial);

        let wide = solve_analytic(instance(100, 7));
        assert_eq!(wide.t_star, 7);
        assert_eq!(wide.phase, SolvePhase::Phase1);

        let zero = solve_analytic(instance(0, 3));
        assert_eq!(zero.t_star, 0);
        assert_eq!(zero.phase, SolvePhase::Trivial);
    }

    #[test]
    fn solve_huge_two_items() {
        // least T with T (T + 1) / 2 >= 10^18, checked here by direct
        // integer arithmetic
        let floors: u64 = 1_000_000_000_000_000_000;
        let got = solve_analytic(instance(floors, 2));
        let t = u128::from(got.t_star);
        assert!(t * (t + 1) / 2 >= u128::from(floors));
        assert!((t - 1) * t / 2 < u128::from(floors));
        assert_eq!(got.t_star, 1_414_213_562);
        assert_eq!(got.t_star, solve_binomial_bsearch(instance(floors, 2)));
    }

    #[test]
    fn phase2_bound_examples() {
        assert_eq!(phase2_bound(100, 2), 16);
        assert_eq!(phase2_bound(100, 6), 4);
    }

    #[test]
    #[should_panic(expected = "binding item constraint")]
    fn phase2_bound_rejects_unconstrained_items() {
        phase2_bound(1, 1);
    }

    #[test]
    fn phase2_search_examples() {
        let checks = [
            // (floors, items, multiplier, cached (tests, capacity, boundary))
            (100u64, 2u32, 7u64, (12u64, 78u128, 66u128)),
            (100, 3, 3, (6, 41, 20)),
            (8, 2, 2, (2, 3, 1)),
            // single item: every multiple of one is a candidate
            (100, 1, 100, (99, 99, 99)),
        ];
        for (floors, items, m, (t, e, b)) in checks {
            let got = phase2_search(floors, items);
            assert_eq!(got.multiplier, m, "multiplier for N={floors}, K={items}");
            assert_eq!(got.cached.tests, t);
            assert_eq!(got.cached.capacity.exact_value(), e);
            assert_eq!(got.cached.boundary.exact_value(), b);
            assert!(got.splits <= ideal_tests(floors).div_ceil(items));
        }
    }

    #[test]
    fn phase3_scan_examples() {
        let cached = |t, e, b| CachedState {
            tests: t,
            capacity: Cap::exact(e),
            boundary: Cap::exact(b),
        };

        let (term, steps) = phase3_scan(100, 2, cached(12, 78, 66));
        assert_eq!((term.tests, steps), (14, 2));
        assert_eq!(term.capacity.exact_value(), 105);
        assert_eq!(term.boundary.exact_value(), 91);

        let (term, steps) = phase3_scan(79, 2, cached(12, 78, 66));
        assert_eq!((term.tests, steps), (13, 1));
        assert_eq!(term.capacity.exact_value(), 91);
        assert_eq!(term.boundary.exact_value(), 78);

        // boundary case E = N exactly: the bracket itself moves down
        let bracket = phase2_search(78, 2);
        assert_eq!(bracket.multiplier, 6);
        assert_eq!(bracket.cached, cached(10, 55, 45));
        let (term, steps) = phase3_scan(78, 2, bracket.cached);
        assert_eq!((term.tests, steps), (12, 2));
        assert_eq!(term.capacity.exact_value(), 78);
        assert_eq!(term.boundary.exact_value(), 66);
    }

    #[test]
    fn agrees_with_dp_oracle_small_grid() {
        for floors in 0..=120u64 {
            for items in 1..=5u32 {
                let inst = instance(floors, items);
                assert_eq!(
                    solve_analytic(inst).t_star,
                    solve_dp_slow(inst),
                    "mismatch at N={floors}, K={items}"
                );
            }
        }
    }

    #[test]
    fn minimality_certificate() {
        for floors in [2u64, 37, 100, 999, 65_536, 1_000_000_007] {
            for items in 2..=8u32 {
                let got = solve_analytic(instance(floors, items));
                if let Some(term) = got.terminal {
                    assert!(term.capacity.meets(u128::from(floors)));
                    assert!(!capacity_with_term(term.tests - 1, items, u128::from(floors))
                        .0
                        .meets(u128::from(floors)));
                    assert_eq!(term.tests, got.t_star);
                }
            }
        }
    }

    #[test]
    fn phase1_consistency() {
        for floors in 1..=300u64 {
            for items in 1..=12u32 {
                let got = solve_analytic(instance(floors, items));
                if got.phase == SolvePhase::Phase1 {
                    assert!(items >= ideal_tests(floors));
                    assert!(1u128 << got.t_star > u128::from(floors));
                }
            }
        }
    }

    #[test]
    fn counters_within_bounds_small_grid() {
        for floors in 1..=300u64 {
            for items in 1..=10u32 {
                let got = solve_analytic(instance(floors, items));
                assert!(got.phase3_steps <= items);
                assert!(got.phase2_splits <= ideal_tests(floors).div_ceil(items));
                if got.phase == SolvePhase::Phase3 {
                    assert!(got.terminal.is_some());
                }
            }
        }
    }

    proptest! {
        #[test]
        fn agrees_with_binomial_bsearch(floors in 0u64..=1_000_000_000_000, items in 1u32..=64) {
            let inst = instance(floors, items);
            prop_assert_eq!(solve_analytic(inst).t_star, solve_binomial_bsearch(inst));
        }
    }
}
