//! Exact integer evaluation of the drop-testing capacity function and its
//! incremental recurrences.
//!
//! The capacity `E(T, K)` is the number of distinct thresholds that `T`
//! tests and `K` items can distinguish under worst-case outcomes. It is the
//! partial sum of the `T`-th row of Pascal's triangle,
//! `E(T, K) = C(T,1) + C(T,2) + ... + C(T,K)`. All routines here work in
//! 128-bit integers and clamp ("saturate") against a caller-supplied
//! comparison target instead of computing astronomically large values: the
//! solver only ever asks whether a capacity reaches the floor count.

use crate::Error;

/// Highest floor count accepted anywhere in the crate.
pub const MAX_FLOORS: u64 = (1 << 63) - 1;

/// Highest item count accepted anywhere in the crate. Items beyond the
/// information-theoretic test bound never change the answer, so a generous
/// fixed cap keeps every intermediate product inside 128 bits.
pub const MAX_ITEMS: u32 = 1 << 16;

/// One problem: `floors` candidate thresholds probed with `items` breakable
/// test items.
///
/// `floors == 0` is accepted as a degenerate instance (nothing to locate;
/// every solver returns 0). The policy engine rejects it at init.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ProblemInstance {
    floors: u64,
    items: u32,
}

impl ProblemInstance {
    pub fn new(floors: u64, items: u32) -> Result<Self, Error> {
        if items == 0 {
            return Err(Error::ZeroItems);
        }
        if items > MAX_ITEMS {
            return Err(Error::TooManyItems(items));
        }
        if floors > MAX_FLOORS {
            return Err(Error::TooManyFloors(floors));
        }
        Ok(Self { floors, items })
    }

    pub fn floors(self) -> u64 {
        self.floors
    }

    pub fn items(self) -> u32 {
        self.items
    }
}

/// An exact non-negative capacity value, or a value known only to be at
/// least the comparison target it was clamped against.
///
/// When `saturated` is false, `value` is the exact mathematical quantity.
/// When `saturated` is true, the true quantity is `>=` the clamp target and
/// `value` carries no further meaning.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Cap {
    value: u128,
    saturated: bool,
}

impl Cap {
    pub const ZERO: Self = Self {
        value: 0,
        saturated: false,
    };

    pub fn exact(value: u128) -> Self {
        Self {
            value,
            saturated: false,
        }
    }

    /// A value known only to be `>=` the target it was clamped against;
    /// `partial` is whatever running quantity triggered the clamp.
    pub fn saturated(partial: u128) -> Self {
        Self {
            value: partial,
            saturated: true,
        }
    }

    pub fn is_saturated(self) -> bool {
        self.saturated
    }

    /// The exact value. Panics on a saturated capacity: callers that need
    /// exactness hold that as a state invariant.
    pub fn exact_value(self) -> u128 {
        assert!(
            !self.saturated,
            "exact_value called on a saturated capacity"
        );
        self.value
    }

    /// Whether the represented quantity is `>= target`. Sound for any
    /// `target` no larger than the clamp the value was computed against.
    pub fn meets(self, target: u128) -> bool {
        self.saturated || self.value >= target
    }
}

/// Integer division that must be exact. A nonzero remainder means a caller
/// fed in a corrupted state, so it stops the program rather than propagate
/// a wrong capacity.
pub(crate) fn exact_div(numerator: u128, divisor: u128) -> u128 {
    let quotient = numerator / divisor;
    assert!(
        quotient * divisor == numerator,
        "nonzero remainder in exact integer division: {numerator} / {divisor}"
    );
    quotient
}

/// Capacity `E(tests, items)` together with the trailing binomial
/// coefficient `C(tests, items)`, both exact unless the running sum reaches
/// `clamp` mid-loop.
///
/// On the clamped path the sum is returned saturated and the term reflects
/// the last coefficient actually computed. Term updates multiply before
/// dividing, which keeps every division exact.
pub fn capacity_with_term(tests: u64, items: u32, clamp: u128) -> (Cap, Cap) {
    assert!(items >= 1, "capacity needs at least one item");
    assert!(clamp >= 1, "clamp target must be positive");

    let mut sum: u128 = 0;
    let mut term: u128 = 1;
    for i in 1..=u128::from(items) {
        // tests - i + 1, floored at zero once i exceeds tests
        let factor = (u128::from(tests) + 1).saturating_sub(i);
        if factor == 0 {
            // every remaining coefficient is zero
            term = 0;
            break;
        }
        term = match term.checked_mul(factor) {
            Some(product) => exact_div(product, i),
            // overflow past 128 bits: the true sum certainly reaches any
            // representable clamp
            None => return (Cap::saturated(u128::MAX), Cap::saturated(u128::MAX)),
        };
        sum = match sum.checked_add(term) {
            Some(s) => s,
            None => return (Cap::saturated(u128::MAX), Cap::saturated(u128::MAX)),
        };
        if sum >= clamp {
            return (Cap::saturated(sum), Cap::exact(term));
        }
    }
    (Cap::exact(sum), Cap::exact(term))
}

/// Capacity of an unconstrained item budget: `E(T, K) = 2^T - 1` whenever
/// `K >= T`. Exact up to `T = 127`, saturated beyond.
pub fn capacity_full_row(tests: u64) -> Cap {
    if tests <= 127 {
        Cap::exact((1u128 << tests) - 1)
    } else {
        Cap::saturated(u128::MAX)
    }
}

/// Information-theoretic test lower bound `ceil(log2(floors + 1))`,
/// computed from the integer bit length so powers of two never
/// misclassify.
pub fn ideal_tests(floors: u64) -> u32 {
    assert!(floors >= 1, "ideal_tests needs at least one floor");
    u64::BITS - floors.leading_zeros()
}

/// One incremental step of the capacity recurrences:
///
/// ```text
/// E(T+1, K) = 2 E(T, K) - C(T, K) + 1
/// C(T+1, K) = C(T, K) + C(T, K) * K / (T + 1 - K)
/// ```
///
/// Both inputs must be exact. The boundary update divides exactly (the
/// added quantity equals `C(T, K-1)`); a nonzero remainder aborts. The
/// degenerate region `T + 1 <= K` is served directly from the definition
/// of the coefficient.
pub fn advance_state(capacity: Cap, boundary: Cap, tests: u64, items: u32) -> (Cap, Cap, u64) {
    let e = capacity.exact_value();
    let b = boundary.exact_value();
    let k = u128::from(items);
    let next_t = tests + 1;

    let next_e = e
        .checked_mul(2)
        .and_then(|d| d.checked_sub(b))
        .and_then(|d| d.checked_add(1))
        .expect("capacity recurrence overflowed 128 bits");

    let next_b = if u128::from(next_t) > k {
        let numerator = b.checked_mul(k).expect("boundary product overflowed 128 bits");
        b + exact_div(numerator, u128::from(next_t) - k)
    } else {
        assert!(b == 0, "boundary must be zero while tests < items");
        // C(next_t, k) is 1 exactly when next_t == k, else still 0
        u128::from(u128::from(next_t) == k)
    };

    (Cap::exact(next_e), Cap::exact(next_b), next_t)
}
