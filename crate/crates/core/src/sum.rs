//! Compensated summation primitives.
//!
//! `KahanSum` is the classic single-compensation accumulator, used where a
//! plain running sum must stay reproducible (quadrature panel totals).
//! `DoubleDouble` keeps a full error-free-transformation pair so that stored
//! prefix sums can be subtracted without catastrophic cancellation; the
//! characteristic-logarithm profile depends on that to answer narrow interval
//! queries at ~1e-14 relative accuracy regardless of the total sum size.

/// Kahan (compensated) accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    err: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let y = x - self.err;
        let t = self.sum + y;
        self.err = (t - self.sum) - y;
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum
    }
}

/// Error-free transformation (Knuth): `a + b = s + e` exactly.
#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bv = s - a;
    let av = s - bv;
    let e = (a - av) + (b - bv);
    (s, e)
}

/// Variant of `two_sum` valid when `|a| >= |b|`.
#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let e = b - (s - a);
    (s, e)
}

/// Unevaluated sum of two doubles: value = hi + lo with |lo| <= ulp(hi)/2.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct DoubleDouble {
    pub hi: f64,
    pub lo: f64,
}

impl DoubleDouble {
    pub const ZERO: Self = Self { hi: 0.0, lo: 0.0 };

    pub fn add_f64(self, x: f64) -> Self {
        let (s, e) = two_sum(self.hi, x);
        let lo = self.lo + e;
        let (hi, lo) = quick_two_sum(s, lo);
        Self { hi, lo }
    }

    pub fn sub(self, other: Self) -> Self {
        let (s, e) = two_sum(self.hi, -other.hi);
        let lo = self.lo - other.lo + e;
        let (hi, lo) = quick_two_sum(s, lo);
        Self { hi, lo }
    }

    pub fn value(self) -> f64 {
        self.hi + self.lo
    }
}
