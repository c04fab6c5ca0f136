//! Half-open radius intervals `(r, R]`.

use crate::{Error, Result};

/// A validated pair `0 < r < R`; `R` may be `+inf`, meaning "beyond the
/// largest modulus" for profile queries. All interval measures follow the
/// half-open convention `(r, R]`: a modulus equal to `r` is excluded, one
/// equal to `R` is included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntervalQuery {
    inner: f64,
    outer: f64,
}

impl IntervalQuery {
    /// Builds the interval `(inner, outer]`, rejecting anything that is not
    /// `0 < inner < outer` (NaN endpoints included).
    pub fn new(inner: f64, outer: f64) -> Result<Self> {
        if inner.is_finite() && inner > 0.0 && outer > inner {
            Ok(Self { inner, outer })
        } else {
            Err(Error::InvalidInterval { r: inner, big_r: outer })
        }
    }

    pub fn inner(&self) -> f64 {
        self.inner
    }

    pub fn outer(&self) -> f64 {
        self.outer
    }

    pub fn is_outer_finite(&self) -> bool {
        self.outer.is_finite()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_finite_and_infinite_outer() {
        assert!(IntervalQuery::new(1.0, 100.0).is_ok());
        let q = IntervalQuery::new(2.0, f64::INFINITY).unwrap();
        assert!(!q.is_outer_finite());
    }

    #[test]
    fn rejects_bad_endpoints() {
        for (r, big_r) in [
            (0.0, 1.0),
            (-1.0, 1.0),
            (2.0, 2.0),
            (3.0, 1.0),
            (f64::NAN, 1.0),
            (1.0, f64::NAN),
            (f64::INFINITY, f64::INFINITY),
        ] {
            assert!(IntervalQuery::new(r, big_r).is_err(), "({r}, {big_r}]");
        }
    }
}
