//! Angle separation of a point distribution from the imaginary axis.
//!
//! A distribution is *separated (by angles) from iR* when `|Re z| >= d |z|`
//! for every nonzero point and some `d > 0`: all points avoid a pair of open
//! vertical angles around the imaginary axis. The asymptotic variant allows
//! finitely many exceptional points (`liminf |Re z_j|/|z_j| > 0`, equivalently
//! `limsup |Im z_j|/|z_j| < 1`).
//!
//! Liminf/limsup over an infinite sequence are undecidable from a finite
//! truncation, so [`asymptotic_separation`] reports extrema over a
//! largest-modulus tail plus nested-tail estimates and a decay flag instead
//! of a boolean verdict.

use serde::{Deserialize, Serialize};

use crate::{Complex, Error, PointDistribution, Result};

/// Tail statistics of the separation ratios `|Re z|/|z|`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SeparationReport {
    /// `inf |Re z|/|z|` over all nonzero points: the largest strict
    /// separation constant `d`.
    pub d_strict: f64,
    /// The tail fraction this report was computed with.
    pub tail_fraction: f64,
    /// `min |Re z|/|z|` over the requested largest-modulus tail.
    pub tail_liminf_estimate: f64,
    /// `max |Im z|/|z|` over the same tail. Generally attained at a
    /// different point than the minimum above, so the two need not satisfy
    /// any joint identity.
    pub tail_limsup_im_estimate: f64,
    /// Whether the truncation is consistent with asymptotic separation
    /// (`tail_liminf_estimate > 0`).
    pub consistent: bool,
    /// Raised when the ratio minima strictly decrease across nested
    /// depth shells of the tail (fractions 1/2 -> 1/4 -> 1/8): the estimate
    /// is still falling at the truncation edge and should not be trusted.
    pub decaying: bool,
    /// Points whose ratio falls strictly below `tail_liminf_estimate` (the
    /// finite exceptional set of the asymptotic definition).
    pub violating_points: Vec<Complex>,
    /// `min |Re z|/|z|` over each nested tail, fractions 1/2, 1/4, 1/8.
    pub nested_estimates: Vec<NestedTailEstimate>,
}

/// One nested-tail liminf estimate.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct NestedTailEstimate {
    pub fraction: f64,
    pub liminf_estimate: f64,
}

/// Ratios of one nonzero point: (modulus, |Re|/|z|, |Im|/|z|, point).
fn ratios(z: &PointDistribution) -> Vec<(f64, f64, f64, Complex, u64)> {
    z.nonzero_entries()
        .map(|e| {
            let t = e.point.norm();
            (t, e.point.re.abs() / t, e.point.im.abs() / t, e.point, e.multiplicity)
        })
        .collect()
}

/// The largest `d >= 0` with `|Re z| >= d |z|` for every nonzero point of
/// `Z`, i.e. the minimum of `|Re z|/|z|`; `Z` is strictly separated from the
/// imaginary axis iff the result is positive.
pub fn strict_separation(z: &PointDistribution) -> Result<f64> {
    let rs = ratios(z);
    if rs.is_empty() {
        return Err(Error::TooFewNonzeroPoints { need: 1, found: 0 });
    }
    Ok(rs.iter().map(|r| r.1).fold(f64::INFINITY, f64::min))
}

/// Index of the first element of the largest-modulus tail holding at least
/// `ceil(fraction * total)` points (with multiplicity); points tied at the
/// cut modulus are all included.
fn tail_start(sorted: &[(f64, f64, f64, Complex, u64)], fraction: f64) -> usize {
    let total: u64 = sorted.iter().map(|r| r.4).sum();
    let want = ((fraction * total as f64).ceil() as u64).max(1);
    let mut count = 0u64;
    let mut idx = sorted.len();
    while idx > 0 && count < want {
        idx -= 1;
        count += sorted[idx].4;
    }
    // Include ties at the cut modulus.
    while idx > 0 && sorted[idx - 1].0 == sorted[idx].0 {
        idx -= 1;
    }
    idx
}

fn min_ratio(slice: &[(f64, f64, f64, Complex, u64)]) -> f64 {
    slice.iter().map(|r| r.1).fold(f64::INFINITY, f64::min)
}

/// Tail statistics over the `ceil(tail_fraction * n)` nonzero points of
/// largest modulus, mirroring the "all but finitely many" quantifier of the
/// asymptotic separation condition on a finite truncation.
pub fn asymptotic_separation(
    z: &PointDistribution,
    tail_fraction: f64,
) -> Result<SeparationReport> {
    if !(tail_fraction > 0.0 && tail_fraction <= 1.0) {
        return Err(Error::InvalidTailFraction(tail_fraction));
    }
    let mut rs = ratios(z);
    let found: u64 = rs.iter().map(|r| r.4).sum();
    if found < 2 {
        return Err(Error::TooFewNonzeroPoints { need: 2, found: found as usize });
    }
    rs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.3.re.total_cmp(&b.3.re)));

    let d_strict = min_ratio(&rs);
    let start = tail_start(&rs, tail_fraction);
    let tail = &rs[start..];
    let tail_liminf_estimate = min_ratio(tail);
    let tail_limsup_im_estimate = tail.iter().map(|r| r.2).fold(0.0, f64::max);
    let violating_points: Vec<Complex> =
        rs.iter().filter(|r| r.1 < tail_liminf_estimate).map(|r| r.3).collect();

    let nested_fractions = [0.5, 0.25, 0.125];
    let starts: Vec<usize> = nested_fractions.iter().map(|&f| tail_start(&rs, f)).collect();
    let nested_estimates = nested_fractions
        .iter()
        .zip(&starts)
        .map(|(&fraction, &s)| NestedTailEstimate {
            fraction,
            liminf_estimate: min_ratio(&rs[s..]),
        })
        .collect();

    // Decay detection over disjoint depth shells: [1/2..1/4), [1/4..1/8),
    // [1/8..end). Minima over nested tails alone would all coincide with the
    // deepest point, so shells carry the trend information.
    let shells = [&rs[starts[0]..starts[1]], &rs[starts[1]..starts[2]], &rs[starts[2]..]];
    let decaying = shells.iter().all(|s| !s.is_empty()) && {
        let m: Vec<f64> = shells.iter().map(|s| min_ratio(s)).collect();
        m[0] > m[1] && m[1] > m[2]
    };

    Ok(SeparationReport {
        d_strict,
        tail_fraction,
        tail_liminf_estimate,
        tail_limsup_im_estimate,
        consistent: tail_liminf_estimate > 0.0,
        decaying,
        violating_points,
        nested_estimates,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, SQRT_2};

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn strict_separation_examples() {
        // Points on the 45-degree ray.
        let z = PointDistribution::new(
            (1..=50).map(|k| (c(k as f64 / SQRT_2, k as f64 / SQRT_2), 1)),
        );
        assert!((strict_separation(&z).unwrap() - 1.0 / SQRT_2).abs() < 1e-15);

        // A point on iR forces d = 0.
        let z = PointDistribution::new([(c(1.0, 0.0), 1), (c(0.0, 1.0), 1)]);
        assert_eq!(strict_separation(&z).unwrap(), 0.0);

        // Real points have ratio 1.
        let z = PointDistribution::new(
            (1..=31).map(|k| (c(k as f64 * std::f64::consts::PI, 0.0), 1)),
        );
        assert_eq!(strict_separation(&z).unwrap(), 1.0);

        // Origin-only: no nonzero points.
        let z = PointDistribution::new([(c(0.0, 0.0), 3)]);
        assert!(matches!(
            strict_separation(&z),
            Err(Error::TooFewNonzeroPoints { need: 1, found: 0 })
        ));
    }

    #[test]
    fn imaginary_head_is_exceptional() {
        let mut pts = vec![(c(0.0, 1.0), 1u64), (c(0.0, 2.0), 1)];
        pts.extend((1..=100).map(|k| (c(k as f64, 0.0), 1)));
        let z = PointDistribution::new(pts);
        let rep = asymptotic_separation(&z, 0.5).unwrap();
        assert_eq!(rep.tail_liminf_estimate, 1.0);
        assert_eq!(rep.tail_limsup_im_estimate, 0.0);
        assert!(rep.consistent);
        assert_eq!(rep.violating_points.len(), 2);
        assert!(rep.violating_points.iter().all(|p| p.re == 0.0));
        assert_eq!(rep.d_strict, 0.0);
    }

    #[test]
    fn creeping_angles_are_flagged_as_decaying() {
        // theta_k = pi/2 - 1/k: ratio = cos(theta_k) = sin(1/k), decreasing.
        let z = PointDistribution::new((1..=200).map(|k| {
            let theta = FRAC_PI_2 - 1.0 / k as f64;
            (Complex::from_polar(k as f64, theta), 1)
        }));
        let rep = asymptotic_separation(&z, 0.25).unwrap();
        // Brute-force oracle over the tail k = 151..=200.
        let oracle = (151..=200)
            .map(|k| (FRAC_PI_2 - 1.0 / k as f64).cos())
            .fold(f64::INFINITY, f64::min);
        assert!((rep.tail_liminf_estimate - oracle).abs() < 1e-15);
        assert!((oracle - (1.0f64 / 200.0).sin()).abs() < 1e-12);
        assert!(rep.consistent);
        assert!(rep.decaying, "ratio minima fall across nested shells");
    }

    #[test]
    fn constant_angle_has_no_violations_and_no_decay() {
        let z = PointDistribution::new((1..=50).map(|k| (c(k as f64, k as f64), 1)));
        for fraction in [0.2, 0.5, 1.0] {
            let rep = asymptotic_separation(&z, fraction).unwrap();
            assert!((rep.tail_liminf_estimate - 1.0 / SQRT_2).abs() < 1e-15);
            assert!(rep.violating_points.is_empty());
            assert!(!rep.decaying);
        }
    }

    #[test]
    fn per_point_ratio_identity() {
        // (Re/|z|)^2 + (Im/|z|)^2 = 1 for every single point.
        let z = PointDistribution::new((1..=300).map(|k| {
            (Complex::from_polar(0.3 + k as f64, (k as f64 * 0.77).sin() * 3.0), 1)
        }));
        for r in ratios(&z) {
            assert!((r.1 * r.1 + r.2 * r.2 - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn invariances() {
        let z = PointDistribution::new((1..=40).map(|k| {
            (Complex::from_polar(k as f64, (k as f64 * 1.3).cos()), 1 + (k % 2) as u64)
        }));
        let d = strict_separation(&z).unwrap();
        assert_eq!(strict_separation(&z.reflect()).unwrap(), d);
        assert_eq!(strict_separation(&z.conjugate()).unwrap(), d);
        assert_eq!(strict_separation(&z.scale(3.5).unwrap()).unwrap(), d);
        for fraction in [0.125, 0.5, 1.0] {
            let rep = asymptotic_separation(&z, fraction).unwrap();
            assert!(d <= rep.tail_liminf_estimate);
        }
    }

    #[test]
    fn parameter_validation() {
        let z = PointDistribution::new([(c(1.0, 0.0), 1), (c(2.0, 0.0), 1)]);
        assert!(matches!(asymptotic_separation(&z, 0.0), Err(Error::InvalidTailFraction(_))));
        assert!(matches!(asymptotic_separation(&z, 1.5), Err(Error::InvalidTailFraction(_))));
        let single = PointDistribution::new([(c(1.0, 0.0), 1)]);
        assert!(matches!(
            asymptotic_separation(&single, 0.5),
            Err(Error::TooFewNonzeroPoints { .. })
        ));
        // Two nonzero points with multiplicity count as enough.
        let double = PointDistribution::new([(c(1.0, 0.0), 2)]);
        assert!(asymptotic_separation(&double, 0.5).is_ok());
    }
}
