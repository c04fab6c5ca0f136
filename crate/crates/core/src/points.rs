//! Finite point distributions: multisets of complex points with
//! multiplicities, identified with their counting measures.
//!
//! A distribution stores one entry per distinct point; constructors merge
//! duplicates by summing multiplicities and keep entries in canonical order
//! (modulus, then argument in `(-pi, pi]`, then multiplicity) so that
//! serialization is bit-stable. Point equality is exact coordinate equality
//! (after normalizing `-0.0` to `0.0`); callers who need fuzzy merging are
//! expected to pre-round their inputs.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::{Complex, Error, Result};

/// One distinct point together with its multiplicity (`>= 1`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointEntry {
    pub point: Complex,
    pub multiplicity: u64,
}

/// A finite multiset of complex points, canonically ordered.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DistributionDoc", into = "DistributionDoc")]
pub struct PointDistribution {
    entries: Vec<PointEntry>,
}

/// Membership test regions for [`PointDistribution::counting_measure`].
///
/// Disk and annulus boundaries follow the `|z| <= r` convention: the outer
/// boundary is inclusive and (for the annulus) the inner one is exclusive,
/// matching the half-open interval convention `(r, R]`. Half-planes are open
/// (`Re z > 0` strictly); rectangle bounds are inclusive on all four sides.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RegionPredicate {
    Disk { radius: f64 },
    RightHalfPlane,
    LeftHalfPlane,
    Annulus { inner: f64, outer: f64 },
    Rectangle { re_min: f64, re_max: f64, im_min: f64, im_max: f64 },
}

impl RegionPredicate {
    pub fn contains(&self, z: Complex) -> bool {
        match *self {
            RegionPredicate::Disk { radius } => z.norm() <= radius,
            RegionPredicate::RightHalfPlane => z.re > 0.0,
            RegionPredicate::LeftHalfPlane => z.re < 0.0,
            RegionPredicate::Annulus { inner, outer } => {
                let t = z.norm();
                inner < t && t <= outer
            }
            RegionPredicate::Rectangle { re_min, re_max, im_min, im_max } => {
                re_min <= z.re && z.re <= re_max && im_min <= z.im && z.im <= im_max
            }
        }
    }
}

/// `-0.0` and `0.0` compare equal but have different bit patterns; canonical
/// form keeps only `0.0` so equal points always collide.
fn normalize(z: Complex) -> Complex {
    let fix = |x: f64| if x == 0.0 { 0.0 } else { x };
    Complex::new(fix(z.re), fix(z.im))
}

/// Canonical order: modulus, then argument in `(-pi, pi]`, then coordinates
/// as a deterministic tie-break (two distinct points can share a rounded
/// modulus and argument).
fn canonical_cmp(a: Complex, b: Complex) -> Ordering {
    a.norm()
        .total_cmp(&b.norm())
        .then_with(|| a.arg().total_cmp(&b.arg()))
        .then_with(|| a.re.total_cmp(&b.re))
        .then_with(|| a.im.total_cmp(&b.im))
}

impl PointDistribution {
    /// The empty distribution.
    pub fn empty() -> Self {
        Self { entries: Vec::new() }
    }

    /// Builds a distribution from `(point, multiplicity)` pairs, merging
    /// duplicate points and dropping zero multiplicities.
    ///
    /// Panics on non-finite coordinates; file ingestion validates before
    /// calling this.
    pub fn new(entries: impl IntoIterator<Item = (Complex, u64)>) -> Self {
        let mut raw: Vec<PointEntry> = entries
            .into_iter()
            .filter(|&(_, m)| m > 0)
            .map(|(z, m)| {
                assert!(
                    z.re.is_finite() && z.im.is_finite(),
                    "point coordinates must be finite, got {z}"
                );
                PointEntry { point: normalize(z), multiplicity: m }
            })
            .collect();
        raw.sort_by(|a, b| {
            canonical_cmp(a.point, b.point).then(a.multiplicity.cmp(&b.multiplicity))
        });
        let mut entries: Vec<PointEntry> = Vec::with_capacity(raw.len());
        for e in raw {
            match entries.last_mut() {
                Some(last) if last.point == e.point => last.multiplicity += e.multiplicity,
                _ => entries.push(e),
            }
        }
        Self { entries }
    }

    /// Builds a distribution of simple points (multiplicity 1 each;
    /// duplicates merge).
    pub fn from_points(points: impl IntoIterator<Item = Complex>) -> Self {
        Self::new(points.into_iter().map(|z| (z, 1)))
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries in canonical order.
    pub fn entries(&self) -> &[PointEntry] {
        &self.entries
    }

    /// Entries away from the origin, in canonical (modulus-ascending) order.
    pub fn nonzero_entries(&self) -> impl Iterator<Item = &PointEntry> {
        self.entries.iter().filter(|e| e.point != Complex::new(0.0, 0.0))
    }

    /// Total count `n_Z(C)`: the sum of all multiplicities.
    pub fn total_count(&self) -> u64 {
        self.entries.iter().map(|e| e.multiplicity).sum()
    }

    /// Largest modulus over the points, `None` for the empty distribution.
    pub fn max_modulus(&self) -> Option<f64> {
        self.entries.last().map(|e| e.point.norm())
    }

    fn find(&self, z: Complex) -> Option<&PointEntry> {
        let z = normalize(z);
        self.entries
            .binary_search_by(|e| canonical_cmp(e.point, z))
            .ok()
            .map(|i| &self.entries[i])
    }

    /// The counting function `n_Z(z)`: multiplicity of `z` (0 if absent).
    pub fn counting_function(&self, z: Complex) -> u64 {
        self.find(z).map_or(0, |e| e.multiplicity)
    }

    /// `z ∈ Z` iff `n_Z(z) > 0`.
    pub fn contains(&self, z: Complex) -> bool {
        self.counting_function(z) > 0
    }

    /// The counting measure `n_Z(S)`: total multiplicity inside the region.
    pub fn counting_measure(&self, region: &RegionPredicate) -> u64 {
        self.entries
            .iter()
            .filter(|e| region.contains(e.point))
            .map(|e| e.multiplicity)
            .sum()
    }

    /// The radial counting function `n_Z^rad(r)`: points with `|z| <= r`,
    /// origin included.
    pub fn radial_counting(&self, r: f64) -> u64 {
        // Entries are modulus-sorted; count the prefix.
        let end = self.entries.partition_point(|e| e.point.norm() <= r);
        self.entries[..end].iter().map(|e| e.multiplicity).sum()
    }

    /// Finite-truncation estimate of the upper density
    /// `limsup n^rad(r)/r`: the maximum of `n^rad(r)/r` over the sampling
    /// set `{r_min} ∪ {distinct moduli in [r_min, max modulus]}`.
    ///
    /// This is an estimate over the truncation, not the limit; origin
    /// multiplicity is counted (it is asymptotically irrelevant).
    pub fn upper_density_estimate(&self, r_min: f64) -> Result<f64> {
        if self.is_empty() {
            return Err(Error::EmptyDistribution);
        }
        let max_modulus = self.max_modulus().unwrap();
        if !(r_min > 0.0 && r_min < max_modulus) {
            return Err(Error::RMinOutOfRange { r_min, max_modulus });
        }
        let mut best = self.radial_counting(r_min) as f64 / r_min;
        // Cumulative count at each distinct modulus; n^rad/r attains its
        // local maxima exactly at the jump radii.
        let mut cumulative: u64 = 0;
        let mut i = 0;
        while i < self.entries.len() {
            let t = self.entries[i].point.norm();
            let mut j = i;
            while j < self.entries.len() && self.entries[j].point.norm() == t {
                cumulative += self.entries[j].multiplicity;
                j += 1;
            }
            if t >= r_min && t > 0.0 {
                best = best.max(cumulative as f64 / t);
            }
            i = j;
        }
        Ok(best)
    }

    /// Multiset union: `n_{Z∪W} = n_Z + n_W`.
    pub fn union(&self, other: &Self) -> Self {
        let all = self
            .entries
            .iter()
            .chain(other.entries.iter())
            .map(|e| (e.point, e.multiplicity));
        Self::new(all)
    }

    /// Multiset difference `self ∖ other`; requires `other ⊂ self` and
    /// reports a violating point otherwise.
    pub fn difference(&self, other: &Self) -> Result<Self> {
        for e in &other.entries {
            let have = self.counting_function(e.point);
            if have < e.multiplicity {
                return Err(Error::NotIncluded {
                    re: e.point.re,
                    im: e.point.im,
                    have,
                    need: e.multiplicity,
                });
            }
        }
        let remaining = self.entries.iter().map(|e| {
            let m = e.multiplicity - other.counting_function(e.point);
            (e.point, m)
        });
        Ok(Self::new(remaining))
    }

    /// `self ⊂ other` in the counting-function sense:
    /// `n_self(z) <= n_other(z)` for every `z`.
    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.entries
            .iter()
            .all(|e| e.multiplicity <= other.counting_function(e.point))
    }

    /// Mirror symmetry through the imaginary axis: `z ↦ -conj(z)`.
    pub fn reflect(&self) -> Self {
        Self::new(self.entries.iter().map(|e| (-e.point.conj(), e.multiplicity)))
    }

    /// Complex conjugation `z ↦ conj(z)`.
    pub fn conjugate(&self) -> Self {
        Self::new(self.entries.iter().map(|e| (e.point.conj(), e.multiplicity)))
    }

    /// Dilation `z ↦ s·z` for `s > 0`.
    pub fn scale(&self, s: f64) -> Result<Self> {
        if !(s.is_finite() && s > 0.0) {
            return Err(Error::InvalidScale(s));
        }
        Ok(Self::new(self.entries.iter().map(|e| (e.point * s, e.multiplicity))))
    }
}

// ---------------------------------------------------------------------------
// File format
// ---------------------------------------------------------------------------

/// Wire form of the distribution document: `{"points": [{re, im, mult}]}`
/// with `mult` defaulting to 1. Emission is in canonical order so
/// serialization is byte-stable; values with up to 15 significant decimal
/// digits round-trip exactly.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DistributionDoc {
    points: Vec<PointRecord>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PointRecord {
    re: f64,
    im: f64,
    #[serde(default = "default_mult")]
    mult: u64,
}

fn default_mult() -> u64 {
    1
}

impl From<PointDistribution> for DistributionDoc {
    fn from(d: PointDistribution) -> Self {
        DistributionDoc {
            points: d
                .entries
                .iter()
                .map(|e| PointRecord { re: e.point.re, im: e.point.im, mult: e.multiplicity })
                .collect(),
        }
    }
}

impl TryFrom<DistributionDoc> for PointDistribution {
    type Error = String;

    fn try_from(doc: DistributionDoc) -> std::result::Result<Self, String> {
        for (i, p) in doc.points.iter().enumerate() {
            if !(p.re.is_finite() && p.im.is_finite()) {
                return Err(format!("points[{i}]: coordinates must be finite"));
            }
            if p.mult == 0 {
                return Err(format!("points[{i}]: mult must be a positive integer"));
            }
        }
        Ok(PointDistribution::new(
            doc.points.into_iter().map(|p| (Complex::new(p.re, p.im), p.mult)),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn dist(pairs: &[(f64, f64, u64)]) -> PointDistribution {
        PointDistribution::new(pairs.iter().map(|&(re, im, m)| (c(re, im), m)))
    }

    #[test]
    fn counting_function_reads_multiplicities() {
        let z = dist(&[(PI, 0.0, 1), (2.0 * PI, 0.0, 1)]);
        assert_eq!(z.counting_function(c(PI, 0.0)), 1);
        assert_eq!(PointDistribution::empty().counting_function(c(0.3, 7.0)), 0);
        let z = dist(&[(1.0, 1.0, 3)]);
        assert_eq!(z.counting_function(c(1.0, 1.0)), 3);
        assert!(z.contains(c(1.0, 1.0)));
        assert!(!z.contains(c(1.0, -1.0)));
    }

    #[test]
    fn counting_measure_regions() {
        let z = dist(&[(PI, 0.0, 1), (-PI, 0.0, 1), (2.0 * PI, 0.0, 1), (-2.0 * PI, 0.0, 1)]);
        assert_eq!(z.counting_measure(&RegionPredicate::Disk { radius: 7.0 }), 4);

        let z = dist(&[(1.0, 1.0, 1), (-1.0, 1.0, 1)]);
        assert_eq!(z.counting_measure(&RegionPredicate::RightHalfPlane), 1);
        assert_eq!(z.counting_measure(&RegionPredicate::LeftHalfPlane), 1);

        // Brute-force oracle: k*pi in (1, 100].
        let z = PointDistribution::new((1..=31).map(|k| (c(k as f64 * PI, 0.0), 1)));
        let expected = (1..=31)
            .filter(|&k| {
                let t = k as f64 * PI;
                1.0 < t && t <= 100.0
            })
            .count() as u64;
        assert_eq!(expected, 31);
        assert_eq!(z.counting_measure(&RegionPredicate::Annulus { inner: 1.0, outer: 100.0 }), 31);
    }

    #[test]
    fn radial_counting_boundary_and_origin() {
        let z = PointDistribution::new((1..=10).map(|k| (c(k as f64 * PI, 0.0), 1)));
        assert_eq!(z.radial_counting(PI), 1);

        let z = dist(&[(0.0, 0.0, 2), (1.0, 0.0, 1)]);
        assert_eq!(z.radial_counting(0.0), 2);

        // Brute force: k*sqrt(2) <= 10 <=> k <= 7.
        let z = PointDistribution::new((1..=100).map(|k| (c(k as f64, k as f64), 1)));
        let oracle = (1..=100).filter(|&k| (k as f64) * 2f64.sqrt() <= 10.0).count() as u64;
        assert_eq!(oracle, 7);
        assert_eq!(z.radial_counting(10.0), oracle);
    }

    #[test]
    fn upper_density_matches_grid_oracle() {
        let z = PointDistribution::new((1..=1000).map(|k| (c(k as f64 * PI, 0.0), 1)));
        let est = z.upper_density_estimate(10.0).unwrap();
        // Oracle: max over sample radii of floor(r/pi)/r.
        let mut oracle: f64 = 10.0f64.div_euclid(PI).floor() / 10.0;
        for k in 1..=1000 {
            let r = k as f64 * PI;
            if r >= 10.0 {
                oracle = oracle.max((r / PI).floor() / r);
            }
        }
        assert!((est - oracle).abs() <= 1e-12, "est {est} oracle {oracle}");
        assert!((1.0 / PI - 0.01..=1.0 / PI + 0.05).contains(&est));
    }

    #[test]
    fn upper_density_single_point_and_errors() {
        let z = dist(&[(1.0, 0.0, 5)]);
        // Sampling set {0.5, 1}: n(0.5)/0.5 = 0, n(1)/1 = 5.
        assert_eq!(z.upper_density_estimate(0.5).unwrap(), 5.0);
        assert!(matches!(
            PointDistribution::empty().upper_density_estimate(1.0),
            Err(Error::EmptyDistribution)
        ));
        assert!(matches!(z.upper_density_estimate(2.0), Err(Error::RMinOutOfRange { .. })));
        assert!(matches!(z.upper_density_estimate(0.0), Err(Error::RMinOutOfRange { .. })));
    }

    #[test]
    fn multiset_algebra() {
        let a = dist(&[(1.0, 0.0, 1)]);
        let b = dist(&[(1.0, 0.0, 2)]);
        assert_eq!(a.union(&b), dist(&[(1.0, 0.0, 3)]));

        let w = dist(&[(1.0, 0.0, 3), (2.0, 0.0, 1)]);
        let z = dist(&[(1.0, 0.0, 1)]);
        assert_eq!(w.difference(&z).unwrap(), dist(&[(1.0, 0.0, 2), (2.0, 0.0, 1)]));

        assert!(!b.is_subset_of(&a));
        assert!(a.is_subset_of(&b));

        let err = z.difference(&w).unwrap_err();
        match err {
            Error::NotIncluded { re, have, need, .. } => {
                assert_eq!(re, 1.0);
                assert_eq!(have, 1);
                assert_eq!(need, 3);
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn transforms() {
        assert_eq!(dist(&[(1.0, 1.0, 1)]).reflect(), dist(&[(-1.0, 1.0, 1)]));
        let z = dist(&[(2.0, -3.0, 2), (5.0, 0.0, 1)]);
        assert_eq!(z.reflect().reflect(), z);
        assert_eq!(z.conjugate().conjugate(), z);
        assert_eq!(
            dist(&[(PI, 0.0, 1), (2.0 * PI, 0.0, 1)]).scale(2.0).unwrap(),
            dist(&[(2.0 * PI, 0.0, 1), (4.0 * PI, 0.0, 1)])
        );
        assert!(matches!(z.scale(0.0), Err(Error::InvalidScale(_))));
        assert!(matches!(z.scale(-2.0), Err(Error::InvalidScale(_))));
    }

    #[test]
    fn canonicalization_is_idempotent_and_merges() {
        let z = PointDistribution::new([
            (c(1.0, 0.0), 1),
            (c(-0.0, 0.0), 2),
            (c(0.0, -0.0), 3),
            (c(1.0, 0.0), 4),
        ]);
        assert_eq!(z.entries().len(), 2);
        assert_eq!(z.counting_function(c(0.0, 0.0)), 5);
        assert_eq!(z.counting_function(c(1.0, 0.0)), 5);
        let again = PointDistribution::new(z.entries().iter().map(|e| (e.point, e.multiplicity)));
        assert_eq!(z, again);
    }

    #[test]
    fn serde_round_trip_is_identity() {
        let z = dist(&[(PI, -2.5, 2), (-1.0, 0.125, 1), (0.1, 0.2, 7)]);
        let json = serde_json::to_string(&z).unwrap();
        let back: PointDistribution = serde_json::from_str(&json).unwrap();
        assert_eq!(z, back);
        // mult defaults to 1, unknown fields rejected
        let parsed: PointDistribution =
            serde_json::from_str(r#"{"points":[{"re":1.0,"im":0.0}]}"#).unwrap();
        assert_eq!(parsed, dist(&[(1.0, 0.0, 1)]));
        assert!(serde_json::from_str::<PointDistribution>(
            r#"{"points":[{"re":1.0,"im":0.0,"mult":0}]}"#
        )
        .is_err());
        assert!(serde_json::from_str::<PointDistribution>(
            r#"{"points":[{"re":1.0,"im":0.0,"weight":2}]}"#
        )
        .is_err());
    }

    #[test]
    fn serialization_emits_canonical_order() {
        let a = dist(&[(3.0, 0.0, 1), (-1.0, 0.0, 1), (0.5, 0.5, 2)]);
        let b = dist(&[(0.5, 0.5, 2), (3.0, 0.0, 1), (-1.0, 0.0, 1)]);
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }
}
