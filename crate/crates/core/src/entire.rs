//! Factored models of entire functions of exponential type.
//!
//! The constructions of interest are all products — polynomials, genus-1
//! Weierstrass products, even canonical products `∏ (1 - z^2/w_j^2)`, and
//! closed-form sine atoms — so a model is a list of factors and the
//! log-modulus of the model is the sum of per-factor log-magnitudes. Working
//! in the log domain keeps evaluation stable for `|z|` up to `1e4` with up
//! to `1e6` factors, where the product itself would overflow long before.
//!
//! Zeros are known by construction: [`EntireFunctionModel::zeros`] enumerates
//! them inside a disk instead of root-finding. There is no evaluation of the
//! argument/phase, only `ln |F(z)|`.

use serde::{Deserialize, Serialize};

use crate::{Complex, Error, PointDistribution, Result};

/// One factor of a product model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Factor {
    /// A nonzero constant.
    Scalar { value: Complex },
    /// `(z - root)^multiplicity`; the root may be the origin.
    PolyRoot { root: Complex, multiplicity: u64 },
    /// Genus-1 primary factor `E_1(z/root)^m = ((1 - z/root) exp(z/root))^m`,
    /// `root != 0`.
    Weierstrass { root: Complex, multiplicity: u64 },
    /// Even pair `(1 - z^2/root^2)^m`, vanishing at `±root`, `root != 0`.
    EvenPair { root: Complex, multiplicity: u64 },
    /// `sin(z)/z`, value 1 at the origin, zeros at `k*pi`, `k != 0`.
    Sinc,
    /// `(sin(iz)/z)^n`: modulus `|sinh(z)/z|^n`, zeros at `i*k*pi`, `k != 0`,
    /// each with multiplicity `n`.
    SinhcPow { exponent: u64 },
    /// `z^k`; negative exponents are only accepted when other factors vanish
    /// at the origin to at least the same total order.
    Power { exponent: i64 },
}

/// An entire function represented as a finite product of factors.
///
/// Models are immutable after construction and never represent the zero
/// function. Log-modulus evaluation returns exactly `-inf` at zeros.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ModelDoc", into = "ModelDoc")]
pub struct EntireFunctionModel {
    factors: Vec<Factor>,
}

// ---------------------------------------------------------------------------
// Stable log-magnitude kernels
// ---------------------------------------------------------------------------

/// `ln |1 - u|` via the half-argument rewrite
/// `0.5 * ln((1 - Re u)^2 + (Im u)^2)`, with a `ln_1p` path for small `|u|`
/// where forming `1 - u` would lose the leading digits.
fn ln_abs_one_minus(u: Complex) -> f64 {
    let n2 = u.norm_sqr();
    if n2 <= 0.25 {
        // |1-u|^2 = 1 + (|u|^2 - 2 Re u)
        0.5 * (n2 - 2.0 * u.re).ln_1p()
    } else {
        // hypot avoids overflow/underflow for extreme u
        (1.0 - u.re).hypot(u.im).ln()
    }
}

/// `ln |E_1(u)| = ln|1-u| + Re u`. The two terms cancel to `O(|u|^2)` for
/// small `|u|`, so that regime uses the series `-Re sum_{k>=2} u^k/k`.
fn ln_abs_weierstrass1(u: Complex) -> f64 {
    if u.norm_sqr() <= 0.0625 {
        // |u| <= 1/4: series converges geometrically.
        let mut power = u * u;
        let mut acc = power / 2.0;
        let mut k = 3.0;
        loop {
            power *= u;
            let term = power / k;
            acc += term;
            if term.norm_sqr() <= 1e-36 * acc.norm_sqr().max(f64::MIN_POSITIVE) || k >= 60.0 {
                break;
            }
            k += 1.0;
        }
        -acc.re
    } else {
        ln_abs_one_minus(u) + u.re
    }
}

/// `ln |sin z|` from `|sin(x+iy)|^2 = sin^2 x + sinh^2 y`, rescaled by
/// `e^{|y|}/2` once `sinh` would overflow digits.
fn ln_abs_sin(z: Complex) -> f64 {
    let (x, y) = (z.re, z.im.abs());
    if y <= 1.0 {
        0.5 * (x.sin().powi(2) + y.sinh().powi(2)).ln()
    } else {
        let e = (-2.0 * y).exp();
        y - std::f64::consts::LN_2 + 0.5 * ((1.0 - e).powi(2) + 4.0 * x.sin().powi(2) * e).ln()
    }
}

/// `ln |sinh z|` from `|sinh(x+iy)|^2 = sinh^2 x + sin^2 y`.
fn ln_abs_sinh(z: Complex) -> f64 {
    let (x, y) = (z.re.abs(), z.im);
    if x <= 1.0 {
        0.5 * (x.sinh().powi(2) + y.sin().powi(2)).ln()
    } else {
        let e = (-2.0 * x).exp();
        x - std::f64::consts::LN_2 + 0.5 * ((1.0 - e).powi(2) + 4.0 * y.sin().powi(2) * e).ln()
    }
}

/// `ln |1 - (z/w)^2|`, guarding the explicit square against overflow when
/// `|z| >> |w|`.
fn ln_abs_even_pair(z: Complex, w: Complex) -> f64 {
    let q = z.norm() / w.norm();
    if q > 1e150 {
        // |1 - v| = |v| |1 - 1/v| with v = (z/w)^2
        let inv = w / z;
        2.0 * q.ln() + ln_abs_one_minus(inv * inv)
    } else {
        let u = z / w;
        ln_abs_one_minus(u * u)
    }
}

impl Factor {
    /// Log-magnitude of this factor at `z != 0`.
    fn ln_abs(&self, z: Complex) -> f64 {
        match *self {
            Factor::Scalar { value } => value.norm().ln(),
            Factor::PolyRoot { root, multiplicity } => {
                multiplicity as f64 * (z - root).norm().ln()
            }
            Factor::Weierstrass { root, multiplicity } => {
                multiplicity as f64 * ln_abs_weierstrass1(z / root)
            }
            Factor::EvenPair { root, multiplicity } => {
                multiplicity as f64 * ln_abs_even_pair(z, root)
            }
            Factor::Sinc => ln_abs_sin(z) - z.norm().ln(),
            Factor::SinhcPow { exponent } => {
                exponent as f64 * (ln_abs_sinh(z) - z.norm().ln())
            }
            Factor::Power { exponent } => exponent as f64 * z.norm().ln(),
        }
    }

    /// Log-magnitude at the origin with any `z^k` behaviour regularized away;
    /// only meaningful when the model's net origin order is zero.
    fn ln_abs_at_origin_regularized(&self) -> f64 {
        match *self {
            Factor::Scalar { value } => value.norm().ln(),
            Factor::PolyRoot { root, multiplicity } => {
                if root == Complex::new(0.0, 0.0) {
                    0.0
                } else {
                    multiplicity as f64 * root.norm().ln()
                }
            }
            // E_1(0) = 1, (1 - 0) = 1, sin(z)/z -> 1, sin(iz)/z -> i.
            Factor::Weierstrass { .. } | Factor::EvenPair { .. } => 0.0,
            Factor::Sinc | Factor::SinhcPow { .. } => 0.0,
            Factor::Power { .. } => 0.0,
        }
    }

    /// Order of vanishing at the origin (negative for `z^{-k}`).
    fn origin_order(&self) -> i64 {
        match *self {
            Factor::PolyRoot { root, multiplicity } if root == Complex::new(0.0, 0.0) => {
                multiplicity as i64
            }
            Factor::Power { exponent } => exponent,
            _ => 0,
        }
    }
}

impl EntireFunctionModel {
    /// Validates and wraps a factor list.
    pub fn new(factors: Vec<Factor>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidModel(
                "a model needs at least one factor (use a scalar 1 for the empty product)".into(),
            ));
        }
        let mut origin_order: i64 = 0;
        for (i, f) in factors.iter().enumerate() {
            let finite = |c: Complex| c.re.is_finite() && c.im.is_finite();
            match *f {
                Factor::Scalar { value } => {
                    if !finite(value) || value == Complex::new(0.0, 0.0) {
                        return Err(Error::InvalidModel(format!(
                            "factor {i}: scalar must be finite and nonzero"
                        )));
                    }
                }
                Factor::PolyRoot { root, multiplicity } => {
                    if !finite(root) || multiplicity == 0 {
                        return Err(Error::InvalidModel(format!(
                            "factor {i}: poly root needs a finite root and multiplicity >= 1"
                        )));
                    }
                }
                Factor::Weierstrass { root, multiplicity }
                | Factor::EvenPair { root, multiplicity } => {
                    if !finite(root) || root == Complex::new(0.0, 0.0) || multiplicity == 0 {
                        return Err(Error::InvalidModel(format!(
                            "factor {i}: root must be finite and nonzero, multiplicity >= 1"
                        )));
                    }
                }
                Factor::Sinc => {}
                Factor::SinhcPow { exponent } => {
                    if exponent == 0 {
                        return Err(Error::InvalidModel(format!(
                            "factor {i}: sinhc power needs exponent >= 1"
                        )));
                    }
                }
                Factor::Power { .. } => {}
            }
            origin_order += f.origin_order();
        }
        if origin_order < 0 {
            return Err(Error::InvalidModel(format!(
                "net origin order {origin_order} < 0: negative powers of z must be matched by factors vanishing at the origin"
            )));
        }
        Ok(Self { factors })
    }

    /// The constant function 1 (empty product).
    pub fn one() -> Self {
        Self { factors: vec![Factor::Scalar { value: Complex::new(1.0, 0.0) }] }
    }

    /// A nonzero constant.
    pub fn scalar(value: Complex) -> Result<Self> {
        Self::new(vec![Factor::Scalar { value }])
    }

    /// The even canonical product `∏ (1 - z^2/w_j^2)^{m_j}` over the entries
    /// of `w`; zeros are `w ∪ (-w)` and the value at the origin is 1.
    /// The empty distribution gives the constant 1.
    pub fn even_product(w: &PointDistribution) -> Result<Self> {
        if w.contains(Complex::new(0.0, 0.0)) {
            return Err(Error::OriginNotAllowed { context: "even canonical product" });
        }
        if w.is_empty() {
            return Ok(Self::one());
        }
        Self::new(
            w.entries()
                .iter()
                .map(|e| Factor::EvenPair { root: e.point, multiplicity: e.multiplicity })
                .collect(),
        )
    }

    /// The genus-1 Weierstrass product `∏ E_1(z/a_j)^{m_j}` over the entries
    /// of `z`; the empty distribution gives the constant 1.
    pub fn weierstrass_product(z: &PointDistribution) -> Result<Self> {
        if z.contains(Complex::new(0.0, 0.0)) {
            return Err(Error::OriginNotAllowed { context: "Weierstrass product" });
        }
        if z.is_empty() {
            return Ok(Self::one());
        }
        Self::new(
            z.entries()
                .iter()
                .map(|e| Factor::Weierstrass { root: e.point, multiplicity: e.multiplicity })
                .collect(),
        )
    }

    /// The product of two models (factor lists concatenate).
    pub fn multiplied_by(&self, other: &Self) -> Self {
        let mut factors = self.factors.clone();
        factors.extend_from_slice(&other.factors);
        Self { factors }
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    /// Net order of vanishing at the origin.
    fn origin_order(&self) -> i64 {
        self.factors.iter().map(Factor::origin_order).sum()
    }

    /// `ln |F(z)|`, the sum of per-factor log-magnitudes; exactly `-inf` at
    /// zeros of the model.
    pub fn log_modulus(&self, z: Complex) -> f64 {
        if z.re == 0.0 && z.im == 0.0 {
            if self.origin_order() > 0 {
                return f64::NEG_INFINITY;
            }
            return self.factors.iter().map(Factor::ln_abs_at_origin_regularized).sum();
        }
        self.factors.iter().map(|f| f.ln_abs(z)).sum()
    }

    /// Estimates the type `limsup ln|F(z)|/|z|` as the maximum over the given
    /// radii of `max_theta ln|F(r e^{i theta})| / r` over 64 equally spaced
    /// angles. On truncated models this is a lower estimate of the true type;
    /// samples landing exactly on a zero are retried at `r (1 + 1e-9)`.
    pub fn type_estimate(&self, radii: &[f64]) -> Result<f64> {
        if radii.is_empty() {
            return Err(Error::InvalidParameter("type_estimate needs at least one radius".into()));
        }
        if radii.iter().any(|r| !(r.is_finite() && *r > 0.0)) {
            return Err(Error::InvalidParameter("radii must be positive and finite".into()));
        }
        let mut best: f64 = 0.0;
        for &r in radii {
            let mut angle_max = f64::NEG_INFINITY;
            for j in 0..64 {
                let theta = 2.0 * std::f64::consts::PI * j as f64 / 64.0;
                let mut v = self.log_modulus(Complex::from_polar(r, theta));
                if !v.is_finite() {
                    v = self.log_modulus(Complex::from_polar(r * (1.0 + 1e-9), theta));
                }
                if v.is_finite() {
                    angle_max = angle_max.max(v);
                }
            }
            if angle_max.is_finite() {
                best = best.max(angle_max / r);
            }
        }
        Ok(best)
    }

    /// All zeros of the model with `|z| <= disk_radius`, multiplicities
    /// summed across factors.
    pub fn zeros(&self, disk_radius: f64) -> PointDistribution {
        let mut pts: Vec<(Complex, u64)> = Vec::new();
        let origin = self.origin_order();
        if origin > 0 {
            pts.push((Complex::new(0.0, 0.0), origin as u64));
        }
        for f in &self.factors {
            match *f {
                Factor::PolyRoot { root, multiplicity } => {
                    if root != Complex::new(0.0, 0.0) && root.norm() <= disk_radius {
                        pts.push((root, multiplicity));
                    }
                }
                Factor::Weierstrass { root, multiplicity } => {
                    if root.norm() <= disk_radius {
                        pts.push((root, multiplicity));
                    }
                }
                Factor::EvenPair { root, multiplicity } => {
                    if root.norm() <= disk_radius {
                        pts.push((root, multiplicity));
                        pts.push((-root, multiplicity));
                    }
                }
                Factor::Sinc => {
                    let mut k = 1.0;
                    while k * std::f64::consts::PI <= disk_radius {
                        let t = k * std::f64::consts::PI;
                        pts.push((Complex::new(t, 0.0), 1));
                        pts.push((Complex::new(-t, 0.0), 1));
                        k += 1.0;
                    }
                }
                Factor::SinhcPow { exponent } => {
                    let mut k = 1.0;
                    while k * std::f64::consts::PI <= disk_radius {
                        let t = k * std::f64::consts::PI;
                        pts.push((Complex::new(0.0, t), exponent));
                        pts.push((Complex::new(0.0, -t), exponent));
                        k += 1.0;
                    }
                }
                Factor::Scalar { .. } | Factor::Power { .. } => {}
            }
        }
        PointDistribution::new(pts)
    }

    /// The "F vanishes on Z" predicate: `f(Z) = 0` iff `Z ⊂ Zero_F`.
    pub fn vanishes_on(&self, z: &PointDistribution) -> bool {
        match z.max_modulus() {
            None => true,
            Some(r) => z.is_subset_of(&self.zeros(r)),
        }
    }
}

// ---------------------------------------------------------------------------
// File format
// ---------------------------------------------------------------------------

/// Wire form: `{"factors": [{"kind": ..., ...}]}`.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelDoc {
    factors: Vec<FactorRecord>,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum FactorRecord {
    Scalar { re: f64, im: f64 },
    PolyRoot { re: f64, im: f64, #[serde(default = "one_u64")] mult: u64 },
    Weierstrass { re: f64, im: f64, #[serde(default = "one_u64")] mult: u64 },
    EvenPair { re: f64, im: f64, #[serde(default = "one_u64")] mult: u64 },
    Sinc,
    SinhcPow { n: u64 },
    Power { k: i64 },
}

fn one_u64() -> u64 {
    1
}

impl From<EntireFunctionModel> for ModelDoc {
    fn from(m: EntireFunctionModel) -> Self {
        let factors = m
            .factors
            .into_iter()
            .map(|f| match f {
                Factor::Scalar { value } => FactorRecord::Scalar { re: value.re, im: value.im },
                Factor::PolyRoot { root, multiplicity } => {
                    FactorRecord::PolyRoot { re: root.re, im: root.im, mult: multiplicity }
                }
                Factor::Weierstrass { root, multiplicity } => {
                    FactorRecord::Weierstrass { re: root.re, im: root.im, mult: multiplicity }
                }
                Factor::EvenPair { root, multiplicity } => {
                    FactorRecord::EvenPair { re: root.re, im: root.im, mult: multiplicity }
                }
                Factor::Sinc => FactorRecord::Sinc,
                Factor::SinhcPow { exponent } => FactorRecord::SinhcPow { n: exponent },
                Factor::Power { exponent } => FactorRecord::Power { k: exponent },
            })
            .collect();
        ModelDoc { factors }
    }
}

impl TryFrom<ModelDoc> for EntireFunctionModel {
    type Error = String;

    fn try_from(doc: ModelDoc) -> std::result::Result<Self, String> {
        let factors = doc
            .factors
            .into_iter()
            .map(|f| match f {
                FactorRecord::Scalar { re, im } => Factor::Scalar { value: Complex::new(re, im) },
                FactorRecord::PolyRoot { re, im, mult } => {
                    Factor::PolyRoot { root: Complex::new(re, im), multiplicity: mult }
                }
                FactorRecord::Weierstrass { re, im, mult } => {
                    Factor::Weierstrass { root: Complex::new(re, im), multiplicity: mult }
                }
                FactorRecord::EvenPair { re, im, mult } => {
                    Factor::EvenPair { root: Complex::new(re, im), multiplicity: mult }
                }
                FactorRecord::Sinc => Factor::Sinc,
                FactorRecord::SinhcPow { n } => Factor::SinhcPow { exponent: n },
                FactorRecord::Power { k } => Factor::Power { exponent: k },
            })
            .collect();
        EntireFunctionModel::new(factors).map_err(|e| e.to_string())
    }
}
