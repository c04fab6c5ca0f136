//! Numerical checks around the Malliavin-Rubel domination criterion.
//!
//! The central condition is `l_Z(r,R) <= l_W(r,R) + C` for all
//! `0 < r < R < inf` with one constant `C`. Boundedness over all intervals is
//! undecidable from finite data, so [`mr_condition_report`] evaluates the
//! difference functional over a dyadic `(r, R)` grid and regresses the
//! per-outer-level maxima against `ln R`: an `O(1)` functional stays flat
//! while the violating direction grows like `c * ln R` — the two behaviours
//! the theory predicts. The same grid machinery drives
//! [`lemma_discrepancy_report`], which checks that the boundary functional
//! `J(r,R; ln|F|)` stays within a bounded distance of both characteristic
//! logarithms of the zero set of `F`.
//!
//! [`witness_assemble`] reproduces the constructive step of the theorem's
//! proof: finitely many points near the imaginary axis are absorbed into
//! `f_a(z) = a * f_0(z) * (sin(iz)/z)^N`, whose restriction to the axis is
//! pushed below modulus one by the scaling constant `a`.

use serde::{Deserialize, Serialize};

use crate::logchar::LogProfile;
use crate::quadrature::j_integral_model;
use crate::{
    Complex, EntireFunctionModel, Error, Factor, IntervalQuery, PointDistribution, Result,
};

/// Margin above which a sampled `ln|f| - ln|g|` counts as a domination
/// failure.
pub const DOMINATION_SLACK: f64 = 1e-9;

/// Dyadic-grid parameters shared by the MR and lemma reports.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GridConfig {
    /// Smallest grid radius; cells are `(r0*2^a, r0*2^b)`, `0 <= a < b`.
    pub r0: f64,
    /// Largest dyadic exponent `b`.
    pub levels: u32,
    /// Regression slope above which growth is suspected.
    pub slope_threshold: f64,
    /// RMS residual below which a suspected growth trend counts as clean.
    pub residual_threshold: f64,
    /// `mr_condition_report` drops cells whose outer radius exceeds this
    /// fraction of the smaller truncation's maximal modulus; data-edge cells
    /// otherwise inflate the empirical supremum.
    pub outer_exclusion_fraction: f64,
    /// Quadrature tolerance for the lemma report.
    pub tol: f64,
}

impl GridConfig {
    pub fn new(r0: f64, levels: u32) -> Self {
        Self {
            r0,
            levels,
            slope_threshold: 0.01,
            residual_threshold: 0.05,
            outer_exclusion_fraction: 0.5,
            tol: 1e-9,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.r0.is_finite() && self.r0 > 0.0) {
            return Err(Error::InvalidParameter(format!("r0 must be positive, got {}", self.r0)));
        }
        if self.levels < 3 {
            return Err(Error::InvalidParameter(format!(
                "need at least 3 dyadic levels, got {}",
                self.levels
            )));
        }
        if !(self.outer_exclusion_fraction > 0.0) {
            return Err(Error::InvalidParameter(
                "outer exclusion fraction must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Verdict of the growth regression.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    /// No growth trend above the slope threshold: consistent with a bounded
    /// functional (never a proof of boundedness).
    BoundedConsistent,
    /// Clean growth: slope above threshold with a small fit residual.
    GrowthDetected,
    /// Slope above threshold but the fit is too noisy to call.
    Inconclusive,
}

/// One dyadic grid cell `(r, R]`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct GridCell {
    pub r: f64,
    #[serde(rename = "R")]
    pub big_r: f64,
}

/// A scalar functional evaluated over the dyadic grid, its supremum, and the
/// growth regression summary.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GridReport {
    pub grid: Vec<GridCell>,
    pub values: Vec<f64>,
    /// Empirical supremum of the functional over the grid (the paper-side
    /// constants `C`/`M`/`C_f`/`C_g` are estimated by this).
    pub sup_value: f64,
    /// Least-squares slope of the per-outer-level maxima `M(b)` against
    /// `ln R`, fitted over the upper half of the levels (the asymptotic
    /// trend).
    pub growth_slope: f64,
    /// RMS residual of that fit.
    pub fit_residual: f64,
    pub verdict: Verdict,
}

/// Builds the report from per-cell values; `cells[i]` carries the dyadic
/// exponents `(a_i, b_i)`.
fn assemble_report(
    cfg: &GridConfig,
    usable_levels: u32,
    cells: Vec<(u32, u32)>,
    values: Vec<f64>,
) -> GridReport {
    let grid: Vec<GridCell> = cells
        .iter()
        .map(|&(a, b)| GridCell {
            r: cfg.r0 * f64::powi(2.0, a as i32),
            big_r: cfg.r0 * f64::powi(2.0, b as i32),
        })
        .collect();
    let sup_value = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);

    // M(b): the maximum over cells with outer exponent b.
    let mut level_max = vec![f64::NEG_INFINITY; usable_levels as usize + 1];
    for (&(_, b), &v) in cells.iter().zip(&values) {
        let slot = &mut level_max[b as usize];
        *slot = slot.max(v);
    }
    // Fit the upper half of the levels: a bounded functional may still rise
    // while small cells fill in (e.g. a saturating 1/r - 1/R shape), and only
    // the asymptotic trend separates O(1) from c * ln R.
    let fit_from = (usable_levels / 2).max(1);
    let pts: Vec<(f64, f64)> = (fit_from..=usable_levels)
        .map(|b| ((cfg.r0 * f64::powi(2.0, b as i32)).ln(), level_max[b as usize]))
        .collect();
    let (growth_slope, fit_residual) = least_squares(&pts);

    let verdict = if growth_slope > cfg.slope_threshold {
        if fit_residual < cfg.residual_threshold {
            Verdict::GrowthDetected
        } else {
            Verdict::Inconclusive
        }
    } else {
        Verdict::BoundedConsistent
    };

    GridReport { grid, values, sup_value, growth_slope, fit_residual, verdict }
}

/// Ordinary least squares of `y` against `x`; returns (slope, RMS residual).
fn least_squares(pts: &[(f64, f64)]) -> (f64, f64) {
    let n = pts.len() as f64;
    if pts.len() < 2 {
        return (0.0, 0.0);
    }
    let xbar = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let ybar = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - xbar) * (p.0 - xbar)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - xbar) * (p.1 - ybar)).sum();
    let slope = sxy / sxx;
    let intercept = ybar - slope * xbar;
    let ss_res: f64 = pts.iter().map(|p| (p.1 - (slope * p.0 + intercept)).powi(2)).sum();
    (slope, (ss_res / n).sqrt())
}

/// Largest usable outer exponent under the data cap, or a degenerate-grid
/// error when fewer than three levels survive.
fn usable_levels(cfg: &GridConfig, cap: f64) -> Result<u32> {
    let mut usable = 0;
    for b in 1..=cfg.levels {
        if cfg.r0 * f64::powi(2.0, b as i32) <= cap {
            usable = b;
        }
    }
    if usable < 3 {
        return Err(Error::DegenerateGrid { usable, requested: cfg.levels, cap });
    }
    Ok(usable)
}

/// Evaluates `l_Z(r,R) - l_W(r,R)` over the dyadic grid. The empirical
/// supremum estimates the MR constant `C`; the verdict reports whether the
/// difference is consistent with boundedness or grows like `c * ln R`.
///
/// Cells with outer radius above
/// `outer_exclusion_fraction * min(max|Z|, max|W|)` are excluded: near the
/// edge of a truncation the functional drifts for lack of data, not because
/// of the underlying distributions.
pub fn mr_condition_report(
    z: &PointDistribution,
    w: &PointDistribution,
    cfg: &GridConfig,
) -> Result<GridReport> {
    cfg.validate()?;
    if z.is_empty() || w.is_empty() {
        return Err(Error::EmptyDistribution);
    }
    let cap = cfg.outer_exclusion_fraction
        * z.max_modulus().unwrap().min(w.max_modulus().unwrap());
    let usable = usable_levels(cfg, cap)?;

    let pz = LogProfile::build(z);
    let pw = LogProfile::build(w);
    let mut cells = Vec::new();
    let mut values = Vec::new();
    for a in 0..usable {
        for b in (a + 1)..=usable {
            let q = IntervalQuery::new(
                cfg.r0 * f64::powi(2.0, a as i32),
                cfg.r0 * f64::powi(2.0, b as i32),
            )?;
            cells.push((a, b));
            values.push(pz.l_submeasure(q) - pw.l_submeasure(q));
        }
    }
    Ok(assemble_report(cfg, usable, cells, values))
}

/// Evaluates the lemma discrepancy
/// `max(|J(r,R;ln|F|) - l^rh(r,R)|, |J(r,R;ln|F|) - l^lh(r,R)|)` over the
/// dyadic grid, with the characteristic logarithms taken from the zeros of
/// `F` inside the grid's outer radius. The underlying lemma predicts a
/// bounded-consistent verdict for every entire function of exponential type.
///
/// `J` over a cell is assembled additively from per-octave integrals
/// (`J(r0 2^a, r0 2^b) = sum of octave values`), so the whole grid costs
/// `levels` adaptive integrations; each octave honours `cfg.tol`, hence a
/// cell value carries at most `levels * tol` quadrature error. No data cap
/// applies: the zero set of a model is exact, not a truncation.
pub fn lemma_discrepancy_report(
    model: &EntireFunctionModel,
    cfg: &GridConfig,
) -> Result<GridReport> {
    cfg.validate()?;
    let outer_radius = cfg.r0 * f64::powi(2.0, cfg.levels as i32);
    let zeros = model.zeros(outer_radius);
    let profile = LogProfile::build(&zeros);

    let mut octave = Vec::with_capacity(cfg.levels as usize);
    for j in 0..cfg.levels {
        let q = IntervalQuery::new(
            cfg.r0 * f64::powi(2.0, j as i32),
            cfg.r0 * f64::powi(2.0, j as i32 + 1),
        )?;
        octave.push(j_integral_model(model, q, cfg.tol)?.value);
    }

    let mut cells = Vec::new();
    let mut values = Vec::new();
    for a in 0..cfg.levels {
        for b in (a + 1)..=cfg.levels {
            let q = IntervalQuery::new(
                cfg.r0 * f64::powi(2.0, a as i32),
                cfg.r0 * f64::powi(2.0, b as i32),
            )?;
            let j: f64 = octave[a as usize..b as usize].iter().sum();
            let v = (j - profile.l_right(q)).abs().max((j - profile.l_left(q)).abs());
            cells.push((a, b));
            values.push(v);
        }
    }
    Ok(assemble_report(cfg, cfg.levels, cells, values))
}

/// Result of a domination sweep along the imaginary axis.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DominationReport {
    /// `worst_margin <= DOMINATION_SLACK`.
    pub holds: bool,
    /// Maximum of `ln|f(iy)| - ln|g(iy)|` over the sample grid (`-inf` when
    /// every sample hit a common zero; `+inf` when `g` vanished where `f`
    /// did not).
    pub worst_margin: f64,
    /// Ordinate attaining the worst margin (NaN when nothing was sampled).
    pub worst_y: f64,
}

/// Checks `|f(iy)| <= |g(iy)|` on `±y` over a log-spaced grid in
/// `[1e-3, y_max]` plus a uniform grid in `[0, 1]`. Points where both sides
/// vanish are skipped; points where only `g` vanishes fail the check.
pub fn domination_check(
    f: &EntireFunctionModel,
    g: &EntireFunctionModel,
    y_max: f64,
    samples: usize,
) -> Result<DominationReport> {
    if samples < 100 {
        return Err(Error::InvalidParameter(format!(
            "domination check needs at least 100 samples, got {samples}"
        )));
    }
    if !(y_max.is_finite() && y_max > 1e-3) {
        return Err(Error::InvalidParameter(format!("y_max must exceed 1e-3, got {y_max}")));
    }
    let mut worst_margin = f64::NEG_INFINITY;
    let mut worst_y = f64::NAN;
    let mut consider = |y: f64| {
        for sign in [1.0, -1.0] {
            let point = Complex::new(0.0, sign * y);
            let lf = f.log_modulus(point);
            let lg = g.log_modulus(point);
            if lf == f64::NEG_INFINITY && lg == f64::NEG_INFINITY {
                continue;
            }
            let margin = lf - lg;
            if margin > worst_margin {
                worst_margin = margin;
                worst_y = sign * y;
            }
        }
    };
    let ratio = y_max / 1e-3;
    for i in 0..samples {
        let t = i as f64 / (samples - 1) as f64;
        consider(1e-3 * ratio.powf(t));
    }
    for i in 0..samples {
        consider(i as f64 / (samples - 1) as f64);
    }
    Ok(DominationReport { holds: worst_margin <= DOMINATION_SLACK, worst_margin, worst_y })
}

/// Splits `Z` into the near-imaginary head `Z0` (ratio `|Re z|/|z| < d`,
/// plus any origin entries) and the separated tail `Zinf`;
/// `strict_separation(Zinf) >= d` and the parts union back to `Z`.
pub fn tail_split(
    z: &PointDistribution,
    d: f64,
) -> Result<(PointDistribution, PointDistribution)> {
    if !(d > 0.0 && d <= 1.0) {
        return Err(Error::InvalidSeparationThreshold(d));
    }
    let mut head = Vec::new();
    let mut tail = Vec::new();
    for e in z.entries() {
        let t = e.point.norm();
        if t == 0.0 || e.point.re.abs() < d * t {
            head.push((e.point, e.multiplicity));
        } else {
            tail.push((e.point, e.multiplicity));
        }
    }
    Ok((PointDistribution::new(head), PointDistribution::new(tail)))
}

/// Number of log-spaced probe ordinates (each probed at `±y`).
const PROBE_SAMPLES: usize = 1024;

/// Builds the witness `f = f_a * g0 * f_inf` with
/// `f_a(z) = a * f_0(z) * (sin(iz)/z)^N`, where `f_0` is the polynomial with
/// root distribution `z0` (`N` roots, origin not allowed — put a power atom
/// into `f_inf` for origin zeros), `g0` is the polynomial with roots
/// `g0_roots`, and `f_inf` is the caller-supplied separated-part witness.
///
/// The constant `a` is half the reciprocal of the probe-grid supremum of
/// `|f_0(iy) (sin(iz)/z)^N|` over `±y ∈ [1e-3, y_probe]`, additionally capped
/// by the analytic envelope `|f_0(iy)| |sin y / y|^N <= ∏ (1 + |root|)^m`
/// (valid for all real `y`), so `|f_a(iy)| <= 1` everywhere on the axis, not
/// just on the probe grid.
pub fn witness_assemble(
    z0: &PointDistribution,
    g0_roots: &PointDistribution,
    f_inf: &EntireFunctionModel,
    y_probe: f64,
) -> Result<EntireFunctionModel> {
    if z0.contains(Complex::new(0.0, 0.0)) {
        return Err(Error::OriginNotAllowed { context: "witness head z0" });
    }
    if !(y_probe.is_finite() && y_probe > 1e-3) {
        return Err(Error::InvalidParameter(format!(
            "probe bound must exceed 1e-3, got {y_probe}"
        )));
    }
    let head_order = z0.total_count();

    let mut head_factors: Vec<Factor> = z0
        .entries()
        .iter()
        .map(|e| Factor::PolyRoot { root: e.point, multiplicity: e.multiplicity })
        .collect();
    if head_order > 0 {
        head_factors.push(Factor::SinhcPow { exponent: head_order });
    }
    let head = if head_factors.is_empty() {
        EntireFunctionModel::one()
    } else {
        EntireFunctionModel::new(head_factors.clone())?
    };

    // Grid supremum of ln|f_0(iy) (sin(iz)/z)^N|.
    let mut grid_sup_log = f64::NEG_INFINITY;
    let ratio = y_probe / 1e-3;
    for i in 0..PROBE_SAMPLES {
        let y = 1e-3 * ratio.powf(i as f64 / (PROBE_SAMPLES - 1) as f64);
        for sign in [1.0, -1.0] {
            let v = head.log_modulus(Complex::new(0.0, sign * y));
            if v.is_finite() {
                grid_sup_log = grid_sup_log.max(v);
            }
        }
    }
    // Analytic envelope: ∏ (1 + |root|)^m bounds the head on the whole axis.
    let envelope_log: f64 =
        z0.entries().iter().map(|e| e.multiplicity as f64 * e.point.norm().ln_1p()).sum();
    if !grid_sup_log.is_finite() || !envelope_log.is_finite() {
        return Err(Error::Assembly(format!(
            "probe supremum is not finite (grid {grid_sup_log}, envelope {envelope_log})"
        )));
    }
    let ln_a = (0.5f64.ln() - grid_sup_log).min(-envelope_log);
    let a = ln_a.exp();
    if !(a.is_finite() && a > 0.0) {
        return Err(Error::Assembly(format!("scaling constant a = {a} is not positive")));
    }

    let mut factors = vec![Factor::Scalar { value: Complex::new(a, 0.0) }];
    factors.extend_from_slice(&head_factors);
    factors.extend(
        g0_roots
            .entries()
            .iter()
            .map(|e| Factor::PolyRoot { root: e.point, multiplicity: e.multiplicity }),
    );
    factors.extend_from_slice(f_inf.factors());
    let witness = EntireFunctionModel::new(factors)?;

    // Postcondition checks: the witness vanishes on z0, and the scaled head
    // stays below modulus one on the probe grid.
    if !witness.vanishes_on(z0) {
        return Err(Error::Assembly("witness does not vanish on z0".into()));
    }
    if ln_a + grid_sup_log > 1e-9 {
        return Err(Error::Assembly("scaled head exceeds modulus one on the probe grid".into()));
    }
    Ok(witness)
}

/// Constructive witness for the sub-distribution case: splits `Z` at ratio
/// `d`, requires the separated part to be included in `W`, and returns
/// `(f, g)` with `g` the even canonical product over `W` and
/// `f = f_a * g` from [`witness_assemble`] (`f_inf := g`, no `g0` part).
/// Then `f` vanishes on all of `Z` and `|f(iy)| <= |g(iy)|` on the axis.
pub fn dominated_tail_witness(
    z: &PointDistribution,
    w: &PointDistribution,
    d: f64,
    y_probe: f64,
) -> Result<(EntireFunctionModel, EntireFunctionModel)> {
    let (z0, zinf) = tail_split(z, d)?;
    if !zinf.is_subset_of(w) {
        return Err(Error::InvalidParameter(
            "the separated part of Z is not included in W; no trivial f_inf exists".into(),
        ));
    }
    let g = EntireFunctionModel::even_product(w)?;
    let f = witness_assemble(&z0, &PointDistribution::empty(), &g, y_probe)?;
    Ok((f, g))
}
