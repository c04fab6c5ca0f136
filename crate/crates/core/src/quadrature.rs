//! The boundary functional
//! `J(r,R;v) = (1/2pi) * ∫_r^R (v(-iy) + v(iy)) / y^2 dy`
//! for log-modulus integrands with integrable logarithmic singularities.
//!
//! The integrator is adaptive Gauss-Kronrod 15(7) with mandatory panel splits
//! at hinted singular ordinates. Next to a hint two strategies are used:
//!
//! * when the singularity strength is known (model-backed integrands: the
//!   strength is the zero multiplicity on the axis), the local term
//!   `c * ln|y - y0|` is subtracted, integrated in closed form and the smooth
//!   remainder is handled by the adaptive rule;
//! * for black-box integrands only the position is known, so the panel is
//!   integrated under the substitution `y = y0 ± t^2`, which flattens any
//!   integrable logarithmic endpoint singularity.
//!
//! Panels never straddle a hint; results are deterministic for fixed
//! tolerance (panel contributions are accumulated in interval-position
//! order with compensated summation). Unbounded upper endpoints are out of
//! scope: callers pass finite `R`.

use serde::{Deserialize, Serialize};

use crate::sum::KahanSum;
use crate::{Complex, EntireFunctionModel, Error, IntervalQuery, Result};

/// Hard cap on accepted panels; exceeding it is a failure, not a warning.
pub const MAX_PANELS: usize = 100_000;

const MAX_DEPTH: u32 = 60;

/// Outcome of one `J` evaluation.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QuadratureResult {
    /// The value of `J(r,R;v)` (already scaled by `1/2pi`).
    pub value: f64,
    /// Accumulated panel error estimate, same scale as `value`.
    pub abs_error_estimate: f64,
    /// Number of accepted panels.
    pub panel_count: usize,
    /// Singular ordinates that actually split the integration range.
    pub singular_points_used: Vec<f64>,
}

// Gauss-Kronrod 15(7) nodes and weights (positive half; last node is 0).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_17,
    0.207_784_955_007_898_47,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_225,
    0.063_092_092_629_978_56,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_94,
    0.417_959_183_673_469_4,
];

/// One Gauss-Kronrod 15(7) panel: returns (integral, error estimate).
fn gk15<F: FnMut(f64) -> Result<f64>>(f: &mut F, a: f64, b: f64) -> Result<(f64, f64)> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center)?;
    let mut fv1 = [0.0f64; 7];
    let mut fv2 = [0.0f64; 7];
    let mut res_gauss = fc * WG[3];
    let mut res_kronrod = fc * WGK[7];
    let mut res_abs = res_kronrod.abs();
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx)?;
        let f2 = f(center + dx)?;
        fv1[j] = f1;
        fv2[j] = f2;
        let fsum = f1 + f2;
        if j % 2 == 1 {
            res_gauss += WG[(j - 1) / 2] * fsum;
        }
        res_kronrod += WGK[j] * fsum;
        res_abs += WGK[j] * (f1.abs() + f2.abs());
    }
    let mean = res_kronrod * 0.5;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let result = res_kronrod * half;
    let res_abs = res_abs * half.abs();
    let res_asc = res_asc * half.abs();
    let mut err = ((res_kronrod - res_gauss) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        let scale = (200.0 * err / res_asc).powf(1.5);
        err = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    Ok((result, err))
}

/// Depth-first bisection, left child first, so accepted panels accumulate in
/// ascending position order. The absolute budget halves with the width.
#[allow(clippy::too_many_arguments)]
fn adapt<F: FnMut(f64) -> Result<f64>>(
    f: &mut F,
    a: f64,
    b: f64,
    budget: f64,
    depth: u32,
    panel_count: &mut usize,
    acc: &mut KahanSum,
    err_acc: &mut KahanSum,
) -> Result<()> {
    if *panel_count >= MAX_PANELS {
        return Err(Error::PanelLimit { max: MAX_PANELS });
    }
    let (value, err) = gk15(f, a, b)?;
    if err <= budget || depth >= MAX_DEPTH {
        *panel_count += 1;
        acc.add(value);
        err_acc.add(err);
        return Ok(());
    }
    let mid = 0.5 * (a + b);
    adapt(f, a, mid, 0.5 * budget, depth + 1, panel_count, acc, err_acc)?;
    adapt(f, mid, b, 0.5 * budget, depth + 1, panel_count, acc, err_acc)
}

/// Antiderivative of `ln|y - y0| / y^2`:
/// `P(y) = ln|y - y0| (1/y0 - 1/y) - ln(y)/y0`, continuous at `y = y0` with
/// `P(y0) = -ln(y0)/y0`.
fn log_kernel_antiderivative(y: f64, y0: f64) -> f64 {
    if y == y0 {
        -y0.ln() / y0
    } else {
        (y - y0).abs().ln() * (1.0 / y0 - 1.0 / y) - y.ln() / y0
    }
}

/// `∫_a^b ln|y - y0| / y^2 dy` in closed form.
fn log_kernel_integral(a: f64, b: f64, y0: f64) -> f64 {
    log_kernel_antiderivative(b, y0) - log_kernel_antiderivative(a, y0)
}

#[derive(Clone, Copy)]
struct Hint {
    position: f64,
    /// Zero multiplicity on the axis at this ordinate (both signs summed)
    /// when known; `None` for black-box integrands.
    strength: Option<f64>,
}

/// Shared engine over the symmetrized integrand `s(y) = v(iy) + v(-iy)`.
fn j_core<S: Fn(f64) -> f64>(
    sym: S,
    q: IntervalQuery,
    mut hints: Vec<Hint>,
    tol: f64,
) -> Result<QuadratureResult> {
    if !q.is_outer_finite() {
        return Err(Error::UnboundedQuadrature);
    }
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tolerance must be positive, got {tol}")));
    }
    let (r, big_r) = (q.inner(), q.outer());

    hints.retain(|h| h.position.is_finite() && r <= h.position && h.position <= big_r);
    hints.sort_by(|a, b| a.position.total_cmp(&b.position));
    hints.dedup_by(|a, b| {
        if a.position == b.position {
            // merge strengths of coincident hints
            b.strength = match (a.strength, b.strength) {
                (Some(x), Some(y)) => Some(x + y),
                _ => None,
            };
            true
        } else {
            false
        }
    });
    let singular_points_used: Vec<f64> = hints.iter().map(|h| h.position).collect();

    // Breakpoints: endpoints plus interior hints. Hints sitting exactly on an
    // endpoint mark that endpoint singular rather than adding a breakpoint.
    let hint_at = |y: f64| hints.iter().find(|h| h.position == y).copied();
    let mut breaks = vec![r];
    breaks.extend(hints.iter().map(|h| h.position).filter(|&p| p > r && p < big_r));
    breaks.push(big_r);

    let raw_tol = tol * 2.0 * std::f64::consts::PI;
    let total_width = big_r - r;
    let mut acc = KahanSum::new();
    let mut err_acc = KahanSum::new();
    let mut panel_count = 0usize;

    // Plain integrand with the non-finiteness guard.
    let eval_plain = |y: f64| -> Result<f64> {
        let val = sym(y) / (y * y);
        if val.is_finite() {
            Ok(val)
        } else {
            Err(Error::NonFiniteIntegrand { ordinate: y })
        }
    };

    for w in breaks.windows(2) {
        let (alpha, beta) = (w[0], w[1]);
        let budget = raw_tol * (beta - alpha) / total_width;
        let left = hint_at(alpha);
        let right = hint_at(beta);
        match (left, right) {
            (None, None) => {
                let mut f = eval_plain;
                adapt(&mut f, alpha, beta, budget, 0, &mut panel_count, &mut acc, &mut err_acc)?;
            }
            // Both-side subtraction when every touching hint has a known
            // strength: the remainder is smooth on the whole segment.
            (l, rr)
                if l.map_or(true, |h| h.strength.is_some())
                    && rr.map_or(true, |h| h.strength.is_some()) =>
            {
                let ca = l.and_then(|h| h.strength).unwrap_or(0.0);
                let cb = rr.and_then(|h| h.strength).unwrap_or(0.0);
                let mut f = |y: f64| -> Result<f64> {
                    let mut s = sym(y);
                    if ca != 0.0 {
                        s -= ca * (y - alpha).abs().ln();
                    }
                    if cb != 0.0 {
                        s -= cb * (beta - y).abs().ln();
                    }
                    let val = s / (y * y);
                    if val.is_finite() {
                        Ok(val)
                    } else {
                        Err(Error::NonFiniteIntegrand { ordinate: y })
                    }
                };
                adapt(&mut f, alpha, beta, budget, 0, &mut panel_count, &mut acc, &mut err_acc)?;
                if ca != 0.0 {
                    acc.add(ca * log_kernel_integral(alpha, beta, alpha));
                }
                if cb != 0.0 {
                    acc.add(cb * log_kernel_integral(alpha, beta, beta));
                }
            }
            // Position-only hints: substitute y = y0 ± t^2 on the touching
            // side; a segment touching hints on both sides splits in half.
            (l, rr) => {
                let mut pieces: Vec<(f64, f64, bool)> = Vec::new(); // (a, b, singular_left)
                match (l, rr) {
                    (Some(_), Some(_)) => {
                        let mid = 0.5 * (alpha + beta);
                        pieces.push((alpha, mid, true));
                        pieces.push((mid, beta, false));
                    }
                    (Some(_), None) => pieces.push((alpha, beta, true)),
                    (None, Some(_)) => pieces.push((alpha, beta, false)),
                    (None, None) => unreachable!(),
                }
                for (a, b, singular_left) in pieces {
                    let width = b - a;
                    let t_max = width.sqrt();
                    let piece_budget = budget * width / (beta - alpha);
                    let mut f = |t: f64| -> Result<f64> {
                        let y = if singular_left { a + t * t } else { b - t * t };
                        let base = if singular_left { a } else { b };
                        if y == base {
                            // t^2 rounded away: the transformed integrand
                            // tends to 0 for any integrable log singularity.
                            return Ok(0.0);
                        }
                        let val = 2.0 * t * sym(y) / (y * y);
                        if val.is_finite() {
                            Ok(val)
                        } else {
                            Err(Error::NonFiniteIntegrand { ordinate: y })
                        }
                    };
                    adapt(
                        &mut f,
                        0.0,
                        t_max,
                        piece_budget,
                        0,
                        &mut panel_count,
                        &mut acc,
                        &mut err_acc,
                    )?;
                }
            }
        }
    }

    let scale = 1.0 / (2.0 * std::f64::consts::PI);
    Ok(QuadratureResult {
        value: acc.value() * scale,
        abs_error_estimate: err_acc.value() * scale,
        panel_count,
        singular_points_used,
    })
}

/// `J(r,R;v)` for a black-box boundary function: `v(y)` must return the
/// value of `v` at the point `iy` for signed `y`. `singular_hints` lists the
/// ordinates `y > 0` where `v(iy) + v(-iy)` may have logarithmic
/// singularities; panels never straddle them. A non-finite integrand away
/// from every hint aborts with the offending ordinate.
pub fn j_integral<V: Fn(f64) -> f64>(
    v: V,
    q: IntervalQuery,
    singular_hints: &[f64],
    tol: f64,
) -> Result<QuadratureResult> {
    let hints = singular_hints.iter().map(|&p| Hint { position: p, strength: None }).collect();
    j_core(move |y| v(y) + v(-y), q, hints, tol)
}

/// `J(r,R; ln|F|)` for a model: hints default to the moduli of the zeros of
/// `F` on the imaginary axis, with their multiplicities (both half-axes
/// summed) used as exact subtraction strengths.
pub fn j_integral_model(
    model: &EntireFunctionModel,
    q: IntervalQuery,
    tol: f64,
) -> Result<QuadratureResult> {
    if !q.is_outer_finite() {
        return Err(Error::UnboundedQuadrature);
    }
    let hints = imaginary_axis_hints(model, q.outer());
    let sym = |y: f64| {
        model.log_modulus(Complex::new(0.0, y)) + model.log_modulus(Complex::new(0.0, -y))
    };
    j_core(sym, q, hints, tol)
}

/// Moduli and strengths of the zeros of `model` on the imaginary axis, up to
/// `radius`.
fn imaginary_axis_hints(model: &EntireFunctionModel, radius: f64) -> Vec<Hint> {
    let mut merged: std::collections::BTreeMap<u64, (f64, f64)> = std::collections::BTreeMap::new();
    for e in model.zeros(radius).entries() {
        if e.point.re == 0.0 && e.point.im != 0.0 {
            let pos = e.point.im.abs();
            let entry = merged.entry(pos.to_bits()).or_insert((pos, 0.0));
            entry.1 += e.multiplicity as f64;
        }
    }
    merged
        .into_values()
        .map(|(position, strength)| Hint { position, strength: Some(strength) })
        .collect()
}
