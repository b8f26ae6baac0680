//! Globally adaptive Gauss-Kronrod (7/15) quadrature.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Maximum number of bisections before giving up on the tolerance.
pub const MAX_SUBDIVISIONS: usize = 2000;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for the abscissae XGK[1], XGK[3], XGK[5] and the centre.
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureResult {
    pub value: f64,
    /// Absolute error estimate, always non-negative.
    pub error_estimate: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum QuadratureError {
    #[error("integrand is not finite at x = {x}")]
    NonFiniteIntegrand { x: f64 },
    #[error("tolerance {tol:e} not met after {subdivisions} subdivisions (best estimate {best:?})")]
    ToleranceNotMet {
        tol: f64,
        subdivisions: usize,
        best: QuadratureResult,
    },
    #[error("tolerance must be positive and finite, got {0}")]
    InvalidTolerance(f64),
    #[error("integration bounds must be finite, got [{a}, {b}]")]
    InvalidInterval { a: f64, b: f64 },
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    abs_value: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut scaled = err.abs();
    if res_asc != 0.0 && scaled != 0.0 {
        let scale = (200.0 * scaled / res_asc).powf(1.5);
        scaled = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        scaled = scaled.max(50.0 * f64::EPSILON * res_abs);
    }
    scaled
}

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Result<Panel, QuadratureError> {
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let eval = |x: f64| {
        let y = f(x);
        if y.is_finite() {
            Ok(y)
        } else {
            Err(QuadratureError::NonFiniteIntegrand { x })
        }
    };

    let fc = eval(centre)?;
    let mut res_k = fc * WGK[7];
    let mut res_g = fc * WG[3];
    let mut res_abs = res_k.abs();
    let mut lo = [0.0; 7];
    let mut hi = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = eval(centre - dx)?;
        let f2 = eval(centre + dx)?;
        lo[j] = f1;
        hi[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((lo[j] - mean).abs() + (hi[j] - mean).abs());
    }
    let err = (res_k - res_g) * half;
    let abs_half = half.abs();
    Ok(Panel {
        a,
        b,
        value: res_k * half,
        error: rescale_error(err, res_abs * abs_half, res_asc * abs_half),
        abs_value: res_abs * abs_half,
    })
}

/// Composite 15-point Kronrod rule on `panels` equal panels.
///
/// Unlike [`integrate_adaptive`], the sample points move continuously with
/// the bounds, so the result is a smooth function of `a` and `b`.
pub fn integrate_fixed<F>(integrand: F, a: f64, b: f64, panels: usize) -> Result<QuadratureResult, QuadratureError>
where
    F: Fn(f64) -> f64,
{
    if !(a.is_finite() && b.is_finite()) {
        return Err(QuadratureError::InvalidInterval { a, b });
    }
    let panels = panels.max(1);
    let width = (b - a) / panels as f64;
    let mut value = 0.0;
    let mut error_estimate = 0.0;
    for i in 0..panels {
        let lo = a + width * i as f64;
        let hi = if i + 1 == panels { b } else { lo + width };
        let p = gk15(&integrand, lo, hi)?;
        value += p.value;
        error_estimate += p.error;
    }
    Ok(QuadratureResult {
        value,
        error_estimate,
        evaluations: 15 * panels,
    })
}

const MAX_FIXED_PANELS: usize = 1024;
const MAX_CELLS: f64 = 4096.0;

fn sum(a: QuadratureResult, b: QuadratureResult) -> QuadratureResult {
    QuadratureResult {
        value: a.value + b.value,
        error_estimate: a.error_estimate + b.error_estimate,
        evaluations: a.evaluations + b.evaluations,
    }
}

// Panel count, starting at `panels` and doubling up to the cap, at which
// the fixed rule meets `tol` on `[a, b]`; `None` if none does.
fn refined_panels<F>(integrand: &F, a: f64, b: f64, panels: usize, tol: f64) -> Result<Option<(usize, QuadratureResult)>, QuadratureError>
where
    F: Fn(f64) -> f64,
{
    let mut n = panels.max(1);
    loop {
        let r = integrate_fixed(integrand, a, b, n)?;
        if r.error_estimate <= tol {
            return Ok(Some((n, r)));
        }
        if n >= MAX_FIXED_PANELS {
            return Ok(None);
        }
        n *= 2;
    }
}

fn integrate_fixed_refined<F>(integrand: &F, a: f64, b: f64, panels: usize, tol: f64) -> Result<QuadratureResult, QuadratureError>
where
    F: Fn(f64) -> f64,
{
    match refined_panels(integrand, a, b, panels, tol)? {
        Some((_, r)) => Ok(r),
        None => integrate_adaptive(integrand, a, b, tol),
    }
}

/// `∫_{anchor}^{x}` as a function of `x` that stays smooth under small
/// moves of `x`.
///
/// The range is cut into cells of length `cell` starting at `anchor`. Every
/// cell, and the partial cell ending at `x`, is integrated with
/// [`integrate_fixed`] on `panels` panels, doubled up to 1024 until the error
/// estimate meets `tol`. The partial cell's nodes move continuously with `x`
/// and reproduce the full-cell sum when `x` reaches a cell corner, so finite
/// differences in `x` never see the piecewise-constant partition of an
/// adaptive rule. Beyond 4096 cells the full cells are integrated adaptively.
pub fn integrate_cellwise<F>(
    integrand: F,
    anchor: f64,
    x: f64,
    cell: f64,
    panels: usize,
    tol: f64,
) -> Result<QuadratureResult, QuadratureError>
where
    F: Fn(f64) -> f64,
{
    if !(anchor.is_finite() && x.is_finite()) {
        return Err(QuadratureError::InvalidInterval { a: anchor, b: x });
    }
    let cells = ((x - anchor) / cell).trunc();
    let step = cell.copysign(x - anchor);
    let corner = anchor + cells * cell;
    let mut total = QuadratureResult {
        value: 0.0,
        error_estimate: 0.0,
        evaluations: 0,
    };
    let n = cells.abs();
    if n > MAX_CELLS {
        total = integrate_adaptive(&integrand, anchor, corner, tol)?;
    } else {
        for i in 0..n as usize {
            let lo = anchor + step * i as f64;
            let hi = anchor + step * (i + 1) as f64;
            total = sum(total, integrate_fixed_refined(&integrand, lo, hi, panels, tol)?);
        }
    }
    // The panel count of the partial cell is the one its full cell needs,
    // so it does not switch as `x` moves inside the cell.
    let full = refined_panels(&integrand, corner, corner + step, panels, tol).ok().flatten();
    let tail = match full {
        Some((n, _)) => integrate_fixed(&integrand, corner, x, n),
        None => integrate_fixed_refined(&integrand, corner, x, panels, tol),
    };
    let tail = match tail {
        Ok(r) => r,
        Err(QuadratureError::ToleranceNotMet { tol, subdivisions, best }) => {
            return Err(QuadratureError::ToleranceNotMet {
                tol,
                subdivisions,
                best: sum(total, best),
            })
        }
        Err(e) => return Err(e),
    };
    Ok(sum(total, tail))
}

/// Integrates `integrand` over `[a, b]` to absolute tolerance `tol`.
///
/// `a > b` is allowed and flips the sign. The tolerance is floored at the
/// round-off level `100·ε·∫|f|`, below which no rule can make progress.
pub fn integrate_adaptive<F>(integrand: F, a: f64, b: f64, tol: f64) -> Result<QuadratureResult, QuadratureError>
where
    F: Fn(f64) -> f64,
{
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(QuadratureError::InvalidTolerance(tol));
    }
    if !(a.is_finite() && b.is_finite()) {
        return Err(QuadratureError::InvalidInterval { a, b });
    }
    if a == b {
        let y = integrand(a);
        if !y.is_finite() {
            return Err(QuadratureError::NonFiniteIntegrand { x: a });
        }
        return Ok(QuadratureResult {
            value: 0.0,
            error_estimate: 0.0,
            evaluations: 1,
        });
    }
    if a > b {
        return match integrate_adaptive(integrand, b, a, tol) {
            Ok(r) => Ok(QuadratureResult { value: -r.value, ..r }),
            Err(QuadratureError::ToleranceNotMet { tol, subdivisions, best }) => {
                Err(QuadratureError::ToleranceNotMet {
                    tol,
                    subdivisions,
                    best: QuadratureResult { value: -best.value, ..best },
                })
            }
            Err(e) => Err(e),
        };
    }

    let first = gk15(&integrand, a, b)?;
    let mut evaluations = 15;
    let mut value = first.value;
    let mut error = first.error;
    let mut abs_total = first.abs_value;
    let mut heap = BinaryHeap::new();
    heap.push(first);

    let mut subdivisions = 0;
    while error > tol.max(100.0 * f64::EPSILON * abs_total) {
        if subdivisions >= MAX_SUBDIVISIONS {
            return Err(QuadratureError::ToleranceNotMet {
                tol,
                subdivisions,
                best: QuadratureResult {
                    value,
                    error_estimate: error,
                    evaluations,
                },
            });
        }
        let worst = heap.pop().expect("heap holds at least one panel");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // Panel cannot be split any further in floating point.
            heap.push(worst);
            return Err(QuadratureError::ToleranceNotMet {
                tol,
                subdivisions,
                best: QuadratureResult {
                    value,
                    error_estimate: error,
                    evaluations,
                },
            });
        }
        let left = gk15(&integrand, worst.a, mid)?;
        let right = gk15(&integrand, mid, worst.b)?;
        evaluations += 30;
        subdivisions += 1;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        abs_total += left.abs_value + right.abs_value - worst.abs_value;
        heap.push(left);
        heap.push(right);
        // Resum occasionally to keep the running totals honest.
        if subdivisions % 64 == 0 {
            value = heap.iter().map(|p| p.value).sum();
            error = heap.iter().map(|p| p.error).sum();
            abs_total = heap.iter().map(|p| p.abs_value).sum();
        }
    }
    let value: f64 = heap.iter().map(|p| p.value).sum();
    let error: f64 = heap.iter().map(|p| p.error).sum();
    Ok(QuadratureResult {
        value,
        error_estimate: error.max(0.0),
        evaluations,
    })
}
