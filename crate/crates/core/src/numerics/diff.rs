//! Central finite differences for derivatives 0..3.
//!
//! All stencils are second order. The base step `h` is used for the first
//! derivative; the second and third derivatives use the same stencils on
//! steps widened by [`D2_WIDEN`] and [`D3_WIDEN`]. The widening factors are
//! fixed multiples of `h`, so every derivative still converges as O(h²),
//! while round-off (which grows like ε/h^k) stays below the truncation error
//! at the default step.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Step multiplier for the second-derivative stencil.
pub const D2_WIDEN: f64 = 4.0;
/// Step multiplier for the third-derivative stencil.
pub const D3_WIDEN: f64 = 15.0;

/// Value and first three derivatives of a scalar function.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Jet {
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
    pub d3: f64,
}

impl Jet {
    pub fn new(value: f64, d1: f64, d2: f64, d3: f64) -> Self {
        Self { value, d1, d2, d3 }
    }

    pub fn is_finite(&self) -> bool {
        self.value.is_finite() && self.d1.is_finite() && self.d2.is_finite() && self.d3.is_finite()
    }

    pub fn max_abs_diff(&self, other: &Jet) -> f64 {
        (self.value - other.value)
            .abs()
            .max((self.d1 - other.d1).abs())
            .max((self.d2 - other.d2).abs())
            .max((self.d3 - other.d3).abs())
    }

    /// Richardson combination `(4·fine − coarse)/3` of two O(h²) jets taken at
    /// steps h and 2h.
    pub fn richardson(fine: &Jet, coarse: &Jet) -> Jet {
        Self::extrapolate(fine, coarse, 4.0)
    }

    /// `(factor·fine − coarse)/(factor − 1)` on each derivative, removing
    /// the error term that scales by `factor` when the step doubles.
    pub fn extrapolate(fine: &Jet, coarse: &Jet, factor: f64) -> Jet {
        let r = |f: f64, c: f64| (factor * f - c) / (factor - 1.0);
        Jet {
            value: fine.value,
            d1: r(fine.d1, coarse.d1),
            d2: r(fine.d2, coarse.d2),
            d3: r(fine.d3, coarse.d3),
        }
    }
}

#[derive(Debug, Clone, Copy, Error, PartialEq)]
pub enum DiffError {
    #[error("function sample is not finite at t = {t}")]
    NonFiniteSample { t: f64 },
    #[error("step must be positive and finite, got {0}")]
    InvalidStep(f64),
}

/// `ε^{1/3}·max(1, |t|)`.
pub fn default_step(t: f64) -> f64 {
    f64::EPSILON.cbrt() * t.abs().max(1.0)
}

/// Half-width of the stencil used by [`finite_diff_jet`] for base step `h`.
pub fn stencil_radius(h: f64) -> f64 {
    2.0 * D3_WIDEN * h
}

// Snap t + h onto the floating-point grid so the effective step is exact.
fn exact_step(t: f64, h: f64) -> f64 {
    (t + h) - t
}

/// Differentiates every component of a vector-valued function at once.
pub fn finite_diff_jets<const N: usize, F>(func: F, t: f64, h: f64) -> Result<[Jet; N], DiffError>
where
    F: Fn(f64) -> [f64; N],
{
    if !(h > 0.0 && h.is_finite()) {
        return Err(DiffError::InvalidStep(h));
    }
    let sample = |x: f64| {
        let v = func(x);
        if v.iter().all(|c| c.is_finite()) {
            Ok(v)
        } else {
            Err(DiffError::NonFiniteSample { t: x })
        }
    };
    let h1 = exact_step(t, h);
    let h2 = exact_step(t, D2_WIDEN * h);
    let h3 = exact_step(t, D3_WIDEN * h);

    let f0 = sample(t)?;
    let p1 = sample(t + h1)?;
    let m1 = sample(t - h1)?;
    let p2 = sample(t + h2)?;
    let m2 = sample(t - h2)?;
    let p3 = sample(t + h3)?;
    let m3 = sample(t - h3)?;
    let p33 = sample(t + 2.0 * h3)?;
    let m33 = sample(t - 2.0 * h3)?;

    let mut out = [Jet::default(); N];
    for (i, jet) in out.iter_mut().enumerate() {
        jet.value = f0[i];
        jet.d1 = (p1[i] - m1[i]) / (2.0 * h1);
        jet.d2 = (p2[i] - 2.0 * f0[i] + m2[i]) / (h2 * h2);
        jet.d3 = (p33[i] - 2.0 * p3[i] + 2.0 * m3[i] - m33[i]) / (2.0 * h3 * h3 * h3);
    }
    Ok(out)
}

/// Central-difference jet of a scalar function; each derivative is O(h²).
///
/// `func` must be evaluable on `[t − r, t + r]` with `r = stencil_radius(h)`.
pub fn finite_diff_jet<F>(func: F, t: f64, h: f64) -> Result<Jet, DiffError>
where
    F: Fn(f64) -> f64,
{
    finite_diff_jets(|x| [func(x)], t, h).map(|[j]| j)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_is_exact_up_to_roundoff() {
        let j = finite_diff_jet(|t| t * t, 1.0, 1e-4).unwrap();
        assert!(j.max_abs_diff(&Jet::new(1.0, 2.0, 2.0, 0.0)) < 1e-6, "{j:?}");
    }

    #[test]
    fn sine_at_origin() {
        let j = finite_diff_jet(f64::sin, 0.0, 1e-4).unwrap();
        assert!(j.max_abs_diff(&Jet::new(0.0, 1.0, 0.0, -1.0)) < 1e-6, "{j:?}");
    }

    #[test]
    fn t_exp_t_against_analytic_derivatives() {
        // d^k/dt^k (t e^t) = (t + k) e^t, evaluated by hand at t = 1/2.
        let e = 0.5_f64.exp();
        let analytic = Jet::new(0.5 * e, 1.5 * e, 2.5 * e, 3.5 * e);
        let j = finite_diff_jet(|t| t * t.exp(), 0.5, 1e-4).unwrap();
        assert!((j.value - analytic.value).abs() < 1e-15);
        assert!((j.d1 - analytic.d1).abs() < 1e-7);
        assert!((j.d2 - analytic.d2).abs() < 1e-6);
        // Truncation (15e-4)^2/4 · (5.5 e^0.5) ≈ 5e-6 dominates here.
        assert!((j.d3 - analytic.d3).abs() < 1e-5);
    }

    #[test]
    fn non_finite_sample() {
        let err = finite_diff_jet(|t: f64| 1.0 / t, 0.0, 1e-3).unwrap_err();
        assert!(matches!(err, DiffError::NonFiniteSample { .. }));
        assert!(matches!(finite_diff_jet(f64::sin, 0.0, -1.0), Err(DiffError::InvalidStep(_))));
    }

    #[test]
    fn second_order_convergence_slope() {
        // Measured in the truncation-dominated range of h.
        let f = |t: f64| (1.3 * t).sin() * t.exp();
        let t: f64 = 0.4;
        let exact = |k: i32| {
            // (e^t sin(ωt))^(k) = r^k e^t sin(ωt + kφ), r = |1 + iω|, φ = arg(1 + iω)
            let r = (1.0_f64 + 1.69).sqrt();
            let phi = 1.3_f64.atan();
            r.powi(k) * t.exp() * (1.3 * t + k as f64 * phi).sin()
        };
        let hs = [4e-3, 2e-3, 1e-3];
        for k in 1..=3 {
            let errs: Vec<f64> = hs
                .iter()
                .map(|&h| {
                    let j = finite_diff_jet(f, t, h).unwrap();
                    let v = [j.d1, j.d2, j.d3][k - 1];
                    (v - exact(k as i32)).abs()
                })
                .collect();
            for w in errs.windows(2) {
                let slope = (w[0] / w[1]).log2();
                assert!((1.8..=2.5).contains(&slope), "derivative {k}: slope {slope}");
            }
        }
    }

    #[test]
    fn richardson_improves_accuracy() {
        let h = 1e-3;
        let fine = finite_diff_jet(f64::exp, 0.3, h).unwrap();
        let coarse = finite_diff_jet(f64::exp, 0.3, 2.0 * h).unwrap();
        let r = Jet::richardson(&fine, &coarse);
        let e = 0.3_f64.exp();
        assert!((r.d3 - e).abs() < (fine.d3 - e).abs() / 10.0);
    }
}
