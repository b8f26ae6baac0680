//! Antiderivatives of `θ′(t) = b / f(a t + c)` for the closed-form families.
//!
//! Every form is `F(t) = (b/a)·G(s)` with `G′ = 1/f` and `s = a t + c`,
//! except the cylinder, where `F(t) = b t / B` also covers `a = 0`. The
//! loxodrome uses `θ(t) = θ₀ + F(t) − F(t₀)`, so additive constants in `G`
//! are irrelevant.

use serde::{Deserialize, Serialize};

use crate::surface::{ProfileParams, CASE_EPS};

/// Which antiderivative applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ClosedCase {
    /// Flat, `A ≠ 0`: `G = ln|A s + B| / A`.
    FlatLog,
    /// Cylinder, `A = 0`: `F = b t / B`.
    FlatLinear,
    /// `K₀ > 0`, `A = 0`: `G = ln|tan(w s/2)| / (B w)`.
    SphericalLogTan,
    /// `K₀ > 0`, `A ≠ 0`: `G = 2/(w R) · atanh((A tan(w s/2) − B)/R)`, `R = √(A²+B²)`.
    SphericalAtanh,
    /// `K₀ < 0`, `A = 0`: `G = ln|tanh(w s/2)| / (B w)`.
    HyperbolicLogTanh,
    /// `K₀ < 0`, `A = B`: `G = −e^{−w s} / (A w)`.
    HyperbolicExp,
    /// `K₀ < 0`, `B² < A²`: `G = 2/(w Q) · atan((A tanh(w s/2) + B)/Q)`, `Q = √(A²−B²)`.
    HyperbolicAtan,
    /// `K₀ < 0`, `A² < B²`: `G = −2/(w P) · atanh((A tanh(w s/2) + B)/P)`, `P = √(B²−A²)`.
    HyperbolicAtanh,
    /// Catenoid: `G = asinh(n (s + m))`.
    Minimal,
}

impl ClosedCase {
    pub fn label(self) -> &'static str {
        match self {
            ClosedCase::FlatLog => "flat-log",
            ClosedCase::FlatLinear => "flat-linear",
            ClosedCase::SphericalLogTan => "spherical-logtan",
            ClosedCase::SphericalAtanh => "spherical-atanh",
            ClosedCase::HyperbolicLogTanh => "hyperbolic-logtanh",
            ClosedCase::HyperbolicExp => "hyperbolic-exp",
            ClosedCase::HyperbolicAtan => "hyperbolic-atan",
            ClosedCase::HyperbolicAtanh => "hyperbolic-atanh",
            ClosedCase::Minimal => "minimal",
        }
    }
}

fn is_zero(x: f64) -> bool {
    x.abs() <= CASE_EPS
}

/// Selects the closed form for a profile, or `None` when no case applies
/// (CRPC, generic profiles, and the hyperbolic `A = −B` profile).
pub(crate) fn dispatch(params: &ProfileParams) -> Option<ClosedCase> {
    match *params {
        ProfileParams::Flat { a, .. } => Some(if is_zero(a) {
            ClosedCase::FlatLinear
        } else {
            ClosedCase::FlatLog
        }),
        ProfileParams::SphericalK { a, .. } => Some(if is_zero(a) {
            ClosedCase::SphericalLogTan
        } else {
            ClosedCase::SphericalAtanh
        }),
        ProfileParams::HyperbolicK { a, b, .. } => {
            if is_zero(a) {
                Some(ClosedCase::HyperbolicLogTanh)
            } else if is_zero(a - b) {
                Some(ClosedCase::HyperbolicExp)
            } else if is_zero(a + b) {
                None
            } else if b * b < a * a {
                Some(ClosedCase::HyperbolicAtan)
            } else {
                Some(ClosedCase::HyperbolicAtanh)
            }
        }
        ProfileParams::Minimal { .. } => Some(ClosedCase::Minimal),
        ProfileParams::Crpc(_) | ProfileParams::Generic(_) => None,
    }
}

/// `½ ln|(1+w)/(1−w)|`: `atanh` continued to `|w| > 1` with the same
/// derivative `1/(1 − w²)`.
pub(crate) fn atanh_ext(w: f64) -> f64 {
    if w.abs() < 1.0 {
        w.atanh()
    } else {
        0.5 * ((1.0 + w) / (1.0 - w)).abs().ln()
    }
}

/// `F(t) − F(t₀)`, written without the cancellation of the difference
/// where a form allows it.
pub(crate) fn increment(case: ClosedCase, params: &ProfileParams, la: f64, lb: f64, c: f64, t0: f64, t: f64) -> f64 {
    match (case, params) {
        (ClosedCase::FlatLog, ProfileParams::Flat { a, b }) => {
            // ln(f(s)/f(s₀)) with f(s) − f(s₀) = A·a·(t − t₀).
            let f0 = a * (la * t0 + c) + b;
            lb / la * (a * la * (t - t0) / f0).ln_1p() / a
        }
        _ => antiderivative(case, params, la, lb, c, t) - antiderivative(case, params, la, lb, c, t0),
    }
}

/// `F(t)` for the given case; `la, lb` are `cos ψ` and `ε sin ψ`.
pub(crate) fn antiderivative(case: ClosedCase, params: &ProfileParams, la: f64, lb: f64, c: f64, t: f64) -> f64 {
    let s = la * t + c;
    let ratio = lb / la;
    match (case, params) {
        (ClosedCase::FlatLinear, ProfileParams::Flat { b, .. }) => lb * t / b,
        (ClosedCase::FlatLog, ProfileParams::Flat { a, b }) => ratio * (a * s + b).abs().ln() / a,
        (ClosedCase::SphericalLogTan, ProfileParams::SphericalK { k0, b, .. }) => {
            let w = k0.sqrt();
            ratio * (0.5 * w * s).tan().abs().ln() / (b * w)
        }
        (ClosedCase::SphericalAtanh, ProfileParams::SphericalK { k0, a, b }) => {
            let w = k0.sqrt();
            let r = a.hypot(*b);
            ratio * 2.0 / (w * r) * atanh_ext((a * (0.5 * w * s).tan() - b) / r)
        }
        (ClosedCase::HyperbolicLogTanh, ProfileParams::HyperbolicK { k0, b, .. }) => {
            let w = (-k0).sqrt();
            ratio * (0.5 * w * s).tanh().abs().ln() / (b * w)
        }
        (ClosedCase::HyperbolicExp, ProfileParams::HyperbolicK { k0, a, .. }) => {
            let w = (-k0).sqrt();
            -ratio * (-w * s).exp() / (a * w)
        }
        (ClosedCase::HyperbolicAtan, ProfileParams::HyperbolicK { k0, a, b }) => {
            let w = (-k0).sqrt();
            let q = (a * a - b * b).sqrt();
            ratio * 2.0 / (w * q) * ((a * (0.5 * w * s).tanh() + b) / q).atan()
        }
        (ClosedCase::HyperbolicAtanh, ProfileParams::HyperbolicK { k0, a, b }) => {
            let w = (-k0).sqrt();
            let p = (b * b - a * a).sqrt();
            -ratio * 2.0 / (w * p) * atanh_ext((a * (0.5 * w * s).tanh() + b) / p)
        }
        (ClosedCase::Minimal, ProfileParams::Minimal { n, m, .. }) => ratio * (n * (s + m)).asinh(),
        _ => f64::NAN,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dispatch_cases() {
        let flat = |a| ProfileParams::Flat { a, b: 1.0 };
        assert_eq!(dispatch(&flat(0.0)), Some(ClosedCase::FlatLinear));
        assert_eq!(dispatch(&flat(1e-15)), Some(ClosedCase::FlatLinear));
        assert_eq!(dispatch(&flat(0.5)), Some(ClosedCase::FlatLog));
        let hyp = |a, b| ProfileParams::HyperbolicK { k0: -1.0, a, b };
        assert_eq!(dispatch(&hyp(0.0, 2.0)), Some(ClosedCase::HyperbolicLogTanh));
        assert_eq!(dispatch(&hyp(1.0, 1.0)), Some(ClosedCase::HyperbolicExp));
        assert_eq!(dispatch(&hyp(2.0, 1.0)), Some(ClosedCase::HyperbolicAtan));
        assert_eq!(dispatch(&hyp(1.0, 2.0)), Some(ClosedCase::HyperbolicAtanh));
        assert_eq!(dispatch(&hyp(1.0, -1.0)), None);
    }

    #[test]
    fn atanh_extension_is_odd_and_matches_inside() {
        assert_eq!(atanh_ext(0.3), 0.3f64.atanh());
        assert!((atanh_ext(3.0) + atanh_ext(-3.0)).abs() < 1e-15);
        // d/dw at w = 3 equals 1/(1 − 9).
        let h = 1e-6;
        let d = (atanh_ext(3.0 + h) - atanh_ext(3.0 - h)) / (2.0 * h);
        assert!((d + 0.125).abs() < 1e-8);
    }
}
