//! Quantitative verdicts for the geometric classifications of loxodromes.
//!
//! Each check samples closed-form κ, τ and κ_n along the curve and reduces
//! them to a single residual compared against a claim-specific tolerance.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::loxodrome::{KappaTau, Loxodrome, LoxodromeError, ThetaMode};
use crate::par;
use crate::surface::{Interval, ProfileParams};

/// Tolerance of the geodesic and circle checks.
pub const SPECIAL_ANGLE_TOL: f64 = 1e-8;
/// Tolerance on the helix-angle spread of the constant-ratio check.
pub const HELIX_TOL: f64 = 1e-6;
/// Tolerance of the linear-ratio fit.
pub const LINEAR_TOL: f64 = 1e-6;
/// Tolerance on the normal curvature for asymptotic curves.
pub const ASYMPTOTIC_TOL: f64 = 1e-8;
/// Smallest sample count accepted by the sampled checks.
pub const MIN_SAMPLES: usize = 8;
/// Sample count used by [`default_samples`].
pub const DEFAULT_SAMPLES: usize = 32;
/// Half-width of the sampling window around `t₀`.
pub const DEFAULT_HALF_WINDOW: f64 = 10.0;
/// Smallest radius kept in the sampling window, relative to the largest
/// radius inside the half-window.
pub const RADIUS_FLOOR: f64 = 0.05;
const WINDOW_SCAN: usize = 400;
/// Below this `|τ|` the ratio `κ/τ` is treated as undefined.
pub const TAU_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Claim {
    Geodesic,
    Circle,
    GeneralHelix,
    LinearKappaTauRatio,
    AsymptoticCurve,
}

impl Claim {
    pub fn label(self) -> &'static str {
        match self {
            Claim::Geodesic => "geodesic",
            Claim::Circle => "circle",
            Claim::GeneralHelix => "general-helix",
            Claim::LinearKappaTauRatio => "linear-kappa-tau-ratio",
            Claim::AsymptoticCurve => "asymptotic-curve",
        }
    }
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CharacterizationVerdict {
    pub claim: Claim,
    /// `residual <= tolerance`.
    pub holds: bool,
    pub residual: f64,
    pub tolerance: f64,
    /// Fitted or expected constants, keyed by name.
    pub details: BTreeMap<String, f64>,
}

impl CharacterizationVerdict {
    fn new(claim: Claim, residual: f64, tolerance: f64, details: BTreeMap<String, f64>) -> Self {
        Self {
            claim,
            holds: residual <= tolerance,
            residual,
            tolerance,
            details,
        }
    }
}

#[derive(Debug, Clone, Error)]
pub enum CharacterizeError {
    #[error("{0}")]
    NotApplicable(String),
    #[error("torsion undefined or zero at t = {t}")]
    UndefinedTorsion { t: f64 },
    #[error("need at least {MIN_SAMPLES} samples, got {0}")]
    TooFewSamples(usize),
    #[error(transparent)]
    Loxodrome(#[from] LoxodromeError),
}

/// Window sampled by [`default_samples`]: the loxodrome's `t` domain cut to
/// `t₀ ± 10`, then to the stretch around `t₀` where the radius stays above
/// [`RADIUS_FLOOR`] of its largest value there. Near the axis κ and τ grow
/// like `1/f` and carry little information about the curve's shape.
pub fn sampling_window(lox: &Loxodrome) -> Interval {
    let t0 = lox.spec().t0;
    let w = lox
        .t_domain()
        .intersect(&Interval::new(t0 - DEFAULT_HALF_WINDOW, t0 + DEFAULT_HALF_WINDOW));
    if !(w.is_bounded() && w.lo < w.hi && w.contains(t0)) {
        return w;
    }
    let ts = par::linspace(w.lo, w.hi, WINDOW_SCAN);
    let radius = par::map(&ts, |&t| {
        lox.s_of_t(t)
            .ok()
            .and_then(|s| lox.surface().profile_jet(s).ok())
            .map_or(0.0, |j| j.f.abs())
    });
    let floor = RADIUS_FLOOR * radius.iter().cloned().fold(0.0, f64::max);
    let i0 = ts
        .iter()
        .enumerate()
        .min_by(|a, b| (a.1 - t0).abs().total_cmp(&(b.1 - t0).abs()))
        .map_or(0, |(i, _)| i);
    if radius[i0] < floor {
        return w;
    }
    let mut lo = i0;
    while lo > 0 && radius[lo - 1] >= floor {
        lo -= 1;
    }
    let mut hi = i0;
    while hi + 1 < ts.len() && radius[hi + 1] >= floor {
        hi += 1;
    }
    Interval::new(if lo == 0 { w.lo } else { ts[lo] }, if hi + 1 == ts.len() { w.hi } else { ts[hi] })
}

/// 32 equispaced parameters over the middle 80% of [`sampling_window`].
pub fn default_samples(lox: &Loxodrome) -> Vec<f64> {
    let w = sampling_window(lox);
    par::interior_samples(w.lo, w.hi, DEFAULT_SAMPLES, 0.8)
}

fn need_samples(ts: &[f64]) -> Result<(), CharacterizeError> {
    if ts.len() < MIN_SAMPLES {
        Err(CharacterizeError::TooFewSamples(ts.len()))
    } else {
        Ok(())
    }
}

fn kappa_tau(lox: &Loxodrome, ts: &[f64]) -> Result<Vec<KappaTau>, CharacterizeError> {
    Ok(par::try_map(ts, |&t| lox.kappa_tau_general(t))?)
}

fn ratios(kts: &[KappaTau]) -> Option<Vec<f64>> {
    kts.iter()
        .map(|kt| kt.tau.filter(|tau| tau.abs() >= TAU_FLOOR).map(|tau| kt.kappa / tau))
        .collect()
}

// κ/τ with κ replaced by the signed geodesic curvature, which equals ±κ
// along asymptotic curves and changes sign through inflections instead of
// folding at them.
fn signed_ratios(lox: &Loxodrome, ts: &[f64]) -> Result<Vec<f64>, CharacterizeError> {
    let rows = par::try_map(ts, |&t| -> Result<(f64, Option<f64>), LoxodromeError> {
        Ok((lox.geodesic_curvature(t)?, lox.kappa_tau_general(t)?.tau))
    })?;
    rows.iter()
        .zip(ts)
        .map(|(&(kg, tau), &t)| match tau {
            Some(tau) if tau.abs() >= TAU_FLOOR => Ok(kg / tau),
            _ => Err(CharacterizeError::UndefinedTorsion { t }),
        })
        .collect()
}

/// Geodesic verdict for meridians (`ψ = 0`, π) and circle verdict for
/// parallels (`ψ = π/2`), over [`default_samples`].
pub fn check_special_angle(lox: &Loxodrome) -> Result<CharacterizationVerdict, CharacterizeError> {
    let ts = default_samples(lox);
    let kts = kappa_tau(lox, &ts)?;
    let tau_dev = kts.iter().map(|kt| kt.tau.unwrap_or(0.0).abs()).fold(0.0, f64::max);
    let mut details = BTreeMap::new();
    match lox.mode() {
        ThetaMode::Meridian => {
            // κ of a meridian is |κ₁| = |f″|/√(1 − f′²).
            let expected = par::try_map(&ts, |&t| -> Result<f64, LoxodromeError> {
                let s = lox.s_of_t(t)?;
                let c = lox.surface().surface_curvatures(s)?;
                Ok(c.kappa1.abs())
            })?;
            let kappa_dev = kts
                .iter()
                .zip(&expected)
                .map(|(kt, e)| (kt.kappa - e).abs())
                .fold(0.0, f64::max);
            details.insert("max_tau".into(), tau_dev);
            details.insert("max_kappa_deviation".into(), kappa_dev);
            Ok(CharacterizationVerdict::new(
                Claim::Geodesic,
                tau_dev.max(kappa_dev),
                SPECIAL_ANGLE_TOL,
                details,
            ))
        }
        ThetaMode::Parallel => {
            let radius = lox.surface().profile_jet(lox.spec().c).map_err(LoxodromeError::from)?.f;
            let kappa_dev = kts.iter().map(|kt| (kt.kappa - 1.0 / radius).abs()).fold(0.0, f64::max);
            details.insert("radius".into(), radius);
            details.insert("kappa".into(), 1.0 / radius);
            details.insert("max_tau".into(), tau_dev);
            Ok(CharacterizationVerdict::new(
                Claim::Circle,
                tau_dev.max(kappa_dev),
                SPECIAL_ANGLE_TOL,
                details,
            ))
        }
        _ => Err(CharacterizeError::NotApplicable(format!(
            "special-angle check needs psi in {{0, pi/2, pi}}, got {}",
            lox.spec().psi
        ))),
    }
}

/// `|κ/τ|` of a loxodrome on the flat profile `f = A s + B`:
/// `√(b² + a²A²) / (|a| √(1 − A²))`.
pub fn flat_helix_ratio(lox: &Loxodrome) -> Option<f64> {
    match *lox.surface().params() {
        ProfileParams::Flat { a: slope, .. } => {
            let (a, b) = lox.ab();
            Some((b * b + a * a * slope * slope).sqrt() / (a.abs() * (1.0 - slope * slope).sqrt()))
        }
        _ => None,
    }
}

/// Constant-ratio (general helix) verdict on the helix angle
/// `φ = atan2(κ, τ) ∈ [0, π]`, with `κ/τ = tan φ`. The residual is the
/// spread of `φ` about its mean; unlike `κ/τ` it stays bounded where `τ`
/// changes sign. `ratio_spread` reports the spread of `κ/τ` itself relative
/// to `1 + |mean|`, infinite once `τ` nearly vanishes.
pub fn check_general_helix(lox: &Loxodrome, ts: &[f64]) -> Result<CharacterizationVerdict, CharacterizeError> {
    need_samples(ts)?;
    let kts = kappa_tau(lox, ts)?;
    let mut phi = Vec::with_capacity(kts.len());
    for (kt, &t) in kts.iter().zip(ts) {
        match kt.tau {
            Some(tau) => phi.push(kt.kappa.atan2(tau)),
            None => return Err(CharacterizeError::UndefinedTorsion { t }),
        }
    }
    let mean = phi.iter().sum::<f64>() / phi.len() as f64;
    let spread = phi.iter().map(|x| (x - mean).abs()).fold(0.0, f64::max);

    let ratio_spread = match ratios(&kts) {
        Some(r) => {
            let m = r.iter().sum::<f64>() / r.len() as f64;
            r.iter().map(|x| (x - m).abs()).fold(0.0, f64::max) / (1.0 + m.abs())
        }
        None => f64::INFINITY,
    };
    let mut details = BTreeMap::new();
    details.insert("angle".into(), mean);
    details.insert("ratio".into(), mean.tan());
    details.insert("ratio_spread".into(), ratio_spread);
    if let Some(expected) = flat_helix_ratio(lox) {
        details.insert("expected_abs_ratio".into(), expected);
    }
    Ok(CharacterizationVerdict::new(Claim::GeneralHelix, spread, HELIX_TOL, details))
}

/// `(λ, μ)` of the law `κ/τ = λ t + μ` for the catenoid loxodrome with
/// `ψ = π/4`: `(n/2, (m + c) n/√2)` on the upper height branch, negated on
/// the lower one. Reversing `ε` flips both `κ_g` and `τ` and leaves the law
/// unchanged.
pub fn catenoid_linear_law(lox: &Loxodrome) -> Option<(f64, f64)> {
    match *lox.surface().params() {
        ProfileParams::Minimal { n, m, .. } => {
            let sign = lox.surface().g_branch().sign();
            let c = lox.spec().c;
            Some((sign * n / 2.0, sign * (m + c) * n / std::f64::consts::SQRT_2))
        }
        _ => None,
    }
}

/// Least-squares line through `(t, κ/τ)`. The residual is the larger of
/// the fit's maximum deviation and the distance of the fitted constants
/// from [`catenoid_linear_law`].
pub fn check_linear_ratio(lox: &Loxodrome, ts: &[f64]) -> Result<CharacterizationVerdict, CharacterizeError> {
    let (a, _) = lox.ab();
    if (a - std::f64::consts::FRAC_1_SQRT_2).abs() > 1e-12 {
        return Err(CharacterizeError::NotApplicable(format!(
            "linear ratio law needs psi = pi/4, got {}",
            lox.spec().psi
        )));
    }
    let Some((lambda, mu)) = catenoid_linear_law(lox) else {
        return Err(CharacterizeError::NotApplicable(
            "linear ratio law needs a minimal (catenoid) profile".into(),
        ));
    };
    need_samples(ts)?;
    let r = signed_ratios(lox, ts)?;
    let (slope, intercept) = least_squares_line(ts, &r);
    let fit = ts
        .iter()
        .zip(&r)
        .map(|(t, y)| (y - (slope * t + intercept)).abs())
        .fold(0.0, f64::max);
    let constants = (slope - lambda).abs().max((intercept - mu).abs());
    let mut details = BTreeMap::new();
    details.insert("lambda".into(), slope);
    details.insert("mu".into(), intercept);
    details.insert("lambda_expected".into(), lambda);
    details.insert("mu_expected".into(), mu);
    details.insert("fit_residual".into(), fit);
    Ok(CharacterizationVerdict::new(
        Claim::LinearKappaTauRatio,
        fit.max(constants),
        LINEAR_TOL,
        details,
    ))
}

/// Ordinary least squares `y ≈ slope·x + intercept`.
pub fn least_squares_line(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

/// Asymptotic-curve verdict: normal curvature from Euler's formula and from
/// the shape operator, both required to vanish.
pub fn check_asymptotic(lox: &Loxodrome, ts: &[f64]) -> Result<CharacterizationVerdict, CharacterizeError> {
    need_samples(ts)?;
    let pairs = par::try_map(ts, |&t| -> Result<(f64, f64), LoxodromeError> {
        Ok((lox.normal_curvature(t)?, lox.normal_curvature_via_shape_operator(t)?))
    })?;
    let euler = pairs.iter().map(|p| p.0.abs()).fold(0.0, f64::max);
    let shape = pairs.iter().map(|p| p.1.abs()).fold(0.0, f64::max);
    let gap = pairs.iter().map(|p| (p.0 - p.1).abs()).fold(0.0, f64::max);
    let mut details = BTreeMap::new();
    details.insert("max_normal_curvature".into(), euler);
    details.insert("max_shape_operator_normal_curvature".into(), shape);
    details.insert("max_euler_shape_gap".into(), gap);
    Ok(CharacterizationVerdict::new(
        Claim::AsymptoticCurve,
        euler.max(shape),
        ASYMPTOTIC_TOL,
        details,
    ))
}

#[cfg(test)]
mod tests {
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, FRAC_PI_6, SQRT_2};

    use super::*;
    use crate::loxodrome::{make_loxodrome, LoxodromeSpec};
    use crate::surface::{build_profile, Branch, CrpcParams, ProfileModel};

    fn profile(p: ProfileParams) -> ProfileModel {
        build_profile(p).unwrap()
    }

    fn lox(p: ProfileParams, spec: LoxodromeSpec) -> Loxodrome {
        make_loxodrome(&profile(p), spec).unwrap()
    }

    fn cone() -> ProfileParams {
        ProfileParams::Flat { a: 0.5, b: 0.0 }
    }

    fn cylinder() -> ProfileParams {
        ProfileParams::Flat { a: 0.0, b: 1.0 }
    }

    fn sphere() -> ProfileParams {
        ProfileParams::SphericalK { k0: 1.0, a: 1.0, b: 0.0 }
    }

    fn catenoid(n: f64, m: f64) -> ProfileParams {
        ProfileParams::Minimal { n, m, r: 0.0 }
    }

    fn beltrami() -> ProfileParams {
        ProfileParams::HyperbolicK { k0: -1.0, a: 1.0, b: 1.0 }
    }

    #[test]
    fn sphere_meridian_is_geodesic() {
        let l = lox(sphere(), LoxodromeSpec::new(0.0, 1.0));
        let v = check_special_angle(&l).unwrap();
        assert_eq!(v.claim, Claim::Geodesic);
        assert!(v.holds && v.residual <= 1e-8, "{v:?}");
    }

    #[test]
    fn cylinder_parallel_is_unit_circle() {
        let l = lox(cylinder(), LoxodromeSpec::new(FRAC_PI_2, 1.0));
        let v = check_special_angle(&l).unwrap();
        assert_eq!(v.claim, Claim::Circle);
        assert!(v.holds);
        assert!((v.details["kappa"] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn special_angle_guard() {
        let l = lox(cone(), LoxodromeSpec::new(FRAC_PI_3, 1.0).with_anchor(4.0, 0.0));
        assert!(matches!(check_special_angle(&l), Err(CharacterizeError::NotApplicable(_))));
    }

    #[test]
    fn cone_loxodrome_is_general_helix() {
        let l = lox(cone(), LoxodromeSpec::new(FRAC_PI_3, 1.0).with_anchor(4.0, 0.0));
        let v = check_general_helix(&l, &default_samples(&l)).unwrap();
        assert!(v.holds, "{v:?}");
        let expected = flat_helix_ratio(&l).unwrap();
        assert!((v.details["ratio"].abs() - expected).abs() < 1e-9);
        assert!(v.details["ratio_spread"] <= 1e-12);
    }

    #[test]
    fn cylinder_helix_ratio_is_one() {
        let l = lox(cylinder(), LoxodromeSpec::new(FRAC_PI_4, 1.0));
        let v = check_general_helix(&l, &default_samples(&l)).unwrap();
        assert!(v.holds);
        assert!((v.details["ratio"].abs() - 1.0).abs() < 1e-12);
        assert!(v.details["ratio_spread"] <= 1e-12);
    }

    #[test]
    fn helix_angle_passes_through_vanishing_torsion() {
        // τ changes sign near t = −1.16 on this curve.
        let l = lox(beltrami(), LoxodromeSpec::new(FRAC_PI_6, 1.0).with_anchor(-1.0, 0.0));
        let ts = par::linspace(-1.3, -1.0, 31);
        let v = check_general_helix(&l, &ts).unwrap();
        assert!(!v.holds);
        assert!(v.residual.is_finite() && v.residual < std::f64::consts::PI);
        let coarse = check_general_helix(&l, &par::linspace(-1.3, -1.0, 16)).unwrap();
        assert!(v.residual <= 1.1 * coarse.residual);
    }

    #[test]
    fn beltrami_is_not_a_general_helix() {
        let l = lox(beltrami(), LoxodromeSpec::new(FRAC_PI_6, 1.0).with_anchor(-1.0, 0.0));
        let v = check_general_helix(&l, &default_samples(&l)).unwrap();
        assert!(!v.holds);
        assert!(v.residual > 1e-3);
    }

    #[test]
    fn too_few_samples() {
        let l = lox(cylinder(), LoxodromeSpec::new(FRAC_PI_4, 1.0));
        let err = check_general_helix(&l, &[0.0, 1.0, 2.0]).unwrap_err();
        assert!(matches!(err, CharacterizeError::TooFewSamples(3)));
    }

    #[test]
    fn meridian_ratio_is_undefined() {
        let l = lox(cone(), LoxodromeSpec::new(0.0, 1.0).with_anchor(1.0, 0.0));
        let ts: Vec<f64> = (1..=8).map(|i| i as f64).collect();
        assert!(matches!(
            check_general_helix(&l, &ts),
            Err(CharacterizeError::UndefinedTorsion { .. })
        ));
    }

    #[test]
    fn catenoid_linear_ratio() {
        for (n, m, lambda, mu) in [(1.0, 0.0, 0.5, 0.0), (2.0, 1.0, 1.0, SQRT_2)] {
            let l = lox(catenoid(n, m), LoxodromeSpec::new(FRAC_PI_4, 1.0));
            let v = check_linear_ratio(&l, &default_samples(&l)).unwrap();
            assert!(v.holds, "{v:?}");
            assert!((v.details["lambda"] - lambda).abs() < 1e-6);
            assert!((v.details["mu"] - mu).abs() < 1e-6);
        }
    }

    #[test]
    fn linear_ratio_guards() {
        let l = lox(catenoid(1.0, 0.0), LoxodromeSpec::new(FRAC_PI_6, 1.0));
        assert!(matches!(check_linear_ratio(&l, &default_samples(&l)), Err(CharacterizeError::NotApplicable(_))));
        let l = lox(cylinder(), LoxodromeSpec::new(FRAC_PI_4, 1.0));
        assert!(matches!(check_linear_ratio(&l, &default_samples(&l)), Err(CharacterizeError::NotApplicable(_))));
    }

    #[test]
    fn linear_law_with_reversed_direction() {
        let l = lox(catenoid(1.5, -0.3), LoxodromeSpec::new(FRAC_PI_4, -1.0).with_offset(0.4));
        let v = check_linear_ratio(&l, &default_samples(&l)).unwrap();
        assert!(v.holds, "{v:?}");
        assert!((v.details["lambda"] - 0.75).abs() < 1e-9);
        let lower = ProfileModel::new(catenoid(1.5, -0.3), Branch::Minus).unwrap();
        let l = make_loxodrome(&lower, LoxodromeSpec::new(FRAC_PI_4, 1.0).with_offset(0.4)).unwrap();
        let v = check_linear_ratio(&l, &default_samples(&l)).unwrap();
        assert!(v.holds, "{v:?}");
    }

    #[test]
    fn catenoid_quarter_loxodrome_is_asymptotic() {
        let l = lox(catenoid(1.0, 0.0), LoxodromeSpec::new(FRAC_PI_4, 1.0));
        let v = check_asymptotic(&l, &default_samples(&l)).unwrap();
        assert!(v.holds, "{v:?}");
    }

    #[test]
    fn crpc_asymptotic_angle() {
        let p = ProfileParams::Crpc(CrpcParams::new(-3.0, 0.5, 1.0));
        let l = lox(p.clone(), LoxodromeSpec::new(FRAC_PI_3, 1.0));
        let ts = default_samples(&l);
        let v = check_asymptotic(&l, &ts).unwrap();
        assert!(v.holds, "{v:?}");
        let off = lox(p, LoxodromeSpec::new(FRAC_PI_4, 1.0));
        assert!(!check_asymptotic(&off, &default_samples(&off)).unwrap().holds);
    }

    #[test]
    fn sphere_is_never_asymptotic() {
        for psi in [0.3, FRAC_PI_4, 1.2] {
            let l = lox(sphere(), LoxodromeSpec::new(psi, 1.0));
            let v = check_asymptotic(&l, &default_samples(&l)).unwrap();
            assert!(!v.holds);
            assert!((v.residual - 1.0).abs() < 1e-12, "{}", v.residual);
        }
    }

    #[test]
    fn least_squares_recovers_line() {
        let x = [0.0, 1.0, 2.0, 3.0];
        let y: Vec<f64> = x.iter().map(|t| 2.5 * t - 1.0).collect();
        let (m, b) = least_squares_line(&x, &y);
        assert!((m - 2.5).abs() < 1e-14 && (b + 1.0).abs() < 1e-14);
    }
}
