//! Verification suite for a scene.
//!
//! A report holds two lists. *Checks* are invariants the implementation
//! must satisfy on any valid scene (unit speed, constant meridian angle,
//! closed forms against the numerical oracle, ...); a failing check is a
//! defect and makes `verify` exit with status 1. *Verdicts* are geometric
//! claims about the particular curve (general helix, asymptotic curve, ...)
//! that may legitimately be false, like the asymptotic claim on a sphere.

use std::collections::BTreeMap;

use loxodrome_core::characterize::{
    check_asymptotic, check_general_helix, check_linear_ratio, check_special_angle, CharacterizationVerdict,
    CharacterizeError,
};
use loxodrome_core::frenet::frenet_auto;
use loxodrome_core::loxodrome::{KappaTau, Loxodrome, LoxodromeError};
use loxodrome_core::par::{self, interior_samples};
use loxodrome_core::{ProfileModel, ProfileParams, Vec3};
use serde::Serialize;

use crate::scene::{Curve, CurveRole, Scene};

pub const ORACLE_TOL: f64 = 1e-6;
pub const UNIT_SPEED_TOL: f64 = 1e-9;
pub const ANGLE_TOL: f64 = 1e-9;
pub const EULER_TOL: f64 = 1e-8;
pub const FORMULA_TOL: f64 = 1e-9;
pub const ARC_LENGTH_TOL: f64 = 1e-10;
pub const GAUSS_TOL: f64 = 1e-9;
pub const MEAN_TOL: f64 = 1e-9;
pub const CATENARY_TOL: f64 = 1e-8;
pub const PROFILE_ODE_TOL: f64 = 1e-7;
/// Stations along the profile for the surface checks.
pub const SURFACE_SAMPLES: usize = 100;
/// Step for differentiating `f′` in the profile-equation check.
const PROFILE_FD_STEP: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub id: String,
    pub holds: bool,
    pub residual: f64,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Check {
    fn from_result(id: String, residual: Result<f64, String>, tolerance: f64) -> Self {
        match residual {
            Ok(r) => Check {
                id,
                holds: r <= tolerance,
                residual: r,
                tolerance,
                note: None,
            },
            Err(note) => Check {
                id,
                holds: false,
                residual: f64::NAN,
                tolerance,
                note: Some(note),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub subject: String,
    pub claim: String,
    pub holds: bool,
    pub residual: f64,
    pub tolerance: f64,
    pub details: BTreeMap<String, f64>,
}

impl Verdict {
    fn new(subject: &str, v: CharacterizationVerdict) -> Self {
        Verdict {
            subject: subject.to_string(),
            claim: v.claim.label().to_string(),
            holds: v.holds,
            residual: v.residual,
            tolerance: v.tolerance,
            details: v.details,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub suite: String,
    pub checks: Vec<Check>,
    pub verdicts: Vec<Verdict>,
    /// Tally of `checks`; verdicts are not counted.
    pub summary: Summary,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn check(&self, id: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.id == id)
    }

    pub fn verdict(&self, subject: &str, claim: &str) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| v.subject == subject && v.claim == claim)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    /// Tolerance of the closed-form against oracle comparison.
    pub oracle_tol: f64,
    /// Parameters per curve.
    pub samples: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            oracle_tol: ORACLE_TOL,
            samples: crate::config::DEFAULT_VERIFY_SAMPLES,
        }
    }
}

// Maximum with NaN propagation, so an undefined sample fails its check.
fn worst(values: impl IntoIterator<Item = f64>) -> f64 {
    values
        .into_iter()
        .fold(0.0, |m: f64, v| if v.is_nan() || m.is_nan() { f64::NAN } else { m.max(v) })
}

fn text<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn nan_point(lox: &Loxodrome) -> impl Fn(f64) -> Vec3 + '_ {
    |t| lox.point(t).unwrap_or(Vec3::repeat(f64::NAN))
}

/// `(max |Δκ|, max |Δτ|)` between the closed forms and the numerical
/// oracle.
pub fn oracle_residuals(lox: &Loxodrome, ts: &[f64]) -> Result<(f64, f64), String> {
    let rows = par::try_map(ts, |&t| -> Result<(f64, f64), String> {
        let closed = lox.kappa_tau_general(t).map_err(text)?;
        let numeric = frenet_auto(nan_point(lox), t).map_err(text)?;
        let dt = match closed.tau {
            Some(tau) => (tau - numeric.tau).abs(),
            None => 0.0,
        };
        Ok(((closed.kappa - numeric.kappa).abs(), dt))
    })?;
    Ok((worst(rows.iter().map(|r| r.0)), worst(rows.iter().map(|r| r.1))))
}

pub fn unit_speed_residual(lox: &Loxodrome, ts: &[f64]) -> Result<f64, LoxodromeError> {
    let v = par::try_map(ts, |&t| Ok::<_, LoxodromeError>((lox.curve_jet(t)?.p1.norm() - 1.0).abs()))?;
    Ok(worst(v))
}

pub fn meridian_angle_residual(lox: &Loxodrome, ts: &[f64]) -> Result<f64, LoxodromeError> {
    let a = lox.ab().0;
    let v = par::try_map(ts, |&t| {
        let p1 = lox.curve_jet(t)?.p1;
        Ok::<_, LoxodromeError>((p1.dot(&lox.meridian_tangent(t)?) - a).abs())
    })?;
    Ok(worst(v))
}

pub fn euler_residual(lox: &Loxodrome, ts: &[f64]) -> Result<f64, LoxodromeError> {
    let v = par::try_map(ts, |&t| {
        Ok::<_, LoxodromeError>((lox.normal_curvature(t)? - lox.normal_curvature_via_shape_operator(t)?).abs())
    })?;
    Ok(worst(v))
}

/// Largest `|Δκ|`, `|Δτ|` between a specialized formula and the general
/// one.
pub fn formula_residual(lox: &Loxodrome, formula: &str, ts: &[f64]) -> Result<f64, LoxodromeError> {
    let eval = |t: f64| -> Result<KappaTau, LoxodromeError> {
        match (formula, lox.surface().params()) {
            ("constant-gauss", _) => {
                let k0 = lox.surface().constant_gauss_curvature().unwrap_or(f64::NAN);
                lox.kappa_tau_const_k(k0, t)
            }
            ("crpc", _) => match lox.surface().crpc_constants() {
                Some((k, d)) => lox.kappa_tau_crpc(k, d, t),
                None => Err(LoxodromeError::NotApplicable("surface has no ratio constants".into())),
            },
            ("quarter-angle", _) => lox.kappa_tau_quarter(t),
            _ => Err(LoxodromeError::NotApplicable(format!("unknown formula {formula}"))),
        }
    };
    let v = par::try_map(ts, |&t| {
        let g = lox.kappa_tau_general(t)?;
        let s = eval(t)?;
        let dtau = match (g.tau, s.tau) {
            (Some(a), Some(b)) => (a - b).abs(),
            (None, None) => 0.0,
            _ => f64::NAN,
        };
        Ok::<_, LoxodromeError>((g.kappa - s.kappa).abs().max(dtau))
    })?;
    Ok(worst(v))
}

pub fn arc_length_residual(model: &ProfileModel, ss: &[f64]) -> Result<f64, String> {
    let v = par::try_map(ss, |&s| model.profile_jet(s).map(|j| j.arc_length_defect().abs()).map_err(text))?;
    Ok(worst(v))
}

pub fn gauss_residual(model: &ProfileModel, k0: f64, ss: &[f64]) -> Result<f64, String> {
    let v = par::try_map(ss, |&s| model.surface_curvatures(s).map(|c| (c.gauss_k - k0).abs()).map_err(text))?;
    Ok(worst(v))
}

pub fn mean_residual(model: &ProfileModel, ss: &[f64]) -> Result<f64, String> {
    let v = par::try_map(ss, |&s| model.surface_curvatures(s).map(|c| c.mean_h.abs()).map_err(text))?;
    Ok(worst(v))
}

/// `|f − cosh(n(g − r))/n|` on a minimal profile.
pub fn catenary_residual(model: &ProfileModel, n: f64, r: f64, ss: &[f64]) -> Result<f64, String> {
    let v = par::try_map(ss, |&s| {
        model
            .profile_jet(s)
            .map(|j| (j.f - (n * (j.g - r)).cosh() / n).abs())
            .map_err(text)
    })?;
    Ok(worst(v))
}

/// `|f f″ − k (f′² − 1)|` with `f″` from the five-point O(h⁴) difference
/// of `f′`.
pub fn profile_ode_residual(model: &ProfileModel, k: f64, ss: &[f64]) -> Result<f64, String> {
    let h = PROFILE_FD_STEP;
    let v = par::try_map(ss, |&s| {
        let j = model.profile_jet(s).map_err(text)?;
        let slope = |x: f64| model.profile_jet(x).map(|j| j.f1).map_err(text);
        let f2 = (8.0 * (slope(s + h)? - slope(s - h)?) - (slope(s + 2.0 * h)? - slope(s - 2.0 * h)?)) / (12.0 * h);
        Ok::<_, String>((j.f * f2 - k * (j.f1 * j.f1 - 1.0)).abs())
    })?;
    Ok(worst(v))
}

fn surface_checks(scene: &Scene, checks: &mut Vec<Check>) {
    let model = &scene.model;
    let r = scene.s_range;
    let ss = interior_samples(r.lo, r.hi, SURFACE_SAMPLES, 0.98);
    checks.push(Check::from_result(
        "surface.arc_length".into(),
        arc_length_residual(model, &ss),
        ARC_LENGTH_TOL,
    ));
    if let Some(k0) = model.constant_gauss_curvature() {
        checks.push(Check::from_result(
            "surface.gauss_curvature".into(),
            gauss_residual(model, k0, &ss),
            GAUSS_TOL,
        ));
    }
    match model.params() {
        ProfileParams::Minimal { n, r, .. } => {
            checks.push(Check::from_result(
                "surface.mean_curvature".into(),
                mean_residual(model, &ss),
                MEAN_TOL,
            ));
            checks.push(Check::from_result(
                "surface.catenary".into(),
                catenary_residual(model, *n, *r, &ss),
                CATENARY_TOL,
            ));
        }
        ProfileParams::Crpc(p) => {
            // Keep the difference stencil inside the domain.
            let inner = scene.s_range.shrink(0.01);
            let ss = interior_samples(inner.lo, inner.hi, SURFACE_SAMPLES, 0.98);
            checks.push(Check::from_result(
                "surface.profile_equation".into(),
                profile_ode_residual(model, p.k, &ss),
                PROFILE_ODE_TOL,
            ));
        }
        _ => {}
    }
}

fn loxodrome_checks(curve: &Curve, opts: &VerifyOptions, checks: &mut Vec<Check>) {
    let lox = &curve.lox;
    let ts = curve.check_ts(opts.samples);
    let id = |what: &str| format!("{}.{what}", curve.name());
    let (dk, dt) = match oracle_residuals(lox, &ts) {
        Ok((dk, dt)) => (Ok(dk), Ok(dt)),
        Err(e) => (Err(e.clone()), Err(e)),
    };
    checks.push(Check::from_result(id("oracle_kappa"), dk, opts.oracle_tol));
    checks.push(Check::from_result(id("oracle_tau"), dt, opts.oracle_tol));
    checks.push(Check::from_result(
        id("unit_speed"),
        unit_speed_residual(lox, &ts).map_err(text),
        UNIT_SPEED_TOL,
    ));
    checks.push(Check::from_result(
        id("meridian_angle"),
        meridian_angle_residual(lox, &ts).map_err(text),
        ANGLE_TOL,
    ));
    checks.push(Check::from_result(
        id("euler_formula"),
        euler_residual(lox, &ts).map_err(text),
        EULER_TOL,
    ));
    for formula in lox.specialized_formulas() {
        checks.push(Check::from_result(
            id(&format!("formula.{formula}")),
            formula_residual(lox, formula, &ts).map_err(text),
            FORMULA_TOL,
        ));
    }
}

fn push_verdict(subject: &str, r: Result<CharacterizationVerdict, CharacterizeError>, out: &mut Vec<Verdict>) {
    if let Ok(v) = r {
        out.push(Verdict::new(subject, v));
    }
}

fn curve_verdicts(curve: &Curve, opts: &VerifyOptions, out: &mut Vec<Verdict>) {
    let lox = &curve.lox;
    let name = curve.name();
    match curve.role {
        CurveRole::Meridian | CurveRole::Parallel => push_verdict(&name, check_special_angle(lox), out),
        CurveRole::Loxodrome => {
            let ts = curve.check_ts(opts.samples);
            push_verdict(&name, check_special_angle(lox), out);
            push_verdict(&name, check_general_helix(lox, &ts), out);
            push_verdict(&name, check_linear_ratio(lox, &ts), out);
            push_verdict(&name, check_asymptotic(lox, &ts), out);
        }
    }
}

/// Runs every applicable check and verdict on `scene`.
pub fn verify(scene: &Scene, opts: &VerifyOptions) -> VerificationReport {
    let mut checks = Vec::new();
    surface_checks(scene, &mut checks);
    for c in scene.loxodromes() {
        loxodrome_checks(c, opts, &mut checks);
    }
    let mut verdicts = Vec::new();
    for c in &scene.curves {
        curve_verdicts(c, opts, &mut verdicts);
    }
    let passed = checks.iter().filter(|c| c.holds).count();
    VerificationReport {
        suite: scene.config.name.clone(),
        summary: Summary {
            total: checks.len(),
            passed,
            failed: checks.len() - passed,
        },
        checks,
        verdicts,
    }
}
