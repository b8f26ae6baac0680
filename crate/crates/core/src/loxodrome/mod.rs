//! Loxodromes: curves on a rotational surface meeting every meridian at a
//! fixed angle `ψ`.
//!
//! In arc length, `s(t) = a t + c` and `θ′(t) = b / f(s(t))` with
//! `a = cos ψ`, `b = ε sin ψ`, so that `α(t) = Φ(s(t), θ(t))` has unit speed.

mod curvature;
mod theta;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numerics::{integrate_cellwise, QuadratureError, QUAD_TOL};
use crate::surface::{Interval, ProfileModel, SurfaceError};
use crate::Vec3;

pub use curvature::KappaTau;
pub use theta::ClosedCase;

/// `cos ψ` or `sin ψ` below this magnitude is taken as exactly zero.
pub const ANGLE_SNAP: f64 = 1e-14;

/// Length of the `t`-cells used by numeric `θ`; each cell, and the partial
/// cell ending at `t`, gets the same fixed rule so `θ` moves smoothly with
/// `t`.
const NUMERIC_CELL: f64 = 0.25;
const NUMERIC_PANELS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LoxodromeSpec {
    /// Angle with the meridians, in `[0, π]`.
    pub psi: f64,
    /// Orientation sign, `±1`.
    pub epsilon: f64,
    /// Arc-length offset, `s(t) = t cos ψ + c`.
    pub c: f64,
    /// Parameter where `θ(t₀) = θ₀`.
    pub t0: f64,
    pub theta0: f64,
}

impl LoxodromeSpec {
    pub fn new(psi: f64, epsilon: f64) -> Self {
        Self {
            psi,
            epsilon,
            c: 0.0,
            t0: 0.0,
            theta0: 0.0,
        }
    }

    pub fn with_offset(mut self, c: f64) -> Self {
        self.c = c;
        self
    }

    pub fn with_anchor(mut self, t0: f64, theta0: f64) -> Self {
        self.t0 = t0;
        self.theta0 = theta0;
        self
    }

    /// `cos ψ`, snapped to 0 near `ψ = π/2`.
    pub fn a(&self) -> f64 {
        let a = self.psi.cos();
        if a.abs() < ANGLE_SNAP {
            0.0
        } else {
            a
        }
    }

    /// `ε sin ψ`, snapped to 0 near `ψ ∈ {0, π}`.
    pub fn b(&self) -> f64 {
        let b = self.epsilon * self.psi.sin();
        if b.abs() < ANGLE_SNAP {
            0.0
        } else {
            b
        }
    }

    pub fn s_of_t(&self, t: f64) -> f64 {
        self.a() * t + self.c
    }

    pub fn validate(&self) -> Result<(), LoxodromeError> {
        if !(0.0..=std::f64::consts::PI).contains(&self.psi) {
            return Err(LoxodromeError::InvalidSpec(format!("psi must lie in [0, pi], got {}", self.psi)));
        }
        if self.epsilon != 1.0 && self.epsilon != -1.0 {
            return Err(LoxodromeError::InvalidSpec(format!("epsilon must be +1 or -1, got {}", self.epsilon)));
        }
        if ![self.c, self.t0, self.theta0].iter().all(|v| v.is_finite()) {
            return Err(LoxodromeError::InvalidSpec("c, t0 and theta0 must be finite".into()));
        }
        Ok(())
    }
}

/// How `θ(t)` is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ThetaMode {
    /// `b = 0`: `θ ≡ θ₀`.
    Meridian,
    /// `a = 0`: `θ = θ₀ + b (t − t₀) / f(c)`.
    Parallel,
    ClosedForm(ClosedCase),
    /// Quadrature of `b / f(s(t))`.
    Numeric,
}

impl ThetaMode {
    pub fn label(&self) -> String {
        match self {
            ThetaMode::Meridian => "meridian".into(),
            ThetaMode::Parallel => "parallel".into(),
            ThetaMode::ClosedForm(c) => format!("closed:{}", c.label()),
            ThetaMode::Numeric => "numeric".into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LoxodromeOptions {
    /// Fall back to quadrature when no closed form applies.
    pub allow_numeric: bool,
    /// Use quadrature even when a closed form exists.
    pub force_numeric: bool,
    pub quad_tol: f64,
}

impl Default for LoxodromeOptions {
    fn default() -> Self {
        Self {
            allow_numeric: true,
            force_numeric: false,
            quad_tol: QUAD_TOL,
        }
    }
}

#[derive(Debug, Clone, Error)]
pub enum LoxodromeError {
    #[error("invalid loxodrome: {0}")]
    InvalidSpec(String),
    #[error("no parameter t maps into the surface domain")]
    EmptyTDomain,
    #[error("no closed form for theta applies to these parameters and numeric mode is disabled")]
    ClosedFormCaseGap,
    #[error("t = {t} is outside the loxodrome domain [{lo}, {hi}]")]
    OutOfDomain { t: f64, lo: f64, hi: f64 },
    #[error("closed form for theta is singular at t = {t}")]
    LogSingularity { t: f64 },
    #[error("1 - f'^2 vanishes at t = {t}")]
    PoleSingularity { t: f64 },
    #[error("formula does not apply to this surface: {0}")]
    KindMismatch(String),
    #[error("anchor t0 = {t0} is outside the loxodrome domain")]
    AnchorOutOfDomain { t0: f64 },
    #[error("{0}")]
    NotApplicable(String),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
}

/// Position and first three `t`-derivatives.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurveJet {
    pub p0: Vec3,
    pub p1: Vec3,
    pub p2: Vec3,
    pub p3: Vec3,
}

#[derive(Debug, Clone)]
pub struct Loxodrome {
    surface: ProfileModel,
    spec: LoxodromeSpec,
    a: f64,
    b: f64,
    mode: ThetaMode,
    t_domain: Interval,
    quad_tol: f64,
}

/// Builds a loxodrome with default options (numeric fallback allowed).
pub fn make_loxodrome(surface: &ProfileModel, spec: LoxodromeSpec) -> Result<Loxodrome, LoxodromeError> {
    Loxodrome::with_options(surface, spec, LoxodromeOptions::default())
}

impl Loxodrome {
    pub fn new(surface: &ProfileModel, spec: LoxodromeSpec) -> Result<Self, LoxodromeError> {
        make_loxodrome(surface, spec)
    }

    pub fn with_options(
        surface: &ProfileModel,
        spec: LoxodromeSpec,
        opts: LoxodromeOptions,
    ) -> Result<Self, LoxodromeError> {
        spec.validate()?;
        if !(opts.quad_tol > 0.0 && opts.quad_tol.is_finite()) {
            return Err(LoxodromeError::InvalidSpec("quadrature tolerance must be positive".into()));
        }
        let (a, b) = (spec.a(), spec.b());
        let dom = surface.domain();
        let t_domain = if a == 0.0 {
            if !dom.contains(spec.c) {
                return Err(LoxodromeError::EmptyTDomain);
            }
            Interval::full()
        } else {
            let (x, y) = ((dom.lo - spec.c) / a, (dom.hi - spec.c) / a);
            Interval::new(x.min(y), x.max(y))
        };
        if !(t_domain.lo < t_domain.hi) {
            return Err(LoxodromeError::EmptyTDomain);
        }
        let mode = if b == 0.0 {
            ThetaMode::Meridian
        } else if a == 0.0 {
            ThetaMode::Parallel
        } else {
            match theta::dispatch(surface.params()) {
                Some(case) if !opts.force_numeric => ThetaMode::ClosedForm(case),
                _ if opts.allow_numeric || opts.force_numeric => ThetaMode::Numeric,
                _ => return Err(LoxodromeError::ClosedFormCaseGap),
            }
        };
        if matches!(mode, ThetaMode::ClosedForm(_) | ThetaMode::Numeric) && !t_domain.contains(spec.t0) {
            return Err(LoxodromeError::AnchorOutOfDomain { t0: spec.t0 });
        }
        let lox = Loxodrome {
            surface: surface.clone(),
            spec,
            a,
            b,
            mode,
            t_domain,
            quad_tol: opts.quad_tol,
        };
        if let ThetaMode::ClosedForm(case) = mode {
            let f0 = lox.closed_antiderivative(case, spec.t0);
            if !f0.is_finite() {
                return Err(LoxodromeError::LogSingularity { t: spec.t0 });
            }
        }
        Ok(lox)
    }

    pub fn surface(&self) -> &ProfileModel {
        &self.surface
    }

    pub fn spec(&self) -> &LoxodromeSpec {
        &self.spec
    }

    pub fn mode(&self) -> ThetaMode {
        self.mode
    }

    /// `(cos ψ, ε sin ψ)` after snapping.
    pub fn ab(&self) -> (f64, f64) {
        (self.a, self.b)
    }

    /// Parameters whose `s(t)` lies in the surface domain; the whole line
    /// for parallels.
    pub fn t_domain(&self) -> Interval {
        self.t_domain
    }

    fn check_t(&self, t: f64) -> Result<(), LoxodromeError> {
        if self.t_domain.contains(t) {
            Ok(())
        } else {
            Err(LoxodromeError::OutOfDomain {
                t,
                lo: self.t_domain.lo,
                hi: self.t_domain.hi,
            })
        }
    }

    /// `s(t)`, kept inside the surface domain against rounding at its ends.
    pub fn s_of_t(&self, t: f64) -> Result<f64, LoxodromeError> {
        self.check_t(t)?;
        Ok(self.surface.domain().clamp(self.a * t + self.spec.c))
    }

    fn closed_antiderivative(&self, case: ClosedCase, t: f64) -> f64 {
        theta::antiderivative(case, self.surface.params(), self.a, self.b, self.spec.c, t)
    }

    fn theta_rate(&self, t: f64) -> f64 {
        let s = self.surface.domain().clamp(self.a * t + self.spec.c);
        match self.surface.slope_jet(s) {
            Ok(j) => self.b / j.f,
            Err(_) => f64::NAN,
        }
    }

    fn numeric_theta(&self, t: f64) -> Result<f64, LoxodromeError> {
        if let Some(w) = self.surface.inverse_radius_integral(self.s_of_t(t)?) {
            let w0 = self.surface.inverse_radius_integral(self.s_of_t(self.spec.t0)?).unwrap_or(Ok(0.0))?;
            return Ok(self.spec.theta0 + self.b / self.a * (w? - w0));
        }
        let rate = |x: f64| self.theta_rate(x);
        let r = integrate_cellwise(rate, self.spec.t0, t, NUMERIC_CELL, NUMERIC_PANELS, self.quad_tol)?;
        Ok(self.spec.theta0 + r.value)
    }

    /// `θ(t)` with `θ(t₀) = θ₀`.
    pub fn theta_of_t(&self, t: f64) -> Result<f64, LoxodromeError> {
        self.check_t(t)?;
        let theta0 = self.spec.theta0;
        match self.mode {
            ThetaMode::Meridian => Ok(theta0),
            ThetaMode::Parallel => {
                let f = self.surface.slope_jet(self.spec.c)?.f;
                Ok(theta0 + self.b * (t - self.spec.t0) / f)
            }
            ThetaMode::ClosedForm(case) => {
                let v = theta0 + theta::increment(case, self.surface.params(), self.a, self.b, self.spec.c, self.spec.t0, t);
                if v.is_finite() {
                    Ok(v)
                } else {
                    Err(LoxodromeError::LogSingularity { t })
                }
            }
            ThetaMode::Numeric => self.numeric_theta(t),
        }
    }

    /// `α(t) = Φ(s(t), θ(t))`.
    pub fn point(&self, t: f64) -> Result<Vec3, LoxodromeError> {
        let s = self.s_of_t(t)?;
        let theta = self.theta_of_t(t)?;
        Ok(self.surface.surface_point(s, theta)?)
    }

    /// `α` and its first three derivatives from the profile jet.
    pub fn curve_jet(&self, t: f64) -> Result<CurveJet, LoxodromeError> {
        let s = self.s_of_t(t)?;
        let theta = self.theta_of_t(t)?;
        let j = self.surface.profile_jet(s)?;
        if j.slope_gap() <= 0.0 {
            return Err(LoxodromeError::PoleSingularity { t });
        }
        let branch = self.surface.g_branch();
        let (a, b) = (self.a, self.b);
        let (g2, g3) = (j.g2(branch), j.g3(branch));
        let (sn, cs) = theta.sin_cos();

        let p0 = Vec3::new(j.f * cs, j.f * sn, j.g);
        let p1 = Vec3::new(a * j.f1 * cs - b * sn, a * j.f1 * sn + b * cs, a * j.g1);
        let radial = a * a * j.f2 - b * b / j.f;
        let turn = a * b * j.f1 / j.f;
        let p2 = Vec3::new(radial * cs - turn * sn, radial * sn + turn * cs, a * a * g2);
        let q = b / (j.f * j.f) * (b * b + a * a * j.f1 * j.f1 - 2.0 * a * a * j.f * j.f2);
        let a3 = a * a * a;
        let p3 = Vec3::new(q * sn + a3 * j.f3 * cs, -q * cs + a3 * j.f3 * sn, a3 * g3);
        Ok(CurveJet { p0, p1, p2, p3 })
    }

    /// Meridian tangent `(f′ cos θ, f′ sin θ, g′)` at `α(t)`.
    pub fn meridian_tangent(&self, t: f64) -> Result<Vec3, LoxodromeError> {
        let s = self.s_of_t(t)?;
        let theta = self.theta_of_t(t)?;
        let j = self.surface.slope_jet(s)?;
        let (sn, cs) = theta.sin_cos();
        Ok(Vec3::new(j.f1 * cs, j.f1 * sn, j.g1))
    }
}
