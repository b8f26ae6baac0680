//! Profiles of rotational surfaces with a constant ratio of principal
//! curvatures, `κ₁ = k κ₂`.
//!
//! With `κ₁ = −f″/√(1−f′²)` and `κ₂ = √(1−f′²)/f` the ratio condition reads
//! `f f″ = k (f′² − 1)`. It has the first integral `1 − f′² = d² f^{2k}`, but
//! the first-order form `f′ = ±√(1 − d² f^{2k})` loses uniqueness where
//! `f′ = 0`, so the profile is integrated as the second-order system in
//! `(f, f′)`, seeded with `f′(s₀) = ±√(1 − d² f(s₀)^{2k})`.

use serde::{Deserialize, Serialize};

use super::{admissible_jet, Branch, Interval, SurfaceError};
use crate::numerics::{solve_ivp_with, IvpOptions, OdeError};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CrpcParams {
    /// Ratio `κ₁/κ₂`.
    pub k: f64,
    /// First-integral constant, `d > 0`.
    pub d: f64,
    /// Arc length where the initial radius is prescribed.
    pub s0: f64,
    /// Radius `f(s₀)`.
    pub f0: f64,
    /// Sign of `f′(s₀)`.
    pub slope: Branch,
    /// Maximal distance integrated on each side of `s₀`.
    pub span: f64,
    /// Local tolerance of the integrator.
    pub tol: f64,
}

impl CrpcParams {
    pub fn new(k: f64, d: f64, f0: f64) -> Self {
        Self {
            k,
            d,
            s0: 0.0,
            f0,
            slope: Branch::Plus,
            span: 10.0,
            tol: 1e-12,
        }
    }

    /// `f′(s₀)` from the first integral, if `d² f₀^{2k} ≤ 1`.
    pub fn initial_slope(&self) -> Option<f64> {
        let gap = self.d * self.d * self.f0.powf(2.0 * self.k);
        (gap <= 1.0).then(|| self.slope.sign() * (1.0 - gap).sqrt())
    }
}

/// Largest step of the integrator, so that the dense output stays smooth
/// on the scale of the numerical differentiation stencils.
const MAX_STEP: f64 = 0.0025;

#[derive(Debug, Clone)]
pub(crate) struct CrpcProfile {
    // Ascending step nodes with `[f, f′, f″, f‴, h, h′, h″, w, w′, w″]`,
    // derivatives taken from the equations rather than the integrator.
    knots: Vec<f64>,
    jets: Vec<[f64; 10]>,
}

impl CrpcProfile {
    pub(crate) fn solve(p: &CrpcParams) -> Result<Self, SurfaceError> {
        let finite = [p.k, p.d, p.s0, p.f0, p.span, p.tol].iter().all(|v| v.is_finite());
        if !finite {
            return Err(SurfaceError::InvalidParams("parameters must be finite".into()));
        }
        if p.k == 0.0 {
            return Err(SurfaceError::InvalidParams("ratio k must be non-zero".into()));
        }
        if p.d <= 0.0 {
            return Err(SurfaceError::InvalidParams(format!("constant d must be positive, got {}", p.d)));
        }
        if p.f0 <= 0.0 || p.span <= 0.0 || p.tol <= 0.0 {
            return Err(SurfaceError::InvalidParams("f0, span and tol must be positive".into()));
        }
        let f1 = p.initial_slope().ok_or_else(|| {
            SurfaceError::InvalidParams(format!("d^2 f0^(2k) = {} exceeds 1", p.d * p.d * p.f0.powf(2.0 * p.k)))
        })?;
        if !admissible_jet(p.f0, f1) {
            return Err(SurfaceError::EmptyDomain);
        }
        let k = p.k;
        // State `(f, f′, h, w)` with the unsigned height `h′ = √(1 − f′²)`
        // and `w′ = 1/f`, so that heights and loxodrome angles come out of
        // the same smooth interpolant as the radius.
        let rhs = move |_s: f64, y: &[f64], dy: &mut [f64]| {
            dy[0] = y[1];
            dy[1] = k * (y[1] * y[1] - 1.0) / y[0];
            dy[2] = (1.0 - y[1] * y[1]).max(0.0).sqrt();
            dy[3] = 1.0 / y[0];
        };
        let admissible = |_s: f64, y: &[f64]| admissible_jet(y[0], y[1]);
        let opts = IvpOptions {
            tol: p.tol,
            max_step: MAX_STEP,
            ..IvpOptions::default()
        };
        let y0 = [p.f0, f1, 0.0, 0.0];
        let run = |end: f64| match solve_ivp_with(rhs, p.s0, &y0, end, &opts, admissible) {
            Ok(sol) => Ok(sol),
            Err(OdeError::DomainExit { partial, .. }) => Ok(*partial),
            Err(e) => Err(SurfaceError::Ode(e)),
        };
        let forward = run(p.s0 + p.span)?;
        let backward = run(p.s0 - p.span)?;
        let jet = |y: &[f64]| {
            let (f, f1) = (y[0], y[1]);
            let f2 = k * (f1 * f1 - 1.0) / f;
            let f3 = (2.0 * k - 1.0) * f1 * f2 / f;
            let h1 = (1.0 - f1 * f1).max(0.0).sqrt();
            [f, f1, f2, f3, y[2], h1, -f1 * f2 / h1, y[3], 1.0 / f, -f1 / (f * f)]
        };
        let mut nodes = backward.nodes();
        nodes.reverse();
        nodes.pop();
        nodes.extend(forward.nodes());
        let (knots, jets) = nodes.iter().map(|(s, y)| (*s, jet(y))).unzip();
        let profile = CrpcProfile { knots, jets };
        let span = profile.span();
        if span.lo < span.hi {
            Ok(profile)
        } else {
            Err(SurfaceError::EmptyDomain)
        }
    }

    pub(crate) fn span(&self) -> Interval {
        Interval::new(self.knots[0], self.knots[self.knots.len() - 1])
    }

    // Node interval and local coordinate of `s`.
    fn locate(&self, s: f64) -> Result<(usize, f64, f64), OdeError> {
        let span = self.span();
        if !(s >= span.lo && s <= span.hi) {
            return Err(OdeError::OutOfSpan { s, lo: span.lo, hi: span.hi });
        }
        if self.knots.len() == 1 {
            return Ok((0, 1.0, 0.0));
        }
        let i = self.knots.partition_point(|&x| x <= s).clamp(1, self.knots.len() - 1) - 1;
        let h = self.knots[i + 1] - self.knots[i];
        Ok((i, h, (s - self.knots[i]) / h))
    }

    fn interpolate(&self, s: f64, first: usize) -> Result<f64, OdeError> {
        let (i, h, u) = self.locate(s)?;
        let l = &self.jets[i][first..first + 3];
        match self.jets.get(i + 1) {
            Some(r) => Ok(hermite5(l, &r[first..first + 3], h, u)),
            None => Ok(l[0]),
        }
    }

    /// `(f, f′)` at `s`, each interpolated by the quintic Hermite polynomial
    /// matching its value and first two derivatives at the neighbouring
    /// nodes. Unlike the integrator's quartic dense output this is C² in
    /// `f′` across nodes and keeps `f‴` accurate to O(step³).
    pub(crate) fn eval(&self, s: f64) -> Result<(f64, f64), OdeError> {
        Ok((self.interpolate(s, 0)?, self.interpolate(s, 1)?))
    }

    /// `∫_{s₀}^{s} √(1 − f′²)`.
    pub(crate) fn height(&self, s: f64) -> Result<f64, OdeError> {
        self.interpolate(s, 4)
    }

    /// `∫_{s₀}^{s} dx/f(x)`.
    pub(crate) fn inverse_radius_integral(&self, s: f64) -> Result<f64, OdeError> {
        self.interpolate(s, 7)
    }
}

fn hermite5(l: &[f64], r: &[f64], h: f64, u: f64) -> f64 {
    let (u2, u3) = (u * u, u * u * u);
    let (u4, u5) = (u3 * u, u3 * u2);
    let h00 = 1.0 - 10.0 * u3 + 15.0 * u4 - 6.0 * u5;
    let h10 = u - 6.0 * u3 + 8.0 * u4 - 3.0 * u5;
    let h20 = 0.5 * (u2 - 3.0 * u3 + 3.0 * u4 - u5);
    let h01 = 10.0 * u3 - 15.0 * u4 + 6.0 * u5;
    let h11 = -4.0 * u3 + 7.0 * u4 - 3.0 * u5;
    let h21 = 0.5 * (u3 - 2.0 * u4 + u5);
    l[0] * h00 + h * l[1] * h10 + h * h * l[2] * h20 + r[0] * h01 + h * r[1] * h11 + h * h * r[2] * h21
}
