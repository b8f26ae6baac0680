//! Curvature, torsion and normal curvature of loxodromes in terms of the
//! profile jet at `s(t)`.
//!
//! All torsion formulas are written for the `g′ = +√(1−f′²)` branch; the
//! other branch mirrors the curve in `z` and flips the sign of `τ`.

use serde::{Deserialize, Serialize};

use super::{Loxodrome, LoxodromeError};
use crate::numerics::SLOPE_MARGIN;
use crate::surface::{ProfileJet, SurfaceError};
use crate::Vec3;

/// Below this curvature the torsion is left undefined.
pub const KAPPA_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KappaTau {
    /// Non-negative Frenet curvature.
    pub kappa: f64,
    /// `None` where `κ < 1e-12` and the Frenet frame is undefined.
    pub tau: Option<f64>,
}

impl KappaTau {
    fn from_parts(kappa: f64, tau: impl FnOnce(f64) -> f64) -> Self {
        let tau = (kappa >= KAPPA_FLOOR).then(|| tau(kappa));
        Self { kappa, tau }
    }
}

fn rel_close(x: f64, y: f64) -> bool {
    (x - y).abs() <= 1e-12 * (1.0 + x.abs().max(y.abs()))
}

impl Loxodrome {
    fn jet_at(&self, t: f64) -> Result<ProfileJet, LoxodromeError> {
        let s = self.s_of_t(t)?;
        let j = self.surface.slope_jet(s)?;
        if j.slope_gap() < SLOPE_MARGIN {
            return Err(LoxodromeError::PoleSingularity { t });
        }
        Ok(j)
    }

    fn sigma(&self) -> f64 {
        self.surface.g_branch().sign()
    }

    /// κ and τ of an arbitrary loxodrome.
    pub fn kappa_tau_general(&self, t: f64) -> Result<KappaTau, LoxodromeError> {
        let j = self.jet_at(t)?;
        let (a, b) = (self.a, self.b);
        let (a2, b2) = (a * a, b * b);
        let (f, f1, f2, f3) = (j.f, j.f1, j.f2, j.f3);
        let gap = 1.0 - f1 * f1;
        let k2 = a2 * a2 * f2 * f2 / gap + (b2 * b2 + a2 * b2 * f1 * f1) / (f * f) - 2.0 * a2 * b2 * f2 / f;
        let kappa = k2.max(0.0).sqrt();
        let sigma = self.sigma();
        Ok(KappaTau::from_parts(kappa, |kappa| {
            let inner = -b2 * gap * gap * (b2 + a2 * f1 * f1)
                + a2 * f * f2 * gap * (3.0 * b2 + (a2 - 2.0 * b2) * f1 * f1)
                + a2 * f * f * f2 * f2 * (-2.0 * a2 + b2 + 3.0 * a2 * f1 * f1)
                - a2 * a2 * f.powi(3) * f2.powi(3)
                + a2 * f * f * f1 * f3 * gap;
            -sigma * a * b / (kappa * kappa * f.powi(3) * gap.powf(1.5)) * inner
        }))
    }

    /// κ and τ on a surface of constant Gaussian curvature `k0`, using
    /// `f″ = −K₀ f`.
    pub fn kappa_tau_const_k(&self, k0: f64, t: f64) -> Result<KappaTau, LoxodromeError> {
        match self.surface.constant_gauss_curvature() {
            Some(k) if rel_close(k, k0) => {}
            other => {
                return Err(LoxodromeError::KindMismatch(format!(
                    "surface has constant curvature {other:?}, formula needs {k0}"
                )))
            }
        }
        let j = self.jet_at(t)?;
        let (a, b) = (self.a, self.b);
        let (a2, b2) = (a * a, b * b);
        let (f, f1) = (j.f, j.f1);
        let gap = 1.0 - f1 * f1;
        let k2 = 2.0 * a2 * b2 * k0 + a2 * a2 * k0 * k0 * f * f / gap + (b2 * b2 + a2 * b2 * f1 * f1) / (f * f);
        let kappa = k2.max(0.0).sqrt();
        let sigma = self.sigma();
        Ok(KappaTau::from_parts(kappa, |kappa| {
            let inner = a2 * a2 * k0.powi(3) * f.powi(6) - b2 * gap * gap * (b2 + a2 * f1 * f1)
                + a2 * k0 * k0 * f.powi(4) * (-2.0 * a2 + b2 + 3.0 * a2 * f1 * f1)
                - a2 * k0 * f * f * gap * (3.0 * b2 + (1.0 + a2 - 2.0 * b2) * f1 * f1);
            -sigma * a * b / (kappa * kappa * f.powi(3) * gap.powf(1.5)) * inner
        }))
    }

    /// κ and τ on a surface with `κ₁ = k κ₂` and `1 − f′² = d² f^{2k}`.
    pub fn kappa_tau_crpc(&self, k: f64, d: f64, t: f64) -> Result<KappaTau, LoxodromeError> {
        match self.surface.crpc_constants() {
            Some((k_s, d_s)) if rel_close(k_s, k) && rel_close(d_s, d) => {}
            other => {
                return Err(LoxodromeError::KindMismatch(format!(
                    "surface has ratio constants {other:?}, formula needs (k, d) = ({k}, {d})"
                )))
            }
        }
        let j = self.jet_at(t)?;
        let (a, b) = (self.a, self.b);
        let (a2, b2) = (a * a, b * b);
        let f = j.f;
        let fk2 = f.powf(2.0 * k);
        let d2 = d * d;
        let k2 = (b2 + d2 * a2 * (a2 * k * k + 2.0 * k * b2 - b2) * fk2) / (f * f);
        let kappa = k2.max(0.0).sqrt();
        let sigma = self.sigma();
        Ok(KappaTau::from_parts(kappa, |kappa| {
            let poly = a2 * b2 + (a2 * a2 - 2.0 * a2 * b2 - a2) * k + (2.0 * a2 - 3.0 * a2 * a2) * k * k + a2 * a2 * k.powi(3);
            sigma * a * b * d / (kappa * kappa * f.powf(3.0 - k)) * (b2 + a2 * k * k - d2 * poly * fk2)
        }))
    }

    /// κ and τ for `ψ ∈ {π/4, 3π/4}`, where `a² = b² = ½`.
    pub fn kappa_tau_quarter(&self, t: f64) -> Result<KappaTau, LoxodromeError> {
        let (a, b) = (self.a, self.b);
        if (a * a - 0.5).abs() > 1e-12 {
            return Err(LoxodromeError::NotApplicable(format!(
                "needs psi = pi/4 or 3pi/4, got {}",
                self.spec.psi
            )));
        }
        let j = self.jet_at(t)?;
        let (f, f1, f2, f3) = (j.f, j.f1, j.f2, j.f3);
        let gap = 1.0 - f1 * f1;
        let kappa = 0.5 * (f2 * f2 / gap + (1.0 + f1 * f1) / (f * f) - 2.0 * f2 / f).max(0.0).sqrt();
        let sign = self.sigma() * (a * b).signum();
        Ok(KappaTau::from_parts(kappa, |kappa| {
            let inner = gap * gap * (1.0 + f1 * f1) - f * f2 * gap * (3.0 - f1 * f1)
                + f * f * f2 * f2 * (1.0 - 3.0 * f1 * f1)
                + f.powi(3) * f2.powi(3)
                - 2.0 * f * f * f1 * f3 * gap;
            sign / (8.0 * kappa * kappa * f.powi(3) * gap.powf(1.5)) * inner
        }))
    }

    /// Normal curvature `a² κ₁ + b² κ₂` (Euler's formula).
    pub fn normal_curvature(&self, t: f64) -> Result<f64, LoxodromeError> {
        let s = self.s_of_t(t)?;
        let c = self.surface.surface_curvatures(s).map_err(|e| match e {
            SurfaceError::UmbilicPoleSingularity { .. } => LoxodromeError::PoleSingularity { t },
            e => e.into(),
        })?;
        Ok(self.a * self.a * c.kappa1 + self.b * self.b * c.kappa2)
    }

    /// Signed geodesic curvature `⟨α̈, N × α̇⟩`.
    pub fn geodesic_curvature(&self, t: f64) -> Result<f64, LoxodromeError> {
        let jet = self.curve_jet(t)?;
        let s = self.s_of_t(t)?;
        let n = self.surface.unit_normal(s, self.theta_of_t(t)?)?;
        Ok(jet.p2.dot(&n.cross(&jet.p1)))
    }

    /// Shape operator applied to the unit tangent, `S(T) = −dN(α(t))/dt`.
    pub fn shape_operator_tangent(&self, t: f64) -> Result<Vec3, LoxodromeError> {
        let j = self.jet_at(t)?;
        let theta = self.theta_of_t(t)?;
        let (sn, cs) = theta.sin_cos();
        let (a, b) = (self.a, self.b);
        let g2 = j.g2(self.surface.g_branch());
        let turn = b * j.g1 / j.f;
        Ok(Vec3::new(a * g2 * cs - turn * sn, a * g2 * sn + turn * cs, -a * j.f2))
    }

    /// `⟨S(T), T⟩`, the normal curvature computed through the shape operator.
    pub fn normal_curvature_via_shape_operator(&self, t: f64) -> Result<f64, LoxodromeError> {
        let st = self.shape_operator_tangent(t)?;
        Ok(st.dot(&self.curve_jet(t)?.p1))
    }

    /// Names of the specialized κ/τ formulas that apply to this loxodrome.
    pub fn specialized_formulas(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if self.surface.constant_gauss_curvature().is_some() {
            out.push("constant-gauss");
        }
        if self.surface.crpc_constants().is_some() {
            out.push("crpc");
        }
        if (self.a * self.a - 0.5).abs() <= 1e-12 {
            out.push("quarter-angle");
        }
        out
    }
}
