//! Frenet apparatus of an arbitrary space curve from finite differences.
//!
//! Nothing here knows about surfaces: the curve is sampled as a black box,
//! differentiated by central differences with three Richardson levels, and run
//! through `κ = ‖α̇×α̈‖/‖α̇‖³`, `τ = det(α̇, α̈, α⃛)/‖α̇×α̈‖²`.

use serde::Serialize;
use thiserror::Error;

use crate::numerics::{finite_diff_jets, DiffError, Jet};
use crate::Vec3;

/// Below this speed the tangent is undefined.
pub const SPEED_FLOOR: f64 = 1e-10;
/// Below this `‖α̇×α̈‖` the normal, binormal and torsion are undefined.
pub const CROSS_FLOOR: f64 = 1e-10;
/// Base step for curves whose derivatives are of order one.
pub const BASE_STEP: f64 = 5e-4;
/// Step doublings in the Richardson tableau.
const LEVELS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FrenetApparatus {
    pub tangent: Vec3,
    pub normal: Vec3,
    pub binormal: Vec3,
    pub kappa: f64,
    /// Zero when `valid_tau` is false.
    pub tau: f64,
    pub valid_tau: bool,
    /// Step actually used.
    pub step: f64,
}

#[derive(Debug, Clone, Copy, Error, PartialEq)]
pub enum FrenetError {
    #[error("velocity {speed:e} too small at t = {t}")]
    DegenerateVelocity { t: f64, speed: f64 },
    #[error(transparent)]
    Diff(#[from] DiffError),
}

/// Default step `5e-4 · max(1, |t|)^{1/11}`.
///
/// Truncation of the extrapolated third derivative is O(h⁸) while rounding
/// noise in the samples grows like `ε·|t|/h³`, which puts the balance point
/// at `h ∝ |t|^{1/11}`.
pub fn default_step(t: f64) -> f64 {
    BASE_STEP * t.abs().max(1.0).powf(1.0 / 11.0)
}

fn derivatives<C: Fn(f64) -> Vec3>(curve: &C, t: f64, h: f64) -> Result<[Vec3; 3], DiffError> {
    let sample = |x: f64| {
        let p = curve(x);
        [p.x, p.y, p.z]
    };
    let mut table: Vec<[Jet; 3]> = Vec::with_capacity(LEVELS);
    for level in 0..LEVELS {
        table.push(finite_diff_jets(sample, t, h * (1 << level) as f64)?);
    }
    let mut factor = 4.0;
    while table.len() > 1 {
        table = table
            .windows(2)
            .map(|w| std::array::from_fn(|i| Jet::extrapolate(&w[0][i], &w[1][i], factor)))
            .collect();
        factor *= 4.0;
    }
    let r = table.pop().unwrap_or_default();
    Ok([
        Vec3::new(r[0].d1, r[1].d1, r[2].d1),
        Vec3::new(r[0].d2, r[1].d2, r[2].d2),
        Vec3::new(r[0].d3, r[1].d3, r[2].d3),
    ])
}

fn orthonormal_to(t: Vec3) -> Vec3 {
    let pick = if t.x.abs() < 0.9 { Vec3::x() } else { Vec3::y() };
    (pick - t * t.dot(&pick)).normalize()
}

/// Frenet apparatus at `t` with base step `h`.
///
/// The curve must be finite on `[t − 240h, t + 240h]`; non-finite samples are
/// reported as [`DiffError::NonFiniteSample`].
pub fn frenet_numeric<C>(curve: C, t: f64, h: f64) -> Result<FrenetApparatus, FrenetError>
where
    C: Fn(f64) -> Vec3,
{
    let [v1, v2, v3] = derivatives(&curve, t, h)?;
    let speed = v1.norm();
    if !(speed >= SPEED_FLOOR) {
        return Err(FrenetError::DegenerateVelocity { t, speed });
    }
    let tangent = v1 / speed;
    let cross = v1.cross(&v2);
    let cn = cross.norm();
    let kappa = cn / speed.powi(3);
    let valid_tau = cn >= CROSS_FLOOR;
    let (binormal, tau) = if valid_tau {
        (cross / cn, cross.dot(&v3) / (cn * cn))
    } else {
        (tangent.cross(&orthonormal_to(tangent)), 0.0)
    };
    Ok(FrenetApparatus {
        tangent,
        normal: binormal.cross(&tangent),
        binormal,
        kappa,
        tau,
        valid_tau,
        step: h,
    })
}

// Local rate of change per unit t. For a curve winding with angular rate ω
// the k-th derivative grows like ω^k, so the ratio of consecutive
// derivatives estimates ω and the step must shrink like 1/ω.
fn local_rate(v: &[Vec3; 3]) -> f64 {
    let speed = v[0].norm().max(SPEED_FLOOR);
    let acc = v[1].norm();
    let r2 = acc / speed;
    let r3 = v[2].norm() / acc.max(speed);
    speed.max(r2).max(r3)
}

// Balances the O(h⁸) truncation of the third derivative, about
// `h⁸ ω¹⁰ ‖α̇‖` for rate ω, against rounding noise `ε m / h³` where `m` is the
// magnitude of the sampled coordinates and of the parameter. On a unit
// circle about the origin this is `BASE_STEP`.
fn balanced_step(curve_at_t: Vec3, t: f64, v: &[Vec3; 3]) -> f64 {
    let speed = v[0].norm().max(SPEED_FLOOR);
    let magnitude = curve_at_t.norm().max(t.abs() * speed).max(SPEED_FLOOR);
    BASE_STEP * (magnitude / speed).powf(1.0 / 11.0) / local_rate(v).powf(10.0 / 11.0)
}

/// Step adapted to the curve's local scale, refined until it settles: the
/// step balancing truncation against rounding for the magnitude and turning
/// rate measured at the previous step. Near the edge of the curve's domain
/// the step is halved until the whole stencil sees finite samples.
pub fn auto_step<C>(curve: C, t: f64) -> Result<f64, FrenetError>
where
    C: Fn(f64) -> Vec3,
{
    let here = curve(t);
    let mut ceiling = f64::INFINITY;
    let mut h = default_step(t);
    for _ in 0..64 {
        let v = match derivatives(&curve, t, h) {
            Ok(v) => v,
            Err(DiffError::NonFiniteSample { .. }) => {
                ceiling = 0.5 * h;
                h = ceiling;
                continue;
            }
            Err(e) => return Err(e.into()),
        };
        let next = balanced_step(here, t, &v).min(ceiling);
        if (next - h).abs() <= 0.25 * h {
            return Ok(next.min(h));
        }
        h = next;
    }
    Ok(h)
}

/// [`frenet_numeric`] with [`auto_step`].
pub fn frenet_auto<C>(curve: C, t: f64) -> Result<FrenetApparatus, FrenetError>
where
    C: Fn(f64) -> Vec3,
{
    let h = auto_step(&curve, t)?;
    frenet_numeric(curve, t, h)
}

/// `max |‖α̇(t)‖ − 1|` over the samples, with numerically differentiated
/// velocity.
pub fn unit_speed_residual<C>(curve: C, samples: &[f64]) -> Result<f64, FrenetError>
where
    C: Fn(f64) -> Vec3,
{
    let mut worst: f64 = 0.0;
    for &t in samples {
        let h = auto_step(&curve, t)?;
        let [v1, _, _] = derivatives(&curve, t, h)?;
        let speed = v1.norm();
        if !(speed >= SPEED_FLOOR) {
            return Err(FrenetError::DegenerateVelocity { t, speed });
        }
        worst = worst.max((speed - 1.0).abs());
    }
    Ok(worst)
}
