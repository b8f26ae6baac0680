//! Triangle meshes of rotational surfaces.

use serde::Serialize;

use super::{Interval, ProfileModel, SurfaceError};
use crate::par::{linspace, Exec};
use crate::Vec3;

/// Vertices are stored row by row: `ns` meridian stations, each with
/// `ntheta` points around the axis.
#[derive(Debug, Clone, Serialize)]
pub struct SurfaceMesh {
    pub ns: usize,
    pub ntheta: usize,
    pub s_values: Vec<f64>,
    pub theta_values: Vec<f64>,
    pub vertices: Vec<Vec3>,
    pub normals: Vec<Vec3>,
    /// Zero-based, counter-clockwise seen from the normal side.
    pub faces: Vec<[usize; 3]>,
}

impl SurfaceMesh {
    pub fn vertex(&self, i: usize, j: usize) -> Vec3 {
        self.vertices[i * self.ntheta + j]
    }
}

/// Samples `ns × ntheta` vertices over `s_range × [theta_lo, theta_hi]`.
pub fn sample_mesh(
    model: &ProfileModel,
    s_range: Interval,
    theta_range: (f64, f64),
    ns: usize,
    ntheta: usize,
) -> Result<SurfaceMesh, SurfaceError> {
    sample_mesh_with(model, s_range, theta_range, ns, ntheta, Exec::Auto)
}

pub fn sample_mesh_with(
    model: &ProfileModel,
    s_range: Interval,
    theta_range: (f64, f64),
    ns: usize,
    ntheta: usize,
    exec: Exec,
) -> Result<SurfaceMesh, SurfaceError> {
    if ns < 2 || ntheta < 2 {
        return Err(SurfaceError::InvalidParams("a mesh needs at least 2x2 vertices".into()));
    }
    if !(s_range.is_bounded() && s_range.lo < s_range.hi) {
        return Err(SurfaceError::InvalidParams("mesh s-range must be bounded and non-empty".into()));
    }
    let s_values = linspace(s_range.lo, s_range.hi, ns);
    let theta_values = linspace(theta_range.0, theta_range.1, ntheta);
    let trig: Vec<(f64, f64)> = theta_values.iter().map(|t| t.sin_cos()).collect();

    let rows = exec.map(&s_values, |&s| -> Result<Vec<(Vec3, Vec3)>, SurfaceError> {
        let j = model.slope_jet(s)?;
        let g = model.height(s)?;
        Ok(trig
            .iter()
            .map(|&(sn, cs)| {
                (
                    Vec3::new(j.f * cs, j.f * sn, g),
                    Vec3::new(-j.g1 * cs, -j.g1 * sn, j.f1),
                )
            })
            .collect())
    });
    let mut vertices = Vec::with_capacity(ns * ntheta);
    let mut normals = Vec::with_capacity(ns * ntheta);
    for row in rows {
        for (p, n) in row? {
            vertices.push(p);
            normals.push(n);
        }
    }

    let mut faces = Vec::with_capacity(2 * (ns - 1) * (ntheta - 1));
    for i in 0..ns - 1 {
        for j in 0..ntheta - 1 {
            let a = i * ntheta + j;
            let b = a + ntheta;
            // Φ_s × Φ_θ points along N, so (s, θ) order is counter-clockwise.
            faces.push([a, b, b + 1]);
            faces.push([a, b + 1, a + 1]);
        }
    }
    Ok(SurfaceMesh {
        ns,
        ntheta,
        s_values,
        theta_values,
        vertices,
        normals,
        faces,
    })
}
