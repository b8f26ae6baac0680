//! Writers for CSV, OBJ and JSON files.
//!
//! Floats are printed as `{:.16e}` (17 significant digits, round-trip exact)
//! and JSON objects come out with sorted keys, so identical inputs give
//! byte-identical files.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use loxodrome_core::surface::SurfaceMesh;
use serde::Serialize;

use crate::scene::Curve;
use crate::CliError;

pub const POLYLINE_COLUMNS: [&str; 9] = ["t", "x", "y", "z", "s", "theta", "kappa", "tau", "kappa_n"];
pub const GRID_COLUMNS: [&str; 7] = ["i", "j", "s", "theta", "x", "y", "z"];

pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// One row per sample: `t, x, y, z, s, θ, κ, τ, κ_n`. `τ` is NaN where the
/// curvature vanishes.
pub fn polyline_rows(curve: &Curve) -> Result<Vec<[f64; 9]>, CliError> {
    let lox = &curve.lox;
    let ts = curve.polyline_ts();
    let rows = loxodrome_core::par::try_map(&ts, |&t| {
        let p = lox.point(t)?;
        let kt = lox.kappa_tau_general(t)?;
        Ok::<_, loxodrome_core::loxodrome::LoxodromeError>([
            t,
            p.x,
            p.y,
            p.z,
            lox.s_of_t(t)?,
            lox.theta_of_t(t)?,
            kt.kappa,
            kt.tau.unwrap_or(f64::NAN),
            lox.normal_curvature(t)?,
        ])
    });
    rows.map_err(|e| CliError::Invalid(format!("{}: {e}", curve.name())))
}

pub fn csv_text<const N: usize>(header: &[&str; N], rows: &[[f64; N]]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(|&v| num(v)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub fn grid_csv(mesh: &SurfaceMesh) -> String {
    let mut out = GRID_COLUMNS.join(",");
    out.push('\n');
    for (i, &s) in mesh.s_values.iter().enumerate() {
        for (j, &theta) in mesh.theta_values.iter().enumerate() {
            let p = mesh.vertex(i, j);
            let _ = writeln!(out, "{i},{j},{},{},{},{},{}", num(s), num(theta), num(p.x), num(p.y), num(p.z));
        }
    }
    out
}

/// Wavefront OBJ with `v` and `f` records only.
pub fn obj_text(mesh: &SurfaceMesh) -> String {
    let mut out = String::new();
    for v in &mesh.vertices {
        let _ = writeln!(out, "v {} {} {}", num(v.x), num(v.y), num(v.z));
    }
    for f in &mesh.faces {
        let _ = writeln!(out, "f {} {} {}", f[0] + 1, f[1] + 1, f[2] + 1);
    }
    out
}

/// Pretty JSON with sorted object keys and non-finite numbers as `null`.
pub fn json_text<T: Serialize>(value: &T) -> Result<String, CliError> {
    let v = serde_json::to_value(value).map_err(|e| CliError::Invalid(format!("serialization: {e}")))?;
    let mut s = serde_json::to_string_pretty(&v).map_err(|e| CliError::Invalid(format!("serialization: {e}")))?;
    s.push('\n');
    Ok(s)
}

pub fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))
}

pub fn write(dir: &Path, name: &str, contents: &str) -> Result<PathBuf, CliError> {
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| CliError::io(&path, e))?;
    Ok(path)
}
