//! The four subcommands, independent of argument parsing.

use std::path::{Path, PathBuf};

use loxodrome_core::par::try_map;
use loxodrome_core::surface::sample_mesh;
use serde::Serialize;

use crate::config::{SceneConfig, DEFAULT_VERIFY_SAMPLES};
use crate::export::{self, POLYLINE_COLUMNS};
use crate::figures::figure;
use crate::report::{verify, VerificationReport, VerifyOptions, ORACLE_TOL};
use crate::scene::{Curve, Scene};
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Obj,
    Json,
}

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub out: Option<PathBuf>,
    pub tol: Option<f64>,
    pub samples: Option<usize>,
    pub format: Option<Format>,
}

impl RunOptions {
    fn out_dir(&self, default: &str) -> PathBuf {
        self.out.clone().unwrap_or_else(|| PathBuf::from(default))
    }

    fn verify_options(&self) -> Result<VerifyOptions, CliError> {
        let oracle_tol = self.tol.unwrap_or(ORACLE_TOL);
        if !(oracle_tol.is_finite() && oracle_tol > 0.0) {
            return Err(CliError::Invalid(format!("--tol must be positive, got {oracle_tol}")));
        }
        let samples = self.samples.unwrap_or(DEFAULT_VERIFY_SAMPLES);
        if samples < 2 {
            return Err(CliError::Invalid(format!("--samples must be >= 2, got {samples}")));
        }
        Ok(VerifyOptions { oracle_tol, samples })
    }
}

fn unsupported(command: &str, f: Format) -> CliError {
    CliError::Invalid(format!("{command} cannot write {f:?} output"))
}

fn write_surface(scene: &Scene, dir: &Path, formats: &[Format]) -> Result<Vec<PathBuf>, CliError> {
    let m = &scene.config.mesh;
    let mesh = sample_mesh(
        &scene.model,
        scene.s_range,
        (m.theta_range[0], m.theta_range[1]),
        m.ns,
        m.ntheta,
    )
    .map_err(|e| CliError::Invalid(format!("mesh: {e}")))?;
    let mut files = Vec::new();
    for f in formats {
        files.push(match f {
            Format::Obj => export::write(dir, "surface.obj", &export::obj_text(&mesh))?,
            Format::Csv => export::write(dir, "surface.csv", &export::grid_csv(&mesh))?,
            Format::Json => export::write(dir, "surface.json", &export::json_text(&mesh)?)?,
        });
    }
    Ok(files)
}

#[derive(Serialize)]
struct PolylineJson<'a> {
    name: String,
    columns: &'a [&'a str],
    rows: Vec<[f64; 9]>,
}

fn write_curves<'a>(
    curves: impl Iterator<Item = &'a Curve>,
    dir: &Path,
    format: Format,
    file_name: impl Fn(&Curve) -> String,
) -> Result<Vec<PathBuf>, CliError> {
    let curves: Vec<&Curve> = curves.collect();
    let tables = try_map(&curves, |c| export::polyline_rows(c))?;
    let mut files = Vec::new();
    for (c, rows) in curves.iter().zip(tables) {
        let stem = file_name(c);
        files.push(match format {
            Format::Csv => export::write(dir, &format!("{stem}.csv"), &export::csv_text(&POLYLINE_COLUMNS, &rows))?,
            Format::Json => {
                let body = PolylineJson {
                    name: c.name(),
                    columns: &POLYLINE_COLUMNS,
                    rows,
                };
                export::write(dir, &format!("{stem}.json"), &export::json_text(&body)?)?
            }
            Format::Obj => return Err(unsupported("loxodrome", format)),
        });
    }
    Ok(files)
}

/// Surface mesh as OBJ and CSV grid, or the single `--format` requested.
pub fn cmd_surface(config: &SceneConfig, opts: &RunOptions) -> Result<Vec<PathBuf>, CliError> {
    let scene = Scene::build(config, None)?;
    let dir = opts.out_dir(".");
    export::ensure_dir(&dir)?;
    let formats = match opts.format {
        Some(f) => vec![f],
        None => vec![Format::Obj, Format::Csv],
    };
    write_surface(&scene, &dir, &formats)
}

/// One polyline file per loxodrome, meridian and parallel.
pub fn cmd_loxodrome(config: &SceneConfig, opts: &RunOptions) -> Result<Vec<PathBuf>, CliError> {
    let format = opts.format.unwrap_or(Format::Csv);
    if format == Format::Obj {
        return Err(unsupported("loxodrome", format));
    }
    let scene = Scene::build(config, opts.samples)?;
    let dir = opts.out_dir(".");
    export::ensure_dir(&dir)?;
    write_curves(scene.curves.iter(), &dir, format, Curve::name)
}

/// Runs the suite; with `--out` the report is also written as
/// `report.json`.
pub fn cmd_verify(config: &SceneConfig, opts: &RunOptions) -> Result<VerificationReport, CliError> {
    if let Some(f) = opts.format.filter(|&f| f != Format::Json) {
        return Err(unsupported("verify", f));
    }
    let vopts = opts.verify_options()?;
    let scene = Scene::build(config, None)?;
    let report = verify(&scene, &vopts);
    if let Some(dir) = &opts.out {
        export::ensure_dir(dir)?;
        export::write(dir, "report.json", &export::json_text(&report)?)?;
    }
    Ok(report)
}

#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub figure: String,
    pub caption: String,
    pub scene: SceneConfig,
    /// Resolved parameter range of each curve.
    pub t_ranges: Vec<(String, [f64; 2])>,
    pub s_range: [f64; 2],
    pub files: Vec<String>,
    pub report_passed: bool,
}

#[derive(Debug, Clone)]
pub struct FigureBundle {
    pub dir: PathBuf,
    pub files: Vec<PathBuf>,
    pub report: VerificationReport,
}

/// Mesh, loxodrome and meridian polylines, report and manifest of one of
/// the worked examples.
pub fn cmd_figure(name: &str, opts: &RunOptions) -> Result<FigureBundle, CliError> {
    if opts.format.is_some() {
        return Err(CliError::Invalid("figure bundles have a fixed set of formats".into()));
    }
    let fig = figure(name)?;
    let vopts = opts.verify_options()?;
    let scene = Scene::build(&fig.scene, opts.samples)?;
    let dir = opts.out_dir(name);
    export::ensure_dir(&dir)?;

    let mut files = write_surface(&scene, &dir, &[Format::Obj, Format::Csv])?;
    files.extend(write_curves(scene.curves.iter(), &dir, Format::Csv, |c| {
        c.role.label().to_string()
    })?);
    let report = verify(&scene, &vopts);
    files.push(export::write(&dir, "report.json", &export::json_text(&report)?)?);

    let mut names: Vec<String> = files
        .iter()
        .filter_map(|p| p.file_name().map(|n| n.to_string_lossy().into_owned()))
        .collect();
    names.push("manifest.json".into());
    let manifest = Manifest {
        figure: fig.name,
        caption: fig.caption,
        scene: fig.scene,
        t_ranges: scene
            .curves
            .iter()
            .map(|c| (c.name(), [c.window.lo, c.window.hi]))
            .collect(),
        s_range: [scene.s_range.lo, scene.s_range.hi],
        files: names,
        report_passed: report.passed(),
    };
    files.push(export::write(&dir, "manifest.json", &export::json_text(&manifest)?)?);
    Ok(FigureBundle { dir, files, report })
}
