//! A configured scene with its surface and curves built and their parameter
//! windows resolved.

use loxodrome_core::characterize::sampling_window;
use loxodrome_core::loxodrome::{make_loxodrome, Loxodrome, LoxodromeError};
use loxodrome_core::par::{interior_samples, linspace};
use loxodrome_core::surface::Interval;
use loxodrome_core::{LoxodromeSpec, ProfileModel};

use crate::config::{interval, SceneConfig, DEFAULT_POLYLINE_SAMPLES};
use crate::CliError;

/// Half-width of the default mesh range when no curve fixes it.
const MESH_HALF_RANGE: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveRole {
    Loxodrome,
    Meridian,
    Parallel,
}

impl CurveRole {
    pub fn label(self) -> &'static str {
        match self {
            CurveRole::Loxodrome => "loxodrome",
            CurveRole::Meridian => "meridian",
            CurveRole::Parallel => "parallel",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Curve {
    pub role: CurveRole,
    /// Position within its role, as listed in the config.
    pub index: usize,
    pub lox: Loxodrome,
    pub window: Interval,
    pub samples: usize,
}

impl Curve {
    pub fn name(&self) -> String {
        format!("{}_{}", self.role.label(), self.index)
    }

    /// Polyline parameters, endpoints included.
    pub fn polyline_ts(&self) -> Vec<f64> {
        linspace(self.window.lo, self.window.hi, self.samples)
    }

    /// `n` parameters over the middle 80% of the window.
    pub fn check_ts(&self, n: usize) -> Vec<f64> {
        interior_samples(self.window.lo, self.window.hi, n, 0.8)
    }
}

#[derive(Debug, Clone)]
pub struct Scene {
    pub config: SceneConfig,
    pub model: ProfileModel,
    pub curves: Vec<Curve>,
    pub s_range: Interval,
}

fn lox_error(what: &str, e: LoxodromeError) -> CliError {
    CliError::Invalid(format!("{what}: {e}"))
}

impl Scene {
    /// Builds everything in `config`; `samples` overrides every polyline
    /// sample count.
    pub fn build(config: &SceneConfig, samples: Option<usize>) -> Result<Self, CliError> {
        if let Some(n) = samples {
            if n < 2 {
                return Err(CliError::Invalid(format!("--samples must be >= 2, got {n}")));
            }
        }
        let model = config.build_surface()?;
        let domain = model.domain();
        let mut curves = Vec::new();
        for (i, l) in config.loxodromes.iter().enumerate() {
            let what = format!("loxodrome {i}");
            let lox = make_loxodrome(&model, l.spec()).map_err(|e| lox_error(&what, e))?;
            let window = match l.t_range {
                Some(r) => interval(r).intersect(&lox.t_domain()),
                None => sampling_window(&lox),
            };
            if !(window.is_bounded() && window.lo < window.hi) {
                return Err(CliError::Invalid(format!("{what}: no bounded parameter range inside the t-domain")));
            }
            curves.push(Curve {
                role: CurveRole::Loxodrome,
                index: i,
                lox,
                window,
                samples: samples.or(l.samples).unwrap_or(DEFAULT_POLYLINE_SAMPLES),
            });
        }

        let s_range = match config.mesh.s_range {
            Some(r) => interval(r).intersect(&domain),
            None => {
                let covered = curves.iter().fold(None, |acc: Option<Interval>, c| {
                    let (a, b) = (c.lox.spec().s_of_t(c.window.lo), c.lox.spec().s_of_t(c.window.hi));
                    let span = Interval::new(a.min(b), a.max(b));
                    Some(match acc {
                        Some(u) => Interval::new(u.lo.min(span.lo), u.hi.max(span.hi)),
                        None => span,
                    })
                });
                match covered {
                    Some(u) if u.lo < u.hi => u,
                    _ => domain
                        .intersect(&Interval::new(-MESH_HALF_RANGE, MESH_HALF_RANGE))
                        .shrink(0.01),
                }
            }
        };
        if !(s_range.is_bounded() && s_range.lo < s_range.hi) {
            return Err(CliError::Invalid("mesh s-range is empty inside the surface domain".into()));
        }

        let n_default = samples.unwrap_or(DEFAULT_POLYLINE_SAMPLES);
        for (i, &theta) in config.meridians.iter().enumerate() {
            let what = format!("meridian {i}");
            let spec = LoxodromeSpec::new(0.0, 1.0).with_anchor(s_range.lo, theta);
            let lox = make_loxodrome(&model, spec).map_err(|e| lox_error(&what, e))?;
            curves.push(Curve {
                role: CurveRole::Meridian,
                index: i,
                lox,
                window: s_range,
                samples: n_default,
            });
        }
        for (i, &s) in config.parallels.iter().enumerate() {
            let what = format!("parallel {i}");
            if !domain.contains(s) {
                return Err(CliError::Invalid(format!("{what}: s = {s} is outside the surface domain")));
            }
            let spec = LoxodromeSpec::new(std::f64::consts::FRAC_PI_2, 1.0).with_offset(s);
            let lox = make_loxodrome(&model, spec).map_err(|e| lox_error(&what, e))?;
            let f = model.profile_jet(s).map_err(|e| CliError::Invalid(format!("{what}: {e}")))?.f;
            curves.push(Curve {
                role: CurveRole::Parallel,
                index: i,
                lox,
                window: Interval::new(0.0, std::f64::consts::TAU * f),
                samples: n_default,
            });
        }

        Ok(Scene {
            config: config.clone(),
            model,
            curves,
            s_range,
        })
    }

    pub fn loxodromes(&self) -> impl Iterator<Item = &Curve> {
        self.curves.iter().filter(|c| c.role == CurveRole::Loxodrome)
    }
}
