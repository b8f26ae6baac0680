//! Scene description read from a JSON document.
//!
//! ```json
//! {
//!   "name": "cone",
//!   "surface": { "kind": "flat", "a": 0.5, "b": 0.0 },
//!   "loxodromes": [ { "psi": 1.0471975511965976, "t0": 4.0, "t_range": [0.5, 12.0] } ],
//!   "meridians": [0.0],
//!   "mesh": { "ns": 60, "ntheta": 72 }
//! }
//! ```
//!
//! Every field except `surface` has a default. Unknown fields are rejected.

use std::path::Path;

use loxodrome_core::surface::{CrpcParams, Interval};
use loxodrome_core::{Branch, LoxodromeSpec, ProfileModel, ProfileParams};
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const DEFAULT_POLYLINE_SAMPLES: usize = 400;
pub const DEFAULT_VERIFY_SAMPLES: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    #[default]
    Plus,
    Minus,
}

impl From<Sign> for Branch {
    fn from(s: Sign) -> Branch {
        match s {
            Sign::Plus => Branch::Plus,
            Sign::Minus => Branch::Minus,
        }
    }
}

fn one() -> f64 {
    1.0
}

fn crpc_span() -> f64 {
    10.0
}

fn crpc_tol() -> f64 {
    1e-12
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SurfaceConfig {
    Flat {
        a: f64,
        b: f64,
    },
    SphericalK {
        k0: f64,
        a: f64,
        b: f64,
    },
    HyperbolicK {
        k0: f64,
        a: f64,
        b: f64,
    },
    Minimal {
        n: f64,
        #[serde(default)]
        m: f64,
        #[serde(default)]
        r: f64,
    },
    Crpc {
        k: f64,
        d: f64,
        f0: f64,
        #[serde(default)]
        s0: f64,
        #[serde(default)]
        slope: Sign,
        #[serde(default = "crpc_span")]
        span: f64,
        #[serde(default = "crpc_tol")]
        tol: f64,
    },
}

impl SurfaceConfig {
    pub fn params(&self) -> ProfileParams {
        match *self {
            SurfaceConfig::Flat { a, b } => ProfileParams::Flat { a, b },
            SurfaceConfig::SphericalK { k0, a, b } => ProfileParams::SphericalK { k0, a, b },
            SurfaceConfig::HyperbolicK { k0, a, b } => ProfileParams::HyperbolicK { k0, a, b },
            SurfaceConfig::Minimal { n, m, r } => ProfileParams::Minimal { n, m, r },
            SurfaceConfig::Crpc {
                k,
                d,
                f0,
                s0,
                slope,
                span,
                tol,
            } => ProfileParams::Crpc(CrpcParams {
                k,
                d,
                s0,
                f0,
                slope: slope.into(),
                span,
                tol,
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LoxodromeConfig {
    pub psi: f64,
    #[serde(default = "one")]
    pub epsilon: f64,
    #[serde(default)]
    pub c: f64,
    #[serde(default)]
    pub t0: f64,
    #[serde(default)]
    pub theta0: f64,
    /// Sampled parameter range; defaults to the characterization window.
    #[serde(default)]
    pub t_range: Option<[f64; 2]>,
    #[serde(default)]
    pub samples: Option<usize>,
}

impl LoxodromeConfig {
    pub fn spec(&self) -> LoxodromeSpec {
        LoxodromeSpec::new(self.psi, self.epsilon)
            .with_offset(self.c)
            .with_anchor(self.t0, self.theta0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeshConfig {
    #[serde(default = "MeshConfig::default_ns")]
    pub ns: usize,
    #[serde(default = "MeshConfig::default_ntheta")]
    pub ntheta: usize,
    #[serde(default)]
    pub s_range: Option<[f64; 2]>,
    #[serde(default = "MeshConfig::default_theta_range")]
    pub theta_range: [f64; 2],
}

impl MeshConfig {
    fn default_ns() -> usize {
        60
    }

    fn default_ntheta() -> usize {
        72
    }

    fn default_theta_range() -> [f64; 2] {
        [0.0, std::f64::consts::TAU]
    }
}

impl Default for MeshConfig {
    fn default() -> Self {
        Self {
            ns: Self::default_ns(),
            ntheta: Self::default_ntheta(),
            s_range: None,
            theta_range: Self::default_theta_range(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneConfig {
    #[serde(default = "SceneConfig::default_name")]
    pub name: String,
    pub surface: SurfaceConfig,
    #[serde(default)]
    pub g_branch: Sign,
    #[serde(default)]
    pub loxodromes: Vec<LoxodromeConfig>,
    /// Meridian angles θ.
    #[serde(default)]
    pub meridians: Vec<f64>,
    /// Arc lengths s of parallels.
    #[serde(default)]
    pub parallels: Vec<f64>,
    #[serde(default)]
    pub mesh: MeshConfig,
}

impl SceneConfig {
    fn default_name() -> String {
        "scene".into()
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let cfg: SceneConfig = serde_json::from_str(text).map_err(|e| CliError::Invalid(format!("config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Checks sampling counts and ranges; surface parameters are checked
    /// when the profile is built.
    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |m: String| Err(CliError::Invalid(m));
        if self.mesh.ns < 2 || self.mesh.ntheta < 2 {
            return bad(format!("mesh needs ns, ntheta >= 2, got {} x {}", self.mesh.ns, self.mesh.ntheta));
        }
        if let Some([lo, hi]) = self.mesh.s_range {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return bad(format!("mesh s_range [{lo}, {hi}] is not a finite interval"));
            }
        }
        for (i, l) in self.loxodromes.iter().enumerate() {
            if let Some(n) = l.samples {
                if n < 2 {
                    return bad(format!("loxodrome {i}: samples must be >= 2, got {n}"));
                }
            }
            if let Some([lo, hi]) = l.t_range {
                if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                    return bad(format!("loxodrome {i}: t_range [{lo}, {hi}] is not a finite interval"));
                }
            }
            l.spec().validate().map_err(|e| CliError::Invalid(format!("loxodrome {i}: {e}")))?;
        }
        if self.meridians.iter().chain(&self.parallels).any(|v| !v.is_finite()) {
            return bad("meridian and parallel constants must be finite".into());
        }
        Ok(())
    }

    pub fn build_surface(&self) -> Result<ProfileModel, CliError> {
        ProfileModel::new(self.surface.params(), self.g_branch.into())
            .map_err(|e| CliError::Invalid(format!("surface: {e}")))
    }
}

/// `[lo, hi]` as an interval.
pub fn interval(r: [f64; 2]) -> Interval {
    Interval::new(r[0], r[1])
}
