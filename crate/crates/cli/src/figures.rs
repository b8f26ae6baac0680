//! The four worked examples as ready-made scenes.
//!
//! Plotted parameter ranges are choices of this tool and are written to
//! each bundle's manifest.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_3, FRAC_PI_4, FRAC_PI_6, PI, TAU};

use serde::Serialize;

use crate::config::{LoxodromeConfig, MeshConfig, SceneConfig, Sign, SurfaceConfig};
use crate::CliError;

pub const FIGURES: [&str; 4] = ["fig1", "fig2", "fig3", "fig4"];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Figure {
    pub name: String,
    pub caption: String,
    pub scene: SceneConfig,
}

fn loxodrome(psi: f64, t0: f64, t_range: [f64; 2]) -> LoxodromeConfig {
    LoxodromeConfig {
        psi,
        epsilon: 1.0,
        c: 0.0,
        t0,
        theta0: 0.0,
        t_range: Some(t_range),
        samples: None,
    }
}

fn scene(name: &str, surface: SurfaceConfig, lox: LoxodromeConfig, meridian: f64) -> SceneConfig {
    SceneConfig {
        name: name.into(),
        surface,
        g_branch: Sign::Plus,
        loxodromes: vec![lox],
        meridians: vec![meridian],
        parallels: Vec::new(),
        mesh: MeshConfig::default(),
    }
}

pub fn figure(name: &str) -> Result<Figure, CliError> {
    let (caption, scene) = match name {
        // θ = 2√3 ln(t/4) needs the anchor at t = 4.
        "fig1" => (
            "circular cone A = 1/2, B = 0; loxodrome psi = pi/3 (a general helix) and the meridian theta = 0",
            scene(
                name,
                SurfaceConfig::Flat { a: 0.5, b: 0.0 },
                loxodrome(FRAC_PI_3, 4.0, [0.5, 12.0]),
                0.0,
            ),
        ),
        // One pole-to-pole arc is |t| < π/√2 ≈ 2.221.
        "fig2" => (
            "elongated sphere K0 = 1, A = sqrt(2)/2; loxodrome psi = pi/4 and the meridian theta = 2 pi",
            scene(
                name,
                SurfaceConfig::SphericalK {
                    k0: 1.0,
                    a: FRAC_1_SQRT_2,
                    b: 0.0,
                },
                loxodrome(FRAC_PI_4, 0.0, [-2.2, 2.2]),
                TAU,
            ),
        ),
        // f = e^s reaches the rim f = 1 at s = 0; sampled for f in [0.02, 0.98].
        "fig3" => {
            let a = FRAC_PI_6.cos();
            (
                "Beltrami surface K0 = -1, A = B = 1; loxodrome psi = pi/6 and the meridian theta = 3 pi/2",
                scene(
                    name,
                    SurfaceConfig::HyperbolicK { k0: -1.0, a: 1.0, b: 1.0 },
                    loxodrome(FRAC_PI_6, -1.0, [0.02f64.ln() / a, 0.98f64.ln() / a]),
                    1.5 * PI,
                ),
            )
        }
        "fig4" => (
            "catenoid n = 1; loxodrome psi = pi/4 (an asymptotic curve) and the meridian theta = pi/4",
            scene(
                name,
                SurfaceConfig::Minimal { n: 1.0, m: 0.0, r: 0.0 },
                loxodrome(FRAC_PI_4, 0.0, [-6.0, 6.0]),
                FRAC_PI_4,
            ),
        ),
        other => {
            return Err(CliError::Invalid(format!(
                "unknown figure '{other}', expected one of {}",
                FIGURES.join(", ")
            )))
        }
    };
    Ok(Figure {
        name: name.into(),
        caption: caption.into(),
        scene,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_figures_validate() {
        for name in FIGURES {
            let f = figure(name).unwrap();
            f.scene.validate().unwrap();
            f.scene.build_surface().unwrap();
        }
    }

    #[test]
    fn unknown_figure() {
        assert!(matches!(figure("fig5"), Err(CliError::Invalid(_))));
    }
}
