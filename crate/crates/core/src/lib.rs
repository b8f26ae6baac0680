//! Loxodromes on rotational surfaces of Euclidean 3-space.
//!
//! A rotational surface is described by an arc-length profile `(f(s), g(s))`
//! revolved about the z-axis. [`surface`] builds the profile families
//! (flat, constant Gaussian curvature, minimal, constant principal-curvature
//! ratio, or a user-supplied jet), [`loxodrome`] constructs unit-speed curves
//! that cut every meridian at a fixed angle and evaluates their curvature,
//! torsion and normal curvature in closed form, [`frenet`] recomputes the
//! Frenet apparatus of any sampled curve numerically, and [`characterize`]
//! turns the geometric claims (geodesic, circle, general helix, linear κ/τ,
//! asymptotic curve) into quantitative verdicts.

pub mod characterize;
pub mod frenet;
pub mod loxodrome;
pub mod numerics;
pub mod par;
pub mod surface;

pub type Vec3 = nalgebra::Vector3<f64>;

pub use characterize::{CharacterizationVerdict, Claim};
pub use frenet::{frenet_numeric, unit_speed_residual, FrenetApparatus};
pub use loxodrome::{CurveJet, KappaTau, Loxodrome, LoxodromeSpec, ThetaMode};
pub use surface::{build_profile, Branch, ProfileJet, ProfileKind, ProfileModel, ProfileParams, SurfaceCurvatures};
