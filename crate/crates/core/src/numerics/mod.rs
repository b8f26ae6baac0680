//! Numerical kernels shared by the geometry modules and the oracle.

pub mod diff;
pub mod ode;
pub mod quadrature;

pub use diff::{finite_diff_jet, finite_diff_jets, DiffError, Jet};
pub use ode::{solve_ivp, solve_ivp_with, DenseSolution, IvpOptions, OdeError};
pub use quadrature::{integrate_adaptive, integrate_cellwise, integrate_fixed, QuadratureError, QuadratureResult};

/// Default absolute tolerance for quadrature.
pub const QUAD_TOL: f64 = 1e-10;
/// Default local tolerance for the ODE integrator.
pub const ODE_TOL: f64 = 1e-10;
/// Smallest admissible `1 − f′²` before a point counts as a pole or rim.
pub const SLOPE_MARGIN: f64 = 1e-12;
/// Smallest admissible surface radius `f`.
pub const RADIUS_MARGIN: f64 = 1e-9;
