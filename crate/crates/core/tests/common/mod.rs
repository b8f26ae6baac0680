#![allow(dead_code)]

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_3, FRAC_PI_4, FRAC_PI_6};

use loxodrome_core::loxodrome::{make_loxodrome, Loxodrome};
use loxodrome_core::surface::{CrpcParams, Interval};
use loxodrome_core::{build_profile, LoxodromeSpec, ProfileModel, ProfileParams};
use proptest::prelude::*;

pub fn model(p: ProfileParams) -> ProfileModel {
    build_profile(p).expect("valid profile")
}

pub fn cone() -> ProfileParams {
    ProfileParams::Flat { a: 0.5, b: 0.0 }
}

pub fn cylinder() -> ProfileParams {
    ProfileParams::Flat { a: 0.0, b: 1.0 }
}

pub fn sphere() -> ProfileParams {
    ProfileParams::SphericalK { k0: 1.0, a: 1.0, b: 0.0 }
}

pub fn elongated_sphere() -> ProfileParams {
    ProfileParams::SphericalK { k0: 1.0, a: FRAC_1_SQRT_2, b: 0.0 }
}

pub fn beltrami() -> ProfileParams {
    ProfileParams::HyperbolicK { k0: -1.0, a: 1.0, b: 1.0 }
}

pub fn catenoid() -> ProfileParams {
    ProfileParams::Minimal { n: 1.0, m: 0.0, r: 0.0 }
}

/// The six reference loxodromes with the parameter window each one is
/// sampled on.
pub fn scenes() -> Vec<(&'static str, Loxodrome, Interval)> {
    let a6 = FRAC_PI_6.cos();
    let mk = |p, spec| make_loxodrome(&model(p), spec).expect("valid loxodrome");
    vec![
        (
            "cone",
            mk(cone(), LoxodromeSpec::new(FRAC_PI_3, 1.0).with_anchor(4.0, 0.0)),
            Interval::new(0.5, 12.0),
        ),
        ("cylinder", mk(cylinder(), LoxodromeSpec::new(FRAC_PI_4, 1.0)), Interval::new(-6.0, 6.0)),
        ("sphere", mk(sphere(), LoxodromeSpec::new(FRAC_PI_4, 1.0)), Interval::new(-1.8, 1.8)),
        (
            "elongated-sphere",
            mk(elongated_sphere(), LoxodromeSpec::new(FRAC_PI_4, 1.0)),
            Interval::new(-1.8, 1.8),
        ),
        (
            "beltrami",
            mk(beltrami(), LoxodromeSpec::new(FRAC_PI_6, 1.0).with_anchor(-1.0, 0.0)),
            Interval::new(0.05f64.ln() / a6, 0.9f64.ln() / a6),
        ),
        ("catenoid", mk(catenoid(), LoxodromeSpec::new(FRAC_PI_4, 1.0)), Interval::new(-6.0, 6.0)),
    ]
}

/// Random profile from one of the five analytic families.
pub fn any_profile() -> impl Strategy<Value = ProfileParams> {
    prop_oneof![
        (-0.95f64..0.95, 0.2f64..3.0).prop_map(|(a, b)| ProfileParams::Flat { a, b }),
        (0.3f64..3.0, 0.2f64..1.5, -1.0f64..1.0).prop_map(|(k0, a, b)| ProfileParams::SphericalK { k0, a, b }),
        (-3.0f64..-0.3, 0.2f64..1.5, -1.5f64..1.5).prop_map(|(k0, a, b)| ProfileParams::HyperbolicK { k0, a, b }),
        (0.5f64..3.0, -2.0f64..2.0, -1.0f64..1.0).prop_map(|(n, m, r)| ProfileParams::Minimal { n, m, r }),
        crpc_params().prop_map(ProfileParams::Crpc),
    ]
}

pub fn crpc_params() -> impl Strategy<Value = CrpcParams> {
    (prop_oneof![-4.0f64..-0.2, 0.2f64..3.0], 0.3f64..1.0, 0.5f64..1.5)
        .prop_filter("initial slope must be real", |&(k, d, f0)| d * d * f0.powf(2.0 * k) < 0.95)
        .prop_map(|(k, d, f0)| CrpcParams::new(k, d, f0))
}

/// Finite window inside the surface domain, away from its ends.
pub fn interior(m: &ProfileModel) -> Interval {
    m.domain().intersect(&Interval::new(-5.0, 5.0)).shrink(0.05)
}

pub fn at(w: Interval, u: f64) -> f64 {
    w.lo + u * (w.hi - w.lo)
}
