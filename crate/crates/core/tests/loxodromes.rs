mod common;

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, FRAC_PI_6, PI};

use common::*;
use loxodrome_core::characterize::{
    check_asymptotic, check_general_helix, check_linear_ratio, default_samples, flat_helix_ratio, sampling_window,
};
use loxodrome_core::frenet::{frenet_auto, unit_speed_residual};
use loxodrome_core::loxodrome::{make_loxodrome, Loxodrome, LoxodromeOptions};
use loxodrome_core::numerics::{finite_diff_jet, Jet};
use loxodrome_core::par::{interior_samples, linspace};
use loxodrome_core::surface::CrpcParams;
use loxodrome_core::{build_profile, LoxodromeSpec, ProfileParams, ThetaMode, Vec3};
use proptest::prelude::*;

fn curve(lox: &Loxodrome) -> impl Fn(f64) -> Vec3 + '_ {
    |t| lox.point(t).unwrap_or_else(|_| Vec3::repeat(f64::NAN))
}

/// Random loxodrome with `s(0)` inside the surface and sample parameters
/// well inside its domain.
fn any_loxodrome() -> impl Strategy<Value = (Loxodrome, Vec<f64>)> {
    (
        any_profile(),
        0.05f64..(PI - 0.05),
        prop_oneof![Just(1.0), Just(-1.0)],
        0.2f64..0.8,
        prop::collection::vec(0.0f64..1.0, 6),
    )
        .prop_filter_map("profile or loxodrome rejected", |(p, psi, eps, u, us)| {
            let m = build_profile(p).ok()?;
            let c = at(interior(&m), u);
            let lox = make_loxodrome(&m, LoxodromeSpec::new(psi, eps).with_offset(c)).ok()?;
            let s_win = interior(&m).shrink(0.05);
            let (a, _) = lox.ab();
            let (t1, t2) = ((s_win.lo - c) / a, (s_win.hi - c) / a);
            let w = sampling_window(&lox).intersect(&loxodrome_core::surface::Interval::new(t1.min(t2), t1.max(t2)));
            if w.is_empty() || w.length() < 1e-3 {
                return None;
            }
            Some((lox, us.iter().map(|&u| at(w, u)).collect()))
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn unit_speed_and_constant_angle((lox, ts) in any_loxodrome()) {
        let cos_psi = lox.spec().psi.cos();
        for t in ts {
            let jet = lox.curve_jet(t).unwrap();
            prop_assert!((jet.p1.norm() - 1.0).abs() <= 1e-9);
            let along = jet.p1.dot(&lox.meridian_tangent(t).unwrap());
            prop_assert!((along - cos_psi).abs() <= 1e-9);
        }
    }

    #[test]
    fn points_lie_on_the_surface((lox, ts) in any_loxodrome()) {
        for t in ts {
            let s = lox.s_of_t(t).unwrap();
            let theta = lox.theta_of_t(t).unwrap();
            prop_assert_eq!(lox.point(t).unwrap(), lox.surface().surface_point(s, theta).unwrap());
        }
    }

    #[test]
    fn theta_derivative_law((lox, ts) in any_loxodrome()) {
        let (_, b) = lox.ab();
        for t in ts {
            let theta = |x| lox.theta_of_t(x).unwrap_or(f64::NAN);
            let (Ok(fine), Ok(coarse)) = (finite_diff_jet(theta, t, 1e-5), finite_diff_jet(theta, t, 2e-5)) else {
                continue;
            };
            let d = Jet::richardson(&fine, &coarse);
            let f = lox.surface().profile_jet(lox.s_of_t(t).unwrap()).unwrap().f;
            prop_assert!((d.d1 - b / f).abs() <= 1e-7 * (1.0 + (b / f).abs()), "{} vs {}", d.d1, b / f);
        }
    }

    #[test]
    fn specialized_formulas_agree((lox, ts) in any_loxodrome()) {
        for t in ts {
            let g = lox.kappa_tau_general(t).unwrap();
            let mut others = Vec::new();
            if let Some(k0) = lox.surface().constant_gauss_curvature() {
                others.push(lox.kappa_tau_const_k(k0, t).unwrap());
            }
            if let Some((k, d)) = lox.surface().crpc_constants() {
                others.push(lox.kappa_tau_crpc(k, d, t).unwrap());
            }
            let scale = 1.0 + g.kappa + g.tau.unwrap_or(0.0).abs();
            for o in others {
                prop_assert!((o.kappa - g.kappa).abs() <= 1e-9 * scale);
                if let (Some(x), Some(y)) = (o.tau, g.tau) {
                    prop_assert!((x - y).abs() <= 1e-9 * scale, "{x} vs {y}");
                }
            }
        }
    }

    #[test]
    fn quarter_angle_formulas_agree(p in any_profile(), u in 0.2f64..0.8, eps in prop_oneof![Just(1.0), Just(-1.0)], v in 0.0f64..1.0) {
        let Ok(m) = build_profile(p) else { return Ok(()) };
        let c = at(interior(&m), u);
        let lox = make_loxodrome(&m, LoxodromeSpec::new(FRAC_PI_4, eps).with_offset(c)).unwrap();
        let t = at(interior(&m).shrink(0.1), v) - c;
        let t = t * std::f64::consts::SQRT_2;
        let (Ok(q), Ok(g)) = (lox.kappa_tau_quarter(t), lox.kappa_tau_general(t)) else { return Ok(()) };
        let scale = 1.0 + g.kappa + g.tau.unwrap_or(0.0).abs();
        prop_assert!((q.kappa - g.kappa).abs() <= 1e-9 * scale);
        if let (Some(x), Some(y)) = (q.tau, g.tau) {
            prop_assert!((x - y).abs() <= 1e-9 * scale);
        }
    }

    #[test]
    fn closed_form_matches_oracle((lox, ts) in any_loxodrome()) {
        for t in ts {
            let g = lox.kappa_tau_general(t).unwrap();
            let Some(tau) = g.tau else { continue };
            let Ok(f) = frenet_auto(curve(&lox), t) else { continue };
            let scale = 1.0f64.max(g.kappa).max(tau.abs());
            prop_assert!((f.kappa - g.kappa).abs() <= 1e-6 * scale, "kappa {} vs {}", f.kappa, g.kappa);
            // Torsion from differences loses accuracy like 1/κ² near
            // inflections.
            let conditioning = (0.1 / g.kappa).powi(2).max(1.0);
            prop_assert!((f.tau - tau).abs() <= 1e-6 * scale * conditioning, "tau {} vs {} at kappa {} t {} h {} {:?} {:?}", f.tau, tau, g.kappa, t, f.step, lox.surface().params(), lox.spec());
        }
    }

    #[test]
    fn euler_formula_matches_shape_operator((lox, ts) in any_loxodrome()) {
        for t in ts {
            let kn = lox.normal_curvature(t).unwrap();
            let so = lox.normal_curvature_via_shape_operator(t).unwrap();
            prop_assert!((kn - so).abs() <= 1e-8 * (1.0 + kn.abs()));
        }
    }

    #[test]
    fn flat_loxodromes_are_general_helices(
        a in -0.95f64..0.95,
        b in 0.3f64..3.0,
        psi in prop_oneof![0.1f64..1.45, 1.7f64..3.0],
        eps in prop_oneof![Just(1.0), Just(-1.0)],
    ) {
        let m = build_profile(ProfileParams::Flat { a, b }).unwrap();
        let c = at(interior(&m), 0.5);
        let lox = make_loxodrome(&m, LoxodromeSpec::new(psi, eps).with_offset(c)).unwrap();
        let v = check_general_helix(&lox, &default_samples(&lox)).unwrap();
        prop_assert!(v.holds, "{v:?}");
        let expected = flat_helix_ratio(&lox).unwrap();
        prop_assert!((v.details["ratio"].abs() - expected).abs() <= 1e-8 * (1.0 + expected));
    }

    #[test]
    fn catenoid_linear_law(n in 0.5f64..3.0, mm in -2.0f64..2.0, c in -2.0f64..2.0) {
        let m = build_profile(ProfileParams::Minimal { n, m: mm, r: 0.0 }).unwrap();
        let lox = make_loxodrome(&m, LoxodromeSpec::new(FRAC_PI_4, 1.0).with_offset(c)).unwrap();
        let v = check_linear_ratio(&lox, &default_samples(&lox)).unwrap();
        prop_assert!(v.holds, "{v:?}");
        prop_assert!((v.details["lambda"] - n / 2.0).abs() <= 1e-6);
        prop_assert!((v.details["mu"] - (mm + c) * n / std::f64::consts::SQRT_2).abs() <= 1e-6);
    }

    #[test]
    fn asymptotic_crpc_angle(psi in 0.5f64..1.2, d in 0.3f64..0.9) {
        let k = -psi.tan().powi(2);
        let p = ProfileParams::Crpc(CrpcParams::new(k, d, 1.0));
        let Ok(m) = build_profile(p) else { return Ok(()) };
        let lox = make_loxodrome(&m, LoxodromeSpec::new(psi, 1.0)).unwrap();
        let v = check_asymptotic(&lox, &default_samples(&lox)).unwrap();
        prop_assert!(v.holds, "{v:?}");
    }

    #[test]
    fn sphere_loxodromes_are_never_asymptotic(psi in 0.0f64..PI, c in -1.2f64..1.2) {
        let m = model(sphere());
        let Ok(lox) = make_loxodrome(&m, LoxodromeSpec::new(psi, 1.0).with_offset(c)) else { return Ok(()) };
        let ts = default_samples(&lox);
        let v = check_asymptotic(&lox, &ts).unwrap();
        prop_assert!(!v.holds);
        prop_assert!((v.residual - 1.0).abs() <= 1e-12);
    }
}

#[test]
fn catenoid_quarter_loxodrome_is_asymptotic() {
    for (n, mm) in [(1.0, 0.0), (0.5, 1.0), (2.5, -1.5)] {
        let m = build_profile(ProfileParams::Minimal { n, m: mm, r: 0.0 }).unwrap();
        let lox = make_loxodrome(&m, LoxodromeSpec::new(FRAC_PI_4, 1.0)).unwrap();
        assert!(check_asymptotic(&lox, &default_samples(&lox)).unwrap().holds);
    }
}

#[test]
fn oracle_on_fig1_cone_at_t4() {
    let (_, lox, _) = scenes().remove(0);
    let g = lox.kappa_tau_general(4.0).unwrap();
    let f = frenet_auto(curve(&lox), 4.0).unwrap();
    assert!((f.kappa - g.kappa).abs() <= 1e-6);
    assert!((f.tau - g.tau.unwrap()).abs() <= 1e-6);
}

#[test]
fn oracle_frames_are_orthonormal() {
    for (name, lox, w) in scenes() {
        for t in linspace(w.lo, w.hi, 9) {
            let f = frenet_auto(curve(&lox), t).unwrap();
            let (tn, nn, bn) = (f.tangent, f.normal, f.binormal);
            for v in [tn, nn, bn] {
                assert!((v.norm() - 1.0).abs() <= 1e-8, "{name}");
            }
            assert!(tn.dot(&nn).abs() <= 1e-8 && tn.dot(&bn).abs() <= 1e-8 && nn.dot(&bn).abs() <= 1e-8);
            assert!((tn.cross(&nn) - bn).norm() <= 1e-8, "{name}");
        }
    }
}

#[test]
fn meridians_have_unit_speed() {
    for p in [cone(), sphere(), elongated_sphere(), beltrami(), catenoid()] {
        let m = model(p);
        let w = interior(&m);
        let c = 0.5 * (w.lo + w.hi);
        let lox = make_loxodrome(&m, LoxodromeSpec::new(0.0, 1.0).with_offset(c)).unwrap();
        let ts = interior_samples(w.lo - c, w.hi - c, 20, 0.8);
        assert!(unit_speed_residual(curve(&lox), &ts).unwrap() <= 1e-9);
    }
}

#[test]
fn beltrami_loxodrome_unit_speed_residual() {
    let (_, lox, w) = scenes().remove(4);
    let ts = linspace(w.lo, w.hi, 200);
    assert!(unit_speed_residual(curve(&lox), &ts).unwrap() <= 1e-7);
}

#[test]
fn broken_parametrization_is_detected() {
    let (_, lox, w) = scenes().remove(4);
    // Scaling θ by √2 doubles the f²θ̇² term of the speed.
    let broken = |t: f64| {
        let s = lox.s_of_t(t).ok()?;
        let theta = lox.theta_of_t(t).ok()? * std::f64::consts::SQRT_2;
        lox.surface().surface_point(s, theta).ok()
    };
    let broken = |t: f64| broken(t).unwrap_or(Vec3::repeat(f64::NAN));
    let r = unit_speed_residual(broken, &linspace(w.lo, w.hi, 50)).unwrap();
    assert!(r > 1e-2, "{r}");
    assert!((r - (1.25f64.sqrt() - 1.0)).abs() < 1e-6);
}

#[test]
fn numeric_and_closed_theta_describe_the_same_curve() {
    for (name, lox, w) in scenes() {
        if !matches!(lox.mode(), ThetaMode::ClosedForm(_)) {
            continue;
        }
        let opts = LoxodromeOptions { force_numeric: true, ..LoxodromeOptions::default() };
        let num = Loxodrome::with_options(lox.surface(), *lox.spec(), opts).unwrap();
        for t in linspace(w.lo, w.hi, 11) {
            let d = (num.point(t).unwrap() - lox.point(t).unwrap()).norm();
            assert!(d <= 1e-8, "{name} t={t} d={d:e}");
        }
    }
}

#[test]
fn refinement_does_not_inflate_residuals() {
    let beltrami = make_loxodrome(&model(beltrami()), LoxodromeSpec::new(FRAC_PI_6, 1.0).with_anchor(-1.0, 0.0)).unwrap();
    let sphere = make_loxodrome(&model(sphere()), LoxodromeSpec::new(FRAC_PI_3, 1.0)).unwrap();
    let cone = make_loxodrome(&model(cone()), LoxodromeSpec::new(FRAC_PI_3, 1.0).with_anchor(4.0, 0.0)).unwrap();
    let grid = |lox: &Loxodrome, n: usize| {
        let w = sampling_window(lox);
        interior_samples(w.lo, w.hi, n, 0.8)
    };
    for n in [16, 32] {
        let coarse = check_general_helix(&beltrami, &grid(&beltrami, n)).unwrap().residual;
        let fine = check_general_helix(&beltrami, &grid(&beltrami, 2 * n)).unwrap().residual;
        assert!(fine <= 1.1 * coarse, "{coarse} -> {fine}");
        let coarse = check_asymptotic(&sphere, &grid(&sphere, n)).unwrap().residual;
        let fine = check_asymptotic(&sphere, &grid(&sphere, 2 * n)).unwrap().residual;
        assert!(fine <= 1.1 * coarse);
        let coarse = check_general_helix(&cone, &grid(&cone, n)).unwrap().residual;
        let fine = check_general_helix(&cone, &grid(&cone, 2 * n)).unwrap().residual;
        assert!(fine <= 1.1 * coarse.max(1e-12));
    }
}

#[test]
fn special_angle_scenes() {
    let m = model(sphere());
    let lox = make_loxodrome(&m, LoxodromeSpec::new(0.0, 1.0)).unwrap();
    let v = loxodrome_core::characterize::check_special_angle(&lox).unwrap();
    assert!(v.holds && v.residual <= 1e-8);
    let cyl = make_loxodrome(&model(cylinder()), LoxodromeSpec::new(FRAC_PI_2, 1.0)).unwrap();
    let v = loxodrome_core::characterize::check_special_angle(&cyl).unwrap();
    assert!(v.holds);
}
