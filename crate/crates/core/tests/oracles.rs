//! Hand-derived values checked against the engine.

use mixed3::ambient::{make_pseudosphere, Level};
use mixed3::catalog;
use mixed3::config::Config;
use mixed3::linalg::{unit, Vector};
use mixed3::submanifold::{classify, frame_at, mean_curvature, second_fundamental_form, SubmanifoldKind};

#[test]
fn xi_at_e5() {
    let s = make_pseudosphere(1, Level::Positive).unwrap();
    let st = s.require_structure().unwrap();
    let p = unit(8, 4);
    assert_eq!(st.xi(0, &p), unit(8, 2));
    assert_eq!(st.xi(1, &p), -unit(8, 3));
    assert_eq!(st.xi(2, &p), -unit(8, 5));
    assert_eq!(st.eps_all(), [-1.0, -1.0, 1.0]);
}

#[test]
fn clifford_metric_at_origin() {
    let e = catalog::get("clifford-torus").unwrap();
    let f = frame_at(&e.immersion, &[0.0, 0.0], &Config::default()).unwrap();
    assert!((f.gram[(0, 0)] - 0.5).abs() < 1e-12);
    assert!((f.gram[(1, 1)] - 0.5).abs() < 1e-12);
    assert!(f.gram[(0, 1)].abs() < 1e-12);
}

#[test]
fn clifford_xi3_tangent_sum() {
    let cfg = Config::default();
    let e = catalog::get("clifford-torus").unwrap();
    for u in [[0.0, 0.0], [0.7, -1.1], [2.0, 0.3]] {
        let f = frame_at(&e.immersion, &u, &cfg).unwrap();
        let c = classify(&e.immersion, &f, &cfg).unwrap();
        let x3 = &c.xi_tangential[2] + &c.xi_normal[2];
        let sum: Vector = &x3 + &f.tangent[0] + &f.tangent[1];
        assert!(sum.amax() < 1e-9, "{u:?}");
        assert_eq!(c.kind, SubmanifoldKind::AntiInvariant);
        assert_eq!((c.dim_xi_t, c.dim_xi_n), (1, 2));
    }
}

#[test]
fn great_sphere_totally_geodesic() {
    let cfg = Config::default();
    let e = catalog::get("great-s3-fiber").unwrap();
    let f = frame_at(&e.immersion, &e.immersion.center(), &cfg).unwrap();
    let h = second_fundamental_form(&e.immersion, &f, &cfg);
    assert!(h.max_norm() < 5e-4);
    assert!(mean_curvature(&f, &h).norm < 5e-4);
}

#[test]
fn flat_torus_not_totally_geodesic() {
    // circles of radius r in flat space curve with |h| ~ 1/r
    let cfg = Config::default();
    let e = catalog::get("flat-torus-n2").unwrap();
    let f = frame_at(&e.immersion, &e.immersion.center(), &cfg).unwrap();
    let h = second_fundamental_form(&e.immersion, &f, &cfg);
    assert!(h.max_norm() > 0.1);
}

#[test]
fn wrong_parameter_count_rejected() {
    let e = catalog::get("clifford-torus").unwrap();
    assert!(frame_at(&e.immersion, &[0.0], &Config::default()).is_err());
}
