mod common;

use std::f64::consts::{FRAC_PI_4, PI};

use lawsonlab::euler::euler_phi;
use lawsonlab::lawson::{
    compare_identified, consecutive_a2_as_printed, correspondence_vk_defect, covering_multiplicity,
    extract_angle_slope, immerse, lawson_matrix, mean_curvature_of, odd_family_display_matrix,
    parallel_curve_defect, parameter_identifications, ruling_defect, Branch, CorrespondenceField,
    Family, LawsonParams,
};
use lawsonlab::linalg::Vec4;
use lawsonlab::numerics::FiniteDiffSpec;
use lawsonlab::spheres::SpherePoint2;
use lawsonlab::unit_tangent::poincare_index_default;
use rand::Rng;

fn tau(n: i64, m: i64) -> LawsonParams<f64> {
    LawsonParams::new(n, m, 2.0).unwrap()
}

#[test]
fn printed_consecutive_identification_fails() {
    let t = tau(1, 2);
    let mut rng = common::rng(21);
    let mut worst = 0.0_f64;
    for _ in 0..50 {
        let a1 = common::random_regular_param(&mut rng);
        let (p, v) = compare_identified(&t, a1, consecutive_a2_as_printed(a1, 1, 0), 1).unwrap();
        worst = worst.max(p.max(v));
    }
    assert!(
        worst > 0.1,
        "printed identification unexpectedly holds: {worst}"
    );
}

#[test]
fn identification_lists_are_complete() {
    let mut rng = common::rng(22);
    for (n, m, sign) in [(1, 2, 1), (2, 3, 1), (1, 3, -1), (3, 5, -1)] {
        let a1 = common::random_regular_param(&mut rng);
        let ids = parameter_identifications(&tau(n, m), a1).unwrap();
        assert_eq!(ids.len(), 25);
        assert!(ids.iter().all(|i| i.sign == sign));
    }
    assert!(parameter_identifications(&tau(1, 4), (0.3, 0.4)).is_err());
}

#[test]
fn odd_display_differs_from_euler_image() {
    let t = tau(1, 3);
    let mut rng = common::rng(23);
    let mut worst = 0.0_f64;
    for _ in 0..50 {
        let (x, y) = (rng.random_range(-PI..PI), rng.random_range(-PI..PI));
        let truth = lawson_matrix(&t, x, y).unwrap();
        worst = worst.max(odd_family_display_matrix(1, x, y).max_abs_diff(truth.matrix()));
        let phi = euler_phi(&immerse(&t, x, y).unwrap()).unwrap();
        assert!(truth.max_abs_diff(&phi) < 1e-12);
    }
    assert!(worst > 0.1);
}

#[test]
fn angle_slopes_of_each_family() {
    let s = extract_angle_slope(&tau(1, 3), 0.4, 256).unwrap();
    assert_eq!(s.k, 3);
    assert!(
        (s.slope_x.abs() - 4.0).abs() < 1e-9,
        "slope_x {}",
        s.slope_x
    );
    for (n, m, k) in [(1, 2, 4), (2, 3, 6), (3, 5, 5)] {
        let t = tau(n, m);
        let s = extract_angle_slope(&t, 0.4, 256).unwrap();
        assert_eq!(s.k, k, "tau_{n}_{m}");
        assert_eq!(t.predicted_k(), Some(k));
    }
    // A general pair winds a fractional number of times per turn.
    let general = tau(1, 4);
    assert_eq!(general.family, Family::General);
    assert_eq!(general.predicted_k(), None);
    let s = extract_angle_slope(&general, 0.4, 256).unwrap();
    assert!(
        (s.slope_longitude.abs() - 5.0 / 3.0).abs() < 1e-9,
        "{}",
        s.slope_longitude
    );
}

#[test]
fn correspondence_fields_are_rotated_vk() {
    for (n, m) in [(1, 2), (2, 3), (1, 3), (3, 5)] {
        let r = correspondence_vk_defect(&tau(n, m), 24).unwrap();
        assert!(r.defect < 1e-9, "tau_{n}_{m}: {}", r.defect);
    }
}

#[test]
fn lower_branch_has_the_same_index_class() {
    for (n, m) in [(1, 2), (1, 3)] {
        let t = tau(n, m);
        let k = t.predicted_k().unwrap();
        let field = CorrespondenceField::new(t, Branch::Lower).unwrap();
        let north = poincare_index_default(&field, &SpherePoint2::north()).unwrap();
        let south = poincare_index_default(&field, &SpherePoint2::south()).unwrap();
        assert_eq!(north + south, 2);
        assert!(north == k || north == 2 - k, "tau_{n}_{m}: {north}");
    }
}

#[test]
fn correspondence_needs_euler_radius() {
    let t = LawsonParams::new(1, 2, 1.0).unwrap();
    assert!(CorrespondenceField::new(t, Branch::Upper).is_err());
    assert!(lawson_matrix(&t, 0.1, 0.2).is_err());
}

#[test]
fn control_torus_mean_curvature_matches_closed_form() {
    let rho = 0.8 * FRAC_PI_4;
    let torus = |x: f64, y: f64| {
        Vec4::new(
            rho.cos() * x.cos(),
            rho.cos() * x.sin(),
            rho.sin() * y.cos(),
            rho.sin() * y.sin(),
        )
    };
    let fd = FiniteDiffSpec::fourth_order(1e-3).unwrap();
    let want = 0.5 * (1.0 / rho.tan() - rho.tan());
    let h = mean_curvature_of(torus, 0.4, 1.1, &fd).unwrap();
    assert!((h.abs() - want).abs() < 1e-8, "{h} vs {want}");
    assert!(want > 1e-2);
}

#[test]
fn non_geodesic_curve_has_positive_ruling_defect() {
    let t = LawsonParams::new(1, 2, 1.0).unwrap();
    assert!(ruling_defect(&t, 0.3) < 1e-12);
    let bent = parallel_curve_defect(&t, FRAC_PI_4);
    assert!((bent - 0.6).abs() < 1e-6, "{bent}");
}

#[test]
fn measured_multiplicities() {
    for (n, m) in [(1, 1), (1, 2), (2, 3), (1, 3), (3, 5)] {
        let t = LawsonParams::new(n, m, 1.0).unwrap();
        assert_eq!(
            covering_multiplicity(&t, 0.37, 0.61).unwrap(),
            2,
            "tau_{n}_{m}"
        );
    }
}
