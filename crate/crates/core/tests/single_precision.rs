use lawsonlab::euler::{double_cover_defect, euler_phi};
use lawsonlab::f32::{Lawson, S3Point, SpherePoint};
use lawsonlab::lawson::{immerse, lawson_matrix};
use lawsonlab::linalg::Vec4;
use lawsonlab::numerics::QuadratureSpec;
use lawsonlab::vfields::{ellipse_length, vk_at};

#[test]
fn euler_map_in_f32() {
    let x = S3Point::project(Vec4::new(0.3_f32, -1.0, 0.5, 0.8), 2.0).unwrap();
    let r = euler_phi(&x).unwrap();
    assert!(lawsonlab::spheres::Rotation3::defects(r.matrix()).max() < 1e-5);
    assert_eq!(double_cover_defect(&x).unwrap(), 0.0);
}

#[test]
fn lawson_matrix_in_f32() {
    let t = Lawson::new(1, 2, 2.0).unwrap();
    let a = lawson_matrix(&t, 0.4_f32, 0.9).unwrap();
    let b = euler_phi(&immerse(&t, 0.4_f32, 0.9).unwrap()).unwrap();
    assert!(a.max_abs_diff(&b) < 1e-5);
}

#[test]
fn fields_in_f32() {
    let p = SpherePoint::from_latlon(0.2, 1.0).unwrap();
    let e = vk_at(3, &p).unwrap();
    assert!((e.vector().norm() - 1.0).abs() < 1e-6);
    let l: f32 = ellipse_length(3, QuadratureSpec::new(64).unwrap()).unwrap();
    assert!((l - 13.364893).abs() < 1e-3);
}
