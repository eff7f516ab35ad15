//! Lawson surfaces in S³, the Euler map `Φ: S³(2) → SO(3)` and the
//! area-minimizing unit fields `V_k` on the punctured 2-sphere.
//!
//! Every kernel is generic over [`Real`] (`f32` or `f64`); the aliases
//! below fix the scalar to `f64`.

// `!(a <= b)` is deliberate throughout: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod euler;
pub mod lawson;
pub mod linalg;
pub mod numerics;
pub mod scalar;
pub mod spheres;
pub mod unit_tangent;
pub mod vfields;

pub use error::{Error, Result};
pub use scalar::Real;

pub type Vector3 = linalg::Vec3<f64>;
pub type Vector4 = linalg::Vec4<f64>;
pub type Matrix3 = linalg::Mat3<f64>;
pub type Rotation3d = spheres::Rotation3<f64>;
pub type Quaternion64 = spheres::Quaternion<f64>;
pub type SpherePoint = spheres::SpherePoint2<f64>;
pub type S3Point = spheres::Sphere3Point<f64>;
pub type Tangent = unit_tangent::TangentElement<f64>;
pub type Lawson = lawson::LawsonParams<f64>;
pub type FiniteDiff = numerics::FiniteDiffSpec<f64>;

/// Single-precision aliases.
pub mod f32 {
    pub type Vector3 = crate::linalg::Vec3<f32>;
    pub type Vector4 = crate::linalg::Vec4<f32>;
    pub type Rotation3d = crate::spheres::Rotation3<f32>;
    pub type SpherePoint = crate::spheres::SpherePoint2<f32>;
    pub type S3Point = crate::spheres::Sphere3Point<f32>;
    pub type Lawson = crate::lawson::LawsonParams<f32>;
}
