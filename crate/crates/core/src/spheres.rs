//! Points of S² and S³(R), unit quaternions and rotations.
//!
//! Chart on S²: latitude `α ∈ [-π/2, π/2]`, longitude `t ∈ [0, 2π)`, with
//! `u = (cos α cos t, cos α sin t, sin α)`. The poles `N = (0,0,1)` and
//! `S = (0,0,-1)` sit on the z axis.

use std::ops::Mul;

use crate::error::{Error, Result};
use crate::linalg::{Mat3, Vec3, Vec4};
use crate::scalar::{wrap_two_pi, Real};

/// Point of the unit 2-sphere with its latitude/longitude chart data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpherePoint2<T> {
    u: Vec3<T>,
    latitude: T,
    longitude: T,
}

impl<T: Real> SpherePoint2<T> {
    /// Point at latitude `α` and longitude `t` (any real; stored in `[0, 2π)`).
    pub fn from_latlon(latitude: T, longitude: T) -> Result<Self> {
        let half_pi = T::FRAC_PI_2();
        let slack = T::invariant_tol();
        if !(latitude.abs() <= half_pi + slack) || !longitude.is_finite() {
            return Err(Error::Domain(format!(
                "latitude {latitude} outside [-π/2, π/2]"
            )));
        }
        let latitude = latitude.max(-half_pi).min(half_pi);
        let (sa, ca) = latitude.sin_cos();
        let (st, ct) = longitude.sin_cos();
        let u = if ca == T::zero() || latitude.abs() == half_pi {
            Vec3::new(T::zero(), T::zero(), latitude.signum())
        } else {
            Vec3::new(ca * ct, ca * st, sa)
        };
        Ok(Self {
            u,
            latitude,
            longitude: wrap_two_pi(longitude),
        })
    }

    /// Point in the direction of `v` (normalized).
    pub fn from_vector(v: Vec3<T>) -> Result<Self> {
        let u = v
            .normalized()
            .ok_or_else(|| Error::Domain("zero or non-finite direction".into()))?;
        let rho = (u[0] * u[0] + u[1] * u[1]).sqrt();
        let latitude = u[2].atan2(rho);
        let longitude = if rho > T::zero() {
            wrap_two_pi(u[1].atan2(u[0]))
        } else {
            T::zero()
        };
        Ok(Self {
            u,
            latitude,
            longitude,
        })
    }

    pub fn north() -> Self {
        Self {
            u: Vec3::unit_z(),
            latitude: T::FRAC_PI_2(),
            longitude: T::zero(),
        }
    }

    pub fn south() -> Self {
        Self {
            u: -Vec3::unit_z(),
            latitude: -T::FRAC_PI_2(),
            longitude: T::zero(),
        }
    }

    pub fn vector(&self) -> Vec3<T> {
        self.u
    }

    pub fn latitude(&self) -> T {
        self.latitude
    }

    pub fn longitude(&self) -> T {
        self.longitude
    }

    /// Distance `cos α` from the polar axis.
    pub fn axis_distance(&self) -> T {
        (self.u[0] * self.u[0] + self.u[1] * self.u[1]).sqrt()
    }

    pub fn is_pole(&self) -> bool {
        self.axis_distance() <= pole_tolerance::<T>()
    }

    /// Orthonormal frame `(e1, e2)`: `e1` along increasing longitude (tangent
    /// to the parallel), `e2` along increasing latitude (tangent to the
    /// meridian), with `e1 × e2 = p`.
    pub fn frame(&self) -> Result<(Vec3<T>, Vec3<T>)> {
        let rho = self.axis_distance();
        if rho <= pole_tolerance::<T>() {
            return Err(Error::Singularity {
                latitude: self.latitude.to_f64_lossy(),
            });
        }
        let (x, y, z) = (self.u[0], self.u[1], self.u[2]);
        let e1 = Vec3::new(-y / rho, x / rho, T::zero());
        let e2 = Vec3::new(-z * x / rho, -z * y / rho, rho);
        Ok((e1, e2))
    }
}

/// Axis distance below which a point counts as a pole.
pub fn pole_tolerance<T: Real>() -> T {
    T::lit(1e-12).max(T::epsilon() * T::lit(1e4))
}

/// [`SpherePoint2::from_latlon`].
pub fn latlon_to_point<T: Real>(latitude: T, longitude: T) -> Result<SpherePoint2<T>> {
    SpherePoint2::from_latlon(latitude, longitude)
}

/// [`SpherePoint2::frame`].
pub fn frame_e1_e2<T: Real>(p: &SpherePoint2<T>) -> Result<(Vec3<T>, Vec3<T>)> {
    p.frame()
}

/// Relabel coordinates of the Euler-chart sphere (poles on the first axis) so
/// that its first axis becomes z: `x → z, y → x, z → y`.
pub fn relabel_axes<T: Real>(v: &Vec3<T>) -> Vec3<T> {
    Vec3::new(v[1], v[2], v[0])
}

/// Inverse of [`relabel_axes`].
pub fn unrelabel_axes<T: Real>(v: &Vec3<T>) -> Vec3<T> {
    Vec3::new(v[2], v[0], v[1])
}

/// Point of the round 3-sphere of radius `R` in ℝ⁴.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sphere3Point<T> {
    x: Vec4<T>,
    radius: T,
}

impl<T: Real> Sphere3Point<T> {
    /// Checked constructor: `| |x| - R | ≤ 1e-10 R`.
    pub fn new(x: Vec4<T>, radius: T) -> Result<Self> {
        if !(radius > T::zero()) {
            return Err(Error::Domain(format!(
                "radius must be positive, got {radius}"
            )));
        }
        let tol = T::lit(1e-10).max(T::epsilon() * T::lit(64.0)) * radius;
        let defect = (x.norm() - radius).abs();
        if !(defect <= tol) {
            return Err(Error::Domain(format!(
                "|x| = {} differs from radius {radius}",
                x.norm()
            )));
        }
        Ok(Self { x, radius })
    }

    /// Radial projection of `x` onto the sphere of radius `R`.
    pub fn project(x: Vec4<T>, radius: T) -> Result<Self> {
        let u = x
            .normalized()
            .ok_or_else(|| Error::Domain("cannot project the origin".into()))?;
        Self::new(u.scale(radius), radius)
    }

    pub fn coords(&self) -> Vec4<T> {
        self.x
    }

    pub fn radius(&self) -> T {
        self.radius
    }

    pub fn antipode(&self) -> Self {
        Self {
            x: -self.x,
            radius: self.radius,
        }
    }

    /// Unit quaternion `x / R`.
    pub fn to_quaternion(&self) -> Quaternion<T> {
        Quaternion::from_vec4(self.x.scale(T::one() / self.radius))
    }

    /// Geodesic distance on the sphere.
    pub fn geodesic_distance(&self, other: &Self) -> T {
        let c = self.x.dot(&other.x) / (self.radius * other.radius);
        self.radius * c.max(-T::one()).min(T::one()).acos()
    }
}

/// Quaternion `w + i·x + j·y + k·z`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Quaternion<T> {
    pub w: T,
    pub i: T,
    pub j: T,
    pub k: T,
}

impl<T: Real> Quaternion<T> {
    pub fn new(w: T, i: T, j: T, k: T) -> Self {
        Self { w, i, j, k }
    }

    pub fn one() -> Self {
        Self::new(T::one(), T::zero(), T::zero(), T::zero())
    }

    pub fn from_vec4(v: Vec4<T>) -> Self {
        Self::new(v[0], v[1], v[2], v[3])
    }

    pub fn to_vec4(&self) -> Vec4<T> {
        Vec4::new(self.w, self.i, self.j, self.k)
    }

    /// Pure quaternion with imaginary part `v`.
    pub fn pure(v: &Vec3<T>) -> Self {
        Self::new(T::zero(), v[0], v[1], v[2])
    }

    pub fn imag(&self) -> Vec3<T> {
        Vec3::new(self.i, self.j, self.k)
    }

    pub fn conj(&self) -> Self {
        Self::new(self.w, -self.i, -self.j, -self.k)
    }

    pub fn norm(&self) -> T {
        self.to_vec4().norm()
    }

    pub fn inverse(&self) -> Option<Self> {
        let n2 = self.to_vec4().norm_squared();
        if n2 > T::zero() {
            let c = self.conj();
            Some(Self::new(c.w / n2, c.i / n2, c.j / n2, c.k / n2))
        } else {
            None
        }
    }

    pub fn normalized(&self) -> Option<Self> {
        self.to_vec4().normalized().map(Self::from_vec4)
    }

    /// `cos θ + i sin θ`.
    pub fn exp_i(theta: T) -> Self {
        let (s, c) = theta.sin_cos();
        Self::new(c, s, T::zero(), T::zero())
    }

    pub fn is_unit(&self) -> bool {
        (self.norm() - T::one()).abs() <= T::invariant_tol()
    }
}

impl<T: Real> Mul for Quaternion<T> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self::new(
            self.w * o.w - self.i * o.i - self.j * o.j - self.k * o.k,
            self.w * o.i + self.i * o.w + self.j * o.k - self.k * o.j,
            self.w * o.j - self.i * o.k + self.j * o.w + self.k * o.i,
            self.w * o.k + self.i * o.j - self.j * o.i + self.k * o.w,
        )
    }
}

/// Element of SO(3) as a 3×3 matrix acting on column vectors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rotation3<T>(Mat3<T>);

/// Orthonormality, determinant and orientation defects of a 3×3 matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotationDefects<T> {
    pub orthogonality: T,
    pub determinant: T,
    pub orientation: T,
}

impl<T: Real> RotationDefects<T> {
    pub fn max(&self) -> T {
        self.orthogonality
            .max(self.determinant)
            .max(self.orientation)
    }
}

impl<T: Real> Rotation3<T> {
    /// Tolerance of the `RᵀR = I`, `det R = 1` checks.
    pub fn tolerance() -> T {
        T::lit(1e-10).max(T::epsilon() * T::lit(256.0))
    }

    pub fn identity() -> Self {
        Self(Mat3::identity())
    }

    pub fn defects(m: &Mat3<T>) -> RotationDefects<T> {
        let gram = m.transpose().mul_mat(m);
        let c0 = m.column(0);
        let c1 = m.column(1);
        let c2 = m.column(2);
        RotationDefects {
            orthogonality: gram.max_abs_diff(&Mat3::identity()),
            determinant: (m.det() - T::one()).abs(),
            orientation: (c2 - c0.cross(&c1)).max_abs(),
        }
    }

    /// Accepts `m` only when it passes the rotation invariants.
    pub fn from_matrix(m: Mat3<T>) -> Result<Self> {
        let d = Self::defects(&m);
        if !m.is_finite() || !(d.max() <= Self::tolerance()) {
            return Err(Error::Domain(format!(
                "not a rotation: orthogonality {}, determinant {}, orientation {}",
                d.orthogonality, d.determinant, d.orientation
            )));
        }
        Ok(Self(m))
    }

    /// Wraps `m` without checks; callers establish the invariants.
    pub fn from_matrix_unchecked(m: Mat3<T>) -> Self {
        Self(m)
    }

    /// Modified Gram–Schmidt on the columns, third column rebuilt as the
    /// cross product. Meant for data read from files.
    pub fn orthonormalize(m: &Mat3<T>) -> Result<Self> {
        let c0 = m
            .column(0)
            .normalized()
            .ok_or_else(|| Error::Domain("degenerate first column".into()))?;
        let c1 = m.column(1);
        let c1 = (c1 - c0.scale(c0.dot(&c1)))
            .normalized()
            .ok_or_else(|| Error::Domain("degenerate second column".into()))?;
        Ok(Self(Mat3::from_columns(c0, c1, c0.cross(&c1))))
    }

    pub fn matrix(&self) -> &Mat3<T> {
        &self.0
    }

    pub fn column(&self, j: usize) -> Vec3<T> {
        self.0.column(j)
    }

    pub fn compose(&self, other: &Self) -> Self {
        Self(self.0.mul_mat(&other.0))
    }

    pub fn apply(&self, v: &Vec3<T>) -> Vec3<T> {
        self.0.mul_vec(v)
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.0.max_abs_diff(&other.0)
    }
}

/// Matrix of `u ↦ q⁻¹ u q` on the imaginary quaternions, built by
/// conjugating `i`, `j`, `k`.
///
/// With this convention `R(q₁q₂) = R(q₂)R(q₁)`.
pub fn quat_rotation<T: Real>(q: &Quaternion<T>) -> Result<Rotation3<T>> {
    if !q.is_unit() {
        return Err(Error::Domain(format!(
            "quaternion norm {} is not 1",
            q.norm()
        )));
    }
    let inv = q.conj();
    let image = |e: Vec3<T>| (inv * Quaternion::pure(&e) * *q).imag();
    let m = Mat3::from_columns(
        image(Vec3::unit_x()),
        image(Vec3::unit_y()),
        image(Vec3::unit_z()),
    );
    Ok(Rotation3(m))
}
