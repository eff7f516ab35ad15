//! The Euler parametric transformation `Φ: S³(2) → SO(3)`.
//!
//! `Φ(x)` is the matrix of `u ↦ q⁻¹ u q` with `q = x/2`, written as a
//! quadratic polynomial in the coordinates of `x`.

use crate::error::{Error, Result};
use crate::linalg::{Mat3, Vec4};
use crate::numerics::FiniteDiffSpec;
use crate::scalar::Real;
use crate::spheres::{Quaternion, Rotation3, Sphere3Point};
use crate::unit_tangent::TangentElement;

/// Radius of the source sphere.
pub const EULER_RADIUS: f64 = 2.0;

/// Metric factor on SO(3): `½⟨A, B⟩ = ½ tr(AᵀB)`.
pub const METRIC_SCALE: f64 = 0.5;

/// Column 3 tolerance of [`extract_section`].
pub const SECTION_TOLERANCE: f64 = 1e-8;

/// A point of S³(2) with its Euler image.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerImage<T> {
    pub source: Sphere3Point<T>,
    pub rotation: Rotation3<T>,
}

impl<T: Real> EulerImage<T> {
    pub fn new(source: Sphere3Point<T>) -> Result<Self> {
        Ok(Self {
            source,
            rotation: euler_phi(&source)?,
        })
    }
}

/// The quadratic matrix of `Φ` at any `x ∈ ℝ⁴`, without checks.
pub fn euler_polynomial<T: Real>(x: &Vec4<T>) -> Mat3<T> {
    let (x1, x2, x3, x4) = (x[0], x[1], x[2], x[3]);
    let two = T::two();
    let q = T::lit(0.25);
    Mat3([
        [
            x1 * x1 + x2 * x2 - x3 * x3 - x4 * x4,
            two * x1 * x4 + two * x2 * x3,
            -two * x1 * x3 + two * x2 * x4,
        ],
        [
            -two * x1 * x4 + two * x2 * x3,
            x1 * x1 - x2 * x2 + x3 * x3 - x4 * x4,
            two * x1 * x2 + two * x3 * x4,
        ],
        [
            two * x1 * x3 + two * x2 * x4,
            -two * x1 * x2 + two * x3 * x4,
            x1 * x1 - x2 * x2 - x3 * x3 + x4 * x4,
        ],
    ])
    .scale(q)
}

fn check_radius<T: Real>(x: &Sphere3Point<T>) -> Result<()> {
    let r = T::lit(EULER_RADIUS);
    if !((x.radius() - r).abs() <= T::lit(1e-10) * r) {
        return Err(Error::Domain(format!(
            "Euler map is defined on S³(2), got radius {}",
            x.radius()
        )));
    }
    Ok(())
}

/// `Φ(x)` for `x ∈ S³(2)`.
pub fn euler_phi<T: Real>(x: &Sphere3Point<T>) -> Result<Rotation3<T>> {
    check_radius(x)?;
    Rotation3::from_matrix(euler_polynomial(&x.coords()))
}

/// `‖Φ(x) − Φ(−x)‖_max`.
pub fn double_cover_defect<T: Real>(x: &Sphere3Point<T>) -> Result<T> {
    check_radius(x)?;
    let a = euler_polynomial(&x.coords());
    let b = euler_polynomial(&(-x.coords()));
    Ok(a.max_abs_diff(&b))
}

/// Orthonormal tangent frame `{q·i, q·j, q·k}` at `x = 2q`.
pub fn tangent_frame<T: Real>(x: &Sphere3Point<T>) -> [Vec4<T>; 3] {
    let q = x.to_quaternion();
    let basis = [
        Quaternion::new(T::zero(), T::one(), T::zero(), T::zero()),
        Quaternion::new(T::zero(), T::zero(), T::one(), T::zero()),
        Quaternion::new(T::zero(), T::zero(), T::zero(), T::one()),
    ];
    basis.map(|e| (q * e).to_vec4())
}

/// Differentials `dΦ(uᵢ)` along the tangent frame, by central differences
/// along the great circles through `x` in the directions `uᵢ`.
pub fn euler_differentials<T: Real>(x: &Sphere3Point<T>, h: T) -> Result<[Mat3<T>; 3]> {
    check_radius(x)?;
    if !(h >= T::lit(1e-7) && h <= T::lit(1e-3)) {
        return Err(Error::Domain(format!("step {h} outside [1e-7, 1e-3]")));
    }
    let fd = FiniteDiffSpec::second_order(h)?;
    let r = x.radius();
    let base = x.coords();
    let frame = tangent_frame(x);
    let mut out = [Mat3::default(); 3];
    for (slot, u) in out.iter_mut().zip(frame.iter()) {
        let curve = |s: T| {
            let (sn, cs) = (s / r).sin_cos();
            euler_polynomial(&(base.scale(cs) + u.scale(r * sn)))
        };
        let plus = curve(fd.step());
        let minus = curve(-fd.step());
        *slot = plus.sub(&minus).scale(T::one() / (T::two() * fd.step()));
        if !slot.is_finite() {
            return Err(Error::NonFinite {
                node: 0,
                at: h.to_f64_lossy(),
            });
        }
    }
    Ok(out)
}

/// Gram matrix `scale·⟨dΦuᵢ, dΦuⱼ⟩` on the tangent frame at `x`.
pub fn pullback_gram<T: Real>(x: &Sphere3Point<T>, h: T, metric_scale: T) -> Result<[[T; 3]; 3]> {
    let d = euler_differentials(x, h)?;
    let mut g = [[T::zero(); 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            g[i][j] = metric_scale * d[i].frobenius_dot(&d[j]);
        }
    }
    Ok(g)
}

/// `max_{i,j} |½⟨dΦuᵢ, dΦuⱼ⟩ − δᵢⱼ|`.
pub fn local_isometry_defect<T: Real>(x: &Sphere3Point<T>, h: T) -> Result<T> {
    local_isometry_defect_scaled(x, h, T::lit(METRIC_SCALE))
}

/// [`local_isometry_defect`] against the metric `scale·⟨·,·⟩`.
pub fn local_isometry_defect_scaled<T: Real>(
    x: &Sphere3Point<T>,
    h: T,
    metric_scale: T,
) -> Result<T> {
    let g = pullback_gram(x, h, metric_scale)?;
    let mut m = T::zero();
    for (i, row) in g.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            let target = if i == j { T::one() } else { T::zero() };
            m = m.max((v - target).abs());
        }
    }
    Ok(m)
}

/// Measured `c` in `Φ*(½⟨·,·⟩) = c·g`: mean diagonal of the Gram matrix.
pub fn pullback_constant<T: Real>(x: &Sphere3Point<T>, h: T) -> Result<T> {
    let g = pullback_gram(x, h, T::lit(METRIC_SCALE))?;
    Ok((g[0][0] + g[1][1] + g[2][2]) / T::lit(3.0))
}

/// Distance between the base points of `Φ(x)` and `Φ(e^{iθ}·x)`.
pub fn fibre_base_defect<T: Real>(x: &Sphere3Point<T>, theta: T) -> Result<T> {
    let moved = Quaternion::exp_i(theta) * x.to_quaternion();
    let y = Sphere3Point::project(moved.to_vec4(), x.radius())?;
    let a = euler_phi(x)?.column(0);
    let b = euler_phi(&y)?.column(0);
    Ok((a - b).max_abs())
}

/// `(p, V)` read from columns 1 and 2 of `R`, checking column 3 is `p × V`.
pub fn extract_section<T: Real>(r: &Rotation3<T>) -> Result<TangentElement<T>> {
    let p = r.column(0);
    let v = r.column(1);
    let defect = (r.column(2) - p.cross(&v)).max_abs();
    if !(defect <= T::lit(SECTION_TOLERANCE)) {
        return Err(Error::NotSection {
            defect: defect.to_f64_lossy(),
        });
    }
    TangentElement::new(p, v)
}
