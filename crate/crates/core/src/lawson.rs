//! Lawson surfaces `τ_{n,m}` in S³(R) and their Euler images.
//!
//! Slot convention: `φ(x, y) = R(cos y·e^{i a x}, sin y·e^{i b x})` in
//! `ℂ² ≅ ℝ⁴`, with `a = m` (the `cos y` frequency) and `b = n` (the `sin y`
//! frequency). Under this convention the Euler base point is
//! `p = (cos 2y, sin 2y sin((a−b)x), sin 2y cos((a−b)x))`.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::euler::{euler_phi, extract_section, EULER_RADIUS};
use crate::linalg::{Mat3, Vec3, Vec4};
use crate::numerics::{
    derivative, fit_line, integrate_2d, second_derivative, unwrap_angles, FiniteDiffSpec,
    QuadratureSpec, Rect,
};
use crate::scalar::{wrap_fundamental, Real};
use crate::spheres::{relabel_axes, unrelabel_axes, Rotation3, Sphere3Point, SpherePoint2};
use crate::unit_tangent::{TangentElement, UnitVectorField};
use crate::vfields::vk_at;

/// Structural family of `(n, m)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    General,
    /// `m = n + 1`; carries `n`.
    Consecutive(i64),
    /// `(n, m) = (2j + 1, 2j + 3)`; carries `j`.
    Odd(i64),
}

impl Family {
    pub fn classify(n: i64, m: i64) -> Self {
        if m == n + 1 {
            Family::Consecutive(n)
        } else if m == n + 2 && n.rem_euclid(2) == 1 {
            Family::Odd((n - 1).div_euclid(2))
        } else {
            Family::General
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Family::General => "general",
            Family::Consecutive(_) => "consecutive",
            Family::Odd(_) => "odd",
        }
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `τ_{n,m}` on the sphere of radius `R`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LawsonParams<T> {
    pub n: i64,
    pub m: i64,
    pub radius: T,
    pub family: Family,
}

impl<T: Real> LawsonParams<T> {
    pub fn new(n: i64, m: i64, radius: T) -> Result<Self> {
        if !(radius > T::zero()) || !radius.is_finite() {
            return Err(Error::Domain(format!(
                "radius must be positive, got {radius}"
            )));
        }
        Ok(Self {
            n,
            m,
            radius,
            family: Family::classify(n, m),
        })
    }

    /// Frequency multiplying `x` in the `cos y` pair.
    pub fn freq_cos(&self) -> i64 {
        self.m
    }

    /// Frequency multiplying `x` in the `sin y` pair.
    pub fn freq_sin(&self) -> i64 {
        self.n
    }

    pub fn is_coprime(&self) -> bool {
        gcd(self.n, self.m) == 1
    }

    /// The same surface on another sphere.
    pub fn with_radius(&self, radius: T) -> Result<Self> {
        Self::new(self.n, self.m, radius)
    }

    /// Index class predicted for the Euler image: `1 + (a + b)/(a − b)`,
    /// i.e. `2n + 2` (consecutive) or `2j + 3` (odd).
    pub fn predicted_k(&self) -> Option<i64> {
        match self.family {
            Family::Consecutive(n) => Some(2 * n + 2),
            Family::Odd(j) => Some(2 * j + 3),
            Family::General => {
                let d = self.m - self.n;
                (d != 0 && (self.m + self.n) % d == 0).then(|| 1 + (self.m + self.n) / d)
            }
        }
    }

    /// Human-readable slot mapping for reports.
    pub fn slot_description(&self) -> String {
        format!(
            "cos(y) slot frequency {} (m), sin(y) slot frequency {} (n)",
            self.m, self.n
        )
    }

    fn ab(&self) -> (T, T) {
        (T::from_int(self.freq_cos()), T::from_int(self.freq_sin()))
    }

    fn require_euler_radius(&self) -> Result<()> {
        if (self.radius - T::lit(EULER_RADIUS)).abs() > T::invariant_tol() {
            return Err(Error::Domain(format!(
                "Euler correspondence needs R = 2, got {}",
                self.radius
            )));
        }
        Ok(())
    }
}

/// Axis-aligned rectangle of parameters inside `[−π, π]²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DomainRect<T> {
    pub x: (T, T),
    pub y: (T, T),
}

impl<T: Real> DomainRect<T> {
    pub fn new(x: (T, T), y: (T, T)) -> Result<Self> {
        let pi = T::PI() + T::invariant_tol();
        let ok = |(lo, hi): (T, T)| lo <= hi && lo >= -pi && hi <= pi;
        if !ok(x) || !ok(y) {
            return Err(Error::Domain("parameter rectangle leaves [-π, π]²".into()));
        }
        Ok(Self { x, y })
    }

    /// `D = [−π, π]²`.
    pub fn full() -> Self {
        Self {
            x: (-T::PI(), T::PI()),
            y: (-T::PI(), T::PI()),
        }
    }

    /// `G = [−π, π] × [−π/2, π/2]`.
    pub fn half() -> Self {
        Self {
            x: (-T::PI(), T::PI()),
            y: (-T::FRAC_PI_2(), T::FRAC_PI_2()),
        }
    }

    /// `[−π, π] × [0, π/2]`.
    pub fn upper() -> Self {
        Self {
            x: (-T::PI(), T::PI()),
            y: (T::zero(), T::FRAC_PI_2()),
        }
    }

    /// `[−π, π] × [−π/2, 0]`.
    pub fn lower() -> Self {
        Self {
            x: (-T::PI(), T::PI()),
            y: (-T::FRAC_PI_2(), T::zero()),
        }
    }

    pub fn contains(&self, x: T, y: T) -> bool {
        x >= self.x.0 && x <= self.x.1 && y >= self.y.0 && y <= self.y.1
    }

    pub fn area(&self) -> T {
        (self.x.1 - self.x.0) * (self.y.1 - self.y.0)
    }

    pub fn as_rect(&self) -> Rect<T> {
        Rect::new(self.x.0, self.x.1, self.y.0, self.y.1)
    }
}

fn phi_raw<T: Real>(params: &LawsonParams<T>, x: T, y: T) -> Vec4<T> {
    let (a, b) = params.ab();
    let (s, c) = y.sin_cos();
    let (sa, ca) = (a * x).sin_cos();
    let (sb, cb) = (b * x).sin_cos();
    Vec4::new(c * ca, c * sa, s * cb, s * sb).scale(params.radius)
}

/// `φ(x, y)`.
pub fn immerse<T: Real>(params: &LawsonParams<T>, x: T, y: T) -> Result<Sphere3Point<T>> {
    Sphere3Point::new(phi_raw(params, x, y), params.radius)
}

/// First and second partial derivatives of `φ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Partials<T> {
    pub phi: Vec4<T>,
    pub x: Vec4<T>,
    pub y: Vec4<T>,
    pub xx: Vec4<T>,
    pub xy: Vec4<T>,
    pub yy: Vec4<T>,
}

/// Analytic partials of `φ` at `(x, y)`.
pub fn partials<T: Real>(params: &LawsonParams<T>, x: T, y: T) -> Partials<T> {
    let (a, b) = params.ab();
    let r = params.radius;
    let (s, c) = y.sin_cos();
    let (sa, ca) = (a * x).sin_cos();
    let (sb, cb) = (b * x).sin_cos();
    let phi = Vec4::new(c * ca, c * sa, s * cb, s * sb).scale(r);
    Partials {
        phi,
        x: Vec4::new(-a * c * sa, a * c * ca, -b * s * sb, b * s * cb).scale(r),
        y: Vec4::new(-s * ca, -s * sa, c * cb, c * sb).scale(r),
        xx: Vec4::new(
            -a * a * c * ca,
            -a * a * c * sa,
            -b * b * s * cb,
            -b * b * s * sb,
        )
        .scale(r),
        xy: Vec4::new(a * s * sa, -a * s * ca, -b * c * sb, b * c * cb).scale(r),
        yy: -phi,
    }
}

/// `(E, F, G)` from the analytic first derivatives.
pub fn first_fundamental_form<T: Real>(params: &LawsonParams<T>, x: T, y: T) -> (T, T, T) {
    let d = partials(params, x, y);
    (d.x.norm_squared(), d.x.dot(&d.y), d.y.norm_squared())
}

/// Number of parameter points in `[−π, π)²` with the same image as the
/// generic point `(x, y)`.
pub fn covering_multiplicity<T: Real>(params: &LawsonParams<T>, x: T, y: T) -> Result<usize> {
    let (a, b) = (params.freq_cos(), params.freq_sin());
    if a == 0 || b == 0 {
        return Err(Error::Domain(
            "multiplicity needs nonzero frequencies".into(),
        ));
    }
    let target = phi_raw(params, x, y);
    let tol = T::lit(1e-9) * params.radius;
    let pi = T::PI();
    let mut found: Vec<(T, T)> = Vec::new();
    for (e1, e2) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
        // cos y' = e1 cos y, sin y' = e2 sin y
        let y2 = match (e1, e2) {
            (1, 1) => y,
            (1, -1) => -y,
            (-1, 1) => pi - y,
            _ => pi + y,
        };
        let offset = if e1 == -1 { pi } else { T::zero() };
        for j in 0..a.abs() {
            let delta = (offset + T::TAU() * T::from_int(j)) / T::from_int(a);
            let cand = (wrap_fundamental(x + delta), wrap_fundamental(y2));
            let image = phi_raw(params, cand.0, cand.1);
            if (image - target).max_abs() <= tol {
                let fresh = found
                    .iter()
                    .all(|&(u, v)| (u - cand.0).abs() > tol || (v - cand.1).abs() > tol);
                if fresh {
                    found.push(cand);
                }
            }
        }
    }
    Ok(found.len())
}

/// `R² ∫∫_domain √(EG − F²) dx dy / multiplicity` with the unit-sphere metric.
pub fn surface_area<T: Real>(
    params: &LawsonParams<T>,
    domain: &DomainRect<T>,
    multiplicity: usize,
    spec_x: QuadratureSpec,
    spec_y: QuadratureSpec,
) -> Result<T> {
    if multiplicity == 0 {
        return Err(Error::Domain("multiplicity must be positive".into()));
    }
    let unit = params.with_radius(T::one())?;
    let integral = integrate_2d(
        |x, y| {
            let (e, f, g) = first_fundamental_form(&unit, x, y);
            (e * g - f * f).max(T::zero()).sqrt()
        },
        domain.as_rect(),
        spec_x,
        spec_y,
    )?;
    let r = params.radius;
    Ok(r * r * integral / T::from_usize_lossy(multiplicity))
}

/// Mean curvature in S³(R) of a surface given by first and second
/// derivatives: `(G L − 2F M + E N) / (2(EG − F²))` with the coefficients
/// taken against the unit normal tangent to the sphere.
pub fn mean_curvature_from<T: Real>(d: &Partials<T>, x: T, y: T) -> Result<T> {
    let (e, f, g) = (d.x.norm_squared(), d.x.dot(&d.y), d.y.norm_squared());
    let det = e * g - f * f;
    let scale = d.phi.norm_squared() * d.phi.norm_squared();
    if !(det > T::lit(1e-12) * scale.max(T::one())) {
        return Err(Error::CoordinateSingularity {
            x: x.to_f64_lossy(),
            y: y.to_f64_lossy(),
            det: det.to_f64_lossy(),
        });
    }
    let nu = Vec4::triple_cross(&d.phi, &d.x, &d.y).normalized().ok_or(
        Error::CoordinateSingularity {
            x: x.to_f64_lossy(),
            y: y.to_f64_lossy(),
            det: det.to_f64_lossy(),
        },
    )?;
    let (l, m, n) = (d.xx.dot(&nu), d.xy.dot(&nu), d.yy.dot(&nu));
    Ok((g * l - T::two() * f * m + e * n) / (T::two() * det))
}

fn check_mean_curvature_step<T: Real>(fd: &FiniteDiffSpec<T>) -> Result<()> {
    let h = fd.step();
    if !(h >= T::lit(1e-6) && h <= T::lit(1e-3)) {
        return Err(Error::Domain(format!("step {h} outside [1e-6, 1e-3]")));
    }
    Ok(())
}

/// Mean curvature of any immersion `f: ℝ² → S³(R)`, with every derivative
/// by finite differences.
pub fn mean_curvature_of<T: Real>(
    f: impl Fn(T, T) -> Vec4<T>,
    x: T,
    y: T,
    fd: &FiniteDiffSpec<T>,
) -> Result<T> {
    check_mean_curvature_step(fd)?;
    let dx = |u: T, v: T| derivative(|s| f(s, v), u, fd);
    let d = Partials {
        phi: f(x, y),
        x: dx(x, y),
        y: derivative(|s| f(x, s), y, fd),
        xx: second_derivative(|s| f(s, y), x, fd),
        xy: derivative(|s| dx(x, s), y, fd),
        yy: second_derivative(|s| f(x, s), y, fd),
    };
    mean_curvature_from(&d, x, y)
}

/// Mean curvature of `τ_{n,m}` at `(x, y)`: analytic first derivatives,
/// second derivatives by finite differences.
pub fn mean_curvature<T: Real>(
    params: &LawsonParams<T>,
    x: T,
    y: T,
    fd: &FiniteDiffSpec<T>,
) -> Result<T> {
    check_mean_curvature_step(fd)?;
    let f = |u: T, v: T| phi_raw(params, u, v);
    let fx = |u: T, v: T| partials(params, u, v).x;
    let exact = partials(params, x, y);
    let d = Partials {
        phi: exact.phi,
        x: exact.x,
        y: exact.y,
        xx: second_derivative(|s| f(s, y), x, fd),
        xy: derivative(|s| fx(x, s), y, fd),
        yy: second_derivative(|s| f(x, s), y, fd),
    };
    mean_curvature_from(&d, x, y)
}

/// `|Im(z^{pz} · w̄^{pw})|` at the unit-sphere point `φ(x, y)/R`, where
/// `z = x₁ + i x₂` and `w = x₃ + i x₄`.
pub fn algebraic_defect_with<T: Real>(params: &LawsonParams<T>, x: T, y: T, pz: i32, pw: i32) -> T {
    let p = phi_raw(params, x, y).scale(T::one() / params.radius);
    let z = Complex::new(p[0], p[1]);
    let w = Complex::new(p[2], p[3]).conj();
    (z.powi(pz) * w.powi(pw)).im.abs()
}

/// [`algebraic_defect_with`] at the exponents `(n, m)` of the surface,
/// which under the slot convention read `z^b w̄^a`.
pub fn algebraic_defect<T: Real>(params: &LawsonParams<T>, x: T, y: T) -> T {
    algebraic_defect_with(
        params,
        x,
        y,
        params.freq_sin() as i32,
        params.freq_cos() as i32,
    )
}

/// Geodesic curvature in S³(R) of a space curve from its position,
/// velocity and acceleration.
pub fn sphere_geodesic_curvature<T: Real>(pos: &Vec4<T>, vel: &Vec4<T>, acc: &Vec4<T>) -> T {
    let v2 = vel.norm_squared();
    let n = pos.normalized().unwrap_or_else(Vec4::zero);
    let t = vel.normalized().unwrap_or_else(Vec4::zero);
    let tangential = *acc - n.scale(acc.dot(&n));
    let normal = tangential - t.scale(tangential.dot(&t));
    normal.norm() / v2
}

fn sample_grid<T: Real>(lo: T, hi: T, count: usize) -> impl Iterator<Item = T> {
    let h = (hi - lo) / T::from_usize_lossy(count.max(2) - 1);
    (0..count.max(2)).map(move |i| lo + h * T::from_usize_lossy(i))
}

/// Samples per curve used by [`ruling_defect`] and [`parallel_curve_defect`].
pub const CURVE_SAMPLES: usize = 64;

/// Max geodesic curvature of the ruling `y ↦ φ(x, y)`, sampled over
/// `y ∈ [−π, π]`.
pub fn ruling_defect<T: Real>(params: &LawsonParams<T>, x: T) -> T {
    sample_grid(-T::PI(), T::PI(), CURVE_SAMPLES).fold(T::zero(), |m, y| {
        let d = partials(params, x, y);
        m.max(sphere_geodesic_curvature(&d.phi, &d.y, &d.yy))
    })
}

/// Max geodesic curvature of the curve `x ↦ φ(x, y)`.
pub fn parallel_curve_defect<T: Real>(params: &LawsonParams<T>, y: T) -> T {
    sample_grid(-T::PI(), T::PI(), CURVE_SAMPLES).fold(T::zero(), |m, x| {
        let d = partials(params, x, y);
        m.max(sphere_geodesic_curvature(&d.phi, &d.x, &d.xx))
    })
}

/// `max |φ(x + c, y) − R_c φ(x, y)|`, `R_c` rotating the first complex
/// plane by `a·c` and the second by `b·c`.
pub fn self_congruence_defect<T: Real>(params: &LawsonParams<T>, c: T) -> T {
    let (a, b) = params.ab();
    let (s1, c1) = (a * c).sin_cos();
    let (s2, c2) = (b * c).sin_cos();
    let rotate = |p: Vec4<T>| {
        Vec4::new(
            c1 * p[0] - s1 * p[1],
            s1 * p[0] + c1 * p[1],
            c2 * p[2] - s2 * p[3],
            s2 * p[2] + c2 * p[3],
        )
    };
    let mut m = T::zero();
    for x in sample_grid(-T::PI(), T::PI(), 24) {
        for y in sample_grid(-T::PI(), T::PI(), 24) {
            let moved = phi_raw(params, x + c, y);
            m = m.max((moved - rotate(phi_raw(params, x, y))).max_abs());
        }
    }
    m
}

fn lawson_matrix_raw<T: Real>(params: &LawsonParams<T>, x: T, y: T) -> Mat3<T> {
    let (a, b) = params.ab();
    let (s, c) = y.sin_cos();
    let (s2, c2) = (s * s, c * c);
    let (sin2y, cos2y) = (T::two() * y).sin_cos();
    let (ss, cs) = ((a + b) * x).sin_cos();
    let (sd, cd) = ((a - b) * x).sin_cos();
    let (s2a, c2a) = (T::two() * a * x).sin_cos();
    let (s2b, c2b) = (T::two() * b * x).sin_cos();
    Mat3([
        [cos2y, sin2y * ss, -sin2y * cs],
        [sin2y * sd, c2 * c2a + s2 * c2b, c2 * s2a + s2 * s2b],
        [sin2y * cd, -c2 * s2a + s2 * s2b, c2 * c2a - s2 * c2b],
    ])
}

/// Closed form of `Φ(φ(x, y))`.
pub fn lawson_matrix<T: Real>(params: &LawsonParams<T>, x: T, y: T) -> Result<Rotation3<T>> {
    params.require_euler_radius()?;
    Rotation3::from_matrix(lawson_matrix_raw(params, x, y))
}

/// The specialized odd-family display, entry by entry as printed, with
/// `j` the family index. Kept for comparison only: it is not `Φ ∘ φ`.
pub fn odd_family_display_matrix<T: Real>(j: i64, x: T, y: T) -> Mat3<T> {
    let (s, c) = y.sin_cos();
    let (s2, c2) = (s * s, c * c);
    let (sin2y, cos2y) = (T::two() * y).sin_cos();
    let f4 = T::from_int(4 * j) * x;
    let r = T::from_int(2 * (2 * j + 1)) * x;
    let q = T::from_int(2 * (2 * j + 3)) * x;
    let (s2x, c2x) = (T::two() * x).sin_cos();
    Mat3([
        [cos2y, sin2y * f4.sin(), -sin2y * f4.cos()],
        [
            sin2y * s2x,
            c2 * r.cos() + s2 * q.cos(),
            c2 * r.sin() + s2 * q.sin(),
        ],
        [
            sin2y * c2x,
            -c2 * r.sin() + s2 * q.sin(),
            c2 * r.cos() - s2 * q.cos(),
        ],
    ])
}

/// `(p, V)` of the Euler image of `φ(x, y)` on S³(2).
pub fn correspondence_point<T: Real>(
    params: &LawsonParams<T>,
    x: T,
    y: T,
) -> Result<TangentElement<T>> {
    params.require_euler_radius()?;
    if (T::two() * y).sin().abs() <= T::lit(1e-12) {
        return Err(Error::Singularity {
            latitude: (T::FRAC_PI_2() - T::two() * y).to_f64_lossy(),
        });
    }
    extract_section(&euler_phi(&immerse(params, x, y)?)?)
}

/// Which half `y > 0` or `y < 0` of the parameter domain feeds a field.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Upper,
    Lower,
}

/// The unit field on `S² ∖ {N, S}` read off the Euler image of a Lawson
/// surface, in the relabeled chart (Euler poles moved to the z axis).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrespondenceField<T> {
    pub params: LawsonParams<T>,
    pub branch: Branch,
}

impl<T: Real> CorrespondenceField<T> {
    pub fn new(params: LawsonParams<T>, branch: Branch) -> Result<Self> {
        params.require_euler_radius()?;
        if params.freq_cos() == params.freq_sin() {
            return Err(Error::Family(
                "equal frequencies give a constant base point".into(),
            ));
        }
        Ok(Self { params, branch })
    }

    /// A parameter `(x, y)` on this branch over the chart point `(α, t)`.
    pub fn preimage(&self, p: &SpherePoint2<T>) -> (T, T) {
        let d = T::from_int(self.params.freq_cos() - self.params.freq_sin());
        let colat = T::FRAC_PI_2() - p.latitude();
        let t = p.longitude();
        match self.branch {
            Branch::Upper => ((T::FRAC_PI_2() - t) / d, colat * T::half()),
            Branch::Lower => ((T::lit(1.5) * T::PI() - t) / d, -colat * T::half()),
        }
    }

    pub fn element_at(&self, p: &SpherePoint2<T>) -> Result<TangentElement<T>> {
        let (x, y) = self.preimage(p);
        let e = correspondence_point(&self.params, x, y)?;
        let base = relabel_axes(&e.base());
        let miss = (base - p.vector()).max_abs();
        if !(miss <= T::lit(1e-9)) {
            return Err(Error::Domain(format!(
                "preimage of chart point misses by {miss}"
            )));
        }
        TangentElement::new(p.vector(), relabel_axes(&e.vector()))
    }
}

impl<T: Real> UnitVectorField<T> for CorrespondenceField<T> {
    fn vector_at(&self, p: &SpherePoint2<T>) -> Result<Vec3<T>> {
        Ok(self.element_at(p)?.vector())
    }
}

/// Linear fit of the frame angle of the correspondence field along a
/// coordinate curve `y = y0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngleSlope<T> {
    /// `dψ/dt` in the chart longitude.
    pub slope_longitude: T,
    /// `dψ/dx` in the surface parameter.
    pub slope_x: T,
    /// `ψ` at longitude 0 from the fit.
    pub intercept: T,
    pub residual: T,
    /// `slope_longitude + 1`, rounded.
    pub k: i64,
}

/// Residual above which [`extract_angle_slope`] rejects the fit.
pub const ANGLE_FIT_TOLERANCE: f64 = 1e-6;

/// Samples `correspondence_point` along `x ↦ (x, y0)` through one turn of
/// longitude, measures the angle of `V` against the chart frame
/// `(e1, e2)`, unwraps, and fits it against longitude and against `x`.
pub fn extract_angle_slope<T: Real>(
    params: &LawsonParams<T>,
    y0: T,
    sample_count: usize,
) -> Result<AngleSlope<T>> {
    params.require_euler_radius()?;
    if sample_count < 8 {
        return Err(Error::Domain("angle fit needs at least 8 samples".into()));
    }
    let d = params.freq_cos() - params.freq_sin();
    if d == 0 {
        return Err(Error::Family(
            "equal frequencies give a constant base point".into(),
        ));
    }
    let span = T::TAU() / T::from_int(d.abs());
    let mut xs = Vec::with_capacity(sample_count);
    let mut lons = Vec::with_capacity(sample_count);
    let mut angles = Vec::with_capacity(sample_count);
    for i in 0..sample_count {
        let x = span * T::from_usize_lossy(i) / T::from_usize_lossy(sample_count);
        let e = correspondence_point(params, x, y0)?;
        let p = SpherePoint2::from_vector(relabel_axes(&e.base()))?;
        let (e1, e2) = p.frame()?;
        let v = relabel_axes(&e.vector());
        xs.push(x);
        lons.push(p.longitude());
        angles.push(v.dot(&e2).atan2(v.dot(&e1)));
    }
    let lons = unwrap_angles(&lons)?;
    let angles = unwrap_angles(&angles)?;
    let in_lon = fit_line(&lons, &angles)?;
    let in_x = fit_line(&xs, &angles)?;
    let residual = in_lon.residual.max(in_x.residual);
    if !(residual <= T::lit(ANGLE_FIT_TOLERANCE)) {
        return Err(Error::NotAngleLinear {
            residual: residual.to_f64_lossy(),
        });
    }
    let k = (in_lon.slope + T::one())
        .round()
        .to_i64()
        .unwrap_or(i64::MIN);
    Ok(AngleSlope {
        slope_longitude: in_lon.slope,
        slope_x: in_x.slope,
        intercept: in_lon.intercept,
        residual,
        k,
    })
}

/// Comparison of a correspondence field with a rotated `V_k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VkMatch<T> {
    pub k: i64,
    /// Longitude rotation `t0` with `V(p) = R_{t0} V_k(R_{t0}⁻¹ p)`.
    pub phase: T,
    pub defect: T,
}

/// Max pointwise distance between the upper correspondence field and
/// `V_k` rotated about the polar axis, over an interior chart grid.
pub fn correspondence_vk_defect<T: Real>(
    params: &LawsonParams<T>,
    grid: usize,
) -> Result<VkMatch<T>> {
    let slope = extract_angle_slope(params, T::lit(0.4), 256)?;
    let k = slope.k;
    if k == 1 {
        return Err(Error::Family("k = 1 has no longitude phase".into()));
    }
    let phase = (T::FRAC_PI_2() - slope.intercept) / T::from_int(k - 1);
    let field = CorrespondenceField::new(*params, Branch::Upper)?;
    let (sp, cp) = phase.sin_cos();
    let rot = |v: Vec3<T>, s: T| Vec3::new(cp * v[0] - s * v[1], s * v[0] + cp * v[1], v[2]);
    let mut defect = T::zero();
    let margin = T::lit(0.05);
    for i in 0..grid {
        let alpha = -T::FRAC_PI_2()
            + margin
            + (T::PI() - T::two() * margin) * T::from_usize_lossy(i)
                / T::from_usize_lossy(grid - 1);
        for j in 0..grid {
            let t = T::TAU() * T::from_usize_lossy(j) / T::from_usize_lossy(grid);
            let p = SpherePoint2::from_latlon(alpha, t)?;
            let ours = field.vector_at(&p)?;
            let back = SpherePoint2::from_vector(rot(p.vector(), -sp))?;
            let theirs = rot(vk_at(k, &back)?.vector(), sp);
            defect = defect.max((ours - theirs).max_abs());
        }
    }
    Ok(VkMatch { k, phase, defect })
}

/// One generated identification `A1 ↦ A2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Identification<T> {
    pub k1: i64,
    pub k2: i64,
    pub a2: (T, T),
    /// `+1` when `V(A2) = V(A1)` is expected, `−1` for `V(A2) = −V(A1)`.
    pub sign: i32,
    pub p_defect: T,
    pub v_defect: T,
}

/// Range of `k₁`, `k₂` scanned by [`parameter_identifications`].
pub const IDENTIFICATION_RANGE: i64 = 2;

/// Tolerance of [`parameter_identifications`].
pub const IDENTIFICATION_TOLERANCE: f64 = 1e-10;

/// Map `(A1, k₁, k₂) ↦ A2` generating one family of identifications.
pub type Generator<T> = fn((T, T), i64, i64) -> (T, T);

/// Corrected consecutive-family identification:
/// `A2 = (x + (2k₂ + 1)π, k₁π − y)`.
pub fn consecutive_a2<T: Real>(a1: (T, T), k1: i64, k2: i64) -> (T, T) {
    (
        a1.0 + T::from_int(2 * k2 + 1) * T::PI(),
        T::from_int(k1) * T::PI() - a1.1,
    )
}

/// The consecutive-family identification with the coordinates as printed,
/// `A2 = (k₁π − y, x + (2k₂ + 1)π)`.
pub fn consecutive_a2_as_printed<T: Real>(a1: (T, T), k1: i64, k2: i64) -> (T, T) {
    (
        T::from_int(k1) * T::PI() - a1.1,
        a1.0 + T::from_int(2 * k2 + 1) * T::PI(),
    )
}

/// Odd-family identification `A2 = ((2k₁ + 1)π/2 + x, k₂π − y)`.
pub fn odd_a2<T: Real>(a1: (T, T), k1: i64, k2: i64) -> (T, T) {
    (
        T::from_int(2 * k1 + 1) * T::FRAC_PI_2() + a1.0,
        T::from_int(k2) * T::PI() - a1.1,
    )
}

/// Compares the Euler images at `A1` and `A2` (reduced into `D`), expecting
/// the same base point and the vector multiplied by `sign`.
pub fn compare_identified<T: Real>(
    params: &LawsonParams<T>,
    a1: (T, T),
    a2: (T, T),
    sign: i32,
) -> Result<(T, T)> {
    let a2 = (wrap_fundamental(a2.0), wrap_fundamental(a2.1));
    let e1 = correspondence_point(params, a1.0, a1.1)?;
    let e2 = correspondence_point(params, a2.0, a2.1)?;
    let s = T::from_int(sign as i64);
    let p = (e1.base() - e2.base()).max_abs();
    let v = (e1.vector().scale(s) - e2.vector()).max_abs();
    Ok((p, v))
}

/// All identifications with `|k₁|, |k₂| ≤ 2` for a consecutive or odd
/// surface, each verified on the Euler image.
pub fn parameter_identifications<T: Real>(
    params: &LawsonParams<T>,
    a1: (T, T),
) -> Result<Vec<Identification<T>>> {
    let (generator, sign): (Generator<T>, i32) = match params.family {
        Family::Consecutive(_) => (consecutive_a2, 1),
        Family::Odd(_) => (odd_a2, -1),
        Family::General => {
            return Err(Error::Family(format!(
                "τ_{{{},{}}} has no identification list",
                params.n, params.m
            )))
        }
    };
    let tol = T::lit(IDENTIFICATION_TOLERANCE);
    let mut out = Vec::new();
    for k1 in -IDENTIFICATION_RANGE..=IDENTIFICATION_RANGE {
        for k2 in -IDENTIFICATION_RANGE..=IDENTIFICATION_RANGE {
            let raw = generator(a1, k1, k2);
            let a2 = (wrap_fundamental(raw.0), wrap_fundamental(raw.1));
            let (p_defect, v_defect) = compare_identified(params, a1, a2, sign)?;
            if !(p_defect <= tol && v_defect <= tol) {
                return Err(Error::Identification {
                    k1,
                    k2,
                    p_defect: p_defect.to_f64_lossy(),
                    v_defect: v_defect.to_f64_lossy(),
                });
            }
            out.push(Identification {
                k1,
                k2,
                a2,
                sign,
                p_defect,
                v_defect,
            });
        }
    }
    Ok(out)
}

/// Outcome of matching samples of `D` against `G` on the odd family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoverReport<T> {
    pub samples: usize,
    pub max_distance: T,
}

/// Tolerance of [`domain_cover_check`].
pub const COVER_TOLERANCE: f64 = 1e-10;

/// Partner in `G` of a point of `D`: itself when already in `G`, otherwise
/// `(x ∓ π, y ∓ π)`.
pub fn cover_partner<T: Real>(x: T, y: T) -> (T, T) {
    let g = DomainRect::<T>::half();
    if g.contains(x, y) {
        return (x, y);
    }
    let pi = T::PI();
    let x2 = if x >= T::zero() { x - pi } else { x + pi };
    let y2 = if y > T::zero() { y - pi } else { y + pi };
    (x2, y2)
}

/// Every sample of `D` has a partner in `G` with the same image.
pub fn domain_cover_check<T: Real>(
    params: &LawsonParams<T>,
    samples: &[(T, T)],
) -> Result<CoverReport<T>> {
    if !matches!(params.family, Family::Odd(_)) {
        return Err(Error::Family(
            "domain cover applies to the odd family".into(),
        ));
    }
    let g = DomainRect::<T>::half();
    let tol = T::lit(COVER_TOLERANCE) * params.radius;
    let mut max_distance = T::zero();
    for &(x, y) in samples {
        let (x2, y2) = cover_partner(x, y);
        let distance = (phi_raw(params, x, y) - phi_raw(params, x2, y2)).norm();
        if !g.contains(x2, y2) || !(distance <= tol) {
            return Err(Error::Unmatched {
                x: x.to_f64_lossy(),
                y: y.to_f64_lossy(),
                distance: distance.to_f64_lossy(),
            });
        }
        max_distance = max_distance.max(distance);
    }
    Ok(CoverReport {
        samples: samples.len(),
        max_distance,
    })
}

/// Sign of a cylinder component.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CylinderSign {
    Plus,
    Minus,
}

/// Great circle `{R(cos u·e_i + sin u·e_j)}` in the plane of two axes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GreatCircle {
    pub axes: (usize, usize),
}

impl GreatCircle {
    pub fn point<T: Real>(&self, radius: T, u: T) -> Vec4<T> {
        let mut v = Vec4::zero();
        let (s, c) = u.sin_cos();
        v[self.axes.0] = radius * c;
        v[self.axes.1] = radius * s;
        v
    }

    /// Distance of `p` from the circle's plane plus its radial error.
    pub fn defect<T: Real>(&self, radius: T, p: &Vec4<T>) -> T {
        let mut off = T::zero();
        for i in 0..4 {
            if i != self.axes.0 && i != self.axes.1 {
                off = off.max(p[i].abs());
            }
        }
        let (a, b) = (p[self.axes.0], p[self.axes.1]);
        off.max(((a * a + b * b).sqrt() - radius).abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CylinderComponent<T> {
    pub sign: CylinderSign,
    pub params: LawsonParams<T>,
    pub domain: DomainRect<T>,
    /// Circle containing the `y = 0` boundary.
    pub inner: GreatCircle,
    /// Circle containing the `y = ±π/2` boundary.
    pub outer: GreatCircle,
}

/// Measured certificates of a cylinder decomposition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CylinderCertificate<T> {
    pub boundary_defect: T,
    pub circle_distance: T,
    pub base_defect: T,
    pub flip_defect: T,
}

/// `C⁺ = φ([−π, π] × [0, π/2])` and `C⁻ = φ([−π, π] × [−π/2, 0])`.
pub fn cylinder_decomposition<T: Real>(
    params: &LawsonParams<T>,
) -> Result<(CylinderComponent<T>, CylinderComponent<T>)> {
    if !matches!(params.family, Family::Odd(_)) {
        return Err(Error::Family("cylinders apply to the odd family".into()));
    }
    params.require_euler_radius()?;
    let make = |sign, domain| CylinderComponent {
        sign,
        params: *params,
        domain,
        inner: GreatCircle { axes: (0, 1) },
        outer: GreatCircle { axes: (2, 3) },
    };
    Ok((
        make(CylinderSign::Plus, DomainRect::upper()),
        make(CylinderSign::Minus, DomainRect::lower()),
    ))
}

/// Checks both components on `samples` points per boundary and interior
/// direction.
pub fn certify_cylinders<T: Real>(
    plus: &CylinderComponent<T>,
    minus: &CylinderComponent<T>,
    samples: usize,
) -> Result<CylinderCertificate<T>> {
    let params = &plus.params;
    let r = params.radius;
    let mut boundary_defect = T::zero();
    for c in [plus, minus] {
        for x in sample_grid(c.domain.x.0, c.domain.x.1, samples) {
            let inner_y = if c.sign == CylinderSign::Plus {
                c.domain.y.0
            } else {
                c.domain.y.1
            };
            let outer_y = if c.sign == CylinderSign::Plus {
                c.domain.y.1
            } else {
                c.domain.y.0
            };
            boundary_defect = boundary_defect
                .max(c.inner.defect(r, &phi_raw(params, x, inner_y)))
                .max(c.outer.defect(r, &phi_raw(params, x, outer_y)));
        }
    }
    let mut circle_distance = T::infinity();
    for u in sample_grid(-T::PI(), T::PI(), samples) {
        for v in sample_grid(-T::PI(), T::PI(), samples) {
            let a = Sphere3Point::new(plus.inner.point(r, u), r)?;
            let b = Sphere3Point::new(plus.outer.point(r, v), r)?;
            circle_distance = circle_distance.min(a.geodesic_distance(&b));
        }
    }
    let mut base_defect = T::zero();
    let mut flip_defect = T::zero();
    let margin = T::lit(0.05);
    for x in sample_grid(-T::PI(), T::PI(), samples) {
        for y in sample_grid(margin, T::FRAC_PI_2() - margin, samples) {
            for k1 in [-1, 0] {
                let (p, v) = compare_identified(params, (x, y), odd_a2((x, y), k1, 0), -1)?;
                base_defect = base_defect.max(p);
                flip_defect = flip_defect.max(v);
            }
        }
    }
    Ok(CylinderCertificate {
        boundary_defect,
        circle_distance,
        base_defect,
        flip_defect,
    })
}

/// Inverse of the chart relabeling applied to a field vector.
pub fn to_euler_chart<T: Real>(v: &Vec3<T>) -> Vec3<T> {
    unrelabel_axes(v)
}
