//! The unit fields `V_k = cos θ_k e1 + sin θ_k e2` on `S² ∖ {N, S}` with
//! `θ_k = (k − 1)t + π/2`, their geodesic curvatures and Sasaki volumes.

use crate::error::{Error, Result};
use crate::linalg::Vec3;
use crate::numerics::{integrate_1d, integrate_2d, FiniteDiffSpec, QuadratureSpec, Rect};
use crate::scalar::Real;
use crate::spheres::SpherePoint2;
use crate::unit_tangent::{poincare_index_default, TangentElement, UnitVectorField};

/// `θ_k(t) = (k − 1)t + π/2`, not reduced.
pub fn theta_k<T: Real>(k: i64, t: T) -> T {
    T::from_int(k - 1) * t + T::FRAC_PI_2()
}

/// An angle function `θ(α, t)` measured from `e1` towards `e2`.
pub trait AngleFunction<T: Real> {
    fn theta(&self, alpha: T, t: T) -> T;
    fn dtheta_dt(&self, alpha: T, t: T) -> T;
    fn dtheta_dalpha(&self, alpha: T, t: T) -> T;

    /// `(dθ(e1), dθ(e2)) = (∂_t θ / cos α, ∂_α θ)`.
    fn dtheta_frame(&self, p: &SpherePoint2<T>) -> Result<(T, T)> {
        if p.is_pole() {
            return Err(Error::Singularity {
                latitude: p.latitude().to_f64_lossy(),
            });
        }
        let (a, t) = (p.latitude(), p.longitude());
        Ok((self.dtheta_dt(a, t) / a.cos(), self.dtheta_dalpha(a, t)))
    }

    fn element_at(&self, p: &SpherePoint2<T>) -> Result<TangentElement<T>> {
        let (e1, e2) = p.frame()?;
        let (s, c) = self.theta(p.latitude(), p.longitude()).sin_cos();
        TangentElement::project(p.vector(), e1.scale(c) + e2.scale(s))
    }
}

/// The angle function `θ_k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AngleField {
    pub k: i64,
}

impl AngleField {
    pub fn new(k: i64) -> Self {
        Self { k }
    }
}

impl<T: Real> AngleFunction<T> for AngleField {
    fn theta(&self, _alpha: T, t: T) -> T {
        theta_k(self.k, t)
    }

    fn dtheta_dt(&self, _alpha: T, _t: T) -> T {
        T::from_int(self.k - 1)
    }

    fn dtheta_dalpha(&self, _alpha: T, _t: T) -> T {
        T::zero()
    }
}

/// One term `c · cos α · trig_a(lα) · trig_t(jt)` of a perturbation, with the
/// `cos α` factor keeping the poles fixed. `sine_*` selects sin over cos.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerturbationMode<T> {
    pub coefficient: T,
    pub alpha_freq: u32,
    pub sine_alpha: bool,
    pub t_freq: u32,
    pub sine_t: bool,
}

fn trig<T: Real>(sine: bool, x: T) -> (T, T) {
    let (s, c) = x.sin_cos();
    if sine {
        (s, c)
    } else {
        (c, -s)
    }
}

impl<T: Real> PerturbationMode<T> {
    /// `(f, ∂_α f, ∂_t f)`.
    fn eval(&self, alpha: T, t: T) -> (T, T, T) {
        let la = T::from_usize_lossy(self.alpha_freq as usize);
        let jt = T::from_usize_lossy(self.t_freq as usize);
        let (ga, dga) = trig(self.sine_alpha, la * alpha);
        let (gt, dgt) = trig(self.sine_t, jt * t);
        let (sa, ca) = alpha.sin_cos();
        let c = self.coefficient;
        let f = c * ca * ga * gt;
        let fa = c * (-sa * ga + ca * la * dga) * gt;
        let ft = c * ca * ga * jt * dgt;
        (f, fa, ft)
    }
}

/// `θ_k + ε·Σ modes`: an index-preserving deformation of `θ_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct PerturbedAngleField<T> {
    pub base: AngleField,
    pub amplitude: T,
    pub modes: Vec<PerturbationMode<T>>,
}

impl<T: Real> PerturbedAngleField<T> {
    pub fn new(k: i64, amplitude: T, modes: Vec<PerturbationMode<T>>) -> Self {
        Self {
            base: AngleField::new(k),
            amplitude,
            modes,
        }
    }

    fn sum(&self, alpha: T, t: T) -> (T, T, T) {
        self.modes
            .iter()
            .fold((T::zero(), T::zero(), T::zero()), |acc, m| {
                let (f, fa, ft) = m.eval(alpha, t);
                (acc.0 + f, acc.1 + fa, acc.2 + ft)
            })
    }
}

impl<T: Real> AngleFunction<T> for PerturbedAngleField<T> {
    fn theta(&self, alpha: T, t: T) -> T {
        self.base.theta(alpha, t) + self.amplitude * self.sum(alpha, t).0
    }

    fn dtheta_dt(&self, alpha: T, t: T) -> T {
        AngleFunction::<T>::dtheta_dt(&self.base, alpha, t) + self.amplitude * self.sum(alpha, t).2
    }

    fn dtheta_dalpha(&self, alpha: T, t: T) -> T {
        self.amplitude * self.sum(alpha, t).1
    }
}

/// Unit field `p ↦ cos θ e1 + sin θ e2` of an angle function.
#[derive(Debug, Clone, Copy)]
pub struct FieldOf<'a, A>(pub &'a A);

impl<T: Real, A: AngleFunction<T>> UnitVectorField<T> for FieldOf<'_, A> {
    fn vector_at(&self, p: &SpherePoint2<T>) -> Result<Vec3<T>> {
        Ok(self.0.element_at(p)?.vector())
    }
}

/// `(p, V_k(p))`.
pub fn vk_at<T: Real>(k: i64, p: &SpherePoint2<T>) -> Result<TangentElement<T>> {
    AngleField::new(k).element_at(p)
}

/// `(dθ_k(e1), dθ_k(e2)) = ((k − 1)/cos α, 0)`.
pub fn dtheta_along_frame<T: Real>(k: i64, p: &SpherePoint2<T>) -> Result<(T, T)> {
    AngleField::new(k).dtheta_frame(p)
}

/// `(dθ(e1), dθ(e2))` by central differences of `θ` along the parallel and
/// the meridian through `p`.
pub fn dtheta_fd<T: Real>(
    theta: impl Fn(T, T) -> T,
    p: &SpherePoint2<T>,
    fd: &FiniteDiffSpec<T>,
) -> Result<(T, T)> {
    if p.is_pole() {
        return Err(Error::Singularity {
            latitude: p.latitude().to_f64_lossy(),
        });
    }
    let (a, t) = (p.latitude(), p.longitude());
    let dt = crate::numerics::derivative(|s| theta(a, s), t, fd);
    let da = crate::numerics::derivative(|s| theta(s, t), a, fd);
    Ok((dt / a.cos(), da))
}

/// Geodesic curvatures of the integral curves of `V` and of `V⊥`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvaturePair<T> {
    pub gamma: T,
    pub delta: T,
}

impl<T: Real> CurvaturePair<T> {
    /// `1 + γ² + δ²`.
    pub fn integrand(&self) -> T {
        T::one() + self.gamma * self.gamma + self.delta * self.delta
    }
}

/// `1 + (tan α + dθ(e1))² + dθ(e2)²`.
pub fn volume_integrand<T: Real>(alpha: T, de1: T, de2: T) -> T {
    let a = alpha.tan() + de1;
    T::one() + a * a + de2 * de2
}

/// `(γ, δ)` of an angle function at `p`.
pub fn curvatures_of<T: Real>(
    field: &impl AngleFunction<T>,
    p: &SpherePoint2<T>,
) -> Result<CurvaturePair<T>> {
    let (de1, de2) = field.dtheta_frame(p)?;
    let (s, c) = field.theta(p.latitude(), p.longitude()).sin_cos();
    let a = p.latitude().tan() + de1;
    Ok(CurvaturePair {
        gamma: c * a + s * de2,
        delta: s * a - c * de2,
    })
}

/// `(γ, δ)` of `V_k` at `p`.
pub fn geodesic_curvatures<T: Real>(k: i64, p: &SpherePoint2<T>) -> Result<CurvaturePair<T>> {
    curvatures_of(&AngleField::new(k), p)
}

/// `4 ∫_0^{π/2} √((k−2)² + 4(k−1) sin² t) dt`: perimeter of the ellipse with
/// semi-axes `|k|` and `|k − 2|`.
pub fn ellipse_length<T: Real>(k: i64, spec: QuadratureSpec) -> Result<T> {
    let a = T::from_int(k - 2);
    let b = T::lit(4.0) * T::from_int(k - 1);
    let i = integrate_1d(
        |t: T| {
            let s = t.sin();
            (a * a + b * s * s).max(T::zero()).sqrt()
        },
        T::zero(),
        T::FRAC_PI_2(),
        spec,
    )?;
    Ok(T::lit(4.0) * i)
}

/// `vol(V_k)` after the exact `t`-integration:
/// `2π ∫_{−π/2}^{π/2} √(1 + (k−1)² + 2(k−1) sin α) dα`.
pub fn volume_vk<T: Real>(k: i64, spec: QuadratureSpec) -> Result<T> {
    let m = T::from_int(k - 1);
    let i = integrate_1d(
        |a: T| {
            (T::one() + m * m + T::two() * m * a.sin())
                .max(T::zero())
                .sqrt()
        },
        -T::FRAC_PI_2(),
        T::FRAC_PI_2(),
        spec,
    )?;
    Ok(T::TAU() * i)
}

/// Chart rectangle `(α, t) ∈ [−π/2, π/2] × [0, 2π]`.
pub fn chart_rect<T: Real>() -> Rect<T> {
    Rect::new(-T::FRAC_PI_2(), T::FRAC_PI_2(), T::zero(), T::TAU())
}

/// Volume of the field of an angle function, from the analytic density
/// `√(cos²α + (sin α + ∂_tθ)² + cos²α (∂_αθ)²)` on the chart.
pub fn volume_of_angle_field<T: Real>(
    field: &impl AngleFunction<T>,
    spec_alpha: QuadratureSpec,
    spec_t: QuadratureSpec,
) -> Result<T> {
    integrate_2d(
        |a, t| {
            let (sa, ca) = a.sin_cos();
            let u = sa + field.dtheta_dt(a, t);
            let w = ca * field.dtheta_dalpha(a, t);
            (ca * ca + u * u + w * w).sqrt()
        },
        chart_rect(),
        spec_alpha,
        spec_t,
    )
}

/// Volume of an arbitrary unit field `V`, with `∂_t V`, `∂_α V` by finite
/// differences: `∫ √(cos²α + |P∂_tV|² + cos²α |P∂_αV|²) dα dt` where `P`
/// projects onto `T_pS²`. Stencils near the poles shrink to stay inside
/// the chart.
pub fn volume_of_field<T: Real>(
    field: &impl UnitVectorField<T>,
    spec_alpha: QuadratureSpec,
    spec_t: QuadratureSpec,
    fd: &FiniteDiffSpec<T>,
) -> Result<T> {
    let at = |a: T, t: T| -> Result<Vec3<T>> { field.vector_at(&SpherePoint2::from_latlon(a, t)?) };
    let failure = std::cell::RefCell::new(None);
    let value = integrate_2d(
        |a: T, t: T| {
            let eval = || -> Result<T> {
                let p = SpherePoint2::from_latlon(a, t)?.vector();
                let ha = fd.step().min((T::FRAC_PI_2() - a.abs()) * T::half());
                let proj = |d: Vec3<T>| d - p.scale(p.dot(&d));
                let inv_t = T::one() / (T::two() * fd.step());
                let inv_a = T::one() / (T::two() * ha);
                let dt = proj((at(a, t + fd.step())? - at(a, t - fd.step())?).scale(inv_t));
                let da = proj((at(a + ha, t)? - at(a - ha, t)?).scale(inv_a));
                let ca = a.cos();
                Ok((ca * ca + dt.norm_squared() + ca * ca * da.norm_squared()).sqrt())
            };
            match eval() {
                Ok(v) => v,
                Err(e) => {
                    failure.borrow_mut().get_or_insert(e);
                    T::nan()
                }
            }
        },
        chart_rect(),
        spec_alpha,
        spec_t,
    );
    match (failure.into_inner(), value) {
        (Some(e), _) => Err(e),
        (None, v) => v,
    }
}

/// Outcome of comparing a field's volume against `π L(ε_k)`.
#[derive(Debug, Clone, PartialEq)]
pub enum BoundStatus {
    /// Volume and bound were compared; `pass` iff `volume ≥ bound − tolerance`.
    Applicable { pass: bool },
    /// The field's indices are not `{k, 2 − k}` at `{N, S}`.
    Inapplicable { index_n: i64, index_s: i64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport<T> {
    pub k: i64,
    pub volume: T,
    pub bound: T,
    pub tolerance: T,
    pub status: BoundStatus,
}

impl<T: Real> BoundReport<T> {
    /// `volume − bound`.
    pub fn excess(&self) -> T {
        self.volume - self.bound
    }

    pub fn passed(&self) -> bool {
        matches!(self.status, BoundStatus::Applicable { pass: true })
    }
}

/// Checks `vol(V) ≥ π L(ε_k) − tolerance` for a field of index class `k`.
pub fn bound_check<T: Real>(
    field: &impl AngleFunction<T>,
    k: i64,
    tolerance: T,
    spec_alpha: QuadratureSpec,
    spec_t: QuadratureSpec,
) -> Result<BoundReport<T>> {
    if k == 0 || k == 2 {
        return Err(Error::Domain(format!(
            "the volume bound needs k ∉ {{0, 2}}, got {k}"
        )));
    }
    let bound = T::PI() * ellipse_length::<T>(k, spec_alpha)?;
    let vectors = FieldOf(field);
    let index_n = poincare_index_default(&vectors, &SpherePoint2::north())?;
    let index_s = poincare_index_default(&vectors, &SpherePoint2::south())?;
    if index_n != k || index_s != 2 - k {
        return Ok(BoundReport {
            k,
            volume: T::nan(),
            bound,
            tolerance,
            status: BoundStatus::Inapplicable { index_n, index_s },
        });
    }
    let volume = volume_of_angle_field(field, spec_alpha, spec_t)?;
    Ok(BoundReport {
        k,
        volume,
        bound,
        tolerance,
        status: BoundStatus::Applicable {
            pass: volume >= bound - tolerance,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, PI};

    fn q(n: usize) -> QuadratureSpec {
        QuadratureSpec::new(n).unwrap()
    }

    #[test]
    fn theta_examples() {
        assert_eq!(theta_k(1, 0.77_f64), FRAC_PI_2);
        assert!((theta_k(3, PI) - (2.0 * PI + FRAC_PI_2)).abs() < 1e-15);
        assert!(theta_k(0, FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn vk_examples() {
        let p = SpherePoint2::from_latlon(0.4, 1.1).unwrap();
        let (_, e2) = p.frame().unwrap();
        assert!((vk_at(1, &p).unwrap().vector() - e2).max_abs() < 1e-15);
        let p0 = SpherePoint2::from_latlon(0.0, 0.0).unwrap();
        let (e1, e2) = p0.frame().unwrap();
        assert!((vk_at(3, &p0).unwrap().vector() - e2).max_abs() < 1e-15);
        let p1 = SpherePoint2::from_latlon(0.0, FRAC_PI_4).unwrap();
        let (e1b, _) = p1.frame().unwrap();
        assert!((vk_at(3, &p1).unwrap().vector() + e1b).max_abs() < 1e-15);
        assert!(e1.norm() > 0.0);
        assert!(vk_at(3, &SpherePoint2::<f64>::north()).is_err());
    }

    #[test]
    fn dtheta_examples() {
        let p = SpherePoint2::from_latlon(0.0, 0.3).unwrap();
        assert_eq!(dtheta_along_frame(1, &p).unwrap(), (0.0, 0.0));
        assert_eq!(dtheta_along_frame(3, &p).unwrap(), (2.0, 0.0));
        let p = SpherePoint2::from_latlon(FRAC_PI_3, 2.0).unwrap();
        let (d1, d2) = dtheta_along_frame(4, &p).unwrap();
        assert!((d1 - 6.0).abs() < 1e-12 && d2 == 0.0);
        let fd = FiniteDiffSpec::default();
        let (f1, f2) = dtheta_fd(|_a, t| theta_k(4, t), &p, &fd).unwrap();
        assert!((f1 - 6.0).abs() < 1e-8 && f2.abs() < 1e-8);
    }

    #[test]
    fn curvature_examples() {
        let p = SpherePoint2::from_latlon(0.5_f64, 1.0).unwrap();
        let c = geodesic_curvatures(1, &p).unwrap();
        assert!(c.gamma.abs() < 1e-15 && (c.delta - 0.5_f64.tan()).abs() < 1e-15);
        let p0 = SpherePoint2::from_latlon(0.0_f64, 0.0).unwrap();
        for k in [-2, 1, 3, 7] {
            let c = geodesic_curvatures(k, &p0).unwrap();
            assert!(c.gamma.abs() < 1e-14);
            assert!((c.delta - (k - 1) as f64).abs() < 1e-14);
        }
    }

    #[test]
    fn ellipse_circle() {
        let l = ellipse_length::<f64>(1, q(64)).unwrap();
        assert!((l - 2.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn volume_of_meridian_field() {
        let v = volume_vk::<f64>(1, q(64)).unwrap();
        assert!((v - 2.0 * PI * PI).abs() < 1e-12);
    }

    #[test]
    fn bound_refuses_excluded_classes() {
        assert!(bound_check(&AngleField::new(2), 2, 1e-9, q(32), q(32)).is_err());
        assert!(bound_check(&AngleField::new(0), 0, 1e-9, q(32), q(32)).is_err());
    }

    #[test]
    fn bound_flags_index_mismatch() {
        let r = bound_check(&AngleField::new(4), 3, 1e-9, q(32), q(32)).unwrap();
        assert_eq!(
            r.status,
            BoundStatus::Inapplicable {
                index_n: 4,
                index_s: -2
            }
        );
    }
}
