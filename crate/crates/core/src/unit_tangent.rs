//! The unit tangent bundle T¹S² with its Sasaki metric, the map
//! `ψ(p, V) = (p, V, p × V)` into SO(3), and Poincaré indices of unit fields.

use crate::error::{Error, Result};
use crate::linalg::{Mat3, Vec3};
use crate::numerics::unwrap_angles;
use crate::scalar::Real;
use crate::spheres::{Rotation3, SpherePoint2};

/// A point `p ∈ S²` with a unit tangent vector `V` at `p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TangentElement<T> {
    p: Vec3<T>,
    v: Vec3<T>,
}

impl<T: Real> TangentElement<T> {
    /// `|p| = |V| = 1` and `p·V = 0`, each within [`Real::invariant_tol`].
    pub fn new(p: Vec3<T>, v: Vec3<T>) -> Result<Self> {
        let tol = T::invariant_tol();
        let dp = (p.norm() - T::one()).abs();
        let dv = (v.norm() - T::one()).abs();
        let ortho = p.dot(&v).abs();
        if !(dp <= tol && dv <= tol && ortho <= tol) {
            return Err(Error::Domain(format!(
                "not a unit tangent element: | |p|-1 | = {dp}, | |V|-1 | = {dv}, |p·V| = {ortho}"
            )));
        }
        Ok(Self { p, v })
    }

    /// Normalizes `p`, projects `V` onto the tangent plane and normalizes it.
    pub fn project(p: Vec3<T>, v: Vec3<T>) -> Result<Self> {
        let p = p
            .normalized()
            .ok_or_else(|| Error::Domain("zero base point".into()))?;
        let v = (v - p.scale(p.dot(&v)))
            .normalized()
            .ok_or_else(|| Error::Domain("vector normal to the sphere".into()))?;
        Ok(Self { p, v })
    }

    pub fn base(&self) -> Vec3<T> {
        self.p
    }

    pub fn vector(&self) -> Vec3<T> {
        self.v
    }

    pub fn point(&self) -> Result<SpherePoint2<T>> {
        SpherePoint2::from_vector(self.p)
    }

    /// `p × V`, the vector `V` rotated by a quarter turn.
    pub fn orthogonal(&self) -> Vec3<T> {
        self.p.cross(&self.v)
    }

    pub fn negated(&self) -> Self {
        Self {
            p: self.p,
            v: -self.v,
        }
    }

    /// Largest componentwise difference in base point and in vector.
    pub fn max_abs_diff(&self, other: &Self) -> (T, T) {
        ((self.p - other.p).max_abs(), (self.v - other.v).max_abs())
    }
}

/// Samples of a curve `t ↦ (p(t), V(t))` on a uniform parameter grid.
#[derive(Debug, Clone, PartialEq)]
pub struct BundleCurveSample<T> {
    ts: Vec<T>,
    elements: Vec<TangentElement<T>>,
}

impl<T: Real> BundleCurveSample<T> {
    pub fn new(ts: Vec<T>, elements: Vec<TangentElement<T>>) -> Result<Self> {
        if ts.len() != elements.len() || ts.len() < 2 {
            return Err(Error::Domain(format!(
                "curve needs matching grids of at least 2 samples ({} vs {})",
                ts.len(),
                elements.len()
            )));
        }
        let h = ts[1] - ts[0];
        if !(h > T::zero()) {
            return Err(Error::Domain("parameter grid must increase".into()));
        }
        let slack = h * T::lit(1e-8).max(T::epsilon() * T::lit(64.0));
        for w in ts.windows(2) {
            if !((w[1] - w[0] - h).abs() <= slack) {
                return Err(Error::Domain("parameter grid is not uniform".into()));
            }
        }
        Ok(Self { ts, elements })
    }

    /// `count` samples of `f` on `[t0, t1]`.
    pub fn from_fn(
        t0: T,
        t1: T,
        count: usize,
        f: impl Fn(T) -> Result<TangentElement<T>>,
    ) -> Result<Self> {
        if count < 2 {
            return Err(Error::Domain("curve needs at least 2 samples".into()));
        }
        let h = (t1 - t0) / T::from_usize_lossy(count - 1);
        let ts: Vec<T> = (0..count)
            .map(|i| t0 + h * T::from_usize_lossy(i))
            .collect();
        let elements = ts.iter().map(|&t| f(t)).collect::<Result<Vec<_>>>()?;
        Self::new(ts, elements)
    }

    pub fn len(&self) -> usize {
        self.ts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ts.is_empty()
    }

    pub fn step(&self) -> T {
        self.ts[1] - self.ts[0]
    }

    pub fn params(&self) -> &[T] {
        &self.ts
    }

    pub fn elements(&self) -> &[TangentElement<T>] {
        &self.elements
    }

    fn central_neighbours(&self, index: usize) -> Result<(&TangentElement<T>, &TangentElement<T>)> {
        if index == 0 || index + 1 >= self.len() {
            return Err(Error::StencilOutOfRange {
                index,
                len: self.len(),
            });
        }
        Ok((&self.elements[index - 1], &self.elements[index + 1]))
    }
}

/// `ψ(p, V)`: the rotation with columns `p`, `V`, `p × V`.
pub fn psi<T: Real>(e: &TangentElement<T>) -> Rotation3<T> {
    Rotation3::from_matrix_unchecked(Mat3::from_columns(e.p, e.v, e.orthogonal()))
}

/// Sasaki energy `|p'|² + |∇V/dt|²` at an interior sample, with central
/// differences. `∇V/dt` is the tangential part of the ambient derivative.
pub fn sasaki_energy<T: Real>(c: &BundleCurveSample<T>, t_index: usize) -> Result<T> {
    let (before, after) = c.central_neighbours(t_index)?;
    let inv = T::one() / (T::two() * c.step());
    let dp = (after.p - before.p).scale(inv);
    let dv = (after.v - before.v).scale(inv);
    let p = c.elements[t_index].p;
    let cov = dv - p.scale(dv.dot(&p));
    Ok(dp.norm_squared() + cov.norm_squared())
}

/// `½ tr(Ψ'ᵀ Ψ')` for `Ψ = ψ ∘ curve`, with central differences.
pub fn psi_energy<T: Real>(c: &BundleCurveSample<T>, t_index: usize) -> Result<T> {
    let (before, after) = c.central_neighbours(t_index)?;
    let inv = T::one() / (T::two() * c.step());
    let d = psi(after).matrix().sub(psi(before).matrix()).scale(inv);
    Ok(T::half() * d.frobenius_dot(&d))
}

/// A unit tangent field on (part of) S².
pub trait UnitVectorField<T: Real> {
    fn vector_at(&self, p: &SpherePoint2<T>) -> Result<Vec3<T>>;
}

impl<T: Real, F> UnitVectorField<T> for F
where
    F: Fn(&SpherePoint2<T>) -> Result<Vec3<T>>,
{
    fn vector_at(&self, p: &SpherePoint2<T>) -> Result<Vec3<T>> {
        self(p)
    }
}

/// Loop colatitude used when none is given.
pub const DEFAULT_LOOP_COLATITUDE: f64 = 0.3;
/// Loop sample count used when none is given.
pub const DEFAULT_LOOP_SAMPLES: usize = 512;

/// Oriented orthonormal pair `(f1, f2)` with `f1 × f2 = c`.
pub fn tangent_basis<T: Real>(c: &Vec3<T>) -> (Vec3<T>, Vec3<T>) {
    let helper = if c[2].abs() < T::lit(0.9) {
        Vec3::unit_z()
    } else {
        Vec3::unit_x()
    };
    let f1 = (helper - c.scale(helper.dot(c)))
        .normalized()
        .expect("helper axis is not parallel to c");
    (f1, c.cross(&f1))
}

/// Winding number of `field` along the positively oriented circle at
/// geodesic distance `loop_colatitude` from `center`, measured in the
/// stereographic chart projecting from `-center`.
pub fn poincare_index<T: Real>(
    field: &impl UnitVectorField<T>,
    center: &SpherePoint2<T>,
    loop_colatitude: T,
    sample_count: usize,
) -> Result<i64> {
    if sample_count < 8 {
        return Err(Error::Domain(format!(
            "index loop needs at least 8 samples, got {sample_count}"
        )));
    }
    if !(loop_colatitude > T::zero() && loop_colatitude < T::PI()) {
        return Err(Error::Domain(format!(
            "loop colatitude {loop_colatitude} outside (0, π)"
        )));
    }
    let c = center.vector();
    let (f1, f2) = tangent_basis(&c);
    let (sb, cb) = loop_colatitude.sin_cos();
    let mut angles = Vec::with_capacity(sample_count + 1);
    for j in 0..=sample_count {
        let s =
            T::TAU() * T::from_usize_lossy(j % sample_count) / T::from_usize_lossy(sample_count);
        let (ss, cs) = s.sin_cos();
        let p = c.scale(cb) + (f1.scale(cs) + f2.scale(ss)).scale(sb);
        let point = SpherePoint2::from_vector(p)?;
        let v = field.vector_at(&point)?;
        let defect = (v.norm() - T::one()).abs();
        if !(defect <= T::lit(1e-10).max(T::invariant_tol())) {
            return Err(Error::Domain(format!(
                "field is not unit at sample {j}: | |V|-1 | = {defect}"
            )));
        }
        let d = T::one() + p.dot(&c);
        let chart = |f: &Vec3<T>| v.dot(f) / d - p.dot(f) * v.dot(&c) / (d * d);
        angles.push(chart(&f2).atan2(chart(&f1)));
    }
    let unwrapped = unwrap_angles(&angles)?;
    let turns = (unwrapped[sample_count] - unwrapped[0]) / T::TAU();
    Ok(turns.round().to_i64().unwrap_or(0))
}

/// [`poincare_index`] with the default loop.
pub fn poincare_index_default<T: Real>(
    field: &impl UnitVectorField<T>,
    center: &SpherePoint2<T>,
) -> Result<i64> {
    poincare_index(
        field,
        center,
        T::lit(DEFAULT_LOOP_COLATITUDE),
        DEFAULT_LOOP_SAMPLES,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(p: [f64; 3], v: [f64; 3]) -> TangentElement<f64> {
        TangentElement::new(Vec3(p), Vec3(v)).unwrap()
    }

    #[test]
    fn psi_examples() {
        let id = psi(&e([1.0, 0.0, 0.0], [0.0, 1.0, 0.0]));
        assert_eq!(*id.matrix(), Mat3::identity());
        let r = psi(&e([0.0, 0.0, 1.0], [1.0, 0.0, 0.0]));
        assert_eq!(r.column(0), Vec3::new(0.0, 0.0, 1.0));
        assert_eq!(r.column(1), Vec3::new(1.0, 0.0, 0.0));
        assert_eq!(r.column(2), Vec3::new(0.0, 1.0, 0.0));
    }

    #[test]
    fn rejects_non_tangent() {
        assert!(TangentElement::new(Vec3::new(1.0, 0.0, 0.0), Vec3::new(1.0, 0.0, 0.0)).is_err());
        assert!(TangentElement::new(Vec3::new(1.0, 0.0, 0.0), Vec3::new(0.0, 2.0, 0.0)).is_err());
    }

    #[test]
    fn parallel_transport_along_great_circle() {
        // Equator with V = north: V is parallel.
        let c = BundleCurveSample::from_fn(0.0, 0.01, 101, |t: f64| {
            TangentElement::new(Vec3::new(t.cos(), t.sin(), 0.0), Vec3::unit_z())
        })
        .unwrap();
        let energy = sasaki_energy(&c, 50).unwrap();
        assert!((energy - 1.0).abs() < 1e-6);
    }

    #[test]
    fn spinning_vector_at_fixed_point() {
        let w = 2.5;
        let c = BundleCurveSample::from_fn(0.0, 0.01, 1001, |t: f64| {
            let (s, co) = (w * t).sin_cos();
            TangentElement::new(Vec3::unit_z(), Vec3::new(co, s, 0.0))
        })
        .unwrap();
        let energy = sasaki_energy(&c, 500).unwrap();
        assert!((energy - w * w).abs() < 1e-6);
        assert!((psi_energy(&c, 500).unwrap() - w * w).abs() < 1e-6);
    }

    #[test]
    fn boundary_index_is_rejected() {
        let c = BundleCurveSample::from_fn(0.0, 1.0, 5, |_t: f64| {
            TangentElement::new(Vec3::unit_z(), Vec3::unit_x())
        })
        .unwrap();
        assert!(matches!(
            sasaki_energy(&c, 0),
            Err(Error::StencilOutOfRange { .. })
        ));
        assert!(matches!(
            sasaki_energy(&c, 4),
            Err(Error::StencilOutOfRange { .. })
        ));
    }

    #[test]
    fn index_of_simple_fields() {
        // Rotation field around the z axis has index 1 at both poles.
        let rot = |p: &SpherePoint2<f64>| -> Result<Vec3<f64>> {
            Vec3::unit_z()
                .cross(&p.vector())
                .normalized()
                .ok_or(Error::Domain("pole".into()))
        };
        assert_eq!(
            poincare_index_default(&rot, &SpherePoint2::north()).unwrap(),
            1
        );
        assert_eq!(
            poincare_index_default(&rot, &SpherePoint2::south()).unwrap(),
            1
        );
        // A constant-direction field has index 0 away from its zeros.
        let east = |p: &SpherePoint2<f64>| -> Result<Vec3<f64>> {
            let a = Vec3::unit_x();
            (a - p.vector().scale(a.dot(&p.vector())))
                .normalized()
                .ok_or(Error::Domain("zero".into()))
        };
        assert_eq!(
            poincare_index_default(&east, &SpherePoint2::north()).unwrap(),
            0
        );
    }

    #[test]
    fn undersampled_loop_is_detected() {
        let spin = |p: &SpherePoint2<f64>| -> Result<Vec3<f64>> {
            let (e1, e2) = p.frame()?;
            let th = 40.0 * p.longitude();
            Ok(e1.scale(th.cos()) + e2.scale(th.sin()))
        };
        let err = poincare_index(&spin, &SpherePoint2::north(), 0.3, 16).unwrap_err();
        assert!(matches!(err, Error::Undersampled { .. }));
    }
}
