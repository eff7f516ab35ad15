//! Deterministic quadrature, finite differences and angle sequences.
//!
//! Every reduction runs left to right over the nodes so results are
//! bit-reproducible for a fixed rule.

use std::ops::{Add, Mul, Sub};

use crate::error::{Error, Result};
use crate::scalar::{wrap_pi, Real};

/// Default node count for one-dimensional integrals.
pub const DEFAULT_NODES_1D: usize = 256;
/// Default node counts `(x, y)` for rectangle integrals.
pub const DEFAULT_NODES_2D: (usize, usize) = (256, 128);

/// Largest admissible step between consecutive raw angles after reduction.
pub const MAX_ANGLE_STEP: f64 = std::f64::consts::FRAC_PI_2;

/// Fixed Gauss–Legendre rule size.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadratureSpec {
    node_count: usize,
}

impl QuadratureSpec {
    pub fn new(node_count: usize) -> Result<Self> {
        if node_count < 2 {
            return Err(Error::Domain(format!(
                "quadrature needs at least 2 nodes, got {node_count}"
            )));
        }
        Ok(Self { node_count })
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn rule<T: Real>(&self) -> GaussLegendre<T> {
        GaussLegendre::new(self.node_count)
    }
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            node_count: DEFAULT_NODES_1D,
        }
    }
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`, ascending.
#[derive(Debug, Clone)]
pub struct GaussLegendre<T> {
    nodes: Vec<T>,
    weights: Vec<T>,
}

impl<T: Real> GaussLegendre<T> {
    /// Nodes by Newton iteration on `P_n`, mirrored so the rule is exactly
    /// symmetric.
    pub fn new(n: usize) -> Self {
        assert!(n >= 2, "Gauss-Legendre rule needs n >= 2");
        let mut nodes = vec![T::zero(); n];
        let mut weights = vec![T::zero(); n];
        let nf = T::from_usize_lossy(n);
        let tol = T::epsilon() * T::lit(4.0);
        for i in 0..n.div_ceil(2) {
            // i-th largest root
            let mut x =
                (T::PI() * (T::from_usize_lossy(i) + T::lit(0.75)) / (nf + T::half())).cos();
            let mut dp = T::one();
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x = x - dx;
                if dx.abs() <= tol {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d.is_finite() {
                dp = d;
            }
            let w = T::two() / ((T::one() - x * x) * dp * dp);
            nodes[n - 1 - i] = x;
            weights[n - 1 - i] = w;
            nodes[i] = -x;
            weights[i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = T::zero();
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[T] {
        &self.nodes
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    /// Nodes and weights mapped affinely to `[a, b]`.
    pub fn mapped(&self, a: T, b: T) -> impl Iterator<Item = (T, T)> + '_ {
        let half = (b - a) * T::half();
        let mid = (a + b) * T::half();
        self.nodes
            .iter()
            .zip(self.weights.iter())
            .map(move |(&x, &w)| (mid + half * x, half * w))
    }

    pub fn integrate(&self, f: impl Fn(T) -> T, a: T, b: T) -> Result<T> {
        let mut acc = T::zero();
        for (i, (x, w)) in self.mapped(a, b).enumerate() {
            let v = f(x);
            if !v.is_finite() {
                return Err(Error::NonFinite {
                    node: i,
                    at: x.to_f64_lossy(),
                });
            }
            acc = acc + w * v;
        }
        Ok(acc)
    }
}

fn legendre_with_derivative<T: Real>(n: usize, x: T) -> (T, T) {
    let mut p0 = T::one();
    let mut p1 = x;
    for k in 2..=n {
        let kf = T::from_usize_lossy(k);
        let p2 = ((T::two() * kf - T::one()) * x * p1 - (kf - T::one()) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let nf = T::from_usize_lossy(n);
    let d = nf * (x * p1 - p0) / (x * x - T::one());
    (p1, d)
}

/// Gauss–Legendre estimate of `∫_a^b f`.
pub fn integrate_1d<T: Real>(f: impl Fn(T) -> T, a: T, b: T, spec: QuadratureSpec) -> Result<T> {
    spec.rule().integrate(f, a, b)
}

/// Axis-aligned rectangle `[x0, x1] × [y0, y1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect<T> {
    pub x0: T,
    pub x1: T,
    pub y0: T,
    pub y1: T,
}

impl<T: Real> Rect<T> {
    pub fn new(x0: T, x1: T, y0: T, y1: T) -> Self {
        Self { x0, x1, y0, y1 }
    }

    pub fn area(&self) -> T {
        (self.x1 - self.x0) * (self.y1 - self.y0)
    }

    pub fn contains(&self, x: T, y: T) -> bool {
        x >= self.x0 && x <= self.x1 && y >= self.y0 && y <= self.y1
    }
}

/// Tensor-product Gauss–Legendre estimate of `∬ f` over `rect`.
///
/// The outer loop runs over x nodes, the inner over y nodes.
pub fn integrate_2d<T: Real>(
    f: impl Fn(T, T) -> T,
    rect: Rect<T>,
    spec_x: QuadratureSpec,
    spec_y: QuadratureSpec,
) -> Result<T> {
    let rx = spec_x.rule::<T>();
    let ry = spec_y.rule::<T>();
    let ys: Vec<(T, T)> = ry.mapped(rect.y0, rect.y1).collect();
    let mut acc = T::zero();
    for (i, (x, wx)) in rx.mapped(rect.x0, rect.x1).enumerate() {
        let mut row = T::zero();
        for (j, &(y, wy)) in ys.iter().enumerate() {
            let v = f(x, y);
            if !v.is_finite() {
                return Err(Error::NonFinite {
                    node: i * ys.len() + j,
                    at: x.to_f64_lossy(),
                });
            }
            row = row + wy * v;
        }
        acc = acc + wx * row;
    }
    Ok(acc)
}

/// Central difference stencil order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stencil {
    Second,
    Fourth,
}

/// Finite difference step and stencil.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiniteDiffSpec<T> {
    step: T,
    stencil: Stencil,
}

impl<T: Real> FiniteDiffSpec<T> {
    pub fn new(step: T, stencil: Stencil) -> Result<Self> {
        if !(step > T::zero()) || !step.is_finite() {
            return Err(Error::Domain(format!(
                "finite difference step must be positive, got {step}"
            )));
        }
        Ok(Self { step, stencil })
    }

    pub fn second_order(step: T) -> Result<Self> {
        Self::new(step, Stencil::Second)
    }

    pub fn fourth_order(step: T) -> Result<Self> {
        Self::new(step, Stencil::Fourth)
    }

    pub fn step(&self) -> T {
        self.step
    }

    pub fn stencil(&self) -> Stencil {
        self.stencil
    }

    /// Same stencil with the step multiplied by the radius of the object.
    pub fn scaled(&self, radius: T) -> Self {
        Self {
            step: self.step * radius,
            stencil: self.stencil,
        }
    }

    pub fn with_step(&self, step: T) -> Self {
        Self {
            step,
            stencil: self.stencil,
        }
    }
}

impl<T: Real> Default for FiniteDiffSpec<T> {
    fn default() -> Self {
        Self {
            step: T::lit(1e-5),
            stencil: Stencil::Second,
        }
    }
}

/// First derivative of a curve by central differences.
pub fn derivative<T, V, F>(f: F, t: T, spec: &FiniteDiffSpec<T>) -> V
where
    T: Real,
    V: Copy + Add<Output = V> + Sub<Output = V> + Mul<T, Output = V>,
    F: Fn(T) -> V,
{
    let h = spec.step;
    match spec.stencil {
        Stencil::Second => (f(t + h) - f(t - h)) * (T::one() / (T::two() * h)),
        Stencil::Fourth => {
            let two_h = T::two() * h;
            let num = (f(t + h) - f(t - h)) * T::lit(8.0) - (f(t + two_h) - f(t - two_h));
            num * (T::one() / (T::lit(12.0) * h))
        }
    }
}

/// Second derivative of a curve by central differences.
pub fn second_derivative<T, V, F>(f: F, t: T, spec: &FiniteDiffSpec<T>) -> V
where
    T: Real,
    V: Copy + Add<Output = V> + Sub<Output = V> + Mul<T, Output = V>,
    F: Fn(T) -> V,
{
    let h = spec.step;
    let c = f(t);
    match spec.stencil {
        Stencil::Second => (f(t + h) + f(t - h) - c * T::two()) * (T::one() / (h * h)),
        Stencil::Fourth => {
            let two_h = T::two() * h;
            let num = (f(t + h) + f(t - h)) * T::lit(16.0)
                - (f(t + two_h) + f(t - two_h))
                - c * T::lit(30.0);
            num * (T::one() / (T::lit(12.0) * h * h))
        }
    }
}

/// Dense `rows × cols` matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Jacobian<T> {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<T>,
}

impl<T: Real> Jacobian<T> {
    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.cols + j]
    }

    /// Column `j`: the directional derivative along the j-th input axis.
    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    /// `J·u` for an input-space vector `u`.
    pub fn apply(&self, u: &[T]) -> Vec<T> {
        assert_eq!(u.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = T::zero();
                for (j, &uj) in u.iter().enumerate() {
                    acc = acc + self.get(i, j) * uj;
                }
                acc
            })
            .collect()
    }
}

/// Central-difference Jacobian of `f` at `x`.
pub fn jacobian_fd<T: Real>(
    f: impl Fn(&[T]) -> Vec<T>,
    x: &[T],
    spec: &FiniteDiffSpec<T>,
) -> Result<Jacobian<T>> {
    let cols = x.len();
    let rows = f(x).len();
    let mut data = vec![T::zero(); rows * cols];
    let mut probe = x.to_vec();
    let eval = |probe: &mut Vec<T>, j: usize, offset: T| -> Vec<T> {
        probe[j] = x[j] + offset;
        let v = f(probe);
        probe[j] = x[j];
        v
    };
    let h = spec.step;
    for j in 0..cols {
        let col: Vec<T> = match spec.stencil {
            Stencil::Second => {
                let fp = eval(&mut probe, j, h);
                let fm = eval(&mut probe, j, -h);
                fp.iter()
                    .zip(fm.iter())
                    .map(|(&a, &b)| (a - b) / (T::two() * h))
                    .collect()
            }
            Stencil::Fourth => {
                let two_h = T::two() * h;
                let fp = eval(&mut probe, j, h);
                let fm = eval(&mut probe, j, -h);
                let fpp = eval(&mut probe, j, two_h);
                let fmm = eval(&mut probe, j, -two_h);
                (0..rows)
                    .map(|i| {
                        (T::lit(8.0) * (fp[i] - fm[i]) - (fpp[i] - fmm[i])) / (T::lit(12.0) * h)
                    })
                    .collect()
            }
        };
        if col.len() != rows {
            return Err(Error::Domain("function output length changed".into()));
        }
        for (i, v) in col.into_iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFinite {
                    node: i * cols + j,
                    at: x[j].to_f64_lossy(),
                });
            }
            data[i * cols + j] = v;
        }
    }
    Ok(Jacobian { rows, cols, data })
}

/// Least-squares line with max absolute residual.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineFit<T> {
    pub slope: T,
    pub intercept: T,
    pub residual: T,
}

/// Remove 2π jumps so consecutive values differ by less than
/// [`MAX_ANGLE_STEP`].
pub fn unwrap_angles<T: Real>(angles: &[T]) -> Result<Vec<T>> {
    let limit = T::lit(MAX_ANGLE_STEP);
    let mut out = Vec::with_capacity(angles.len());
    let Some(&first) = angles.first() else {
        return Ok(out);
    };
    out.push(first);
    let mut prev_raw = first;
    let mut prev = first;
    for (i, &a) in angles.iter().enumerate().skip(1) {
        let step = wrap_pi(a - prev_raw);
        if step.abs() >= limit {
            return Err(Error::Undersampled {
                index: i,
                gap: step.to_f64_lossy(),
                limit: MAX_ANGLE_STEP,
            });
        }
        prev = prev + step;
        prev_raw = a;
        out.push(prev);
    }
    Ok(out)
}

pub fn fit_line<T: Real>(xs: &[T], ys: &[T]) -> Result<LineFit<T>> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::Domain(format!(
            "line fit needs two equal-length sequences of at least 2 samples ({} vs {})",
            xs.len(),
            ys.len()
        )));
    }
    let n = T::from_usize_lossy(xs.len());
    let mx = xs.iter().fold(T::zero(), |a, &v| a + v) / n;
    let my = ys.iter().fold(T::zero(), |a, &v| a + v) / n;
    let mut sxx = T::zero();
    let mut sxy = T::zero();
    for (&x, &y) in xs.iter().zip(ys.iter()) {
        sxx = sxx + (x - mx) * (x - mx);
        sxy = sxy + (x - mx) * (y - my);
    }
    let slope = if sxx > T::zero() {
        sxy / sxx
    } else {
        T::zero()
    };
    let intercept = my - slope * mx;
    let residual = xs.iter().zip(ys.iter()).fold(T::zero(), |m, (&x, &y)| {
        m.max((slope * x + intercept - y).abs())
    });
    Ok(LineFit {
        slope,
        intercept,
        residual,
    })
}

/// Unwrap `angles` sampled at `xs` and fit a line through them.
pub fn unwrap_and_fit<T: Real>(xs: &[T], angles: &[T]) -> Result<LineFit<T>> {
    let unwrapped = unwrap_angles(angles)?;
    fit_line(xs, &unwrapped)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn integrates_sine_and_polynomial() {
        let v = integrate_1d(|t: f64| t.sin(), 0.0, PI, QuadratureSpec::new(64).unwrap()).unwrap();
        assert!((v - 2.0).abs() < 1e-12);
        let v = integrate_1d(|t: f64| t * t, 0.0, 1.0, QuadratureSpec::new(8).unwrap()).unwrap();
        assert!((v - 1.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn weights_sum_to_length() {
        for n in [2, 3, 7, 64, 256, 511] {
            let r = GaussLegendre::<f64>::new(n);
            let s: f64 = r.weights().iter().sum();
            assert!((s - 2.0).abs() < 2e-12 * 2.0, "n={n} sum={s}");
            assert!(r.nodes().iter().all(|x| x.abs() < 1.0));
            assert!(r.nodes().windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn rejects_tiny_rule() {
        assert!(QuadratureSpec::new(1).is_err());
        assert!(FiniteDiffSpec::<f64>::new(0.0, Stencil::Second).is_err());
    }

    #[test]
    fn non_finite_integrand_names_node() {
        let err = integrate_1d(
            |t: f64| if t > 0.5 { f64::NAN } else { t },
            0.0,
            1.0,
            QuadratureSpec::new(4).unwrap(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::NonFinite { node: 2, .. }), "{err:?}");
    }

    #[test]
    fn two_dimensional_rules() {
        let s = QuadratureSpec::new(32).unwrap();
        let one = integrate_2d(|_, _| 1.0_f64, Rect::new(0.0, 1.0, 0.0, 1.0), s, s).unwrap();
        assert!((one - 1.0).abs() < 1e-14);
        let sep = integrate_2d(
            |x: f64, y: f64| x.sin() * y.sin(),
            Rect::new(0.0, PI, 0.0, PI),
            s,
            s,
        )
        .unwrap();
        assert!((sep - 4.0).abs() < 1e-10);
    }

    #[test]
    fn jacobian_of_linear_map() {
        let a = [[1.0, 2.0, -1.0], [0.5, -3.0, 4.0]];
        let f = |x: &[f64]| -> Vec<f64> {
            a.iter()
                .map(|row| row.iter().zip(x).map(|(r, v)| r * v).sum())
                .collect()
        };
        let spec = FiniteDiffSpec::second_order(1e-3).unwrap();
        let j = jacobian_fd(f, &[0.3, -1.2, 2.0], &spec).unwrap();
        for (i, row) in a.iter().enumerate() {
            for (k, v) in row.iter().enumerate() {
                assert!((j.get(i, k) - v).abs() < 1e-12);
            }
        }
        let id = jacobian_fd(|x: &[f64]| x.to_vec(), &[1.0, 2.0, 3.0], &spec).unwrap();
        for i in 0..3 {
            for k in 0..3 {
                let want = if i == k { 1.0 } else { 0.0 };
                assert!((id.get(i, k) - want).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn stencil_orders() {
        let s2 = FiniteDiffSpec::second_order(1e-3).unwrap();
        let s4 = FiniteDiffSpec::fourth_order(1e-3).unwrap();
        let d2: f64 = derivative(|t: f64| t.exp(), 0.4, &s2);
        let d4: f64 = derivative(|t: f64| t.exp(), 0.4, &s4);
        let exact = 0.4_f64.exp();
        assert!((d2 - exact).abs() < 1e-6);
        assert!((d4 - exact).abs() < 1e-11);
        let dd: f64 = second_derivative(|t: f64| t.sin(), 0.7, &s4);
        assert!((dd + 0.7_f64.sin()).abs() < 1e-8);
    }

    #[test]
    fn unwrap_linear_law() {
        let xs: Vec<f64> = (0..100).map(|i| 2.0 * PI * i as f64 / 100.0).collect();
        let wrapped: Vec<f64> = xs
            .iter()
            .map(|x| crate::scalar::wrap_two_pi(3.0 * x + PI / 2.0))
            .collect();
        let fit = unwrap_and_fit(&xs, &wrapped).unwrap();
        assert!((fit.slope - 3.0).abs() < 1e-12);
        assert!(fit.residual < 1e-12);

        let flat = vec![PI / 2.0; 10];
        let fit = unwrap_and_fit(&xs[..10], &flat).unwrap();
        assert_eq!(fit.slope, 0.0);
        assert!((fit.intercept - PI / 2.0).abs() < 1e-15);
    }

    #[test]
    fn undersampled_angles_are_rejected() {
        let xs: Vec<f64> = (0..10).map(|i| i as f64).collect();
        let angles: Vec<f64> = xs.iter().map(|x| 2.5 * x).collect();
        assert!(matches!(
            unwrap_and_fit(&xs, &angles),
            Err(Error::Undersampled { index: 1, .. })
        ));
    }
}
