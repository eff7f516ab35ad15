//! Fixed-size vectors and 3×3 matrices over a generic [`Real`].

use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub};

use crate::scalar::Real;

macro_rules! vector_type {
    ($name:ident, $n:expr) => {
        #[derive(Debug, Clone, Copy, PartialEq, Default)]
        pub struct $name<T>(pub [T; $n]);

        impl<T: Real> $name<T> {
            pub fn zero() -> Self {
                Self([T::zero(); $n])
            }

            pub fn dot(&self, other: &Self) -> T {
                let mut acc = T::zero();
                for i in 0..$n {
                    acc = acc + self.0[i] * other.0[i];
                }
                acc
            }

            pub fn norm_squared(&self) -> T {
                self.dot(self)
            }

            pub fn norm(&self) -> T {
                self.norm_squared().sqrt()
            }

            /// Largest absolute component.
            pub fn max_abs(&self) -> T {
                self.0.iter().fold(T::zero(), |m, v| m.max(v.abs()))
            }

            pub fn scale(&self, s: T) -> Self {
                let mut out = *self;
                for v in out.0.iter_mut() {
                    *v = *v * s;
                }
                out
            }

            /// Unit vector in the same direction; `None` for the zero vector.
            pub fn normalized(&self) -> Option<Self> {
                let n = self.norm();
                if n > T::zero() && n.is_finite() {
                    Some(self.scale(T::one() / n))
                } else {
                    None
                }
            }

            pub fn is_finite(&self) -> bool {
                self.0.iter().all(|v| v.is_finite())
            }

            pub fn map(&self, f: impl Fn(T) -> T) -> Self {
                let mut out = *self;
                for v in out.0.iter_mut() {
                    *v = f(*v);
                }
                out
            }

            pub fn cast<U: Real>(&self) -> $name<U> {
                let mut out = [U::zero(); $n];
                for (o, v) in out.iter_mut().zip(self.0.iter()) {
                    *o = U::lit(v.to_f64_lossy());
                }
                $name(out)
            }
        }

        impl<T: Real> Add for $name<T> {
            type Output = Self;
            fn add(self, rhs: Self) -> Self {
                let mut out = self;
                for i in 0..$n {
                    out.0[i] = out.0[i] + rhs.0[i];
                }
                out
            }
        }

        impl<T: Real> AddAssign for $name<T> {
            fn add_assign(&mut self, rhs: Self) {
                *self = *self + rhs;
            }
        }

        impl<T: Real> Sub for $name<T> {
            type Output = Self;
            fn sub(self, rhs: Self) -> Self {
                let mut out = self;
                for i in 0..$n {
                    out.0[i] = out.0[i] - rhs.0[i];
                }
                out
            }
        }

        impl<T: Real> Neg for $name<T> {
            type Output = Self;
            fn neg(self) -> Self {
                self.map(|v| -v)
            }
        }

        impl<T: Real> Mul<T> for $name<T> {
            type Output = Self;
            fn mul(self, s: T) -> Self {
                self.scale(s)
            }
        }

        impl<T> Index<usize> for $name<T> {
            type Output = T;
            fn index(&self, i: usize) -> &T {
                &self.0[i]
            }
        }

        impl<T> IndexMut<usize> for $name<T> {
            fn index_mut(&mut self, i: usize) -> &mut T {
                &mut self.0[i]
            }
        }
    };
}

vector_type!(Vec3, 3);
vector_type!(Vec4, 4);

impl<T: Real> Vec3<T> {
    pub fn new(x: T, y: T, z: T) -> Self {
        Self([x, y, z])
    }

    pub fn cross(&self, o: &Self) -> Self {
        let a = &self.0;
        let b = &o.0;
        Self([
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ])
    }

    pub fn unit_x() -> Self {
        Self::new(T::one(), T::zero(), T::zero())
    }

    pub fn unit_y() -> Self {
        Self::new(T::zero(), T::one(), T::zero())
    }

    pub fn unit_z() -> Self {
        Self::new(T::zero(), T::zero(), T::one())
    }
}

impl<T: Real> Vec4<T> {
    pub fn new(a: T, b: T, c: T, d: T) -> Self {
        Self([a, b, c, d])
    }

    /// The vector orthogonal to `a`, `b`, `c` given by the cofactor expansion
    /// of the formal determinant with the standard basis in the first row.
    pub fn triple_cross(a: &Self, b: &Self, c: &Self) -> Self {
        let det3 = |r0: [T; 3], r1: [T; 3], r2: [T; 3]| -> T {
            r0[0] * (r1[1] * r2[2] - r1[2] * r2[1]) - r0[1] * (r1[0] * r2[2] - r1[2] * r2[0])
                + r0[2] * (r1[0] * r2[1] - r1[1] * r2[0])
        };
        let minor = |skip: usize| -> T {
            let pick = |v: &Self| -> [T; 3] {
                let mut out = [T::zero(); 3];
                let mut j = 0;
                for i in 0..4 {
                    if i != skip {
                        out[j] = v.0[i];
                        j += 1;
                    }
                }
                out
            };
            det3(pick(a), pick(b), pick(c))
        };
        Self([minor(0), -minor(1), minor(2), -minor(3)])
    }
}

/// Row-major 3×3 matrix.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Mat3<T>(pub [[T; 3]; 3]);

impl<T: Real> Mat3<T> {
    pub fn identity() -> Self {
        let mut m = [[T::zero(); 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = T::one();
        }
        Self(m)
    }

    pub fn diag(a: T, b: T, c: T) -> Self {
        let z = T::zero();
        Self([[a, z, z], [z, b, z], [z, z, c]])
    }

    pub fn from_columns(c0: Vec3<T>, c1: Vec3<T>, c2: Vec3<T>) -> Self {
        Self([
            [c0[0], c1[0], c2[0]],
            [c0[1], c1[1], c2[1]],
            [c0[2], c1[2], c2[2]],
        ])
    }

    pub fn column(&self, j: usize) -> Vec3<T> {
        Vec3([self.0[0][j], self.0[1][j], self.0[2][j]])
    }

    pub fn transpose(&self) -> Self {
        let m = &self.0;
        Self([
            [m[0][0], m[1][0], m[2][0]],
            [m[0][1], m[1][1], m[2][1]],
            [m[0][2], m[1][2], m[2][2]],
        ])
    }

    pub fn mul_mat(&self, o: &Self) -> Self {
        let mut out = [[T::zero(); 3]; 3];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                let mut acc = T::zero();
                for k in 0..3 {
                    acc = acc + self.0[i][k] * o.0[k][j];
                }
                *v = acc;
            }
        }
        Self(out)
    }

    pub fn mul_vec(&self, v: &Vec3<T>) -> Vec3<T> {
        let mut out = Vec3::zero();
        for i in 0..3 {
            out[i] = self.0[i][0] * v[0] + self.0[i][1] * v[1] + self.0[i][2] * v[2];
        }
        out
    }

    pub fn det(&self) -> T {
        self.column(0).dot(&self.column(1).cross(&self.column(2)))
    }

    /// Frobenius pairing `tr(AᵀB)`.
    pub fn frobenius_dot(&self, o: &Self) -> T {
        let mut acc = T::zero();
        for i in 0..3 {
            for j in 0..3 {
                acc = acc + self.0[i][j] * o.0[i][j];
            }
        }
        acc
    }

    /// Largest absolute entry of `self - o`.
    pub fn max_abs_diff(&self, o: &Self) -> T {
        let mut m = T::zero();
        for i in 0..3 {
            for j in 0..3 {
                m = m.max((self.0[i][j] - o.0[i][j]).abs());
            }
        }
        m
    }

    pub fn sub(&self, o: &Self) -> Self {
        let mut out = *self;
        for i in 0..3 {
            for j in 0..3 {
                out.0[i][j] = out.0[i][j] - o.0[i][j];
            }
        }
        out
    }

    pub fn scale(&self, s: T) -> Self {
        let mut out = *self;
        for row in out.0.iter_mut() {
            for v in row.iter_mut() {
                *v = *v * s;
            }
        }
        out
    }

    /// Row-major flattening.
    pub fn flatten(&self) -> [T; 9] {
        let mut out = [T::zero(); 9];
        for i in 0..3 {
            for j in 0..3 {
                out[3 * i + j] = self.0[i][j];
            }
        }
        out
    }

    pub fn from_flat(v: &[T]) -> Self {
        assert_eq!(v.len(), 9, "3×3 matrix needs 9 entries");
        let mut out = [[T::zero(); 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                out[i][j] = v[3 * i + j];
            }
        }
        Self(out)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|v| v.is_finite())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triple_cross_is_orthogonal() {
        let a = Vec4::<f64>::new(1.0, 2.0, -0.5, 0.3);
        let b = Vec4::new(-0.2, 0.7, 1.1, 2.0);
        let c = Vec4::new(0.4, -1.3, 0.2, 0.9);
        let n = Vec4::triple_cross(&a, &b, &c);
        assert!(n.dot(&a).abs() < 1e-12);
        assert!(n.dot(&b).abs() < 1e-12);
        assert!(n.dot(&c).abs() < 1e-12);
        assert!(n.norm() > 1e-3);
    }

    #[test]
    fn cross_and_det() {
        let x = Vec3::<f64>::unit_x();
        let y = Vec3::unit_y();
        assert_eq!(x.cross(&y), Vec3::unit_z());
        let m = Mat3::from_columns(x, y, x.cross(&y));
        assert_eq!(m.det(), 1.0);
        assert_eq!(m.transpose().mul_mat(&m), Mat3::identity());
    }
}
