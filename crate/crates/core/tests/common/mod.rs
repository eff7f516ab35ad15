#![allow(dead_code)]

use lawsonlab::linalg::Vec4;
use lawsonlab::spheres::{Quaternion, Sphere3Point};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform point of S³(radius) by rejection from the cube.
pub fn random_s3(rng: &mut impl Rng, radius: f64) -> Sphere3Point<f64> {
    loop {
        let v = Vec4::new(
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
        );
        let n = v.norm();
        if n > 0.1 && n <= 1.0 {
            return Sphere3Point::project(v, radius).unwrap();
        }
    }
}

pub fn random_unit_quaternion(rng: &mut impl Rng) -> Quaternion<f64> {
    random_s3(rng, 1.0).to_quaternion()
}

/// Parameter in `(−π, π)²` whose Euler base point stays off the poles.
pub fn random_regular_param(rng: &mut impl Rng) -> (f64, f64) {
    use std::f64::consts::PI;
    loop {
        let x = rng.random_range(-PI..PI);
        let y = rng.random_range(-PI..PI);
        if (2.0 * y).sin().abs() > 0.05 {
            return (x, y);
        }
    }
}

/// Composite trapezoid rule with `panels` panels.
pub fn trapezoid(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let h = (b - a) / panels as f64;
    let mut acc = 0.5 * (f(a) + f(b));
    for i in 1..panels {
        acc += f(a + h * i as f64);
    }
    acc * h
}

/// Arc length of `t ↦ (k cos t, (k−2) sin t)` over a full turn.
pub fn ellipse_arc_oracle(k: i64) -> f64 {
    let (a, b) = (k as f64, (k - 2) as f64);
    trapezoid(
        |t| ((a * t.sin()).powi(2) + (b * t.cos()).powi(2)).sqrt(),
        0.0,
        std::f64::consts::TAU,
        1_000_000,
    )
}
