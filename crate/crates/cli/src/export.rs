//! Mesh and field sample writers.

use std::f64::consts::{PI, TAU};
use std::fmt::Write as _;
use std::str::FromStr;

use clap::ValueEnum;
use lawsonlab::lawson::{immerse, LawsonParams};
use lawsonlab::linalg::{Vec3, Vec4};
use lawsonlab::spheres::SpherePoint2;
use lawsonlab::vfields::vk_at;

use crate::CliError;

/// Smallest accepted resolution along each axis.
pub const MIN_RES: usize = 8;

/// Distance kept from the poles in field exports.
pub const POLE_MARGIN: f64 = 1e-2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SurfaceFormat {
    Obj,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Projection {
    /// Drop the fourth coordinate.
    Drop4,
    /// Stereographic projection from `(0, 0, 0, −R)`.
    Stereo,
}

impl Projection {
    fn describe(self) -> &'static str {
        match self {
            Projection::Drop4 => "drop4: (p1, p2, p3)",
            Projection::Stereo => "stereo: R (p1, p2, p3) / (R + p4) from (0, 0, 0, -R)",
        }
    }

    fn apply(self, p: &Vec4<f64>, radius: f64) -> Result<Vec3<f64>, CliError> {
        match self {
            Projection::Drop4 => Ok(Vec3::new(p[0], p[1], p[2])),
            Projection::Stereo => {
                let d = radius + p[3];
                if d <= 1e-9 * radius {
                    return Err(CliError::Export(format!(
                        "vertex {p:?} is at the stereographic pole"
                    )));
                }
                Ok(Vec3::new(p[0], p[1], p[2]).scale(radius / d))
            }
        }
    }
}

/// `W×H` grid resolution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Resolution {
    pub width: usize,
    pub height: usize,
}

impl FromStr for Resolution {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (w, h) = s
            .split_once(['x', 'X'])
            .ok_or_else(|| format!("expected WxH, got {s:?}"))?;
        let parse = |v: &str| v.trim().parse::<usize>().map_err(|e| format!("{v:?}: {e}"));
        let r = Resolution {
            width: parse(w)?,
            height: parse(h)?,
        };
        if r.width < MIN_RES || r.height < MIN_RES {
            return Err(format!("resolution must be at least {MIN_RES}x{MIN_RES}"));
        }
        Ok(r)
    }
}

/// Cell-centred sample `i` of `count` on `[−π, π)`.
fn periodic_sample(i: usize, count: usize) -> f64 {
    -PI + TAU * (i as f64 + 0.5) / count as f64
}

fn surface_samples(
    params: &LawsonParams<f64>,
    res: Resolution,
) -> Result<Vec<(f64, f64, Vec4<f64>)>, CliError> {
    let mut out = Vec::with_capacity(res.width * res.height);
    for j in 0..res.height {
        let y = periodic_sample(j, res.height);
        for i in 0..res.width {
            let x = periodic_sample(i, res.width);
            out.push((x, y, immerse(params, x, y)?.coords()));
        }
    }
    Ok(out)
}

/// Periodic `W×H` vertex grid over `[−π, π)²` with each cell split into two
/// triangles, so every vertex lies in exactly six faces.
pub fn surface_obj(
    params: &LawsonParams<f64>,
    res: Resolution,
    projection: Projection,
) -> Result<String, CliError> {
    let samples = surface_samples(params, res)?;
    let mut s = String::new();
    let _ = writeln!(
        s,
        "# lawsonlab tau_{}_{} radius {}",
        params.n, params.m, params.radius
    );
    let _ = writeln!(s, "# projection {}", projection.describe());
    let _ = writeln!(
        s,
        "# grid {}x{} periodic over [-pi, pi)^2",
        res.width, res.height
    );
    for (_, _, p) in &samples {
        let v = projection.apply(p, params.radius)?;
        let _ = writeln!(s, "v {:.16e} {:.16e} {:.16e}", v[0], v[1], v[2]);
    }
    let (w, h) = (res.width, res.height);
    let idx = |i: usize, j: usize| (j % h) * w + (i % w) + 1;
    for j in 0..h {
        for i in 0..w {
            let (a, b, c, d) = (idx(i, j), idx(i + 1, j), idx(i + 1, j + 1), idx(i, j + 1));
            let _ = writeln!(s, "f {a} {b} {c}");
            let _ = writeln!(s, "f {a} {c} {d}");
        }
    }
    Ok(s)
}

/// Columns `x,y,p1,p2,p3,p4` on the same grid as [`surface_obj`].
pub fn surface_csv(params: &LawsonParams<f64>, res: Resolution) -> Result<String, CliError> {
    let mut s = String::from("x,y,p1,p2,p3,p4\n");
    for (x, y, p) in surface_samples(params, res)? {
        let _ = writeln!(
            s,
            "{x:.16e},{y:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            p[0], p[1], p[2], p[3]
        );
    }
    Ok(s)
}

/// Columns `alpha,t,p1,p2,p3,v1,v2,v3` of `V_k` on a `res × res` chart grid
/// with `|α| ≤ π/2 − POLE_MARGIN`.
pub fn field_csv(k: i64, res: usize) -> Result<String, CliError> {
    if res < MIN_RES {
        return Err(CliError::Usage(format!(
            "resolution must be at least {MIN_RES}"
        )));
    }
    let top = std::f64::consts::FRAC_PI_2 - POLE_MARGIN;
    let mut s = String::from("alpha,t,p1,p2,p3,v1,v2,v3\n");
    for i in 0..res {
        let alpha = -top + 2.0 * top * i as f64 / (res - 1) as f64;
        for j in 0..res {
            let t = TAU * j as f64 / res as f64;
            let e = vk_at(k, &SpherePoint2::from_latlon(alpha, t)?)?;
            let (p, v) = (e.base(), e.vector());
            let _ = writeln!(
                s,
                "{alpha:.16e},{t:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                p[0], p[1], p[2], v[0], v[1], v[2]
            );
        }
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn resolution_parsing() {
        assert_eq!(
            "64x32".parse::<Resolution>().unwrap(),
            Resolution {
                width: 64,
                height: 32
            }
        );
        assert!("4x32".parse::<Resolution>().is_err());
        assert!("64".parse::<Resolution>().is_err());
    }

    #[test]
    fn stereo_rejects_the_pole() {
        let pole = Vec4::new(0.0, 0.0, 0.0, -1.0);
        assert!(Projection::Stereo.apply(&pole, 1.0).is_err());
        let p = Projection::Stereo
            .apply(&Vec4::new(1.0, 0.0, 0.0, 0.0), 1.0)
            .unwrap();
        assert_eq!(p, Vec3::new(1.0, 0.0, 0.0));
    }
}
