//! The verification suites behind `lawsonlab verify`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use clap::ValueEnum;
use lawsonlab::euler::{double_cover_defect, euler_phi, local_isometry_defect_scaled};
use lawsonlab::lawson::{
    algebraic_defect, certify_cylinders, compare_identified, consecutive_a2,
    correspondence_vk_defect, covering_multiplicity, cylinder_decomposition, domain_cover_check,
    extract_angle_slope, immerse, lawson_matrix, mean_curvature, mean_curvature_of, odd_a2,
    ruling_defect, self_congruence_defect, surface_area, Branch, CorrespondenceField, DomainRect,
    Generator, LawsonParams,
};
use lawsonlab::linalg::Vec4;
use lawsonlab::numerics::{FiniteDiffSpec, QuadratureSpec};
use lawsonlab::spheres::{quat_rotation, Sphere3Point, SpherePoint2};
use lawsonlab::unit_tangent::poincare_index_default;
use lawsonlab::vfields::{
    bound_check, ellipse_length, volume_vk, AngleField, FieldOf, PerturbationMode,
    PerturbedAngleField,
};
use lawsonlab::Result;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::report::{Entry, RunMeta};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    All,
    Euler,
    Vfields,
    Lawson,
    Correspondence,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::All => "all",
            Suite::Euler => "euler",
            Suite::Vfields => "vfields",
            Suite::Lawson => "lawson",
            Suite::Correspondence => "correspondence",
        }
    }
}

pub fn run(suite: Suite, meta: &RunMeta) -> Vec<Entry> {
    match suite {
        Suite::All => [
            Suite::Euler,
            Suite::Vfields,
            Suite::Lawson,
            Suite::Correspondence,
        ]
        .into_iter()
        .flat_map(|s| run(s, meta))
        .collect(),
        Suite::Euler => euler_suite(meta),
        Suite::Vfields => vfields_suite(meta),
        Suite::Lawson => lawson_suite(meta),
        Suite::Correspondence => correspondence_suite(meta),
    }
}

/// Independent stream per suite so `all` reproduces each single suite.
fn suite_rng(meta: &RunMeta, salt: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(meta.seed);
    rng.set_stream(salt);
    rng
}

fn random_s3(rng: &mut impl Rng, radius: f64) -> Sphere3Point<f64> {
    loop {
        let v = Vec4::new(
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
        );
        let n = v.norm();
        if n > 0.1 && n <= 1.0 {
            if let Ok(p) = Sphere3Point::project(v, radius) {
                return p;
            }
        }
    }
}

fn random_regular_param(rng: &mut impl Rng) -> (f64, f64) {
    loop {
        let (x, y) = (rng.random_range(-PI..PI), rng.random_range(-PI..PI));
        if (2.0 * y).sin().abs() > 0.05 {
            return (x, y);
        }
    }
}

fn tau(n: i64, m: i64, r: f64) -> LawsonParams<f64> {
    LawsonParams::new(n, m, r).expect("positive radius")
}

fn max_of(values: impl IntoIterator<Item = Result<f64>>) -> Result<f64> {
    values
        .into_iter()
        .try_fold(0.0_f64, |acc, v| v.map(|v| acc.max(v)))
}

fn quadrature(meta: &RunMeta) -> (QuadratureSpec, QuadratureSpec) {
    let n = meta.node_count.max(2);
    (
        QuadratureSpec::new((n / 2).max(2)).expect("node count ≥ 2"),
        QuadratureSpec::new(n).expect("node count ≥ 2"),
    )
}

fn euler_suite(meta: &RunMeta) -> Vec<Entry> {
    let mut rng = suite_rng(meta, 1);
    let points: Vec<_> = (0..100).map(|_| random_s3(&mut rng, 2.0)).collect();
    let iso = max_of(
        points
            .iter()
            .map(|x| local_isometry_defect_scaled(x, meta.fd_step, meta.metric_scale)),
    );
    let cover = max_of(points.iter().map(double_cover_defect));
    let oracle = max_of((0..1000).map(|_| {
        let x = random_s3(&mut rng, 2.0);
        Ok(euler_phi(&x)?.max_abs_diff(&quat_rotation(&x.to_quaternion())?))
    }));
    let reversal = max_of((0..200).map(|_| {
        let q1 = random_s3(&mut rng, 1.0).to_quaternion();
        let q2 = random_s3(&mut rng, 1.0).to_quaternion();
        let lhs = quat_rotation(&(q1 * q2))?;
        let rhs = quat_rotation(&q2)?.compose(&quat_rotation(&q1)?);
        Ok(lhs.max_abs_diff(&rhs))
    }));
    vec![
        Entry::measured("euler.local_isometry", iso, 1e-6)
            .param("points", 100)
            .param("fd_step", meta.fd_step),
        Entry::measured("euler.double_cover", cover, 0.0).param("points", 100),
        Entry::measured("euler.quaternion_oracle", oracle, 1e-12).param("points", 1000),
        Entry::measured("euler.product_reversal", reversal, 1e-12).param("pairs", 200),
    ]
}

fn random_modes(rng: &mut impl Rng) -> Vec<PerturbationMode<f64>> {
    (0..rng.random_range(1..=3))
        .map(|_| PerturbationMode {
            coefficient: rng.random_range(-1.0..1.0),
            alpha_freq: rng.random_range(0..=2),
            sine_alpha: rng.random_bool(0.5),
            t_freq: rng.random_range(1..=3),
            sine_t: rng.random_bool(0.5),
        })
        .collect()
}

fn vfields_suite(meta: &RunMeta) -> Vec<Entry> {
    let mut rng = suite_rng(meta, 2);
    let (qa, qt) = quadrature(meta);
    let q1 = QuadratureSpec::new(meta.node_count.max(2)).expect("node count ≥ 2");
    let mut out = Vec::new();
    for k in [1, 3, 4, 5] {
        let rel = (|| -> Result<f64> {
            let bound = PI * ellipse_length::<f64>(k, q1)?;
            Ok((volume_vk::<f64>(k, q1)? - bound).abs() / bound)
        })();
        out.push(Entry::measured(format!("vfields.volume.k{k}"), rel, 1e-6).param("k", k));
    }
    for k in [3, 4] {
        let deficit = max_of((0..20).map(|_| {
            let eps = rng.random_range(0.02..=0.3);
            let field = PerturbedAngleField::new(k, eps, random_modes(&mut rng));
            let r = bound_check(&field, k, 1e-9, qa, qt)?;
            Ok(if r.passed() {
                -r.excess()
            } else {
                f64::INFINITY
            })
        }));
        out.push(
            Entry::measured(format!("vfields.lower_bound.k{k}"), deficit, 1e-9)
                .param("k", k)
                .param("perturbations", 20),
        );
        let mode = PerturbationMode {
            coefficient: 1.0,
            alpha_freq: 0,
            sine_alpha: false,
            t_freq: 1,
            sine_t: true,
        };
        let field = PerturbedAngleField::new(k, 0.3, vec![mode]);
        out.push(match bound_check(&field, k, 1e-9, qa, qt) {
            Ok(r) => Entry::exceeds(format!("vfields.excess.k{k}"), r.excess(), 1e-3),
            Err(e) => Entry::failed(format!("vfields.excess.k{k}"), -1e-3, e),
        });
    }
    for k in [-2, -1, 1, 3, 4, 5] {
        let f = AngleField::new(k);
        let defect = (|| -> Result<f64> {
            let n = poincare_index_default(&FieldOf(&f), &SpherePoint2::<f64>::north())?;
            let s = poincare_index_default(&FieldOf(&f), &SpherePoint2::<f64>::south())?;
            Ok(((n - k).abs() + (n + s - 2).abs()) as f64)
        })();
        out.push(Entry::measured(format!("vfields.index.k{k}"), defect, 0.0).param("k", k));
    }
    out
}

const MINIMAL_PAIRS: [(i64, i64); 5] = [(1, 1), (1, 2), (2, 3), (1, 3), (3, 5)];
const EULER_PAIRS: [(i64, i64); 4] = [(1, 2), (2, 3), (1, 3), (3, 5)];

fn grid(i: usize, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * i as f64 / 19.0
}

fn lawson_suite(meta: &RunMeta) -> Vec<Entry> {
    let mut rng = suite_rng(meta, 3);
    let mut out = Vec::new();
    let fd = FiniteDiffSpec::fourth_order(1e-3).expect("valid step");
    let margin = 1e-3;
    for (n, m) in MINIMAL_PAIRS {
        for r in [1.0, 2.0] {
            let t = tau(n, m, r);
            let h = max_of((0..400).map(|ij| {
                let x = grid(ij / 20, -PI + margin, PI - margin);
                let y = grid(ij % 20, -FRAC_PI_2 + margin, FRAC_PI_2 - margin);
                mean_curvature(&t, x, y, &fd).map(f64::abs)
            }));
            out.push(
                Entry::measured(format!("lawson.tau_{n}_{m}.r{r}.mean_curvature"), h, 1e-5)
                    .param("grid", "20x20"),
            );
        }
        let t = tau(n, m, 1.0);
        let alg = max_of((0..100).map(|_| {
            let (x, y) = (rng.random_range(-PI..PI), rng.random_range(-PI..PI));
            Ok(algebraic_defect(&t, x, y))
        }));
        out.push(Entry::measured(
            format!("lawson.tau_{n}_{m}.algebraic"),
            alg,
            1e-12,
        ));
        let rul = max_of((0..10).map(|_| Ok(ruling_defect(&t, rng.random_range(-PI..PI)))));
        out.push(Entry::measured(
            format!("lawson.tau_{n}_{m}.ruling"),
            rul,
            1e-12,
        ));
        let cong =
            max_of((0..10).map(|_| Ok(self_congruence_defect(&t, rng.random_range(-PI..PI)))));
        out.push(Entry::measured(
            format!("lawson.tau_{n}_{m}.self_congruence"),
            cong,
            1e-12,
        ));
        let (_, q) = quadrature(meta);
        let area = (|| -> Result<(usize, f64)> {
            let mult = covering_multiplicity(&t, 0.37, 0.61)?;
            let a = surface_area(&t, &DomainRect::full(), mult, q, q)?;
            Ok((mult, a))
        })();
        let id = format!("lawson.tau_{n}_{m}.area_bound");
        out.push(match area {
            Ok((mult, a)) => Entry::new(id, 2.0 * PI * PI * n.min(m) as f64 - a, 1e-8)
                .param("multiplicity", mult),
            Err(e) => Entry::failed(id, 1e-8, e),
        });
    }
    let rho = 0.8 * FRAC_PI_4;
    let torus = |x: f64, y: f64| {
        Vec4::new(
            rho.cos() * x.cos(),
            rho.cos() * x.sin(),
            rho.sin() * y.cos(),
            rho.sin() * y.sin(),
        )
    };
    let control = max_of((0..400).map(|ij| {
        mean_curvature_of(
            torus,
            grid(ij / 20, -3.0, 3.0),
            grid(ij % 20, -3.0, 3.0),
            &fd,
        )
        .map(f64::abs)
    }));
    out.push(match control {
        Ok(h) => Entry::exceeds("lawson.control_torus.mean_curvature", h, 1e-2),
        Err(e) => Entry::failed("lawson.control_torus.mean_curvature", -1e-2, e),
    });
    let (_, q) = quadrature(meta);
    let clifford = surface_area(&tau(1, 1, 1.0), &DomainRect::full(), 2, q, q)
        .map(|a| (a - 2.0 * PI * PI).abs());
    out.push(Entry::measured("lawson.tau_1_1.area", clifford, 1e-8));
    for (n, m) in EULER_PAIRS {
        let t = tau(n, m, 2.0);
        let d = max_of((0..1000).map(|_| {
            let (x, y) = (rng.random_range(-PI..PI), rng.random_range(-PI..PI));
            Ok(lawson_matrix(&t, x, y)?.max_abs_diff(&euler_phi(&immerse(&t, x, y)?)?))
        }));
        out.push(
            Entry::measured(format!("lawson.tau_{n}_{m}.matrix"), d, 1e-12).param("samples", 1000),
        );
    }
    out
}

fn correspondence_suite(meta: &RunMeta) -> Vec<Entry> {
    let mut rng = suite_rng(meta, 4);
    let mut out = Vec::new();
    for (n, m) in EULER_PAIRS {
        let t = tau(n, m, 2.0);
        let want = t.predicted_k().expect("consecutive or odd");
        match extract_angle_slope(&t, 0.4, 256) {
            Ok(s) => {
                out.push(
                    Entry::new(
                        format!("lawson.tau_{n}_{m}.k"),
                        (s.k - want).abs() as f64,
                        0.0,
                    )
                    .param("k", s.k)
                    .param("expected", want),
                );
                out.push(Entry::new(
                    format!("lawson.tau_{n}_{m}.angle_residual"),
                    s.residual,
                    1e-9,
                ));
            }
            Err(e) => out.push(Entry::failed(format!("lawson.tau_{n}_{m}.k"), 0.0, e)),
        }
        let index = CorrespondenceField::new(t, Branch::Upper).and_then(|f| {
            let i = poincare_index_default(&f, &SpherePoint2::north())?;
            Ok((i - want).abs() as f64)
        });
        out.push(Entry::measured(
            format!("correspondence.tau_{n}_{m}.index"),
            index,
            0.0,
        ));
        let vk = correspondence_vk_defect(&t, 24).map(|r| r.defect);
        out.push(Entry::measured(
            format!("correspondence.tau_{n}_{m}.vk_match"),
            vk,
            1e-9,
        ));

        let (generator, sign): (Generator<f64>, i32) =
            if t.family == lawsonlab::lawson::Family::Consecutive(n) {
                (consecutive_a2, 1)
            } else {
                (odd_a2, -1)
            };
        let ident = max_of((0..100).map(|_| {
            let a1 = random_regular_param(&mut rng);
            let (k1, k2) = (rng.random_range(-2..=2), rng.random_range(-2..=2));
            let (p, v) = compare_identified(&t, a1, generator(a1, k1, k2), sign)?;
            Ok(p.max(v))
        }));
        out.push(
            Entry::measured(
                format!("correspondence.tau_{n}_{m}.identifications"),
                ident,
                1e-12,
            )
            .param("sign", sign),
        );
        if sign < 0 {
            let samples: Vec<(f64, f64)> = (0..500)
                .map(|_| (rng.random_range(-PI..PI), rng.random_range(-PI..PI)))
                .collect();
            let cover = domain_cover_check(&t, &samples).map(|r| r.max_distance);
            out.push(Entry::measured(
                format!("correspondence.tau_{n}_{m}.domain_cover"),
                cover,
                1e-10,
            ));
        }
    }
    let t = tau(1, 3, 2.0);
    match cylinder_decomposition(&t).and_then(|(p, m)| certify_cylinders(&p, &m, 48)) {
        Ok(c) => {
            out.push(Entry::new(
                "correspondence.tau_1_3.cylinder_boundary",
                c.boundary_defect,
                1e-12,
            ));
            out.push(Entry::new(
                "correspondence.tau_1_3.cylinder_distance",
                (c.circle_distance - PI).abs(),
                1e-9,
            ));
            out.push(Entry::new(
                "correspondence.tau_1_3.cylinder_base",
                c.base_defect,
                1e-12,
            ));
            out.push(Entry::new(
                "correspondence.tau_1_3.cylinder_flip",
                c.flip_defect,
                1e-12,
            ));
        }
        Err(e) => out.push(Entry::failed(
            "correspondence.tau_1_3.cylinder_boundary",
            1e-12,
            e,
        )),
    }
    out
}
