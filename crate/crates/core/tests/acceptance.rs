//! Acceptance suite: one PASS/FAIL line per criterion, process exit status
//! 1 if any criterion fails. Every tolerance below is a pinned threshold.

mod common;

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::process::ExitCode;
use std::time::Instant;

use lawsonlab::euler::{double_cover_defect, euler_phi, local_isometry_defect};
use lawsonlab::lawson::algebraic_defect;
use lawsonlab::lawson::{
    certify_cylinders, compare_identified, consecutive_a2, covering_multiplicity,
    cylinder_decomposition, domain_cover_check, extract_angle_slope, immerse, lawson_matrix,
    mean_curvature, mean_curvature_of, odd_a2, ruling_defect, self_congruence_defect, surface_area,
    Branch, CorrespondenceField, DomainRect, LawsonParams,
};
use lawsonlab::linalg::Vec4;
use lawsonlab::numerics::{FiniteDiffSpec, QuadratureSpec, DEFAULT_NODES_1D, DEFAULT_NODES_2D};
use lawsonlab::spheres::{quat_rotation, SpherePoint2};
use lawsonlab::unit_tangent::poincare_index_default;
use lawsonlab::vfields::{
    bound_check, ellipse_length, volume_vk, AngleField, FieldOf, PerturbationMode,
    PerturbedAngleField,
};
use rand::Rng;

/// One measured quantity against its threshold. `strict_above` flips the
/// comparison for discrimination checks (`metric > tolerance`).
struct Check {
    label: String,
    metric: f64,
    tolerance: f64,
    strict_above: bool,
}

impl Check {
    fn below(label: impl Into<String>, metric: f64, tolerance: f64) -> Self {
        Self {
            label: label.into(),
            metric,
            tolerance,
            strict_above: false,
        }
    }

    fn above(label: impl Into<String>, metric: f64, tolerance: f64) -> Self {
        Self {
            label: label.into(),
            metric,
            tolerance,
            strict_above: true,
        }
    }

    fn exact(label: impl Into<String>, ok: bool) -> Self {
        Self::below(label, if ok { 0.0 } else { 1.0 }, 0.0)
    }

    fn pass(&self) -> bool {
        if self.strict_above {
            self.metric > self.tolerance
        } else {
            self.metric <= self.tolerance && self.metric.is_finite()
        }
    }
}

fn q1() -> QuadratureSpec {
    QuadratureSpec::new(DEFAULT_NODES_1D).unwrap()
}

fn q2() -> (QuadratureSpec, QuadratureSpec) {
    (
        QuadratureSpec::new(DEFAULT_NODES_2D.1).unwrap(),
        QuadratureSpec::new(DEFAULT_NODES_2D.0).unwrap(),
    )
}

fn tau(n: i64, m: i64, r: f64) -> LawsonParams<f64> {
    LawsonParams::new(n, m, r).unwrap()
}

fn c1_volume_identity() -> Vec<Check> {
    let mut out = Vec::new();
    for (k, reference) in [(3, 13.3648), (4, 19.3769)] {
        let oracle = common::ellipse_arc_oracle(k);
        out.push(Check::below(
            format!("oracle L(eps_{k}) ~ {reference}"),
            (oracle - reference).abs(),
            1e-4,
        ));
        let l = ellipse_length::<f64>(k, q1()).unwrap();
        out.push(Check::below(
            format!("L(eps_{k}) vs arc-length oracle"),
            (l - oracle).abs(),
            1e-8,
        ));
    }
    let l1 = ellipse_length::<f64>(1, q1()).unwrap();
    out.push(Check::below("L(eps_1) = 2pi", (l1 - 2.0 * PI).abs(), 1e-10));
    for k in [1, 3, 4, 5] {
        let bound = PI * ellipse_length::<f64>(k, q1()).unwrap();
        let vol = volume_vk::<f64>(k, q1()).unwrap();
        out.push(Check::below(
            format!("vol(V_{k}) rel"),
            (vol - bound).abs() / bound,
            1e-6,
        ));
    }
    out
}

fn random_modes(rng: &mut impl Rng) -> Vec<PerturbationMode<f64>> {
    let count = rng.random_range(1..=3);
    (0..count)
        .map(|_| PerturbationMode {
            coefficient: rng.random_range(-1.0..1.0),
            alpha_freq: rng.random_range(0..=2),
            sine_alpha: rng.random_bool(0.5),
            t_freq: rng.random_range(1..=3),
            sine_t: rng.random_bool(0.5),
        })
        .collect()
}

fn c2_lower_bound() -> Vec<Check> {
    let (qa, qt) = q2();
    let mut out = Vec::new();
    let mut rng = common::rng(2);
    for k in [3, 4] {
        let mut worst = f64::INFINITY;
        for _ in 0..20 {
            let eps = rng.random_range(0.02..=0.3);
            let field = PerturbedAngleField::new(k, eps, random_modes(&mut rng));
            let r = bound_check(&field, k, 1e-9, qa, qt).unwrap();
            out.push(Check::exact(
                format!("V_{k} perturbation applicable and passes"),
                r.passed(),
            ));
            worst = worst.min(r.excess());
        }
        out.push(Check::above(
            format!("V_{k} 20 perturbations: min(vol - piL) > -1e-9"),
            worst,
            -1e-9,
        ));
        let sin_mode = PerturbationMode {
            coefficient: 1.0,
            alpha_freq: 0,
            sine_alpha: false,
            t_freq: 1,
            sine_t: true,
        };
        let field = PerturbedAngleField::new(k, 0.3, vec![sin_mode]);
        let r = bound_check(&field, k, 1e-9, qa, qt).unwrap();
        out.push(Check::above(
            format!("V_{k} + 0.3 sin t cos a: excess"),
            r.excess(),
            1e-3,
        ));
    }
    out
}

fn c3_euler() -> Vec<Check> {
    let mut rng = common::rng(3);
    let mut iso = 0.0_f64;
    let mut cover = 0.0_f64;
    for _ in 0..100 {
        let x = common::random_s3(&mut rng, 2.0);
        iso = iso.max(local_isometry_defect(&x, 1e-5).unwrap());
        cover = cover.max(double_cover_defect(&x).unwrap());
    }
    let mut oracle = 0.0_f64;
    for _ in 0..1000 {
        let x = common::random_s3(&mut rng, 2.0);
        let a = euler_phi(&x).unwrap();
        let b = quat_rotation(&x.to_quaternion()).unwrap();
        oracle = oracle.max(a.max_abs_diff(&b));
    }
    vec![
        Check::below("local isometry, 100 points, h=1e-5", iso, 1e-6),
        Check::below("double cover defect (exact)", cover, 0.0),
        Check::below("Phi vs q^-1 u q, 1000 points", oracle, 1e-12),
    ]
}

const MATRIX_PAIRS: [(i64, i64); 4] = [(1, 2), (2, 3), (1, 3), (3, 5)];

fn c4_matrix_identity() -> Vec<Check> {
    let mut rng = common::rng(4);
    MATRIX_PAIRS
        .iter()
        .map(|&(n, m)| {
            let t = tau(n, m, 2.0);
            let mut worst = 0.0_f64;
            for _ in 0..1000 {
                let x = rng.random_range(-PI..PI);
                let y = rng.random_range(-PI..PI);
                let closed = lawson_matrix(&t, x, y).unwrap();
                let phi = euler_phi(&immerse(&t, x, y).unwrap()).unwrap();
                worst = worst.max(closed.max_abs_diff(&phi));
            }
            Check::below(format!("tau_{n}_{m}"), worst, 1e-12)
        })
        .collect()
}

fn c5_correspondence() -> Vec<Check> {
    let mut out = Vec::new();
    for (n, m, k) in [(1, 2, 4), (2, 3, 6), (1, 3, 3), (3, 5, 5)] {
        let t = tau(n, m, 2.0);
        let s = extract_angle_slope(&t, 0.4, 256).unwrap();
        out.push(Check::below(
            format!("tau_{n}_{m} |k-{k}|"),
            (s.k - k).abs() as f64,
            0.0,
        ));
        out.push(Check::below(
            format!("tau_{n}_{m} fit residual"),
            s.residual,
            1e-9,
        ));
        let field = CorrespondenceField::new(t, Branch::Upper).unwrap();
        let idx = poincare_index_default(&field, &SpherePoint2::north()).unwrap();
        out.push(Check::below(
            format!("tau_{n}_{m} index at N"),
            (idx - k).abs() as f64,
            0.0,
        ));
    }
    out
}

fn c6_identifications() -> Vec<Check> {
    let mut out = Vec::new();
    let mut rng = common::rng(6);
    for (n, m) in [(1, 2), (2, 3)] {
        let t = tau(n, m, 2.0);
        let (mut p, mut v) = (0.0_f64, 0.0_f64);
        for _ in 0..100 {
            let a1 = common::random_regular_param(&mut rng);
            let k1 = rng.random_range(-2..=2);
            let k2 = rng.random_range(-2..=2);
            let (dp, dv) = compare_identified(&t, a1, consecutive_a2(a1, k1, k2), 1).unwrap();
            p = p.max(dp);
            v = v.max(dv);
        }
        out.push(Check::below(format!("tau_{n}_{m} same p"), p, 1e-12));
        out.push(Check::below(format!("tau_{n}_{m} same V"), v, 1e-12));
    }
    for (n, m) in [(1, 3), (3, 5)] {
        let t = tau(n, m, 2.0);
        let (mut p, mut v) = (0.0_f64, 0.0_f64);
        for _ in 0..100 {
            let a1 = common::random_regular_param(&mut rng);
            let k1 = rng.random_range(-2..=2);
            let k2 = rng.random_range(-2..=2);
            let (dp, dv) = compare_identified(&t, a1, odd_a2(a1, k1, k2), -1).unwrap();
            p = p.max(dp);
            v = v.max(dv);
        }
        out.push(Check::below(format!("tau_{n}_{m} same p"), p, 1e-12));
        out.push(Check::below(format!("tau_{n}_{m} V negated"), v, 1e-12));
        let samples: Vec<(f64, f64)> = (0..500)
            .map(|_| (rng.random_range(-PI..PI), rng.random_range(-PI..PI)))
            .collect();
        let cover = domain_cover_check(&t, &samples).map(|r| r.max_distance);
        out.push(Check::below(
            format!("tau_{n}_{m} D covered by G, 500 samples"),
            cover.unwrap_or(f64::INFINITY),
            1e-10,
        ));
    }
    out
}

fn c7_minimality() -> Vec<Check> {
    let fd = FiniteDiffSpec::fourth_order(1e-3).unwrap();
    let grid = |i: usize, lo: f64, hi: f64| lo + (hi - lo) * i as f64 / 19.0;
    let margin = 1e-3;
    let mut out = Vec::new();
    for (n, m) in [(1, 1), (1, 2), (2, 3), (1, 3), (3, 5)] {
        for r in [1.0, 2.0] {
            let t = tau(n, m, r);
            let mut worst = 0.0_f64;
            for i in 0..20 {
                for j in 0..20 {
                    let x = grid(i, -PI + margin, PI - margin);
                    let y = grid(j, -FRAC_PI_2 + margin, FRAC_PI_2 - margin);
                    worst = worst.max(mean_curvature(&t, x, y, &fd).unwrap().abs());
                }
            }
            out.push(Check::below(
                format!("tau_{n}_{m} R={r} max|H|"),
                worst,
                1e-5,
            ));
        }
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
    let mut control = 0.0_f64;
    for i in 0..20 {
        for j in 0..20 {
            let h = mean_curvature_of(torus, grid(i, -3.0, 3.0), grid(j, -3.0, 3.0), &fd).unwrap();
            control = control.max(h.abs());
        }
    }
    out.push(Check::above("non-minimal control max|H|", control, 1e-2));
    out
}

fn c8_certificates() -> Vec<Check> {
    let mut out = Vec::new();
    let mut rng = common::rng(8);
    let pairs = [(1, 1), (1, 2), (2, 3), (1, 3), (3, 5)];
    let (mut alg, mut rul, mut cong) = (0.0_f64, 0.0_f64, 0.0_f64);
    for &(n, m) in &pairs {
        let t = tau(n, m, 1.0);
        for _ in 0..100 {
            let (x, y) = (rng.random_range(-PI..PI), rng.random_range(-PI..PI));
            alg = alg.max(algebraic_defect(&t, x, y));
        }
        for _ in 0..10 {
            rul = rul.max(ruling_defect(&t, rng.random_range(-PI..PI)));
            cong = cong.max(self_congruence_defect(&t, rng.random_range(-PI..PI)));
        }
    }
    out.push(Check::below("algebraic defect", alg, 1e-12));
    out.push(Check::below("ruling defect", rul, 1e-12));
    out.push(Check::below("self-congruence defect", cong, 1e-12));
    let q = QuadratureSpec::new(DEFAULT_NODES_2D.0).unwrap();
    let clifford = surface_area(&tau(1, 1, 1.0), &DomainRect::full(), 2, q, q).unwrap();
    out.push(Check::below(
        "Area(tau_1_1) = 2pi^2",
        (clifford - 2.0 * PI * PI).abs(),
        1e-8,
    ));
    for &(n, m) in &pairs {
        let t = tau(n, m, 1.0);
        let mult = covering_multiplicity(&t, 0.37, 0.61).unwrap();
        let area = surface_area(&t, &DomainRect::full(), mult, q, q).unwrap();
        let bound = 2.0 * PI * PI * n.min(m) as f64;
        out.push(Check::below(
            format!("Area(tau_{n}_{m}) >= 2pi^2 min"),
            bound - area,
            1e-8,
        ));
    }
    out
}

fn c9_cylinders() -> Vec<Check> {
    let t = tau(1, 3, 2.0);
    let (plus, minus) = cylinder_decomposition(&t).unwrap();
    let cert = certify_cylinders(&plus, &minus, 48).unwrap();
    vec![
        Check::below(
            "boundary on coordinate great circles",
            cert.boundary_defect,
            1e-12,
        ),
        Check::below(
            "inter-circle distance = pi",
            (cert.circle_distance - PI).abs(),
            1e-9,
        ),
        Check::below("C- base point = C+ base point", cert.base_defect, 1e-12),
        Check::below("C- field = -(C+ field)", cert.flip_defect, 1e-12),
    ]
}

fn c10_index_additivity() -> Vec<Check> {
    [-2, -1, 1, 3, 4, 5]
        .iter()
        .flat_map(|&k| {
            let field = AngleField::new(k);
            let f = FieldOf(&field);
            let n = poincare_index_default(&f, &SpherePoint2::<f64>::north()).unwrap();
            let s = poincare_index_default(&f, &SpherePoint2::<f64>::south()).unwrap();
            [
                Check::below(format!("V_{k}: I(N)+I(S)-2"), (n + s - 2).abs() as f64, 0.0),
                Check::below(format!("V_{k}: I(N)-k"), (n - k).abs() as f64, 0.0),
            ]
        })
        .collect()
}

type Criterion = (&'static str, fn() -> Vec<Check>);

fn main() -> ExitCode {
    let started = Instant::now();
    let criteria: [Criterion; 10] = [
        ("ellipse/volume identity", c1_volume_identity),
        ("lower-bound property", c2_lower_bound),
        ("Euler transformation", c3_euler),
        ("matrix identity", c4_matrix_identity),
        ("correspondence indices", c5_correspondence),
        ("identifications", c6_identifications),
        ("minimality", c7_minimality),
        ("Lawson certificates", c8_certificates),
        ("cylinders", c9_cylinders),
        ("index additivity", c10_index_additivity),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let checks = run();
        let bad: Vec<&Check> = checks.iter().filter(|c| !c.pass()).collect();
        let worst = checks
            .iter()
            .filter(|c| !c.strict_above)
            .map(|c| c.metric)
            .fold(0.0_f64, f64::max);
        if bad.is_empty() {
            println!(
                "PASS  {:>2}. {name} ({} checks, worst bounded metric {worst:.3e})",
                i + 1,
                checks.len()
            );
        } else {
            failed += 1;
            let detail: Vec<String> = bad
                .iter()
                .map(|c| {
                    let op = if c.strict_above { ">" } else { "<=" };
                    format!("{}: {:.3e} not {op} {:.1e}", c.label, c.metric, c.tolerance)
                })
                .collect();
            println!("FAIL  {:>2}. {name}: {}", i + 1, detail.join("; "));
        }
    }
    println!(
        "acceptance: {}/10 criteria passed in {:.1}s",
        10 - failed,
        started.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
