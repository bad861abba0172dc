//! The full verification battery.
//!
//! Each [`Check`] carries the number of the acceptance criterion it belongs
//! to, the measured and expected values and the tolerance it was held to.
//! Monte Carlo checks use `max(4·SE, stated tolerance)`.

use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::crofton::{self, Polyline};
use crate::error::Result;
use crate::exact::{self, PiRational};
use crate::geom::{self, ConvexBody2, ConvexPolygon, Flat, LineCoords2, Point, Point2, Point3};
use crate::mc::{self, Estimate, Experiment, McConfig};
use crate::quad;

pub const DEFAULT_SEED: u64 = 20070101;
pub const DEFAULT_SAMPLES: u64 = 1_000_000;
pub const DEFAULT_BINS: usize = 40;
/// Below this sample count Monte Carlo checks are skipped (or failed when strict).
pub const MIN_VERIFY_SAMPLES: u64 = mc::MIN_HISTOGRAM_SAMPLES;

const EXACT_REL: f64 = 1e-12;
const RANDOM_POLYGONS: usize = 20;
const EXCLUSIVITY_SAMPLES: u64 = 100_000;
const INVARIANCE_TRIALS: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BatteryConfig {
    pub samples: u64,
    pub seed: u64,
    pub workers: u32,
    pub bins: usize,
    pub panels: usize,
    pub strict: bool,
}

impl Default for BatteryConfig {
    fn default() -> Self {
        BatteryConfig {
            samples: DEFAULT_SAMPLES,
            seed: DEFAULT_SEED,
            workers: 1,
            bins: DEFAULT_BINS,
            panels: crofton::DEFAULT_PANELS,
            strict: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub criterion: u32,
    pub name: String,
    pub value: f64,
    pub expected: f64,
    pub tolerance: f64,
    pub status: Status,
    pub detail: String,
}

impl Check {
    fn new(criterion: u32, name: &str, value: f64, expected: f64, tolerance: f64, ok: bool) -> Self {
        Check {
            criterion,
            name: name.to_string(),
            value,
            expected,
            tolerance,
            status: if ok { Status::Pass } else { Status::Fail },
            detail: String::new(),
        }
    }

    fn abs(criterion: u32, name: &str, value: f64, expected: f64, tolerance: f64) -> Self {
        let ok = (value - expected).abs() <= tolerance;
        Self::new(criterion, name, value, expected, tolerance, ok)
    }

    fn rel(criterion: u32, name: &str, value: f64, expected: f64, tolerance: f64) -> Self {
        let ok = ((value - expected) / expected).abs() <= tolerance;
        Self::new(criterion, name, value, expected, tolerance, ok)
    }

    fn exact(criterion: u32, name: &str, got: &PiRational, want: &PiRational) -> Self {
        let mut c = Self::new(criterion, name, got.to_f64(), want.to_f64(), 0.0, got == want);
        c.detail = format!("{got} vs {want}");
        c
    }

    fn flag(criterion: u32, name: &str, ok: bool, detail: String) -> Self {
        let mut c = Self::new(criterion, name, f64::from(u8::from(ok)), 1.0, 0.0, ok);
        c.detail = detail;
        c
    }

    fn with_detail(mut self, detail: String) -> Self {
        self.detail = detail;
        self
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

/// Runs every check. Errors are library errors that indicate a bug, not a
/// failed check.
pub fn run(cfg: &BatteryConfig) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    exact_checks(&mut checks)?;
    quadrature_checks(cfg, &mut checks)?;
    let enough = cfg.samples >= MIN_VERIFY_SAMPLES;
    if enough {
        monte_carlo_checks(cfg, &mut checks)?;
    } else {
        let status = if cfg.strict { Status::Fail } else { Status::Skipped };
        for (criterion, name) in [
            (8, "simplex_2d"),
            (9, "sylvester"),
            (10, "triangles"),
            (11, "offcut"),
            (12, "simplex_3d"),
            (13, "density_gof"),
            (14, "mean_distance"),
            (15, "determinism"),
        ] {
            checks.push(Check {
                criterion,
                name: name.to_string(),
                value: f64::NAN,
                expected: f64::NAN,
                tolerance: f64::NAN,
                status,
                detail: format!(
                    "insufficient samples: {} < {MIN_VERIFY_SAMPLES}",
                    cfg.samples
                ),
            });
        }
    }
    property_checks(cfg, &mut checks)?;
    Ok(checks)
}

pub fn all_passed(checks: &[Check]) -> bool {
    checks.iter().all(Check::passed)
}

fn pr(num: i64, den: i64, k: i32) -> PiRational {
    PiRational::new(num, den, k).expect("nonzero denominator")
}

fn exact_checks(out: &mut Vec<Check>) -> Result<()> {
    out.push(Check::exact(1, "kingman_v(2) = 1/3", &exact::kingman_v(2)?, &pr(1, 3, 0)));
    out.push(Check::rel(
        1,
        "kingman_v(3) = 35/(48π²)",
        exact::kingman_v(3)?.to_f64(),
        35.0 / (48.0 * PI * PI),
        EXACT_REL,
    ));
    out.push(Check::exact(1, "kingman_v(4) = 9/715", &exact::kingman_v(4)?, &pr(9, 715, 0)));

    let s2 = exact::sylvester_probability(2)?.to_f64();
    out.push(Check::rel(2, "sylvester(2) = 1 − 35/(12π²)", s2, 1.0 - 35.0 / (12.0 * PI * PI), EXACT_REL));
    out.push(Check::abs(2, "sylvester(2) ≈ 0.7044798", s2, 0.704_479_8, 1e-7));
    let s3 = exact::sylvester_probability(3)?
        .as_monomial()
        .unwrap_or_else(|| PiRational::integer(-1));
    out.push(Check::exact(2, "sylvester(3) = 134/143", &s3, &pr(134, 143, 0)));

    let hb9 = exact::half_ball_integral(9)?;
    out.push(Check::exact(3, "half_ball(9) = 128/315", &hb9, &pr(128, 315, 0)));
    let q = quad::integrate(|p| (1.0 - p * p).powi(4), 0.0, 1.0);
    out.push(Check::abs(3, "half_ball(9) vs quadrature", hb9.to_f64(), q.value, 1e-10));

    // (m + ½)! = (m + ½)·(m − ½)!, starting from (−½)! = √π
    let mut by_recurrence = PiRational::pi_power(1);
    let mut all_match = true;
    for m in 0..=10i64 {
        let formula = exact::half_integer_factorial(2 * m - 1)?;
        all_match &= formula == by_recurrence;
        by_recurrence = &by_recurrence * &pr(2 * m + 1, 2, 0);
    }
    out.push(Check::flag(
        4,
        "duplication formula, m = 0..10",
        all_match,
        "exact PiRational comparison against the factorial recurrence".into(),
    ));
    out.push(Check::exact(
        4,
        "(−1/2)! = √π",
        &exact::half_integer_factorial(-1)?,
        &PiRational::pi_power(1),
    ));
    Ok(())
}

fn random_polygons(seed: u64) -> Vec<ConvexPolygon> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..RANDOM_POLYGONS)
        .map(|_| {
            let k = rng.random_range(3..=12);
            ConvexPolygon::random(&mut rng, k).expect("points on an ellipse are convex")
        })
        .collect()
}

fn quadrature_checks(cfg: &BatteryConfig, out: &mut Vec<Check>) -> Result<()> {
    let disk = ConvexBody2::UnitDisk;
    out.push(Check::rel(5, "disk I0 = 2π", crofton::chord_moment(&disk, 0)?.value, TAU, 1e-8));
    out.push(Check::rel(5, "disk I1 = π²", crofton::chord_moment(&disk, 1)?.value, PI * PI, 1e-8));
    out.push(Check::rel(
        5,
        "disk I3 = 3π²",
        crofton::chord_moment(&disk, 3)?.value,
        3.0 * PI * PI,
        1e-8,
    ));

    let square = ConvexBody2::Polygon(ConvexPolygon::unit_square());
    out.push(Check::abs(6, "square I3/A² = 3", crofton::chord_moment(&square, 3)?.value, 3.0, 1e-6));
    let mut worst: f64 = 0.0;
    for poly in random_polygons(cfg.seed) {
        let a = poly.area();
        let i3 = crofton::chord_moment(&ConvexBody2::Polygon(poly), 3)?.value;
        worst = worst.max((i3 / (a * a) - 3.0).abs());
    }
    out.push(
        Check::abs(6, "random polygons I3/A² = 3 (worst)", 3.0 + worst, 3.0, 1e-6)
            .with_detail(format!("{RANDOM_POLYGONS} polygons, seed {}", cfg.seed)),
    );

    let segment = Polyline::segment(Point::new([0.0, 0.0]), Point::new([1.0, 0.0]))?;
    out.push(Check::abs(
        7,
        "crofton_length(unit segment) = 1",
        crofton::crofton_length(&segment, cfg.panels),
        1.0,
        1e-6,
    ));
    let gon = Polyline::closed(&ConvexPolygon::regular(1024, 1.0)?);
    out.push(Check::abs(
        7,
        "crofton_length(1024-gon) = perimeter",
        crofton::crofton_length(&gon, cfg.panels),
        gon.length(),
        1e-6,
    ));
    Ok(())
}

fn mc_check(criterion: u32, e: &Estimate, expected: f64, stated: f64) -> Check {
    let tol = stated.max(4.0 * e.std_error);
    Check::abs(criterion, &e.experiment, e.mean, expected, tol).with_detail(format!(
        "n = {}, se = {:.3e}, degenerate = {}",
        e.n, e.std_error, e.degenerate
    ))
}

fn monte_carlo_checks(cfg: &BatteryConfig, out: &mut Vec<Check>) -> Result<()> {
    let mcc = McConfig::new(cfg.samples, cfg.seed, cfg.workers);
    let run = |exp: Experiment, criterion: u32, stated: f64| -> Result<(Estimate, Check)> {
        let e = exp.run(&mcc)?;
        let c = mc_check(criterion, &e, exp.exact()?, stated);
        Ok((e, c))
    };

    let (simplex2, c) = run(Experiment::Simplex(2), 8, 1e-3)?;
    out.push(c);
    let (syl2, c) = run(Experiment::Sylvester(2), 9, 2e-3)?;
    out.push(c);
    let (syl3, c) = run(Experiment::Sylvester(3), 9, 1.5e-3)?;
    out.push(c);
    let (center, c) = run(Experiment::CenterTriangle, 10, 1e-3)?;
    out.push(c);
    out.push(run(Experiment::BoundaryTriangle, 10, 1.5e-3)?.1);
    out.push(run(Experiment::Offcut, 11, 3e-3)?.1);
    let (simplex3, c) = run(Experiment::Simplex(3), 12, 5e-4)?;
    out.push(c);

    // Sylvester probability + (d + 2)·E(simplex)/β_d = 1
    for (d, syl, simplex) in [(2, &syl2, &simplex2), (3, &syl3, &simplex3)] {
        let beta = exact::unit_ball_volume(d)?.to_f64();
        let k = (d + 2) as f64;
        let value = syl.mean + k * simplex.mean / beta;
        let se = (syl.std_error.powi(2) + (k * simplex.std_error / beta).powi(2)).sqrt();
        out.push(Check::abs(9, &format!("sylvester + {k}·simplex/β, d = {d}"), value, 1.0, 4.0 * se));
    }

    for dim in 2..=4 {
        let h = mc::secant_offset_histogram(dim, cfg.bins, &mcc)?;
        out.push(
            Check::new(13, &format!("secant offset χ², d = {dim}"), h.chi2, h.threshold, h.threshold, h.pass)
                .with_detail(format!("dof = {}, degenerate = {}", h.dof, h.degenerate)),
        );
        if dim == 4 {
            let law = exact::secant_offset_density(4)?;
            out.push(Check::abs(
                13,
                "secant offset mean, d = 4",
                h.sample_mean,
                law.mean(),
                3.0 * h.sample_mean_se,
            ));
        }
    }
    let h = mc::max_radius_gof(cfg.bins, &mcc)?;
    out.push(
        Check::new(13, "max radius χ²", h.chi2, h.threshold, h.threshold, h.pass)
            .with_detail(format!("dof = {}", h.dof)),
    );
    let ks = mc::squared_radius_ks(&mcc)?;
    out.push(Check::new(13, "squared radius KS", ks, 0.0, 0.002, ks < 0.002));

    let distance = mc::estimate_mean_distance(&mcc)?;
    let quad_value = crofton::chord_moment(&ConvexBody2::UnitDisk, 4)?.value / (6.0 * PI * PI);
    out.push(mc_check(14, &distance, quad_value, 1e-3));
    out.push(Check::rel(
        14,
        "I4/(6π²) = 128/(45π)",
        quad_value,
        128.0 / (45.0 * PI),
        1e-10,
    ));

    // Repeat one estimator with the same configuration.
    let again = Experiment::CenterTriangle.run(&mcc)?;
    out.push(Check::flag(
        15,
        "repeat run bit-identical",
        again == center,
        format!("workers = {}", cfg.workers),
    ));
    Ok(())
}

fn random_rotation3(rng: &mut ChaCha8Rng) -> [[f64; 3]; 3] {
    // Gram–Schmidt on random Gaussian-ish columns
    let mut cols = [[0.0; 3]; 3];
    for i in 0..3 {
        let mut v: [f64; 3] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
        for c in &cols[..i] {
            let d: f64 = (0..3).map(|k| v[k] * c[k]).sum();
            for k in 0..3 {
                v[k] -= d * c[k];
            }
        }
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        cols[i] = v.map(|x| x / n);
    }
    cols
}

fn apply3(m: &[[f64; 3]; 3], t: [f64; 3], p: &Point3) -> Point3 {
    let c = p.coords();
    Point::new(std::array::from_fn(|i| {
        (0..3).map(|k| m[k][i] * c[k]).sum::<f64>() + t[i]
    }))
}

fn property_checks(cfg: &BatteryConfig, out: &mut Vec<Check>) -> Result<()> {
    let tally = mc::inside_tally_4(&McConfig::new(EXCLUSIVITY_SAMPLES, cfg.seed, cfg.workers))?;
    out.push(Check::new(
        16,
        "quadruples with ≥2 inside events",
        tally.several as f64,
        0.0,
        0.0,
        tally.several == 0,
    )
    .with_detail(format!(
        "{} quadruples: {} none, {} one",
        tally.samples, tally.none, tally.one
    )));

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x9e37_79b9_7f4a_7c15);
    let mut area_err: f64 = 0.0;
    let mut volume_err: f64 = 0.0;
    let mut scale_err: f64 = 0.0;
    let mut affine_mismatch = 0;
    let mut flat_resid: f64 = 0.0;
    for _ in 0..INVARIANCE_TRIALS {
        let pts: [Point2; 4] = mc::sample_uniform_ball_n(&mut rng);
        let angle = rng.random_range(0.0..TAU);
        let shift = [rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0)];
        let (s, c) = angle.sin_cos();
        let moved: Vec<Point2> = pts
            .iter()
            .map(|p| Point::new([c * p.x() - s * p.y() + shift[0], s * p.x() + c * p.y() + shift[1]]))
            .collect();
        let a0 = geom::triangle_area(&pts[0], &pts[1], &pts[2]);
        let a1 = geom::triangle_area(&moved[0], &moved[1], &moved[2]);
        area_err = area_err.max(((a1 - a0) / a0).abs());
        let k = rng.random_range(0.1..10.0);
        let scaled = geom::triangle_area(&(pts[0] * k), &(pts[1] * k), &(pts[2] * k));
        scale_err = scale_err.max(((scaled - k * k * a0) / (k * k * a0)).abs());

        // invertible affine map
        let m: [[f64; 2]; 2] = [
            [rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)],
            [rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)],
        ];
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        if det.abs() > 0.1 {
            let mapped: [Point2; 4] = std::array::from_fn(|i| {
                let (x, y) = (pts[i].x(), pts[i].y());
                Point::new([m[0][0] * x + m[0][1] * y + shift[0], m[1][0] * x + m[1][1] * y + shift[1]])
            });
            if geom::convex_position_4(&pts) != geom::convex_position_4(&mapped) {
                affine_mismatch += 1;
            }
        }

        let tet: [Point3; 4] = mc::sample_uniform_ball_n(&mut rng);
        let rot = random_rotation3(&mut rng);
        let t3 = [rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0)];
        let v0 = geom::tetra_volume(&tet[0], &tet[1], &tet[2], &tet[3]);
        let mv: Vec<Point3> = tet.iter().map(|p| apply3(&rot, t3, p)).collect();
        let v1 = geom::tetra_volume(&mv[0], &mv[1], &mv[2], &mv[3]);
        volume_err = volume_err.max(((v1 - v0) / v0).abs());
        let vs = geom::tetra_volume(&(tet[0] * k), &(tet[1] * k), &(tet[2] * k), &(tet[3] * k));
        scale_err = scale_err.max(((vs - k.powi(3) * v0) / (k.powi(3) * v0)).abs());

        let line = geom::line_from_points(&pts[0], &pts[1])?;
        let plane = geom::plane_from_points(&[tet[0], tet[1], tet[2]])?;
        let hyper: [crate::geom::Point4; 4] = mc::sample_uniform_ball_n(&mut rng);
        let hp = geom::hyperplane_from_points(&hyper)?;
        for r in [line.signed_distance(&pts[0]), line.signed_distance(&pts[1])]
            .into_iter()
            .chain(tet[..3].iter().map(|p| plane.signed_distance(p)))
            .chain(hyper.iter().map(|p| hp.signed_distance(p)))
        {
            flat_resid = flat_resid.max(r.abs());
        }
    }
    out.push(Check::abs(17, "triangle area rigid invariance (rel)", area_err, 0.0, 1e-10));
    out.push(Check::abs(17, "tetra volume rigid invariance (rel)", volume_err, 0.0, 1e-10));
    out.push(Check::abs(17, "simplex scaling laws (rel)", scale_err, 0.0, 1e-10));
    out.push(Check::abs(
        17,
        "convex_position_4 affine invariance (mismatches)",
        affine_mismatch as f64,
        0.0,
        0.0,
    ));
    out.push(Check::abs(17, "flat round-trip residual", flat_resid, 0.0, 1e-9));

    let gon = ConvexBody2::Polygon(ConvexPolygon::regular(4096, 1.0)?);
    // The gap is about 2δp/√(1−p²) for sagitta δ ≤ 1 − cos(π/4096), so 1e-5
    // holds for p ≤ 0.99; closer to tangency only 2·sin(π/4096) is guaranteed.
    let mut chord_err: f64 = 0.0;
    let mut tangent_err: f64 = 0.0;
    for _ in 0..INVARIANCE_TRIALS {
        let theta = rng.random_range(0.0..TAU);
        let line = LineCoords2::new(rng.random_range(0.0..0.99), theta);
        let d = ConvexBody2::UnitDisk.chord_length(&line);
        chord_err = chord_err.max((d - gon.chord_length(&line)).abs());
        let near = LineCoords2::new(rng.random_range(0.99..1.0), theta);
        let d = ConvexBody2::UnitDisk.chord_length(&near);
        tangent_err = tangent_err.max((d - gon.chord_length(&near)).abs());
    }
    out.push(Check::abs(17, "disk chord vs 4096-gon chord, p ≤ 0.99", chord_err, 0.0, 1e-5));
    out.push(Check::abs(
        17,
        "disk chord vs 4096-gon chord, p > 0.99",
        tangent_err,
        0.0,
        2.0 * (PI / 4096.0).sin(),
    ));

    let mut len_err: f64 = 0.0;
    for _ in 0..10 {
        let k = rng.random_range(2..8);
        let curve = Polyline::new(
            (0..k)
                .map(|_| Point::new([rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)]))
                .collect(),
        )?;
        let moved = curve.rigid_motion(
            rng.random_range(0.0..TAU),
            [rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0)],
        );
        let a = crofton::crofton_length(&curve, cfg.panels);
        let b = crofton::crofton_length(&moved, cfg.panels);
        len_err = len_err.max((a - b).abs()).max((a - curve.length()).abs());
    }
    out.push(Check::abs(17, "crofton_length rigid invariance", len_err, 0.0, 1e-6));

    let mut moment_err: f64 = 0.0;
    for poly in random_polygons(cfg.seed).into_iter().take(5) {
        let (perimeter, area) = (poly.perimeter(), poly.area());
        let body = ConvexBody2::Polygon(poly);
        let i0 = crofton::chord_moment(&body, 0)?.value;
        let i1 = crofton::chord_moment(&body, 1)?.value;
        moment_err = moment_err.max((i0 - perimeter).abs()).max((i1 - PI * area).abs());
    }
    out.push(Check::abs(17, "polygon I0 = perimeter, I1 = πA", moment_err, 0.0, 1e-6));
    Ok(())
}
