use std::f64::consts::{PI, TAU};

use geoprob_core::crofton::{self, Polyline};
use geoprob_core::exact;
use geoprob_core::geom::{
    self, ConvexBody2, ConvexPolygon, Flat, LineCoords2, Point, Point2, Point3, Point4,
};
use geoprob_core::mc::{Experiment, McConfig};
use geoprob_core::quad;
use proptest::prelude::*;

fn coord() -> impl Strategy<Value = f64> {
    -1.0..1.0f64
}

fn point2() -> impl Strategy<Value = Point2> {
    (coord(), coord()).prop_map(|(x, y)| Point::new([x, y]))
}

fn point3() -> impl Strategy<Value = Point3> {
    (coord(), coord(), coord()).prop_map(|(x, y, z)| Point::new([x, y, z]))
}

fn point4() -> impl Strategy<Value = Point4> {
    (coord(), coord(), coord(), coord()).prop_map(|(a, b, c, d)| Point::new([a, b, c, d]))
}

fn rotate2(p: &Point2, angle: f64, shift: [f64; 2]) -> Point2 {
    let (s, c) = angle.sin_cos();
    Point::new([c * p.x() - s * p.y() + shift[0], s * p.x() + c * p.y() + shift[1]])
}

// Rotation about an axis by Rodrigues' formula.
fn rotate3(p: &Point3, axis: [f64; 3], angle: f64, shift: [f64; 3]) -> Point3 {
    let n = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
    let k = axis.map(|a| a / n);
    let v = *p.coords();
    let (s, c) = angle.sin_cos();
    let kv = k[0] * v[0] + k[1] * v[1] + k[2] * v[2];
    let cross = [
        k[1] * v[2] - k[2] * v[1],
        k[2] * v[0] - k[0] * v[2],
        k[0] * v[1] - k[1] * v[0],
    ];
    Point::new(std::array::from_fn(|i| {
        v[i] * c + cross[i] * s + k[i] * kv * (1.0 - c) + shift[i]
    }))
}

proptest! {
    #[test]
    fn triangle_area_rigid_and_scaling(
        a in point2(), b in point2(), c in point2(),
        angle in 0.0..TAU, dx in -10.0..10.0f64, dy in -10.0..10.0f64, s in 0.1..10.0f64,
    ) {
        let area = geom::triangle_area(&a, &b, &c);
        prop_assume!(area > 1e-6);
        let moved = geom::triangle_area(
            &rotate2(&a, angle, [dx, dy]),
            &rotate2(&b, angle, [dx, dy]),
            &rotate2(&c, angle, [dx, dy]),
        );
        prop_assert!(((moved - area) / area).abs() < 1e-10);
        let scaled = geom::triangle_area(&(a * s), &(b * s), &(c * s));
        prop_assert!(((scaled - s * s * area) / (s * s * area)).abs() < 1e-10);
    }

    #[test]
    fn tetra_volume_rigid_and_scaling(
        p in prop::array::uniform4(point3()),
        axis in prop::array::uniform3(0.1..1.0f64),
        angle in 0.0..TAU, shift in prop::array::uniform3(-5.0..5.0f64), s in 0.1..10.0f64,
    ) {
        let v = geom::tetra_volume(&p[0], &p[1], &p[2], &p[3]);
        prop_assume!(v > 1e-6);
        let m: Vec<Point3> = p.iter().map(|q| rotate3(q, axis, angle, shift)).collect();
        let moved = geom::tetra_volume(&m[0], &m[1], &m[2], &m[3]);
        prop_assert!(((moved - v) / v).abs() < 1e-10);
        let scaled = geom::tetra_volume(&(p[0] * s), &(p[1] * s), &(p[2] * s), &(p[3] * s));
        prop_assert!(((scaled - s.powi(3) * v) / (s.powi(3) * v)).abs() < 1e-10);
    }

    #[test]
    fn convex_position_is_affine_invariant(
        p in prop::array::uniform4(point2()),
        m in prop::array::uniform4(-2.0..2.0f64),
        shift in prop::array::uniform2(-5.0..5.0f64),
    ) {
        let det = m[0] * m[3] - m[1] * m[2];
        prop_assume!(det.abs() > 0.1);
        // stay clear of near-collinear triples where the predicate is ill-conditioned
        for (i, j, k) in [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)] {
            prop_assume!(geom::triangle_area(&p[i], &p[j], &p[k]) > 1e-6);
        }
        let mapped = p.map(|q| Point::new([
            m[0] * q.x() + m[1] * q.y() + shift[0],
            m[2] * q.x() + m[3] * q.y() + shift[1],
        ]));
        prop_assert_eq!(geom::convex_position_4(&p), geom::convex_position_4(&mapped));
        prop_assert!(geom::inside_count_4(&p) <= 1);
    }

    #[test]
    fn flats_pass_through_their_points(
        a in point2(), b in point2(),
        t in prop::array::uniform3(point3()),
        h in prop::array::uniform4(point4()),
    ) {
        prop_assume!(a.distance(&b) > 1e-3);
        let line = geom::line_from_points(&a, &b).unwrap();
        prop_assert!(line.p >= 0.0);
        prop_assert!(line.signed_distance(&a).abs() < 1e-9);
        prop_assert!(line.signed_distance(&b).abs() < 1e-9);
        if let Ok(plane) = geom::plane_from_points(&t) {
            for q in &t {
                prop_assert!(plane.signed_distance(q).abs() < 1e-9);
            }
        }
        if let Ok(hp) = geom::hyperplane_from_points(&h) {
            for q in &h {
                prop_assert!(hp.signed_distance(q).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn eta_is_additive_over_concatenation(
        pts in prop::collection::vec(point2(), 3..8),
        split in 1usize..6, p in 0.0..1.5f64, theta in 0.0..TAU,
    ) {
        let split = split.min(pts.len() - 2);
        let whole = Polyline::new(pts.clone());
        prop_assume!(whole.is_ok());
        let whole = whole.unwrap();
        let head = Polyline::new(pts[..=split].to_vec()).unwrap();
        let tail = Polyline::new(pts[split..].to_vec()).unwrap();
        let line = LineCoords2::new(p, theta);
        // only generic lines: the shared vertex must not lie on the line
        prop_assume!(line.signed_distance(&pts[split]).abs() > 1e-9);
        prop_assert_eq!(
            crofton::eta_count(&whole, &line),
            crofton::eta_count(&head, &line) + crofton::eta_count(&tail, &line)
        );
    }

    #[test]
    fn crofton_length_is_rigid_invariant(
        pts in prop::collection::vec(point2(), 2..6),
        angle in 0.0..TAU, shift in prop::array::uniform2(-3.0..3.0f64),
    ) {
        let curve = Polyline::new(pts);
        prop_assume!(curve.is_ok());
        let curve = curve.unwrap();
        let moved = curve.rigid_motion(angle, shift);
        let a = crofton::crofton_length(&curve, crofton::DEFAULT_PANELS);
        let b = crofton::crofton_length(&moved, crofton::DEFAULT_PANELS);
        prop_assert!((a - b).abs() < 1e-6);
        prop_assert!((a - curve.length()).abs() < 1e-6);
    }
}

#[test]
fn disk_chord_matches_fine_polygon() {
    use rand::{Rng, SeedableRng};
    let gon = ConvexBody2::Polygon(ConvexPolygon::regular(4096, 1.0).unwrap());
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
    for _ in 0..1000 {
        let theta = rng.random_range(0.0..TAU);
        // near tangency the gap grows like 1/√(1−p²); see the battery
        let line = LineCoords2::new(rng.random_range(0.0..0.99), theta);
        let gap = ConvexBody2::UnitDisk.chord_length(&line) - gon.chord_length(&line);
        assert!(gap.abs() < 1e-5, "p = {}, gap = {gap}", line.p);
        let near = LineCoords2::new(rng.random_range(0.99..1.0), theta);
        let gap = ConvexBody2::UnitDisk.chord_length(&near) - gon.chord_length(&near);
        assert!(gap.abs() <= 2.0 * (PI / 4096.0).sin());
    }
}

#[test]
fn low_moments_give_perimeter_and_area() {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    for k in [3, 4, 5, 8, 12] {
        let poly = ConvexPolygon::random(&mut rng, k).unwrap();
        let (perimeter, area) = (poly.perimeter(), poly.area());
        let body = ConvexBody2::Polygon(poly);
        let i0 = crofton::chord_moment(&body, 0).unwrap().value;
        let i1 = crofton::chord_moment(&body, 1).unwrap().value;
        let i3 = crofton::chord_moment(&body, 3).unwrap().value;
        assert!((i0 - perimeter).abs() < 1e-6, "k = {k}: {i0} vs {perimeter}");
        assert!((i1 - PI * area).abs() < 1e-6, "k = {k}: {i1} vs {}", PI * area);
        assert!((i3 / (area * area) - 3.0).abs() < 1e-6, "k = {k}");
    }
}

#[test]
fn half_ball_integral_matches_quadrature() {
    for n in 1..=20i64 {
        let exact = exact::half_ball_integral(n).unwrap().to_f64();
        let e = (n - 1) as f64 / 2.0;
        // (1 − p²)^((N−1)/2) has a square-root endpoint for even N; p = sin t removes it
        let q = quad::integrate(|t: f64| t.cos().powf(2.0 * e + 1.0), 0.0, PI / 2.0);
        assert!((exact - q.value).abs() < 1e-10, "N = {n}: {exact} vs {}", q.value);
    }
}

#[test]
fn density_laws_integrate_to_one() {
    for dim in 2..=4 {
        let law = exact::secant_offset_density(dim).unwrap();
        assert!((law.mass(0.0, 1.0) - 1.0).abs() < 1e-10, "dim {dim}");
    }
    assert!((exact::max_radius_density().mass(0.0, 1.0) - 1.0).abs() < 1e-12);
}

#[test]
fn sylvester_and_simplex_targets_are_consistent() {
    for d in 2..=3u32 {
        let beta = exact::unit_ball_volume(i64::from(d)).unwrap().to_f64();
        let simplex = Experiment::Simplex(d).exact().unwrap();
        let syl = Experiment::Sylvester(d).exact().unwrap();
        assert!((syl + f64::from(d + 2) * simplex / beta - 1.0).abs() < 1e-14);
    }
}

// Each 95% interval should cover its target about 95% of the time; with 20
// independent repetitions, fewer than 15 hits has probability below 1e-3.
#[test]
fn confidence_intervals_cover_targets() {
    for exp in [
        Experiment::Simplex(2),
        Experiment::Sylvester(2),
        Experiment::CenterTriangle,
        Experiment::Offcut,
    ] {
        let truth = exp.exact().unwrap();
        let hits = (0..20u64)
            .filter(|&rep| {
                let e = exp.run(&McConfig::new(10_000, 1000 + rep, 1)).unwrap();
                e.ci95.0 <= truth && truth <= e.ci95.1
            })
            .count();
        assert!(hits >= 15, "{exp:?}: {hits}/20");
    }
}

#[test]
fn worker_count_changes_streams_not_targets() {
    let truth = Experiment::Sylvester(2).exact().unwrap();
    for workers in [1, 3, 8] {
        let e = Experiment::Sylvester(2).run(&McConfig::new(200_000, 5, workers)).unwrap();
        assert_eq!(e.n, 200_000);
        assert!((e.mean - truth).abs() < 4.5 * e.std_error);
        let again = Experiment::Sylvester(2).run(&McConfig::new(200_000, 5, workers)).unwrap();
        assert_eq!(e, again);
    }
}
