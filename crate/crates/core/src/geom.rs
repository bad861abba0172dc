//! Geometric predicates and measures.
//!
//! Simplex volumes, point-in-simplex classification, convex-position tests,
//! normal/offset coordinates of affine flats through points, and chord
//! geometry for the unit disk and convex polygons. Everything here is pure.

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::ops::{Add, Mul, Sub};

use rand::Rng;

use crate::error::{Error, Result};

/// Tolerance on orientation determinants and degenerate measures.
pub const EPS: f64 = 1e-12;

/// A point in `D`-dimensional Euclidean space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point<const D: usize>([f64; D]);

pub type Point2 = Point<2>;
pub type Point3 = Point<3>;
pub type Point4 = Point<4>;

impl<const D: usize> Point<D> {
    pub fn new(coords: [f64; D]) -> Self {
        debug_assert!(coords.iter().all(|c| c.is_finite()));
        Point(coords)
    }

    pub fn try_new(coords: [f64; D]) -> Result<Self> {
        if coords.iter().all(|c| c.is_finite()) {
            Ok(Point(coords))
        } else {
            Err(Error::NonFinite)
        }
    }

    pub fn origin() -> Self {
        Point([0.0; D])
    }

    pub fn coords(&self) -> &[f64; D] {
        &self.0
    }

    pub fn dot(&self, other: &Self) -> f64 {
        dot(&self.0, &other.0)
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn distance(&self, other: &Self) -> f64 {
        (*self - *other).norm()
    }
}

impl Point2 {
    pub fn x(&self) -> f64 {
        self.0[0]
    }

    pub fn y(&self) -> f64 {
        self.0[1]
    }
}

impl<const D: usize> Add for Point<D> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Point(std::array::from_fn(|i| self.0[i] + rhs.0[i]))
    }
}

impl<const D: usize> Sub for Point<D> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Point(std::array::from_fn(|i| self.0[i] - rhs.0[i]))
    }
}

impl<const D: usize> Mul<f64> for Point<D> {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        Point(self.0.map(|c| c * s))
    }
}

impl<const D: usize> From<[f64; D]> for Point<D> {
    fn from(coords: [f64; D]) -> Self {
        Point::new(coords)
    }
}

fn dot<const D: usize>(a: &[f64; D], b: &[f64; D]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn det3(r0: [f64; 3], r1: [f64; 3], r2: [f64; 3]) -> f64 {
    r0[0] * (r1[1] * r2[2] - r1[2] * r2[1]) - r0[1] * (r1[0] * r2[2] - r1[2] * r2[0])
        + r0[2] * (r1[0] * r2[1] - r1[1] * r2[0])
}

/// Twice the signed area of `abc`; positive when counter-clockwise.
pub fn orient2d(a: &Point2, b: &Point2, c: &Point2) -> f64 {
    (b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x())
}

/// Six times the signed volume of `abcd`.
pub fn orient3d(a: &Point3, b: &Point3, c: &Point3, d: &Point3) -> f64 {
    det3((*b - *a).0, (*c - *a).0, (*d - *a).0)
}

pub fn triangle_area(a: &Point2, b: &Point2, c: &Point2) -> f64 {
    0.5 * orient2d(a, b, c).abs()
}

pub fn tetra_volume(a: &Point3, b: &Point3, c: &Point3, d: &Point3) -> f64 {
    orient3d(a, b, c, d).abs() / 6.0
}

/// Position of a query point relative to a simplex.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Location {
    Inside,
    Outside,
    Boundary,
}

fn classify(signed: &[f64]) -> Location {
    if signed.iter().any(|&s| s < -EPS) {
        Location::Outside
    } else if signed.iter().all(|&s| s > EPS) {
        Location::Inside
    } else {
        Location::Boundary
    }
}

pub fn point_in_triangle(q: &Point2, a: &Point2, b: &Point2, c: &Point2) -> Result<Location> {
    let det = orient2d(a, b, c);
    if 0.5 * det.abs() < EPS {
        return Err(Error::Degenerate("collinear triangle"));
    }
    let s = det.signum();
    Ok(classify(&[
        s * orient2d(a, b, q),
        s * orient2d(b, c, q),
        s * orient2d(c, a, q),
    ]))
}

pub fn point_in_tetra(
    q: &Point3,
    a: &Point3,
    b: &Point3,
    c: &Point3,
    d: &Point3,
) -> Result<Location> {
    let det = orient3d(a, b, c, d);
    if det.abs() / 6.0 < EPS {
        return Err(Error::Degenerate("coplanar tetrahedron"));
    }
    let s = det.signum();
    Ok(classify(&[
        s * orient3d(q, b, c, d),
        s * orient3d(a, q, c, d),
        s * orient3d(a, b, q, d),
        s * orient3d(a, b, c, q),
    ]))
}

fn others<const N: usize, T: Copy>(pts: &[T; N], skip: usize) -> impl Iterator<Item = T> + '_ {
    pts.iter()
        .enumerate()
        .filter(move |(i, _)| *i != skip)
        .map(|(_, p)| *p)
}

fn any_three_collinear(pts: &[Point2; 4]) -> bool {
    (0..4).any(|skip| {
        let t: Vec<_> = others(pts, skip).collect();
        triangle_area(&t[0], &t[1], &t[2]) < EPS
    })
}

fn any_four_coplanar(pts: &[Point3; 5]) -> bool {
    (0..5).any(|skip| {
        let t: Vec<_> = others(pts, skip).collect();
        tetra_volume(&t[0], &t[1], &t[2], &t[3]) < EPS
    })
}

/// Number of points lying strictly inside the triangle of the other three.
/// Degenerate triples are skipped.
pub fn inside_count_4(pts: &[Point2; 4]) -> usize {
    (0..4)
        .filter(|&i| {
            let t: Vec<_> = others(pts, i).collect();
            matches!(
                point_in_triangle(&pts[i], &t[0], &t[1], &t[2]),
                Ok(Location::Inside)
            )
        })
        .count()
}

/// Number of points lying strictly inside the tetrahedron of the other four.
pub fn inside_count_5_3d(pts: &[Point3; 5]) -> usize {
    (0..5)
        .filter(|&i| {
            let t: Vec<_> = others(pts, i).collect();
            matches!(
                point_in_tetra(&pts[i], &t[0], &t[1], &t[2], &t[3]),
                Ok(Location::Inside)
            )
        })
        .count()
}

/// True iff the four points are the vertices of a convex quadrilateral.
/// Any collinear triple yields `false`.
pub fn convex_position_4(pts: &[Point2; 4]) -> bool {
    !any_three_collinear(pts) && inside_count_4(pts) == 0
}

/// True iff none of the five points lies inside the tetrahedron of the
/// other four. Any coplanar quadruple yields `false`.
pub fn convex_position_5_3d(pts: &[Point3; 5]) -> bool {
    !any_four_coplanar(pts) && inside_count_5_3d(pts) == 0
}

fn angle_0_tau(y: f64, x: f64) -> f64 {
    let t = y.atan2(x);
    let t = if t < 0.0 { t + TAU } else { t };
    if t >= TAU {
        0.0
    } else {
        t
    }
}

// p >= 0; for flats through the origin the first nonzero normal component is positive.
fn canonicalize<const D: usize>(mut normal: [f64; D], mut p: f64) -> ([f64; D], f64) {
    let flip = if p.abs() <= EPS {
        normal
            .iter()
            .find(|c| c.abs() > EPS)
            .is_some_and(|c| *c < 0.0)
    } else {
        p < 0.0
    };
    if flip {
        normal.iter_mut().for_each(|c| *c = -*c);
        p = -p;
    }
    (normal, p.abs())
}

fn normalized<const D: usize>(v: [f64; D]) -> [f64; D] {
    let n = dot(&v, &v).sqrt();
    v.map(|c| c / n)
}

/// Common surface of the normal-offset flat coordinates.
pub trait Flat<const D: usize> {
    fn offset(&self) -> f64;
    fn normal(&self) -> [f64; D];

    fn signed_distance(&self, x: &Point<D>) -> f64 {
        dot(&x.0, &self.normal()) - self.offset()
    }
}

/// Line `{x : x·(cos θ, sin θ) = p}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineCoords2 {
    pub p: f64,
    pub theta: f64,
}

impl LineCoords2 {
    pub fn new(p: f64, theta: f64) -> Self {
        LineCoords2 { p, theta }
    }
}

impl Flat<2> for LineCoords2 {
    fn offset(&self) -> f64 {
        self.p
    }

    fn normal(&self) -> [f64; 2] {
        [self.theta.cos(), self.theta.sin()]
    }
}

/// Plane with normal `(cos θ sin φ, sin θ sin φ, cos φ)` at offset `p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneCoords3 {
    pub p: f64,
    pub theta: f64,
    pub phi: f64,
}

impl Flat<3> for PlaneCoords3 {
    fn offset(&self) -> f64 {
        self.p
    }

    fn normal(&self) -> [f64; 3] {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [ct * sp, st * sp, cp]
    }
}

/// Hyperplane in R⁴ with normal given by four-dimensional spherical coordinates
/// `(cos θ sin φ sin ψ, sin θ sin φ sin ψ, cos φ sin ψ, cos ψ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HyperplaneCoords4 {
    pub p: f64,
    pub theta: f64,
    pub phi: f64,
    pub psi: f64,
}

impl Flat<4> for HyperplaneCoords4 {
    fn offset(&self) -> f64 {
        self.p
    }

    fn normal(&self) -> [f64; 4] {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        let (ss, cs) = self.psi.sin_cos();
        [ct * sp * ss, st * sp * ss, cp * ss, cs]
    }
}

pub fn line_from_points(p1: &Point2, p2: &Point2) -> Result<LineCoords2> {
    let d = *p2 - *p1;
    if d.norm() <= EPS {
        return Err(Error::CoincidentPoints);
    }
    let n = normalized([-d.y(), d.x()]);
    let (n, p) = canonicalize(n, dot(&n, &p1.0));
    Ok(LineCoords2 {
        p,
        theta: angle_0_tau(n[1], n[0]),
    })
}

pub fn plane_from_points(pts: &[Point3; 3]) -> Result<PlaneCoords3> {
    let u = (pts[1] - pts[0]).0;
    let v = (pts[2] - pts[0]).0;
    let cross = [
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    ];
    if 0.5 * dot(&cross, &cross).sqrt() < EPS {
        return Err(Error::Degenerate("collinear points span no plane"));
    }
    let n = normalized(cross);
    let (n, p) = canonicalize(n, dot(&n, &pts[0].0));
    Ok(PlaneCoords3 {
        p,
        theta: angle_0_tau(n[1], n[0]),
        phi: n[2].clamp(-1.0, 1.0).acos(),
    })
}

pub fn hyperplane_from_points(pts: &[Point4; 4]) -> Result<HyperplaneCoords4> {
    let rows = [
        (pts[1] - pts[0]).0,
        (pts[2] - pts[0]).0,
        (pts[3] - pts[0]).0,
    ];
    // Cofactor expansion along a fourth row x: gcross·x = det[rows; x].
    let mut gcross = [0.0; 4];
    for (i, g) in gcross.iter_mut().enumerate() {
        let mut cols = [0usize; 3];
        for (slot, j) in cols.iter_mut().zip((0..4).filter(|&j| j != i)) {
            *slot = j;
        }
        let pick = |r: &[f64; 4]| [r[cols[0]], r[cols[1]], r[cols[2]]];
        let sign = if (3 + i) % 2 == 0 { 1.0 } else { -1.0 };
        *g = sign * det3(pick(&rows[0]), pick(&rows[1]), pick(&rows[2]));
    }
    if dot(&gcross, &gcross).sqrt() / 6.0 < EPS {
        return Err(Error::Degenerate("coplanar points span no hyperplane"));
    }
    let n = normalized(gcross);
    let (n, p) = canonicalize(n, dot(&n, &pts[0].0));
    let psi = n[3].clamp(-1.0, 1.0).acos();
    let s = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt();
    let (theta, phi) = if s > EPS {
        (angle_0_tau(n[1], n[0]), (n[2] / s).clamp(-1.0, 1.0).acos())
    } else {
        (0.0, 0.0)
    };
    Ok(HyperplaneCoords4 { p, theta, phi, psi })
}

/// Area of the smaller piece of the unit disk cut off by a chord at offset `h`.
pub fn segment_area(h: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&h) {
        return Err(Error::Domain(format!("segment offset {h} outside [0, 1]")));
    }
    Ok(FRAC_PI_2 - h * (1.0 - h * h).sqrt() - h.asin())
}

/// Strictly convex polygon with counter-clockwise vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexPolygon {
    vertices: Vec<Point2>,
    area: f64,
    perimeter: f64,
}

impl ConvexPolygon {
    pub fn new(vertices: Vec<Point2>) -> Result<Self> {
        let k = vertices.len();
        if k < 3 {
            return Err(Error::InvalidPolygon("fewer than three vertices"));
        }
        if vertices.iter().any(|v| v.0.iter().any(|c| !c.is_finite())) {
            return Err(Error::NonFinite);
        }
        let mut turning = 0.0;
        for i in 0..k {
            let (a, b, c) = (vertices[i], vertices[(i + 1) % k], vertices[(i + 2) % k]);
            let cross = orient2d(&a, &b, &c);
            if cross <= EPS {
                return Err(Error::InvalidPolygon(
                    "not strictly convex and counter-clockwise",
                ));
            }
            let (u, v) = (b - a, c - b);
            turning += cross.atan2(u.dot(&v));
        }
        if (turning - TAU).abs() > 1e-6 {
            return Err(Error::InvalidPolygon("boundary winds more than once"));
        }
        let area = 0.5
            * (0..k)
                .map(|i| {
                    let (a, b) = (vertices[i], vertices[(i + 1) % k]);
                    a.x() * b.y() - b.x() * a.y()
                })
                .sum::<f64>();
        let perimeter = (0..k).map(|i| vertices[i].distance(&vertices[(i + 1) % k])).sum();
        Ok(ConvexPolygon {
            vertices,
            area,
            perimeter,
        })
    }

    pub fn unit_square() -> Self {
        Self::new(vec![
            [0.0, 0.0].into(),
            [1.0, 0.0].into(),
            [1.0, 1.0].into(),
            [0.0, 1.0].into(),
        ])
        .expect("unit square is convex")
    }

    /// Regular `k`-gon inscribed in the circle of the given radius about the origin.
    pub fn regular(k: usize, radius: f64) -> Result<Self> {
        Self::new(
            (0..k)
                .map(|i| {
                    let t = TAU * i as f64 / k as f64;
                    Point::new([radius * t.cos(), radius * t.sin()])
                })
                .collect(),
        )
    }

    /// Random strictly convex polygon: sorted angles on the unit circle pushed
    /// through a random orientation-preserving affine map.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, k: usize) -> Result<Self> {
        if k < 3 {
            return Err(Error::InvalidPolygon("fewer than three vertices"));
        }
        let min_gap = 0.25 * TAU / k as f64;
        let angles = loop {
            let mut a: Vec<f64> = (0..k).map(|_| rng.random::<f64>() * TAU).collect();
            a.sort_by(f64::total_cmp);
            let wrap = a[0] + TAU - a[k - 1];
            if wrap >= min_gap && a.windows(2).all(|w| w[1] - w[0] >= min_gap) {
                break a;
            }
        };
        let (sx, sy) = (rng.random_range(0.5..1.5), rng.random_range(0.5..1.5));
        let shear = rng.random_range(-0.5..0.5);
        let (tx, ty) = (rng.random_range(-0.5..0.5), rng.random_range(-0.5..0.5));
        Self::new(
            angles
                .iter()
                .map(|t| {
                    let (s, c) = t.sin_cos();
                    Point::new([sx * c + shear * s + tx, sy * s + ty])
                })
                .collect(),
        )
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn area(&self) -> f64 {
        self.area
    }

    pub fn perimeter(&self) -> f64 {
        self.perimeter
    }

    pub fn contains(&self, q: &Point2) -> bool {
        let k = self.vertices.len();
        (0..k).all(|i| orient2d(&self.vertices[i], &self.vertices[(i + 1) % k], q) >= -EPS)
    }

    /// `(min, max)` of `v·n` over the vertices.
    pub fn projection_range(&self, normal: [f64; 2]) -> (f64, f64) {
        self.vertices
            .iter()
            .map(|v| dot(&v.0, &normal))
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| {
                (lo.min(x), hi.max(x))
            })
    }

    /// Length of the intersection of the polygon with a line, by clipping a
    /// long parametric segment against every edge half-plane.
    pub fn chord_length(&self, line: &LineCoords2) -> f64 {
        let n = line.normal();
        let dir = [-n[1], n[0]];
        let base = [line.p * n[0], line.p * n[1]];
        let reach = self
            .vertices
            .iter()
            .map(|v| v.norm())
            .fold(0.0, f64::max)
            + line.p.abs()
            + 1.0;
        let (mut lo, mut hi) = (-reach, reach);
        let k = self.vertices.len();
        for i in 0..k {
            let (a, b) = (self.vertices[i], self.vertices[(i + 1) % k]);
            let e = b - a;
            // Inside when cross(e, x - a) >= 0, with x = base + s·dir.
            let f0 = e.x() * (base[1] - a.y()) - e.y() * (base[0] - a.x());
            let f1 = e.x() * dir[1] - e.y() * dir[0];
            if f1.abs() < f64::MIN_POSITIVE {
                if f0 < 0.0 {
                    return 0.0;
                }
                continue;
            }
            let s = -f0 / f1;
            if f1 > 0.0 {
                lo = lo.max(s);
            } else {
                hi = hi.min(s);
            }
            if lo >= hi {
                return 0.0;
            }
        }
        hi - lo
    }
}

/// Two-dimensional convex body.
#[derive(Debug, Clone, PartialEq)]
pub enum ConvexBody2 {
    UnitDisk,
    Polygon(ConvexPolygon),
}

impl ConvexBody2 {
    pub fn area(&self) -> f64 {
        match self {
            ConvexBody2::UnitDisk => PI,
            ConvexBody2::Polygon(poly) => poly.area(),
        }
    }

    pub fn perimeter(&self) -> f64 {
        match self {
            ConvexBody2::UnitDisk => TAU,
            ConvexBody2::Polygon(poly) => poly.perimeter(),
        }
    }

    pub fn contains(&self, q: &Point2) -> bool {
        match self {
            ConvexBody2::UnitDisk => q.norm() <= 1.0 + EPS,
            ConvexBody2::Polygon(poly) => poly.contains(q),
        }
    }

    pub fn chord_length(&self, line: &LineCoords2) -> f64 {
        match self {
            ConvexBody2::UnitDisk => disk_chord(line.p),
            ConvexBody2::Polygon(poly) => poly.chord_length(line),
        }
    }

    pub fn label(&self) -> String {
        match self {
            ConvexBody2::UnitDisk => "unit-disk".to_string(),
            ConvexBody2::Polygon(poly) => format!("polygon-{}", poly.vertices().len()),
        }
    }
}

fn disk_chord(p: f64) -> f64 {
    let p = p.abs();
    if p < 1.0 {
        2.0 * (1.0 - p * p).sqrt()
    } else {
        0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    macro_rules! assert_close {
        ($a:expr, $b:expr, $tol:expr) => {{
            let (a, b): (f64, f64) = ($a, $b);
            assert!((a - b).abs() <= $tol, "{a} vs {b} (tol {})", $tol);
        }};
    }

    fn p2(x: f64, y: f64) -> Point2 {
        Point::new([x, y])
    }

    fn p3(x: f64, y: f64, z: f64) -> Point3 {
        Point::new([x, y, z])
    }

    #[test]
    fn triangle_area_examples() {
        assert_eq!(triangle_area(&p2(0., 0.), &p2(1., 0.), &p2(0., 1.)), 0.5);
        assert_eq!(triangle_area(&p2(0., 0.), &p2(1., 1.), &p2(2., 2.)), 0.0);
        assert_eq!(triangle_area(&p2(0., 0.), &p2(2., 0.), &p2(0., 3.)), 3.0);
    }

    #[test]
    fn tetra_volume_examples() {
        let o = p3(0., 0., 0.);
        let (x, y, z) = (p3(1., 0., 0.), p3(0., 1., 0.), p3(0., 0., 1.));
        assert_close!(tetra_volume(&o, &x, &y, &z), 1.0 / 6.0, 1e-15);
        assert_eq!(tetra_volume(&o, &x, &y, &p3(1., 1., 0.)), 0.0);
        assert_close!(
            tetra_volume(&o, &(x * 2.0), &(y * 2.0), &(z * 2.0)),
            8.0 / 6.0,
            1e-15
        );
    }

    #[test]
    fn point_in_triangle_examples() {
        let (a, b, c) = (p2(0., 0.), p2(1., 0.), p2(0., 1.));
        let centroid = p2(1. / 3., 1. / 3.);
        assert_eq!(point_in_triangle(&centroid, &a, &b, &c), Ok(Location::Inside));
        assert_eq!(point_in_triangle(&p2(5., 5.), &a, &b, &c), Ok(Location::Outside));
        assert_eq!(point_in_triangle(&p2(0.5, 0.), &a, &b, &c), Ok(Location::Boundary));
        // clockwise input gives the same answers
        assert_eq!(point_in_triangle(&centroid, &a, &c, &b), Ok(Location::Inside));
        assert!(matches!(
            point_in_triangle(&centroid, &a, &b, &p2(2., 0.)),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn point_in_tetra_examples() {
        let (o, x, y, z) = (p3(0., 0., 0.), p3(1., 0., 0.), p3(0., 1., 0.), p3(0., 0., 1.));
        let inside = point_in_tetra(&p3(0.25, 0.25, 0.25), &o, &x, &y, &z);
        assert_eq!(inside, Ok(Location::Inside));
        assert_eq!(point_in_tetra(&p3(2., 2., 2.), &o, &x, &y, &z), Ok(Location::Outside));
        let face = p3(1. / 3., 1. / 3., 0.);
        assert_eq!(point_in_tetra(&face, &o, &x, &y, &z), Ok(Location::Boundary));
        assert!(point_in_tetra(&face, &o, &x, &y, &p3(1., 1., 0.)).is_err());
    }

    #[test]
    fn convex_position_examples() {
        let square = [p2(0., 0.), p2(1., 0.), p2(1., 1.), p2(0., 1.)];
        assert!(convex_position_4(&square));
        let with_centroid = [p2(0., 0.), p2(1., 0.), p2(0., 1.), p2(1. / 3., 1. / 3.)];
        assert!(!convex_position_4(&with_centroid));
        assert_eq!(inside_count_4(&with_centroid), 1);
        let collinear = [p2(0., 0.), p2(1., 0.), p2(2., 0.), p2(0., 1.)];
        assert!(!convex_position_4(&collinear));

        let bipyramid = [
            p3(1., 0., 0.),
            p3(-0.5, 0.8, 0.),
            p3(-0.5, -0.8, 0.),
            p3(0., 0., 1.),
            p3(0., 0., -1.),
        ];
        assert!(convex_position_5_3d(&bipyramid));
        let with_centroid = [
            p3(0., 0., 0.),
            p3(1., 0., 0.),
            p3(0., 1., 0.),
            p3(0., 0., 1.),
            p3(0.25, 0.25, 0.25),
        ];
        assert!(!convex_position_5_3d(&with_centroid));
        let coplanar = [
            p3(0., 0., 0.),
            p3(1., 0., 0.),
            p3(0., 1., 0.),
            p3(1., 1., 0.),
            p3(0., 0., 1.),
        ];
        assert!(!convex_position_5_3d(&coplanar));
    }

    #[test]
    fn line_from_points_examples() {
        let l = line_from_points(&p2(0., 1.), &p2(1., 1.)).unwrap();
        assert_close!(l.p, 1.0, 1e-15);
        assert_close!(l.theta, FRAC_PI_2, 1e-15);

        let l = line_from_points(&p2(1., 0.), &p2(0., 1.)).unwrap();
        assert_close!(l.p, 0.5f64.sqrt(), 1e-15);
        assert_close!(l.theta, PI / 4.0, 1e-15);
        // substitution check
        for q in [p2(1., 0.), p2(0., 1.)] {
            assert!(l.signed_distance(&q).abs() < 1e-12);
        }

        let l = line_from_points(&p2(0., 0.), &p2(1., 0.)).unwrap();
        assert_eq!(l.p, 0.0);
        assert_close!(l.theta, FRAC_PI_2, 1e-15);
        // reversed order gives the same representative
        let r = line_from_points(&p2(1., 0.), &p2(0., 0.)).unwrap();
        assert_close!(r.theta, l.theta, 1e-15);

        assert_eq!(
            line_from_points(&p2(0.3, 0.3), &p2(0.3, 0.3)),
            Err(Error::CoincidentPoints)
        );
    }

    #[test]
    fn plane_and_hyperplane_examples() {
        let pl = plane_from_points(&[p3(1., 0., 0.), p3(0., 1., 0.), p3(0., 0., 1.)]).unwrap();
        assert_close!(pl.p, 1.0 / 3f64.sqrt(), 1e-14);

        let pl = plane_from_points(&[p3(0.2, 0.1, 0.), p3(-0.5, 0.3, 0.), p3(0.4, -0.9, 0.)])
            .unwrap();
        assert_close!(pl.p, 0.0, 1e-15);
        assert_close!(pl.normal()[2], 1.0, 1e-15);

        let hp = hyperplane_from_points(&[
            Point::new([0., 0., 0., 0.5]),
            Point::new([1., 0., 0., 0.5]),
            Point::new([0., 1., 0., 0.5]),
            Point::new([0., 0., 1., 0.5]),
        ])
        .unwrap();
        assert_close!(hp.p, 0.5, 1e-15);
        assert_close!(hp.psi, 0.0, 1e-7);

        assert!(plane_from_points(&[p3(0., 0., 0.), p3(1., 1., 1.), p3(2., 2., 2.)]).is_err());
        assert!(hyperplane_from_points(&[
            Point::new([0., 0., 0., 0.]),
            Point::new([1., 0., 0., 0.]),
            Point::new([0., 1., 0., 0.]),
            Point::new([1., 1., 0., 0.]),
        ])
        .is_err());
    }

    #[test]
    fn segment_area_examples() {
        assert_close!(segment_area(0.0).unwrap(), FRAC_PI_2, 1e-15);
        assert_close!(segment_area(1.0).unwrap(), 0.0, 1e-15);
        // independent oracle: 2∫_h^1 √(1−x²) dx by midpoint rule
        let m = 200_000;
        let w = 0.5 / m as f64;
        let oracle: f64 = (0..m)
            .map(|i| {
                let x = 0.5 + (i as f64 + 0.5) * w;
                2.0 * (1.0 - x * x).sqrt() * w
            })
            .sum();
        assert_close!(oracle, PI / 3.0 - 3f64.sqrt() / 4.0, 1e-7);
        assert_close!(segment_area(0.5).unwrap(), PI / 3.0 - 3f64.sqrt() / 4.0, 1e-14);
        assert!(segment_area(1.01).is_err());
        assert!(segment_area(-0.01).is_err());
    }

    #[test]
    fn chord_length_examples() {
        let disk = ConvexBody2::UnitDisk;
        assert_eq!(disk.chord_length(&LineCoords2::new(0.0, 1.3)), 2.0);
        assert_eq!(disk.chord_length(&LineCoords2::new(1.0, 0.2)), 0.0);
        let square = ConvexBody2::Polygon(ConvexPolygon::unit_square());
        assert_close!(square.chord_length(&LineCoords2::new(0.5, 0.0)), 1.0, 1e-14);
        assert_close!(square.chord_length(&LineCoords2::new(0.5, FRAC_PI_2)), 1.0, 1e-14);
        // diagonal
        assert_close!(
            square.chord_length(&LineCoords2::new(0.5f64.sqrt(), PI / 4.0)),
            2f64.sqrt(),
            1e-12
        );
        assert_eq!(square.chord_length(&LineCoords2::new(2.0, 0.0)), 0.0);
    }

    #[test]
    fn polygon_validation() {
        assert!(ConvexPolygon::new(vec![p2(0., 0.), p2(1., 0.)]).is_err());
        // clockwise
        assert!(ConvexPolygon::new(vec![p2(0., 0.), p2(0., 1.), p2(1., 0.)]).is_err());
        // reflex vertex
        assert!(ConvexPolygon::new(vec![
            p2(0., 0.),
            p2(2., 0.),
            p2(1., 0.2),
            p2(2., 2.),
            p2(0., 2.)
        ])
        .is_err());
        let sq = ConvexPolygon::unit_square();
        assert_eq!(sq.area(), 1.0);
        assert_eq!(sq.perimeter(), 4.0);
        assert!(sq.contains(&p2(0.5, 0.5)));
        assert!(!sq.contains(&p2(1.5, 0.5)));
    }

    #[test]
    fn random_polygons_are_valid() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for k in 3..12 {
            let poly = ConvexPolygon::random(&mut rng, k).unwrap();
            assert_eq!(poly.vertices().len(), k);
            assert!(poly.area() > 0.0);
        }
    }
}
