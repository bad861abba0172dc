//! Crofton's formula and chord-moment identities by quadrature over the
//! invariant line measure `dp dθ` (unoriented lines, `p > 0`, `θ ∈ [0, 2π)`).

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geom::{ConvexBody2, ConvexPolygon, Flat, LineCoords2, Point2, EPS};
use crate::quad;

/// Default panel count of the θ quadrature in [`crofton_length`].
pub const DEFAULT_PANELS: usize = 4096;
/// Largest chord-moment order supported.
pub const MAX_MOMENT: u32 = 8;

const INNER_TOL: f64 = 1e-12;
const OUTER_TOL: f64 = 1e-11;

/// Open polygonal chain.
#[derive(Debug, Clone, PartialEq)]
pub struct Polyline {
    vertices: Vec<Point2>,
}

impl Polyline {
    pub fn new(vertices: Vec<Point2>) -> Result<Self> {
        if vertices.len() < 2 {
            return Err(Error::InvalidPolyline("fewer than two vertices"));
        }
        if vertices.iter().any(|v| v.coords().iter().any(|c| !c.is_finite())) {
            return Err(Error::NonFinite);
        }
        if vertices.windows(2).any(|w| w[0].distance(&w[1]) <= EPS) {
            return Err(Error::InvalidPolyline("repeated consecutive vertex"));
        }
        Ok(Polyline { vertices })
    }

    pub fn segment(a: Point2, b: Point2) -> Result<Self> {
        Self::new(vec![a, b])
    }

    /// Closed chain through the polygon's vertices.
    pub fn closed(poly: &ConvexPolygon) -> Self {
        let mut vertices = poly.vertices().to_vec();
        vertices.push(vertices[0]);
        Polyline { vertices }
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn length(&self) -> f64 {
        self.vertices.windows(2).map(|w| w[0].distance(&w[1])).sum()
    }

    /// Chain continuing with `other`; a shared junction vertex is not repeated.
    pub fn concat(&self, other: &Polyline) -> Result<Self> {
        let mut vertices = self.vertices.clone();
        let skip = usize::from(
            self.vertices
                .last()
                .is_some_and(|v| v.distance(&other.vertices[0]) <= EPS),
        );
        vertices.extend_from_slice(&other.vertices[skip..]);
        Polyline::new(vertices)
    }

    /// Image under `x ↦ R(angle)·x + shift`.
    pub fn rigid_motion(&self, angle: f64, shift: [f64; 2]) -> Self {
        let (s, c) = angle.sin_cos();
        Polyline {
            vertices: self
                .vertices
                .iter()
                .map(|v| Point2::new([c * v.x() - s * v.y() + shift[0], s * v.x() + c * v.y() + shift[1]]))
                .collect(),
        }
    }
}

/// Number of crossings of `line` with `curve`.
///
/// Vertices on the line are counted on the far side (`x·n − p ≤ ε` is
/// "below"), which is the limit of the slightly shifted line `p + δ`: a
/// vertex between two segments that the line separates counts once, a
/// grazing vertex counts zero or two, and a segment lying in the line none.
pub fn eta_count(curve: &Polyline, line: &LineCoords2) -> usize {
    let above: Vec<bool> = curve
        .vertices
        .iter()
        .map(|v| line.signed_distance(v) > EPS)
        .collect();
    above.windows(2).filter(|w| w[0] != w[1]).count()
}

// ∫₀^∞ η_segment(θ, p) dp: the part of the projection interval with p > 0.
fn projected_measure(curve: &Polyline, theta: f64) -> f64 {
    let (s, c) = theta.sin_cos();
    curve
        .vertices
        .windows(2)
        .map(|w| {
            let a = w[0].x() * c + w[0].y() * s;
            let b = w[1].x() * c + w[1].y() * s;
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            hi.max(0.0) - lo.max(0.0)
        })
        .sum()
}

/// Curve length as half the line-measure integral of the crossing count.
/// The p-integral is exact per segment; θ uses composite Simpson.
pub fn crofton_length(curve: &Polyline, panels: usize) -> f64 {
    0.5 * quad::composite_simpson(|t| projected_measure(curve, t), 0.0, TAU, panels)
}

/// Chord moment `I_n = ∫ l(σ)ⁿ m(dσ)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentResult {
    pub body: String,
    pub n: u32,
    pub value: f64,
    pub error: f64,
}

pub fn chord_moment(body: &ConvexBody2, n: u32) -> Result<MomentResult> {
    if n > MAX_MOMENT {
        return Err(Error::Domain(format!(
            "chord moment order {n} exceeds {MAX_MOMENT}"
        )));
    }
    let q = match body {
        ConvexBody2::UnitDisk => disk_moment(body, n),
        ConvexBody2::Polygon(poly) => polygon_moment(body, poly, n),
    };
    Ok(MomentResult {
        body: body.label(),
        n,
        value: q.value,
        error: q.error,
    })
}

// Rotational symmetry: 2π ∫₀¹ l(p)ⁿ dp, with p = sin t removing the
// square-root endpoint behaviour.
fn disk_moment(body: &ConvexBody2, n: u32) -> quad::Quadrature {
    let q = quad::integrate(
        |t| {
            let line = LineCoords2::new(t.sin(), 0.0);
            body.chord_length(&line).powi(n as i32) * t.cos()
        },
        0.0,
        FRAC_PI_2,
    );
    quad::Quadrature {
        value: TAU * q.value,
        error: TAU * q.error,
    }
}

fn polygon_moment(body: &ConvexBody2, poly: &ConvexPolygon, n: u32) -> quad::Quadrature {
    let verts = poly.vertices();
    // The integrand in θ is smooth except where two vertices project equally
    // or a vertex projects onto p = 0.
    let mut cuts = vec![0.0, TAU];
    let mut add_perpendicular = |dx: f64, dy: f64| {
        if dx.hypot(dy) > EPS {
            let base = dy.atan2(dx);
            for t in [base + FRAC_PI_2, base - FRAC_PI_2, base + 3.0 * FRAC_PI_2] {
                let t = t.rem_euclid(TAU);
                if t > 0.0 && t < TAU {
                    cuts.push(t);
                }
            }
        }
    };
    for (i, a) in verts.iter().enumerate() {
        add_perpendicular(a.x(), a.y());
        for b in &verts[i + 1..] {
            add_perpendicular(b.x() - a.x(), b.y() - a.y());
        }
    }
    cuts.sort_by(f64::total_cmp);
    cuts.dedup_by(|a, b| (*a - *b).abs() < 1e-14);

    let pieces: Vec<quad::Quadrature> = cuts
        .par_windows(2)
        .map(|w| {
            let worst_inner = std::cell::Cell::new(0.0f64);
            let q = quad::adaptive_simpson(
                |t| {
                    let inner = moment_at_angle(body, poly, n, t);
                    worst_inner.set(worst_inner.get().max(inner.error));
                    inner.value
                },
                w[0],
                w[1],
                OUTER_TOL * (w[1] - w[0]) / TAU,
                quad::DEFAULT_MAX_DEPTH,
            );
            quad::Quadrature {
                value: q.value,
                error: q.error + worst_inner.get() * (w[1] - w[0]),
            }
        })
        .collect();
    pieces.iter().fold(
        quad::Quadrature {
            value: 0.0,
            error: 0.0,
        },
        |acc, q| quad::Quadrature {
            value: acc.value + q.value,
            error: acc.error + q.error,
        },
    )
}

// ∫ l(p, θ)ⁿ dp over the lines that meet the polygon (p ≥ 0 inside the
// projection interval; outside it l = 0, which matters for n = 0), split at
// vertex projections where l has kinks.
fn moment_at_angle(body: &ConvexBody2, poly: &ConvexPolygon, n: u32, theta: f64) -> quad::Quadrature {
    let (s, c) = theta.sin_cos();
    let mut knots: Vec<f64> = poly
        .vertices()
        .iter()
        .map(|v| v.x() * c + v.y() * s)
        .collect();
    knots.sort_by(f64::total_cmp);
    let mut total = quad::Quadrature {
        value: 0.0,
        error: 0.0,
    };
    for w in knots.windows(2) {
        let (a, b) = (w[0].max(0.0), w[1]);
        if b <= a {
            continue;
        }
        let q = quad::adaptive_simpson(
            |p| body.chord_length(&LineCoords2::new(p, theta)).powi(n as i32),
            a,
            b,
            INNER_TOL,
            quad::DEFAULT_MAX_DEPTH,
        );
        total.value += q.value;
        total.error += q.error;
    }
    total
}

/// Distance moment `J_n = ∫∫ r(P₁, P₂)ⁿ dP₁ dP₂` from `J_n = 2·I_{n+3}/((n+2)(n+3))`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistanceMoment {
    pub n: u32,
    pub value: f64,
    /// `J_n / A²`, the mean of `rⁿ` over uniform point pairs.
    pub normalized: f64,
    pub error: f64,
}

pub fn distance_moment(body: &ConvexBody2, n: u32) -> Result<DistanceMoment> {
    let moment = chord_moment(body, n + 3)?;
    let factor = 2.0 / ((n + 2) as f64 * (n + 3) as f64);
    let area_sq = body.area() * body.area();
    Ok(DistanceMoment {
        n,
        value: factor * moment.value,
        normalized: factor * moment.value / area_sq,
        error: factor * moment.error,
    })
}

/// Perimeter of the `k`-gon inscribed in the unit circle, `2k·sin(π/k)`.
pub fn inscribed_perimeter(k: usize) -> f64 {
    2.0 * k as f64 * (PI / k as f64).sin()
}
