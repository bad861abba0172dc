//! Seeded Monte Carlo estimators.
//!
//! Work is split over `workers` substreams: worker `w` draws its share of the
//! samples from stream `w` of the seed and accumulates a Welford summary;
//! partial results are merged in worker order. The output is therefore a pure
//! function of `(samples, seed, workers)` no matter how the thread pool runs.

use std::f64::consts::PI;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{self, DensityLaw, PiRational};
use crate::geom::{self, Point, Point2, Point3, Point4};
use crate::rng::RngStream;
use crate::stats::{self, RunningStats};

/// Smallest sample count accepted by the estimators.
pub const MIN_SAMPLES: u64 = 10_000;
/// Smallest sample count accepted by the histogram tests.
pub const MIN_HISTOGRAM_SAMPLES: u64 = 100_000;
pub const MIN_BINS: usize = 10;
/// Cells with a smaller expected count are pooled with a neighbour.
pub const MIN_EXPECTED_PER_CELL: f64 = 5.0;
/// Upper-tail probability of the chi-square acceptance threshold.
pub const GOF_QUANTILE: f64 = 0.99;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct McConfig {
    pub samples: u64,
    pub seed: u64,
    pub workers: u32,
}

impl McConfig {
    pub fn new(samples: u64, seed: u64, workers: u32) -> Self {
        McConfig {
            samples,
            seed,
            workers,
        }
    }

    fn validate(&self, min_samples: u64) -> Result<()> {
        if self.samples < min_samples {
            return Err(Error::InsufficientSamples {
                got: self.samples,
                min: min_samples,
            });
        }
        if self.workers == 0 || u64::from(self.workers) > self.samples {
            return Err(Error::InvalidArgument(format!(
                "worker count {} must be in 1..=samples",
                self.workers
            )));
        }
        Ok(())
    }

    fn share(&self, worker: u32) -> u64 {
        let w = u64::from(self.workers);
        self.samples / w + u64::from(u64::from(worker) < self.samples % w)
    }
}

/// Runs `step` `share(w)` times on stream `w` for every worker and returns
/// the per-worker accumulators in worker order.
fn run_workers<A, F>(cfg: &McConfig, step: F) -> Vec<A>
where
    A: Default + Send,
    F: Fn(&mut ChaCha8Rng, &mut A) + Sync,
{
    (0..cfg.workers)
        .into_par_iter()
        .map(|w| {
            let mut rng = RngStream::new(cfg.seed, u64::from(w)).generator();
            let mut acc = A::default();
            for _ in 0..cfg.share(w) {
                step(&mut rng, &mut acc);
            }
            acc
        })
        .collect()
}

/// Uniform point of the unit ball `B^D`: normalized Gaussian direction and
/// radius `U^{1/D}`.
pub fn sample_uniform_ball<const D: usize, R: Rng + ?Sized>(rng: &mut R) -> Point<D> {
    loop {
        let g: [f64; D] = std::array::from_fn(|_| rng.sample(StandardNormal));
        let norm = g.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 0.0 {
            let r = rng.random::<f64>().powf(1.0 / D as f64);
            return Point::new(g.map(|x| x * r / norm));
        }
    }
}

/// `N` independent uniform points of `B^D`.
pub fn sample_uniform_ball_n<const N: usize, const D: usize, R: Rng + ?Sized>(rng: &mut R) -> [Point<D>; N] {
    std::array::from_fn(|_| sample_uniform_ball(rng))
}

/// Monte Carlo mean with its standard error.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Estimate {
    pub experiment: String,
    pub mean: f64,
    pub std_error: f64,
    pub n: u64,
    pub ci95: (f64, f64),
    pub seed: u64,
    pub workers: u32,
    /// Degenerate point configurations met (probability zero; expected 0).
    pub degenerate: u64,
}

#[derive(Default)]
struct ScalarAcc {
    stats: RunningStats,
    degenerate: u64,
}

fn estimate_with<F>(tag: String, cfg: &McConfig, sample: F) -> Result<Estimate>
where
    F: Fn(&mut ChaCha8Rng) -> (f64, bool) + Sync,
{
    cfg.validate(MIN_SAMPLES)?;
    let parts = run_workers(cfg, |rng, acc: &mut ScalarAcc| {
        let (x, degenerate) = sample(rng);
        acc.stats.push(x);
        acc.degenerate += u64::from(degenerate);
    });
    let (stats, degenerate) = parts.iter().fold((RunningStats::default(), 0), |(s, d), p| {
        (s.merge(&p.stats), d + p.degenerate)
    });
    let se = stats.std_error();
    Ok(Estimate {
        experiment: tag,
        mean: stats.mean,
        std_error: se,
        n: stats.n,
        ci95: (stats.mean - 1.96 * se, stats.mean + 1.96 * se),
        seed: cfg.seed,
        workers: cfg.workers,
        degenerate,
    })
}

/// Mean measure of the simplex on `dim + 1` uniform points of `B^dim`
/// (`dim` = 2, 3). For `dim` = 1 the mean of `|u − v|` over the unit interval.
pub fn estimate_simplex_volume(dim: u32, cfg: &McConfig) -> Result<Estimate> {
    let tag = format!("simplex-{dim}d");
    match dim {
        1 => estimate_with(tag, cfg, |rng| {
            let (u, v): (f64, f64) = (rng.random(), rng.random());
            ((u - v).abs(), false)
        }),
        2 => estimate_with(tag, cfg, |rng| {
            let [a, b, c] = sample_uniform_ball_n::<3, 2, _>(rng);
            (geom::triangle_area(&a, &b, &c), false)
        }),
        3 => estimate_with(tag, cfg, |rng| {
            let [a, b, c, d] = sample_uniform_ball_n::<4, 3, _>(rng);
            (geom::tetra_volume(&a, &b, &c, &d), false)
        }),
        _ => Err(Error::Domain(format!("simplex dimension {dim} not in 1..=3"))),
    }
}

/// Fraction of `dim + 2` uniform points of `B^dim` in convex position.
pub fn estimate_sylvester(dim: u32, cfg: &McConfig) -> Result<Estimate> {
    let tag = format!("sylvester-{dim}d");
    match dim {
        2 => estimate_with(tag, cfg, |rng| {
            let pts: [Point2; 4] = sample_uniform_ball_n(rng);
            let convex = geom::convex_position_4(&pts);
            let degenerate = !convex && geom::inside_count_4(&pts) == 0;
            (f64::from(u8::from(convex)), degenerate)
        }),
        3 => estimate_with(tag, cfg, |rng| {
            let pts: [Point3; 5] = sample_uniform_ball_n(rng);
            let convex = geom::convex_position_5_3d(&pts);
            let degenerate = !convex && geom::inside_count_5_3d(&pts) == 0;
            (f64::from(u8::from(convex)), degenerate)
        }),
        _ => Err(Error::Domain(format!("Sylvester dimension {dim} not in 2..=3"))),
    }
}

/// Mean area of the triangle on the disk centre and two uniform points.
pub fn estimate_center_triangle(cfg: &McConfig) -> Result<Estimate> {
    estimate_with("center-triangle".into(), cfg, |rng| {
        let [p, q] = sample_uniform_ball_n::<2, 2, _>(rng);
        (geom::triangle_area(&Point::origin(), &p, &q), false)
    })
}

/// Mean area of the triangle on the boundary point `(0, 1)` and two uniform points.
pub fn estimate_boundary_triangle(cfg: &McConfig) -> Result<Estimate> {
    let corner = Point2::new([0.0, 1.0]);
    estimate_with("boundary-triangle".into(), cfg, |rng| {
        let [a, b] = sample_uniform_ball_n::<2, 2, _>(rng);
        (geom::triangle_area(&corner, &a, &b), false)
    })
}

/// Mean area of the part of the disk cut off by the chord through two uniform
/// points, on the side not containing a third uniform point.
pub fn estimate_offcut(cfg: &McConfig) -> Result<Estimate> {
    use geom::Flat;
    estimate_with("offcut".into(), cfg, |rng| loop {
        let [p, q, r] = sample_uniform_ball_n::<3, 2, _>(rng);
        let Ok(line) = geom::line_from_points(&p, &q) else {
            continue;
        };
        let small = geom::segment_area(line.p.min(1.0)).expect("offset clamped into [0, 1]");
        // p >= 0, so the origin side (x·n < p) is the larger portion.
        let value = if line.signed_distance(&r) < 0.0 {
            small
        } else {
            PI - small
        };
        return (value, false);
    })
}

/// Mean distance between two uniform points of the unit disk.
pub fn estimate_mean_distance(cfg: &McConfig) -> Result<Estimate> {
    estimate_with("mean-distance".into(), cfg, |rng| {
        let [a, b] = sample_uniform_ball_n::<2, 2, _>(rng);
        (a.distance(&b), false)
    })
}

/// Named Monte Carlo experiment with a closed-form target.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    Simplex(u32),
    Sylvester(u32),
    CenterTriangle,
    BoundaryTriangle,
    Offcut,
    MeanDistance,
}

impl Experiment {
    pub const NAMES: [&'static str; 6] = [
        "simplex",
        "sylvester",
        "center-triangle",
        "boundary-triangle",
        "offcut",
        "mean-distance",
    ];

    /// `None` for an unknown name; `dim` is ignored by the planar experiments.
    pub fn parse(name: &str, dim: u32) -> Option<Self> {
        Some(match name {
            "simplex" => Experiment::Simplex(dim),
            "sylvester" => Experiment::Sylvester(dim),
            "center-triangle" => Experiment::CenterTriangle,
            "boundary-triangle" => Experiment::BoundaryTriangle,
            "offcut" => Experiment::Offcut,
            "mean-distance" => Experiment::MeanDistance,
            _ => return None,
        })
    }

    pub fn run(&self, cfg: &McConfig) -> Result<Estimate> {
        match *self {
            Experiment::Simplex(d) => estimate_simplex_volume(d, cfg),
            Experiment::Sylvester(d) => estimate_sylvester(d, cfg),
            Experiment::CenterTriangle => estimate_center_triangle(cfg),
            Experiment::BoundaryTriangle => estimate_boundary_triangle(cfg),
            Experiment::Offcut => estimate_offcut(cfg),
            Experiment::MeanDistance => estimate_mean_distance(cfg),
        }
    }

    /// Closed-form value the estimator converges to.
    pub fn exact(&self) -> Result<f64> {
        let reference = |name: &str| {
            exact::reference_constants()
                .into_iter()
                .find(|c| c.name == name)
                .map(|c| c.value.to_f64())
                .expect("known reference name")
        };
        Ok(match *self {
            Experiment::Simplex(1) => reference("unit_interval_distance"),
            // E(simplex measure) = v(B^d)·β_d
            Experiment::Simplex(d @ 2..=3) => (&exact::kingman_v(i64::from(d) + 1)?
                * &exact::unit_ball_volume(i64::from(d))?)
                .to_f64(),
            Experiment::Simplex(d) => {
                return Err(Error::Domain(format!("simplex dimension {d} not in 1..=3")))
            }
            Experiment::Sylvester(d @ 2..=3) => exact::sylvester_probability(i64::from(d))?.to_f64(),
            Experiment::Sylvester(d) => {
                return Err(Error::Domain(format!("Sylvester dimension {d} not in 2..=3")))
            }
            Experiment::CenterTriangle => reference("center_triangle"),
            Experiment::BoundaryTriangle => reference("boundary_triangle"),
            Experiment::Offcut => reference("offcut"),
            Experiment::MeanDistance => PiRational::new(128, 45, -2)?.to_f64(),
        })
    }
}

/// Equal-width histogram compared against an analytic density.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HistogramGof {
    pub law: String,
    pub support: (f64, f64),
    pub edges: Vec<f64>,
    pub observed: Vec<u64>,
    /// `n · ∫_bin density`.
    pub expected: Vec<f64>,
    pub n: u64,
    /// Pearson statistic over pooled cells (adjacent bins merged until each
    /// cell expects at least five counts).
    pub chi2: f64,
    pub cells: usize,
    /// `cells − 1`; equals `bins − 1` when no pooling was needed.
    pub dof: u32,
    /// 99th percentile of chi-square with `dof` degrees of freedom.
    pub threshold: f64,
    pub pass: bool,
    pub sample_mean: f64,
    pub sample_mean_se: f64,
    pub seed: u64,
    pub workers: u32,
    pub degenerate: u64,
}

impl HistogramGof {
    pub fn bins(&self) -> usize {
        self.observed.len()
    }
}

#[derive(Default)]
struct HistAcc {
    counts: Vec<u64>,
    stats: RunningStats,
    degenerate: u64,
}

fn pool_cells(observed: &[u64], expected: &[f64]) -> (Vec<u64>, Vec<f64>) {
    let (mut obs, mut exp) = (Vec::new(), Vec::new());
    let (mut o, mut e) = (0u64, 0.0);
    for (&oi, &ei) in observed.iter().zip(expected) {
        o += oi;
        e += ei;
        if e >= MIN_EXPECTED_PER_CELL {
            obs.push(o);
            exp.push(e);
            (o, e) = (0, 0.0);
        }
    }
    if e > 0.0 || o > 0 {
        match (obs.last_mut(), exp.last_mut()) {
            (Some(lo), Some(le)) => {
                *lo += o;
                *le += e;
            }
            _ => {
                obs.push(o);
                exp.push(e);
            }
        }
    }
    (obs, exp)
}

/// Bins `value(rng)` draws on `law.support` and runs the chi-square test.
/// `value` returns `None` for a degenerate draw, which is counted and redrawn.
fn histogram_with<F>(law: &DensityLaw, bins: usize, cfg: &McConfig, value: F) -> Result<HistogramGof>
where
    F: Fn(&mut ChaCha8Rng) -> Option<f64> + Sync,
{
    cfg.validate(MIN_HISTOGRAM_SAMPLES)?;
    if bins < MIN_BINS {
        return Err(Error::InvalidArgument(format!(
            "need at least {MIN_BINS} bins, got {bins}"
        )));
    }
    let (lo, hi) = law.support;
    let width = (hi - lo) / bins as f64;
    let parts = run_workers(cfg, |rng, acc: &mut HistAcc| {
        if acc.counts.is_empty() {
            acc.counts = vec![0; bins];
        }
        let x = loop {
            match value(rng) {
                Some(x) => break x,
                None => acc.degenerate += 1,
            }
        };
        let idx = (((x - lo) / width) as usize).min(bins - 1);
        acc.counts[idx] += 1;
        acc.stats.push(x);
    });
    let mut observed = vec![0u64; bins];
    let mut stats = RunningStats::default();
    let mut degenerate = 0;
    for p in &parts {
        for (o, c) in observed.iter_mut().zip(&p.counts) {
            *o += c;
        }
        stats = stats.merge(&p.stats);
        degenerate += p.degenerate;
    }
    let edges: Vec<f64> = (0..=bins).map(|i| lo + i as f64 * width).collect();
    let n = cfg.samples;
    let expected: Vec<f64> = edges
        .windows(2)
        .map(|w| n as f64 * law.mass(w[0], w[1]))
        .collect();
    let (pooled_obs, pooled_exp) = pool_cells(&observed, &expected);
    let chi2 = stats::chi_square_statistic(&pooled_obs, &pooled_exp);
    let cells = pooled_obs.len();
    let dof = (cells.max(2) - 1) as u32;
    let threshold = stats::chi_square_quantile(GOF_QUANTILE, dof);
    Ok(HistogramGof {
        law: law.name.clone(),
        support: law.support,
        edges,
        observed,
        expected,
        n,
        chi2,
        cells,
        dof,
        threshold,
        pass: chi2 < threshold,
        sample_mean: stats.mean,
        sample_mean_se: stats.std_error(),
        seed: cfg.seed,
        workers: cfg.workers,
        degenerate,
    })
}

/// Histogram of the offset of the flat through `dim` uniform points of `B^dim`.
pub fn secant_offset_histogram(dim: u32, bins: usize, cfg: &McConfig) -> Result<HistogramGof> {
    use geom::Flat;
    let law = exact::secant_offset_density(i64::from(dim))?;
    match dim {
        2 => histogram_with(&law, bins, cfg, |rng| {
            let [a, b]: [Point2; 2] = sample_uniform_ball_n(rng);
            geom::line_from_points(&a, &b).ok().map(|l| l.offset())
        }),
        3 => histogram_with(&law, bins, cfg, |rng| {
            let pts: [Point3; 3] = sample_uniform_ball_n(rng);
            geom::plane_from_points(&pts).ok().map(|f| f.offset())
        }),
        4 => histogram_with(&law, bins, cfg, |rng| {
            let pts: [Point4; 4] = sample_uniform_ball_n(rng);
            geom::hyperplane_from_points(&pts).ok().map(|f| f.offset())
        }),
        _ => unreachable!("secant_offset_density rejects other dimensions"),
    }
}

/// Histogram of the largest radius among three uniform points of the disk.
pub fn max_radius_gof(bins: usize, cfg: &McConfig) -> Result<HistogramGof> {
    histogram_with(&exact::max_radius_density(), bins, cfg, |rng| {
        let pts: [Point2; 3] = sample_uniform_ball_n(rng);
        Some(pts.iter().map(Point2::norm).fold(0.0, f64::max))
    })
}

/// Kolmogorov–Smirnov distance of the squared radius of uniform disk points
/// from the uniform law on `[0, 1]`.
pub fn squared_radius_ks(cfg: &McConfig) -> Result<f64> {
    cfg.validate(MIN_SAMPLES)?;
    let parts = run_workers(cfg, |rng, acc: &mut Vec<f64>| {
        let p: Point2 = sample_uniform_ball(rng);
        acc.push(p.dot(&p));
    });
    let mut all: Vec<f64> = parts.into_iter().flatten().collect();
    Ok(stats::ks_statistic(&mut all, |x| x.clamp(0.0, 1.0)))
}

/// Counts of sampled configurations by number of "inside" events.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct InsideTally {
    pub samples: u64,
    pub none: u64,
    pub one: u64,
    pub several: u64,
}

/// Tallies, over `cfg.samples` quadruples of uniform disk points, how many
/// points lie inside the triangle of the other three.
pub fn inside_tally_4(cfg: &McConfig) -> Result<InsideTally> {
    cfg.validate(1)?;
    let parts = run_workers(cfg, |rng, acc: &mut InsideTally| {
        let pts: [Point2; 4] = sample_uniform_ball_n(rng);
        acc.samples += 1;
        match geom::inside_count_4(&pts) {
            0 => acc.none += 1,
            1 => acc.one += 1,
            _ => acc.several += 1,
        }
    });
    Ok(parts.iter().fold(InsideTally::default(), |a, p| InsideTally {
        samples: a.samples + p.samples,
        none: a.none + p.none,
        one: a.one + p.one,
        several: a.several + p.several,
    }))
}
