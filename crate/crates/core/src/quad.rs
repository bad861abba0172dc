//! Adaptive and composite Simpson quadrature.

/// Default absolute tolerance of the adaptive rule.
pub const DEFAULT_TOL: f64 = 1e-12;
/// Default recursion depth limit of the adaptive rule.
pub const DEFAULT_MAX_DEPTH: u32 = 40;

/// Integral value with an accumulated error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub error: f64,
}

/// Adaptive Simpson on `[a, b]` with the default tolerance and depth.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> Quadrature {
    adaptive_simpson(f, a, b, DEFAULT_TOL, DEFAULT_MAX_DEPTH)
}

/// Adaptive Simpson with Richardson correction.
///
/// Each panel is split until `|S(left) + S(right) - S(whole)| <= 15·tol`,
/// with the tolerance halved at every split. Intervals hitting `max_depth`
/// are accepted and their residual is still added to the error estimate.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    tol: f64,
    max_depth: u32,
) -> Quadrature {
    if a == b {
        return Quadrature {
            value: 0.0,
            error: 0.0,
        };
    }
    let (fa, fb) = (f(a), f(b));
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    let mut acc = Quadrature {
        value: 0.0,
        error: 0.0,
    };
    recurse(&f, a, b, fa, fm, fb, whole, tol, max_depth, &mut acc);
    acc
}

#[allow(clippy::too_many_arguments)]
fn recurse<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
    acc: &mut Quadrature,
) {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        acc.value += left + right + delta / 15.0;
        acc.error += delta.abs() / 15.0;
        return;
    }
    recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, acc);
    recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, acc);
}

/// Composite Simpson over `panels` equal panels (two subintervals each).
/// Samples are taken at indexed nodes and summed in index order, so the
/// result is independent of how node evaluations are scheduled.
pub fn composite_simpson<F: Fn(f64) -> f64 + Sync>(f: F, a: f64, b: f64, panels: usize) -> f64 {
    use rayon::prelude::*;

    let panels = panels.max(1);
    let nodes = 2 * panels;
    let h = (b - a) / nodes as f64;
    let samples: Vec<f64> = (0..=nodes)
        .into_par_iter()
        .map(|i| {
            let w = if i == 0 || i == nodes {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            w * f(a + i as f64 * h)
        })
        .collect();
    samples.iter().sum::<f64>() * h / 3.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn polynomials_are_exact() {
        let q = integrate(|x| x * x * x - 2.0 * x + 1.0, 0.0, 2.0);
        assert!((q.value - 2.0).abs() < 1e-14);
        assert!(composite_simpson(|x| x * x * x, 0.0, 1.0, 1) - 0.25 < 1e-15);
    }

    #[test]
    fn smooth_integrands() {
        let q = integrate(f64::sin, 0.0, PI);
        assert!((q.value - 2.0).abs() < 1e-12, "{q:?}");
        let q = integrate(|x| (-x * x).exp(), -6.0, 6.0);
        assert!((q.value - PI.sqrt()).abs() < 1e-11, "{q:?}");
        let c = composite_simpson(f64::cos, 0.0, PI / 2.0, 512);
        assert!((c - 1.0).abs() < 1e-12);
    }

    #[test]
    fn endpoint_sqrt_singularity_converges() {
        // ∫_0^1 √(1−x²) dx = π/4
        let q = integrate(|x| (1.0 - x * x).max(0.0).sqrt(), 0.0, 1.0);
        assert!((q.value - PI / 4.0).abs() < 1e-9, "{q:?}");
    }

    #[test]
    fn empty_interval() {
        assert_eq!(integrate(|x| x, 1.0, 1.0).value, 0.0);
    }
}
