//! Adaptive Simpson quadrature over finite panels.

/// Maximum bisection depth inside one panel.
const MAX_DEPTH: u32 = 40;

fn simpson(fa: f64, fm: f64, fb: f64, h: f64) -> f64 {
    h / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn adapt<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    fa: f64,
    b: f64,
    fb: f64,
    m: f64,
    fm: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(fa, flm, fm, m - a);
    let right = simpson(fm, frm, fb, b - m);
    let delta = left + right - whole;
    if depth >= MAX_DEPTH || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    adapt(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth + 1)
        + adapt(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth + 1)
}

/// Integrates `f` over one interval with adaptive Simpson bisection and
/// absolute tolerance `tol`.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = simpson(fa, fm, fb, b - a);
    adapt(f, a, fa, b, fb, m, fm, whole, tol, 0)
}

/// Integrates over `[a, b]` split into panels of width at most
/// `panel_width`, each integrated adaptively with absolute tolerance
/// `panel_tol`. Panel boundaries keep narrow features from being skipped by
/// the first Simpson estimate on a huge interval.
pub fn panel_integrate<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    panel_width: f64,
    panel_tol: f64,
) -> f64 {
    debug_assert!(panel_width > 0.0 && b >= a);
    let n = ((b - a) / panel_width).ceil().max(1.0) as u64;
    let mut sum = 0.0;
    for i in 0..n {
        let lo = a + (b - a) * i as f64 / n as f64;
        let hi = a + (b - a) * (i + 1) as f64 / n as f64;
        sum += adaptive_simpson(f, lo, hi, panel_tol);
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let v = adaptive_simpson(&|x: f64| x * x, 0.0, 1.0, 1e-12);
        assert!((v - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn sine_over_half_period() {
        let v = adaptive_simpson(&|x: f64| x.sin(), 0.0, std::f64::consts::PI, 1e-12);
        assert!((v - 2.0).abs() < 1e-10);
    }

    #[test]
    fn gaussian_integral() {
        let v = panel_integrate(&|x: f64| (-x * x).exp(), -8.0, 8.0, 1.0, 1e-12);
        assert!((v - std::f64::consts::PI.sqrt()).abs() < 1e-10);
    }

    #[test]
    fn radial_gaussian_moment() {
        // int_0^inf t e^{-t^2} dt = 1/2; the tail beyond 40 is negligible.
        let v = panel_integrate(&|t: f64| t * (-t * t).exp(), 0.0, 40.0, 1.0, 1e-12);
        assert!((v - 0.5).abs() < 1e-10);
    }

    #[test]
    fn empty_interval_is_zero() {
        assert_eq!(adaptive_simpson(&|_| 1.0, 2.0, 2.0, 1e-10), 0.0);
    }
}
