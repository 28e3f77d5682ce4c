//! Small quadrature helpers shared by the continuum and risk-bound modules.

use crate::{Error, Result};

/// Composite Simpson rule on `[a, b]` with `n` subintervals (`n` rounded up
/// to even).
pub fn composite_simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    let n = if n.is_multiple_of(2) { n.max(2) } else { n + 1 };
    let h = (b - a) / n as f64;
    let mut sum = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * f(a + i as f64 * h);
    }
    sum * h / 3.0
}

/// Adaptive Simpson integration with a relative tolerance.
///
/// The error control is the usual |S_left + S_right − S_whole|/15 estimate;
/// recursion depth is capped and exceeding it is reported as non-convergence.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, rel_tol: f64) -> Result<f64> {
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    // scale for the relative tolerance; golden-ratio probe positions cannot
    // resonate with a periodic integrand, unlike an equispaced probe
    let mut fmax = fa.abs().max(fb.abs()).max(fm.abs());
    const GOLDEN: f64 = 0.618_033_988_749_894_9;
    for i in 1..64u32 {
        let frac = (i as f64 * GOLDEN).fract();
        fmax = fmax.max(f(a + (b - a) * frac).abs());
    }
    let scale = whole
        .abs()
        .max((b - a) * fmax)
        .max(f64::MIN_POSITIVE);
    adaptive_step(f, a, b, fa, fb, fm, whole, rel_tol * scale, 48)
}

#[allow(clippy::too_many_arguments)]
fn adaptive_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fb: f64,
    fm: f64,
    whole: f64,
    abs_tol: f64,
    depth: u32,
) -> Result<f64> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * abs_tol {
        return Ok(left + right + delta / 15.0);
    }
    if depth == 0 {
        return Err(Error::NonConvergence(format!(
            "adaptive quadrature depth exhausted on [{a}, {b}]"
        )));
    }
    let l = adaptive_step(f, a, m, fa, fm, flm, left, abs_tol / 2.0, depth - 1)?;
    let r = adaptive_step(f, m, b, fm, fb, frm, right, abs_tol / 2.0, depth - 1)?;
    Ok(l + r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simpson_integrates_polynomials_exactly() {
        // Simpson is exact through cubics.
        let v = composite_simpson(|x| x * x * x - 2.0 * x, 0.0, 2.0, 4);
        assert!((v - (4.0 - 4.0)).abs() < 1e-14);
    }

    #[test]
    fn adaptive_simpson_hits_tolerance() {
        let v = adaptive_simpson(&|x: f64| x.exp(), 0.0, 1.0, 1e-12).unwrap();
        assert!((v - (1f64.exp() - 1.0)).abs() < 1e-12);
        let v = adaptive_simpson(&|x: f64| (-x * x).exp(), 0.0, 10.0, 1e-11).unwrap();
        assert!((v - 0.886_226_925_452_758).abs() < 1e-10);
    }
}
