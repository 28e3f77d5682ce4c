//! Self-contained special functions used throughout the crate.
//!
//! * Airy function of the first kind `Ai` and its derivative `Ai′`,
//!   accurate to better than 1e-10 relative for |x| ≤ 20,
//! * the first negative zero of `Ai` (bisection bracket + Newton polish),
//! * `ln Γ(x)` for x > 0 to ~1e-14 relative,
//! * the closed-form entries of the covariant circular-cost kernel.
//!
//! The Airy evaluation uses the Maclaurin series for |x| ≤ 8 and the standard
//! asymptotic expansions beyond. The series suffers severe cancellation near
//! the switch point (terms reach ~2e5 while Ai(8) ≈ 4.7e-8), so the series is
//! accumulated in double-double arithmetic; the asymptotic side is optimally
//! truncated, with worst-case error ~1e-12 just past |x| = 8.

use crate::{Error, Result};

const SERIES_CUTOFF: f64 = 8.0;
const MAX_SERIES_TERMS: usize = 80;
const MAX_ASYMPTOTIC_TERMS: usize = 40;

// ---------------------------------------------------------------------------
// Double-double arithmetic (unevaluated sum hi + lo, |lo| <= ulp(hi)/2).
// Only the handful of operations the Airy series needs.
// ---------------------------------------------------------------------------

#[derive(Copy, Clone, Debug)]
struct Dd {
    hi: f64,
    lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };

    fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    fn value(self) -> f64 {
        self.hi + self.lo
    }

    fn add(self, other: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, other.hi);
        let e = e + self.lo + other.lo;
        let (hi, lo) = quick_two_sum(s, e);
        Dd { hi, lo }
    }

    fn sub(self, other: Dd) -> Dd {
        self.add(Dd {
            hi: -other.hi,
            lo: -other.lo,
        })
    }

    fn mul(self, other: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, other.hi);
        let e = e + self.hi * other.lo + self.lo * other.hi;
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }

    fn div_f64(self, d: f64) -> Dd {
        let q1 = self.hi / d;
        let (p, e) = two_prod(q1, d);
        let r = self.sub(Dd { hi: p, lo: e });
        let q2 = (r.hi + r.lo) / d;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo }
    }

    fn abs_value(self) -> f64 {
        self.value().abs()
    }
}

// Ai(0) = 3^(-2/3)/Γ(2/3) and -Ai'(0) = 3^(-1/3)/Γ(1/3), to ~32 digits.
const AI_ZERO_VAL: Dd = Dd {
    hi: 0.3550280538878172,
    lo: 2.052_336_324_362_12e-17,
};
const AI_ZERO_DERIV: Dd = Dd {
    hi: 0.2588194037928068,
    lo: -2.522_243_111_610_832e-17,
};

/// First negative zero of the Airy function, with the value of Ai there.
#[derive(Copy, Clone, Debug)]
pub struct AiryZero {
    /// Location of the zero, ≈ −2.338.
    pub value: f64,
    /// Residual |Ai(value)| after refinement.
    pub residual: f64,
}

impl AiryZero {
    /// Coefficient 4|A₀|³/27 ≈ 1.8936 of the p³/N² estimation bound.
    pub fn bound_coefficient(&self) -> f64 {
        4.0 * self.value.abs().powi(3) / 27.0
    }
}

/// Airy function of the first kind.
pub fn airy_ai(x: f64) -> f64 {
    if x.abs() <= SERIES_CUTOFF {
        airy_series(x).0
    } else if x > 0.0 {
        airy_asymptotic_pos(x).0
    } else {
        airy_asymptotic_neg(x).0
    }
}

/// Derivative of the Airy function of the first kind.
pub fn airy_ai_prime(x: f64) -> f64 {
    if x.abs() <= SERIES_CUTOFF {
        airy_series(x).1
    } else if x > 0.0 {
        airy_asymptotic_pos(x).1
    } else {
        airy_asymptotic_neg(x).1
    }
}

/// Maclaurin series for Ai and Ai′, accumulated in double-double.
///
/// Ai(x) = c₁·f(x) − c₂·g(x) with f, g the two standard ODE solutions
/// (f = 1 + x³/6 + …, g = x + x⁴/12 + …).
fn airy_series(x: f64) -> (f64, f64) {
    let xd = Dd::from_f64(x);
    let x2 = xd.mul(xd);
    let x3 = x2.mul(xd);

    // f and its derivative series
    let mut f_sum = Dd::from_f64(1.0);
    let mut f_term = Dd::from_f64(1.0);
    let mut fp_sum = Dd::ZERO;
    let mut fp_term = x2.div_f64(2.0);
    // g and its derivative series
    let mut g_sum = xd;
    let mut g_term = xd;
    let mut gp_sum = Dd::from_f64(1.0);
    let mut gp_term = Dd::from_f64(1.0);

    for k in 1..=MAX_SERIES_TERMS {
        let kf = k as f64;
        f_term = f_term.mul(x3).div_f64(3.0 * kf * (3.0 * kf - 1.0));
        g_term = g_term.mul(x3).div_f64((3.0 * kf + 1.0) * 3.0 * kf);
        if k >= 2 {
            fp_term = fp_term
                .mul(x3)
                .div_f64((3.0 * kf - 1.0) * (3.0 * kf - 3.0));
        }
        gp_term = gp_term.mul(x3).div_f64(3.0 * kf * (3.0 * kf - 2.0));

        f_sum = f_sum.add(f_term);
        g_sum = g_sum.add(g_term);
        fp_sum = fp_sum.add(fp_term);
        gp_sum = gp_sum.add(gp_term);

        let scale = f_sum.abs_value().max(1.0);
        if f_term.abs_value() < 1e-35 * scale && g_term.abs_value() < 1e-35 * scale {
            break;
        }
    }

    let ai = AI_ZERO_VAL.mul(f_sum).sub(AI_ZERO_DERIV.mul(g_sum));
    let aip = AI_ZERO_VAL.mul(fp_sum).sub(AI_ZERO_DERIV.mul(gp_sum));
    (ai.value(), aip.value())
}

/// Asymptotic coefficients u_k (and v_k for the derivative).
fn asymptotic_coefficients() -> ([f64; MAX_ASYMPTOTIC_TERMS], [f64; MAX_ASYMPTOTIC_TERMS]) {
    let mut u = [0.0; MAX_ASYMPTOTIC_TERMS];
    let mut v = [0.0; MAX_ASYMPTOTIC_TERMS];
    u[0] = 1.0;
    v[0] = 1.0;
    for k in 1..MAX_ASYMPTOTIC_TERMS {
        let kf = k as f64;
        u[k] = u[k - 1] * (6.0 * kf - 5.0) * (6.0 * kf - 1.0) / (72.0 * kf);
        v[k] = u[k] * (6.0 * kf + 1.0) / (1.0 - 6.0 * kf);
    }
    (u, v)
}

/// Sums Σ (−1)^k c_k / z^k with optimal truncation.
fn alternating_asymptotic_sum(coeffs: &[f64], z: f64) -> f64 {
    let mut sum = 0.0;
    let mut prev = f64::INFINITY;
    let mut zk = 1.0;
    for (k, &c) in coeffs.iter().enumerate() {
        let term = if k % 2 == 0 { c / zk } else { -c / zk };
        if term.abs() > prev {
            break;
        }
        sum += term;
        prev = term.abs();
        zk *= z;
        if prev < 1e-19 {
            break;
        }
    }
    sum
}

fn airy_asymptotic_pos(x: f64) -> (f64, f64) {
    let (u, v) = asymptotic_coefficients();
    let zeta = 2.0 / 3.0 * x.powf(1.5);
    let pre = (-zeta).exp() / (2.0 * std::f64::consts::PI.sqrt());
    let ai = pre / x.powf(0.25) * alternating_asymptotic_sum(&u, zeta);
    let aip = -pre * x.powf(0.25) * alternating_asymptotic_sum(&v, zeta);
    (ai, aip)
}

fn airy_asymptotic_neg(x: f64) -> (f64, f64) {
    let (u, v) = asymptotic_coefficients();
    let z = -x;
    let xi = 2.0 / 3.0 * z.powf(1.5);
    let phase = xi - std::f64::consts::FRAC_PI_4;
    let (sin_p, cos_p) = phase.sin_cos();
    let sqrt_pi = std::f64::consts::PI.sqrt();

    // Split u (and v) into even- and odd-index subsequences; the two partial
    // sums run in 1/xi^2.
    let mut even_u = [0.0; MAX_ASYMPTOTIC_TERMS / 2];
    let mut odd_u = [0.0; MAX_ASYMPTOTIC_TERMS / 2];
    let mut even_v = [0.0; MAX_ASYMPTOTIC_TERMS / 2];
    let mut odd_v = [0.0; MAX_ASYMPTOTIC_TERMS / 2];
    for k in 0..MAX_ASYMPTOTIC_TERMS / 2 {
        even_u[k] = u[2 * k];
        odd_u[k] = u[2 * k + 1];
        even_v[k] = v[2 * k];
        odd_v[k] = v[2 * k + 1];
    }
    let xi2 = xi * xi;
    let se_u = alternating_asymptotic_sum(&even_u, xi2);
    let so_u = alternating_asymptotic_sum(&odd_u, xi2) / xi;
    let se_v = alternating_asymptotic_sum(&even_v, xi2);
    let so_v = alternating_asymptotic_sum(&odd_v, xi2) / xi;

    let ai = (cos_p * se_u + sin_p * so_u) / (sqrt_pi * z.powf(0.25));
    let aip = z.powf(0.25) * (sin_p * se_v - cos_p * so_v) / sqrt_pi;
    (ai, aip)
}

/// Locates the first negative zero of Ai on the bracket [−2.4, −2.3].
///
/// Bisection narrows the bracket, Newton with Ai′ polishes to 1e-12. Fails if
/// the bracket does not change sign, which signals a broken Ai implementation.
pub fn airy_first_zero() -> Result<AiryZero> {
    let (mut lo, mut hi) = (-2.4_f64, -2.3_f64);
    let (flo, fhi) = (airy_ai(lo), airy_ai(hi));
    if flo.signum() == fhi.signum() {
        return Err(Error::NonConvergence(
            "Ai does not change sign on [-2.4, -2.3]".into(),
        ));
    }
    for _ in 0..20 {
        let mid = 0.5 * (lo + hi);
        if airy_ai(mid).signum() == flo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut x = 0.5 * (lo + hi);
    for _ in 0..40 {
        let step = airy_ai(x) / airy_ai_prime(x);
        x -= step;
        if step.abs() < 1e-13 {
            break;
        }
    }
    if !(-2.4..=-2.3).contains(&x) {
        return Err(Error::NonConvergence(format!(
            "Newton refinement left the bracket at x = {x}"
        )));
    }
    Ok(AiryZero {
        value: x,
        residual: airy_ai(x).abs(),
    })
}

// Stirling-series coefficients B_{2i} / (2i (2i-1)).
const STIRLING: [f64; 7] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
];

/// Natural log of the Gamma function for x > 0.
///
/// Arguments below 10 are shifted up by the recurrence Γ(x+1) = xΓ(x), then
/// the Stirling series applies; the first omitted Bernoulli term at x = 10 is
/// below 1e-16 of the result.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("log_gamma requires x > 0, got {x}")));
    }
    let mut shift = 0.0;
    let mut y = x;
    while y < 10.0 {
        shift += y.ln();
        y += 1.0;
    }
    let ln2pi_half = 0.918_938_533_204_672_8; // ln(2π)/2
    let mut series = 0.0;
    let y2 = y * y;
    let mut ypow = y;
    for c in STIRLING {
        series += c / ypow;
        ypow *= y2;
    }
    Ok((y - 0.5) * y.ln() - y + ln2pi_half + series - shift)
}

/// Entry of the covariant circular-cost kernel at index offset `d`:
/// π²/3 on the diagonal, (−1)^d·2/d² off it.
pub fn kernel_entry(d: i64) -> f64 {
    if d == 0 {
        std::f64::consts::PI.powi(2) / 3.0
    } else {
        let sign = if d % 2 == 0 { 1.0 } else { -1.0 };
        sign * 2.0 / (d * d) as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const PI: f64 = std::f64::consts::PI;

    #[test]
    fn airy_at_origin_matches_closed_forms() {
        assert!((airy_ai(0.0) - 0.3550280538878172).abs() < 1e-15);
        assert!((airy_ai_prime(0.0) + 0.2588194037928068).abs() < 1e-15);
    }

    #[test]
    fn airy_reference_values() {
        // (x, Ai(x), Ai'(x)) frozen from 40-digit evaluations.
        let refs = [
            (0.5, 0.2316936064808335, -0.2249105326646839),
            (2.0, 0.03492413042327438, -0.05309038443365363),
            (5.0, 1.0834442813607442e-4, -2.474138908684625e-4),
            (8.0, 4.6922076160992316e-8, -1.3414392979067866e-7),
            (10.0, 1.1047532552898686e-10, -3.5206336767389236e-10),
            (20.0, 1.6916728686705403e-27, -7.586391625748355e-27),
            (-2.0, 0.22740742820168558, 0.618_259_020_741_691),
            (-5.0, 0.3507610090241143, 0.3271928185544431),
            (-8.0, -0.0527050503563862, 0.9355609381983066),
            (-10.0, 0.04024123848644319, 0.996_265_044_132_79),
            (-20.0, -0.176_406_127_077_984_7, 0.8928628567364712),
        ];
        for (x, ai, aip) in refs {
            assert!(
                (airy_ai(x) - ai).abs() <= 1e-10 * ai.abs().max(1e-3),
                "Ai({x}) = {} want {ai}",
                airy_ai(x)
            );
            assert!(
                (airy_ai_prime(x) - aip).abs() <= 1e-10 * aip.abs().max(1e-3),
                "Ai'({x}) = {} want {aip}",
                airy_ai_prime(x)
            );
        }
    }

    #[test]
    fn airy_series_asymptotic_agree_near_switch() {
        for &x in &[7.8, 7.9, 8.0, -7.8, -8.0] {
            let s = airy_series(x);
            let a = if x > 0.0 {
                airy_asymptotic_pos(x.abs())
            } else {
                airy_asymptotic_neg(x)
            };
            assert!((s.0 - a.0).abs() < 1e-11 * s.0.abs().max(1e-4), "x={x}");
            assert!((s.1 - a.1).abs() < 1e-11 * s.1.abs().max(1e-4), "x={x}");
        }
    }

    #[test]
    fn airy_derivative_consistent_with_finite_differences() {
        let h = 1e-5;
        let mut x = -5.0;
        while x <= 5.0 {
            let fd = (airy_ai(x + h) - airy_ai(x - h)) / (2.0 * h);
            assert!(
                (fd - airy_ai_prime(x)).abs() < 1e-6,
                "x={x}: fd={fd} exact={}",
                airy_ai_prime(x)
            );
            x += 0.25;
        }
    }

    #[test]
    fn airy_ode_residual_small() {
        // Ai''(x) = x Ai(x), checked with second central differences.
        let h = 1e-4;
        let mut x = -5.0;
        while x <= 5.0 {
            let second = (airy_ai(x + h) - 2.0 * airy_ai(x) + airy_ai(x - h)) / (h * h);
            assert!((second - x * airy_ai(x)).abs() < 1e-5, "x={x}");
            x += 0.125;
        }
    }

    #[test]
    fn first_zero_location_and_constant() {
        let z = airy_first_zero().unwrap();
        assert!(z.value > -2.4 && z.value < -2.3);
        assert!((z.value + 2.338107410459767).abs() < 1e-12);
        assert!(airy_ai(z.value).abs() < 1e-12);
        assert!((z.bound_coefficient() - 1.8936059182615588).abs() < 1e-12);
        // |Ai'(A0)| lands in (0.7, 0.71)
        let d = airy_ai_prime(z.value).abs();
        assert!(d > 0.7 && d < 0.71, "Ai'(A0) = {d}");
    }

    #[test]
    fn log_gamma_reference_values() {
        assert!(log_gamma(1.0).unwrap().abs() < 1e-14);
        assert!(log_gamma(2.0).unwrap().abs() < 1e-14);
        let ln20fact = 42.335616460753485;
        assert!((log_gamma(21.0).unwrap() - ln20fact).abs() < 1e-12 * ln20fact);
        let lnsqrtpi = 0.5723649429247001;
        assert!((log_gamma(0.5).unwrap() - lnsqrtpi).abs() < 1e-12);
    }

    #[test]
    fn log_gamma_rejects_nonpositive() {
        assert!(log_gamma(0.0).is_err());
        assert!(log_gamma(-3.5).is_err());
        assert!(log_gamma(f64::NAN).is_err());
    }

    #[test]
    fn log_gamma_recurrence() {
        let mut x = 0.5;
        while x <= 20.5 {
            let lhs = log_gamma(x + 1.0).unwrap().exp();
            let rhs = x * log_gamma(x).unwrap().exp();
            assert!((lhs - rhs).abs() < 1e-10 * rhs.abs(), "x={x}");
            x += 1.0;
        }
    }

    #[test]
    fn kernel_entry_values() {
        assert!((kernel_entry(0) - PI * PI / 3.0).abs() < 1e-15);
        assert!((kernel_entry(1) + 2.0).abs() < 1e-15);
        assert!((kernel_entry(-2) - 0.5).abs() < 1e-15);
        for d in -9_i64..=9 {
            assert_eq!(kernel_entry(d), kernel_entry(-d));
        }
    }

    #[test]
    fn kernel_fourier_partial_sum_recovers_phi_squared() {
        // Σ_{|d|<=D} kernel_entry(d) e^{i d φ} -> φ² on (−π, π).
        let phi = 1.0_f64;
        let d_max = 10_000_i64;
        let mut sum = kernel_entry(0);
        for d in 1..=d_max {
            sum += 2.0 * kernel_entry(d) * (d as f64 * phi).cos();
        }
        assert!((sum - phi * phi).abs() < 1e-3, "sum = {sum}");
    }
}
