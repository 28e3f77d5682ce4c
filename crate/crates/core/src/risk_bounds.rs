//! Coarse-stage risk machinery for finite prior regions: Kaiser-window
//! priors, their tail risks, the composite risk bound and the finite-region
//! lower bound with its positivity margin.
//!
//! The two-stage argument spends p·N₀ photons to localize each phase inside a
//! width-δ window whose residual probability mass outside the window (R₁) and
//! its cost-weighted version (R₂) decay exponentially in the window shape
//! parameter α = N₀δ/4.

use crate::quadrature::adaptive_simpson;
use crate::{Error, Result};

const PI: f64 = std::f64::consts::PI;
/// Upper limit (in the substituted variable u = Lφ/4α) of the numeric tail
/// quadrature; the algebraic remainder beyond it is bounded in closed form.
const TAIL_CUT: f64 = 1000.0;

/// Kaiser-prior parameters of the coarse stage.
#[derive(Copy, Clone, Debug)]
pub struct RiskParams {
    pub phases: u32,
    /// Full width δ of the prior region.
    pub delta: f64,
    /// Coarse-stage photon budget N₀ per phase.
    pub coarse_budget: u64,
    /// Window shape α = N₀δ/4 (> 1/2 for the closed-form tail bounds).
    pub shape: f64,
    /// Bandwidth L = 2N₀.
    pub bandwidth: f64,
}

impl RiskParams {
    pub fn new(phases: u32, delta: f64, coarse_budget: u64) -> Result<Self> {
        if phases == 0 || coarse_budget == 0 || !(delta > 0.0) {
            return Err(Error::Domain(
                "risk parameters must be positive".into(),
            ));
        }
        let shape = coarse_budget as f64 * delta / 4.0;
        if shape <= 0.5 {
            return Err(Error::Domain(format!(
                "window shape N0*delta/4 = {shape} must exceed 1/2"
            )));
        }
        Ok(RiskParams {
            phases,
            delta,
            coarse_budget,
            shape,
            bandwidth: 2.0 * coarse_budget as f64,
        })
    }
}

/// Dimensionless window profile at u = Lφ/(4α): the sinc⁴ branch for
/// |u| ≥ 1, the sinh⁴ branch inside; both meet continuously at the seam.
fn window_profile(alpha: f64, u: f64) -> f64 {
    let t = u * u - 1.0;
    if t >= 0.0 {
        let arg = PI * alpha * t.sqrt();
        let s = if arg == 0.0 { 1.0 } else { arg.sin() / arg };
        s.powi(4)
    } else {
        let arg = PI * alpha * (-t).sqrt();
        (arg.sinh() / arg).powi(4)
    }
}

/// Unnormalized Kaiser prior L·sinc⁴(πα√((Lφ/4α)² − 1)) (sinh branch inside
/// the seam |Lφ/4α| = 1).
pub fn kaiser_prior(shape: f64, bandwidth: f64, phi: f64) -> f64 {
    let u = bandwidth * phi / (4.0 * shape);
    bandwidth * window_profile(shape, u)
}

/// ∫₀^∞ of the window profile in u, split at the seam; the algebraic tail
/// beyond `TAIL_CUT` enters through its closed-form upper bound (relative
/// size ~1e-11).
fn profile_integral(alpha: f64, weight: impl Fn(f64) -> f64 + Copy) -> Result<f64> {
    let f = |u: f64| window_profile(alpha, u) * weight(u);
    let mut total = adaptive_simpson(&f, 0.0, 0.5, 1e-11)? + adaptive_simpson(&f, 0.5, 1.0, 1e-11)?;
    let mut a = 1.0;
    while a < TAIL_CUT {
        let b = (a * 2.0).min(TAIL_CUT);
        total += adaptive_simpson(&f, a, b, 1e-11)?;
        a = b;
    }
    Ok(total)
}

fn tail_integral(alpha: f64, weight: impl Fn(f64) -> f64 + Copy, remainder: f64) -> Result<f64> {
    let f = |u: f64| window_profile(alpha, u) * weight(u);
    let mut total = 0.0;
    let mut a = 1.0;
    while a < TAIL_CUT {
        let b = (a * 2.0).min(TAIL_CUT);
        total += adaptive_simpson(&f, a, b, 1e-11)?;
        a = b;
    }
    Ok(total + remainder / (PI * alpha).powi(4))
}

/// Numeric normalization constant of the Kaiser prior together with its
/// analytic upper bound 4√2·π⁴·α^{7/2}·e^{−4πα} (tight for large α).
#[derive(Copy, Clone, Debug)]
pub struct PriorNormalization {
    pub numeric: f64,
    pub analytic_bound: f64,
}

pub fn prior_normalization(shape: f64, bandwidth: f64) -> Result<PriorNormalization> {
    if !(shape > 0.0) || !(bandwidth > 0.0) {
        return Err(Error::Domain("shape and bandwidth must be positive".into()));
    }
    // ∫_R q dφ = 8α ∫_0^∞ profile(u) du, independent of L; the closed-form
    // remainder covers (TAIL_CUT, ∞)
    let integral = profile_integral(shape, |_| 1.0)?
        + 1.0 / ((PI * shape).powi(4) * 3.0 * (TAIL_CUT - 1.0).powi(3));
    let numeric = 1.0 / (8.0 * shape * integral);
    let analytic_bound = 4.0 * 2f64.sqrt() * PI.powi(4) * shape.powf(3.5) * (-4.0 * PI * shape).exp();
    Ok(PriorNormalization {
        numeric,
        analytic_bound,
    })
}

/// Tail risks of the coarse stage: R₁ is the normalized probability mass
/// outside [−δ/2, δ/2], R₂ its worst-case cost weighting (φ + δ/2)².
#[derive(Copy, Clone, Debug)]
pub struct TailRisks {
    pub r1: f64,
    pub r2: f64,
}

pub fn tail_risks(params: &RiskParams) -> Result<TailRisks> {
    let alpha = params.shape;
    let l = params.bandwidth;
    let norm = prior_normalization(alpha, l)?.numeric;
    // remainders: ∫_U^∞ du/(u²−1)² < 1/(3(U−1)³); with the (u+1)² weight the
    // integrand collapses to (u−1)^{-2}, remainder exactly 1/(U−1)
    let i1 = tail_integral(alpha, |_| 1.0, 1.0 / (3.0 * (TAIL_CUT - 1.0).powi(3)))?;
    let i2 = tail_integral(
        alpha,
        |u| (u + 1.0) * (u + 1.0),
        1.0 / (TAIL_CUT - 1.0),
    )?;
    let r1 = 8.0 * norm * alpha * i1;
    let r2 = 2.0 * norm * l * (4.0 * alpha / l).powi(3) * i2;
    Ok(TailRisks { r1, r2 })
}

/// Composite risk bound (15/2)·𝒩_{N₀δ/4}·N₀·δ³·p², with the analytic
/// normalization bound.
pub fn total_risk_bound(params: &RiskParams) -> Result<f64> {
    let n_alpha = prior_normalization(params.shape, params.bandwidth)?.analytic_bound;
    let p = params.phases as f64;
    Ok(7.5 * n_alpha * params.coarse_budget as f64 * params.delta.powi(3) * p * p)
}

/// Finite-region lower bound, possibly clamped at zero.
#[derive(Copy, Clone, Debug)]
pub struct FiniteRegionBound {
    pub value: f64,
    /// True when the correction term exceeded 1 and the bound carries no
    /// information (clamped to zero rather than reported negative).
    pub vacuous: bool,
}

fn corrected_leading(leading: f64, phases: f64, n_delta: f64) -> FiniteRegionBound {
    let correction = 8.0 * phases * (phases * n_delta).ln() / n_delta;
    if correction >= 1.0 {
        FiniteRegionBound {
            value: 0.0,
            vacuous: true,
        }
    } else {
        FiniteRegionBound {
            value: leading * (1.0 - correction),
            vacuous: false,
        }
    }
}

/// Lower bound (c·p³/N²)·(1 − 8p·log(pNδ)/(Nδ)) on the minimax cost over a
/// width-δ region; requires pNδ ≥ 2.
pub fn finite_region_bound(
    phases: u32,
    total_photons: u64,
    delta: f64,
    c: f64,
) -> Result<FiniteRegionBound> {
    if phases == 0 || total_photons == 0 {
        return Err(Error::Domain("parameters must be positive".into()));
    }
    let p = phases as f64;
    let n = total_photons as f64;
    if !(p * n * delta >= 2.0) {
        return Err(Error::Domain(format!(
            "validity domain needs p*N*delta >= 2, got {}",
            p * n * delta
        )));
    }
    let leading = c * p.powi(3) / (n * n);
    Ok(corrected_leading(leading, p, n * delta))
}

/// Single-parameter analogue for a generator with spectrum [λ₋, λ₊]:
/// π²/[N(λ₊−λ₋)]²·(1 − 8·log(N(λ₊−λ₋)δ)/(N(λ₊−λ₋)δ)).
pub fn single_param_minimax_bound(
    total_photons: u64,
    lambda_minus: f64,
    lambda_plus: f64,
    delta: f64,
) -> Result<FiniteRegionBound> {
    if lambda_plus <= lambda_minus {
        return Err(Error::Domain("need lambda_plus > lambda_minus".into()));
    }
    let n_eff = total_photons as f64 * (lambda_plus - lambda_minus);
    if !(n_eff * delta >= 2.0) {
        return Err(Error::Domain(format!(
            "validity domain needs N(λ+−λ−)δ >= 2, got {}",
            n_eff * delta
        )));
    }
    Ok(corrected_leading(PI * PI / (n_eff * n_eff), 1.0, n_eff * delta))
}

/// Bayesian bound for a finite-bandwidth prior: π²/(N(λ₊−λ₋) + L/2)².
pub fn single_param_bayes_bound(
    total_photons: u64,
    bandwidth: f64,
    lambda_minus: f64,
    lambda_plus: f64,
) -> Result<f64> {
    if lambda_plus <= lambda_minus {
        return Err(Error::Domain("need lambda_plus > lambda_minus".into()));
    }
    if bandwidth < 0.0 {
        return Err(Error::Domain("bandwidth must be non-negative".into()));
    }
    let n_eff = total_photons as f64 * (lambda_plus - lambda_minus);
    Ok(PI * PI / (n_eff + bandwidth / 2.0).powi(2))
}

/// Positivity margin of the finite-region correction,
/// [48(log y/y)² + 128(log y/y)³]/(1 + 4 log y/y)²
/// − (120√2π⁴/c)·y^{2−4π}·(log y)^{9/2}, for y ≥ 2.
pub fn positivity_margin(y: f64, c: f64) -> f64 {
    let ly = y.ln() / y;
    let first = (48.0 * ly * ly + 128.0 * ly.powi(3)) / (1.0 + 4.0 * ly).powi(2);
    let second = 120.0 * 2f64.sqrt() * PI.powi(4) / c * y.powf(2.0 - 4.0 * PI) * y.ln().powf(4.5);
    first - second
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::composite_simpson;

    #[test]
    fn prior_at_origin_and_seam() {
        let (alpha, l) = (2.0, 16.0);
        let want = l * ((PI * alpha).sinh() / (PI * alpha)).powi(4);
        assert!((kaiser_prior(alpha, l, 0.0) - want).abs() < 1e-9 * want);
        // both branches approach L at the seam
        let seam = 4.0 * alpha / l;
        let below = kaiser_prior(alpha, l, seam * (1.0 - 1e-12));
        let above = kaiser_prior(alpha, l, seam * (1.0 + 1e-12));
        assert!((below - l).abs() < 1e-8 * l, "{below}");
        assert!((above - l).abs() < 1e-8 * l, "{above}");
        assert!((below - above).abs() < 1e-8 * l);
        assert!((kaiser_prior(alpha, l, seam) - l).abs() < 1e-12);
    }

    #[test]
    fn prior_is_even() {
        let (alpha, l) = (1.5, 8.0);
        let mut phi = 0.0;
        while phi <= 2.0 {
            assert_eq!(kaiser_prior(alpha, l, phi), kaiser_prior(alpha, l, -phi));
            phi += 0.05;
        }
    }

    #[test]
    fn normalization_against_analytic_bound() {
        let mut prev_ratio = 0.0;
        for alpha in [1.0, 2.0, 4.0, 8.0] {
            let n = prior_normalization(alpha, 2.0).unwrap();
            assert!(n.numeric <= n.analytic_bound, "alpha={alpha}");
            let ratio = n.numeric / n.analytic_bound;
            assert!(ratio > prev_ratio, "ratio should rise toward 1");
            prev_ratio = ratio;
        }
        assert!(prev_ratio > 0.95, "alpha=8 ratio {prev_ratio} within 5% of 1");
    }

    #[test]
    fn normalized_prior_integrates_to_one() {
        // independent fixed-grid check of the adaptive result
        let (alpha, l) = (1.0, 2.0);
        let n = prior_normalization(alpha, l).unwrap().numeric;
        let cut = 4.0 * alpha / l * 200.0;
        let integral =
            2.0 * composite_simpson(|phi| n * kaiser_prior(alpha, l, phi), 0.0, cut, 400_000);
        assert!((integral - 1.0).abs() < 1e-8, "{integral}");
    }

    #[test]
    fn tail_risks_respect_closed_form_bounds() {
        for (delta, n0) in [
            (0.1, 32u64),
            (0.1, 64),
            (0.2, 32),
            (0.2, 64),
            (0.4, 16),
            (0.4, 128),
        ] {
            let rp = RiskParams::new(3, delta, n0).unwrap();
            let norm = prior_normalization(rp.shape, rp.bandwidth).unwrap().numeric;
            let TailRisks { r1, r2 } = tail_risks(&rp).unwrap();
            assert!(r1 <= 16.0 * norm * rp.shape, "delta={delta} N0={n0}");
            assert!(
                r2 <= 14.0 * norm * rp.bandwidth * (4.0 * rp.shape / rp.bandwidth).powi(3),
                "delta={delta} N0={n0}"
            );
        }
    }

    #[test]
    fn tail_risks_vanish_with_budget() {
        let mut prev = TailRisks {
            r1: f64::INFINITY,
            r2: f64::INFINITY,
        };
        for n0 in [8u64, 16, 32, 64] {
            let t = tail_risks(&RiskParams::new(2, 0.3, n0).unwrap()).unwrap();
            assert!(t.r1 < prev.r1 && t.r2 < prev.r2, "N0={n0}");
            prev = t;
        }
        assert!(prev.r1 < 1e-10 && prev.r2 < 1e-10);
    }

    #[test]
    fn composite_bound_dominates_exact_combination() {
        for p in [2u32, 5] {
            for (delta, n0) in [(0.2, 32u64), (0.1, 64), (0.4, 16)] {
                let rp = RiskParams::new(p, delta, n0).unwrap();
                let TailRisks { r1, r2 } = tail_risks(&rp).unwrap();
                let exact = p as f64 * (p as f64 - 1.0) * r1 * delta * delta + p as f64 * r2;
                let bound = total_risk_bound(&rp).unwrap();
                assert!(exact <= bound, "p={p} delta={delta} N0={n0}: {exact} vs {bound}");
            }
        }
    }

    #[test]
    fn composite_bound_scalings() {
        // quadratic in p
        let b1 = total_risk_bound(&RiskParams::new(2, 0.2, 32).unwrap()).unwrap();
        let b2 = total_risk_bound(&RiskParams::new(4, 0.2, 32).unwrap()).unwrap();
        assert!((b2 / b1 - 4.0).abs() < 1e-12);
        // doubling the budget beats doubling the region width
        let grow_budget = total_risk_bound(&RiskParams::new(2, 0.1, 64).unwrap()).unwrap();
        let grow_width = total_risk_bound(&RiskParams::new(2, 0.2, 32).unwrap()).unwrap();
        assert!(grow_budget < grow_width);
    }

    #[test]
    fn finite_region_bound_cases() {
        // pNδ = e makes the correction 8/e·... > 1: vacuous, clamped at zero
        let b = finite_region_bound(1, 272, 0.01, 1.89).unwrap();
        assert!(b.vacuous && b.value == 0.0);
        // large N: correction fades, factor ≥ 0.99
        let b = finite_region_bound(1, 1_000_000, 0.1, 1.89).unwrap();
        let leading = 1.89 / 1e12;
        assert!(!b.vacuous);
        assert!(b.value >= 0.99 * leading, "{}", b.value / leading);
        // below validity domain
        assert!(finite_region_bound(1, 10, 0.01, 1.89).is_err());
    }

    #[test]
    fn finite_region_below_unrestricted_bound() {
        for (p, n, delta) in [(1u32, 1000u64, 0.1), (3, 5000, 0.05), (2, 100, 0.5)] {
            let c = 1.8936059182615588;
            let b = finite_region_bound(p, n, delta, c).unwrap();
            let unrestricted = c * (p as f64).powi(3) / (n as f64 * n as f64);
            assert!(b.value <= unrestricted);
        }
    }

    #[test]
    fn single_parameter_bounds() {
        let want = PI * PI / 10_000.0;
        assert!((single_param_bayes_bound(100, 0.0, 0.0, 1.0).unwrap() - want).abs() < 1e-15);
        let b20 = single_param_bayes_bound(100, 20.0, 0.0, 1.0).unwrap();
        let b40 = single_param_bayes_bound(100, 40.0, 0.0, 1.0).unwrap();
        assert!((b20 - PI * PI / (110.0 * 110.0)).abs() < 1e-15);
        assert!(b40 < b20);
        assert!(single_param_bayes_bound(100, 1.0, 1.0, 0.5).is_err());

        // minimax variant matches the p = 1 finite-region formula with the
        // effective photon number N(λ+ − λ−)
        let b = single_param_minimax_bound(1000, 0.0, 0.5, 0.1).unwrap();
        let n_eff = 500.0;
        let want = PI * PI / (n_eff * n_eff) * (1.0 - 8.0 * (n_eff * 0.1).ln() / (n_eff * 0.1));
        assert!((b.value - want).abs() < 1e-15 * want.abs());
    }

    #[test]
    fn margin_reference_points() {
        let m = positivity_margin(2.0, 1.89);
        assert!((m - 0.840).abs() < 5e-4, "margin(2, 1.89) = {m}");
        // small c flips the sign at y = 2
        assert!(positivity_margin(2.0, 0.1) < 0.0);
        // far out the exponential term is immaterial
        let m6 = positivity_margin(1e6, 1.89);
        assert!(m6 > 0.0);
        let second = 120.0 * 2f64.sqrt() * PI.powi(4) / 1.89
            * 1e6f64.powf(2.0 - 4.0 * PI)
            * 1e6f64.ln().powf(4.5);
        assert!(second < 1e-50, "second term {second}");
        assert!(m6 > 1e3 * second);
    }

    #[test]
    fn risk_params_validation() {
        assert!(RiskParams::new(0, 0.1, 32).is_err());
        assert!(RiskParams::new(2, -0.1, 32).is_err());
        // N0·δ/4 <= 1/2 rejected
        assert!(RiskParams::new(2, 0.05, 32).is_err());
        let rp = RiskParams::new(2, 0.2, 32).unwrap();
        assert!((rp.shape - 1.6).abs() < 1e-15);
        assert!((rp.bandwidth - 64.0).abs() < 1e-15);
    }
}
