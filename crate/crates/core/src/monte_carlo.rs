//! Seeded stochastic oracles: uniform simplex integration, photon-number
//! sampling from the ansatz density, and covariant measurement outcome
//! sampling.
//!
//! Everything is driven by a counter-based generator so that identical seeds
//! reproduce identical sample streams bit-for-bit; parallel use splits the
//! seed space into disjoint streams.

use crate::continuous::AnsatzState;
use crate::discrete::SinglePhaseState;
use crate::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const PI: f64 = std::f64::consts::PI;

/// Deterministic, reproducible sampler (ChaCha counter generator, period far
/// beyond 2⁶⁴).
#[derive(Clone, Debug)]
pub struct SeededSampler {
    seed: u64,
    rng: ChaCha8Rng,
}

impl SeededSampler {
    pub fn new(seed: u64) -> Self {
        SeededSampler {
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Uniform draw from [0, 1).
    pub fn uniform(&mut self) -> f64 {
        self.rng.gen::<f64>()
    }

    /// Independent stream `index` of the same seed, for parallel workers.
    pub fn stream(&self, index: u64) -> SeededSampler {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index);
        SeededSampler {
            seed: self.seed,
            rng,
        }
    }

    /// Uniform point on the open simplex {μᵢ ≥ 0, Σ μᵢ ≤ 1} via sorted
    /// spacings of p uniforms.
    fn simplex_point(&mut self, p: usize, buf: &mut Vec<f64>, out: &mut Vec<f64>) {
        buf.clear();
        for _ in 0..p {
            buf.push(self.uniform());
        }
        buf.sort_unstable_by(|a, b| a.partial_cmp(b).expect("uniforms are ordered"));
        out.clear();
        let mut prev = 0.0;
        for &u in buf.iter() {
            out.push(u - prev);
            prev = u;
        }
    }
}

/// Monte Carlo estimate with its standard error.
#[derive(Copy, Clone, Debug)]
pub struct McEstimate {
    pub value: f64,
    pub std_error: f64,
    /// Samples dropped because the integrand returned NaN.
    pub rejected_nan: u64,
}

/// Uniform-sampling integral of `integrand` over the p-simplex
/// (mean × volume 1/p!).
pub fn simplex_integrate<F: Fn(&[f64]) -> f64>(
    integrand: F,
    phases: u32,
    samples: u64,
    sampler: &mut SeededSampler,
) -> Result<McEstimate> {
    if phases == 0 || samples == 0 {
        return Err(Error::Domain("phases and samples must be positive".into()));
    }
    let volume = 1.0 / (1..=phases as u64).product::<u64>() as f64;
    let mut buf = Vec::with_capacity(phases as usize);
    let mut mu = Vec::with_capacity(phases as usize);
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    let mut kept = 0u64;
    let mut rejected = 0u64;
    for _ in 0..samples {
        sampler.simplex_point(phases as usize, &mut buf, &mut mu);
        let v = integrand(&mu);
        if v.is_nan() {
            rejected += 1;
            continue;
        }
        sum += v;
        sum_sq += v * v;
        kept += 1;
    }
    if kept == 0 {
        return Err(Error::Domain("all integrand values were NaN".into()));
    }
    let n = kept as f64;
    let mean = sum / n;
    let var = (sum_sq / n - mean * mean).max(0.0);
    Ok(McEstimate {
        value: mean * volume,
        std_error: (var / n).sqrt() * volume,
        rejected_nan: rejected,
    })
}

/// Empirical photon-number statistics of the ansatz density, in μ units.
#[derive(Copy, Clone, Debug)]
pub struct PhotonNumberStats {
    pub samples: u64,
    /// Rejection-sampling acceptance rate.
    pub acceptance: f64,
    /// Mean of the per-arm photon fraction (pooled over arms).
    pub mean_arm: f64,
    pub se_arm: f64,
    /// Mean reference-arm fraction 1 − Σ μᵢ.
    pub mean_reference: f64,
    pub se_reference: f64,
    /// Empirical correlation between two arms (None at p = 1).
    pub correlation: Option<f64>,
    pub se_correlation: Option<f64>,
}

/// Rejection sampling from |f(μ)|² with a uniform envelope scaled by the
/// density maximum located by grid search along the symmetric ray (the
/// density is log-concave and permutation symmetric, so its peak lies there).
pub fn sample_photon_numbers(
    state: &AnsatzState,
    samples: u64,
    sampler: &mut SeededSampler,
) -> Result<PhotonNumberStats> {
    if samples == 0 {
        return Err(Error::Domain("samples must be positive".into()));
    }
    let p = state.phases as usize;
    let mut peak = 0.0f64;
    let grid = 4000;
    let mut diag = vec![0.0; p];
    for i in 1..grid {
        let t = i as f64 / grid as f64 / p as f64;
        diag.iter_mut().for_each(|x| *x = t);
        let a = state.amplitude(&diag);
        peak = peak.max(a * a);
    }
    if !(peak > 0.0) {
        return Err(Error::Domain("ansatz density vanishes on the grid".into()));
    }
    let envelope = peak * (1.0 + 1e-9);

    let mut buf = Vec::with_capacity(p);
    let mut mu = Vec::with_capacity(p);
    let mut accepted = 0u64;
    let mut proposals = 0u64;
    let (mut s_arm, mut s_arm2) = (0.0, 0.0);
    let (mut s_ref, mut s_ref2) = (0.0, 0.0);
    let (mut s_x, mut s_y, mut s_xx, mut s_yy, mut s_xy) = (0.0, 0.0, 0.0, 0.0, 0.0);
    while accepted < samples {
        proposals += 1;
        if proposals >= 200_000 && (accepted as f64 / proposals as f64) < 1e-4 {
            return Err(Error::NonConvergence(format!(
                "envelope failure: acceptance {:.2e} below 1e-4",
                accepted as f64 / proposals as f64
            )));
        }
        sampler.simplex_point(p, &mut buf, &mut mu);
        let a = state.amplitude(&mu);
        if sampler.uniform() * envelope > a * a {
            continue;
        }
        accepted += 1;
        let total: f64 = mu.iter().sum();
        debug_assert!(total <= 1.0 + 1e-12, "sample left the simplex");
        let arm = total / p as f64;
        let reference = 1.0 - total;
        s_arm += arm;
        s_arm2 += arm * arm;
        s_ref += reference;
        s_ref2 += reference * reference;
        if p >= 2 {
            let (x, y) = (mu[0], mu[1]);
            s_x += x;
            s_y += y;
            s_xx += x * x;
            s_yy += y * y;
            s_xy += x * y;
        }
    }
    let n = samples as f64;
    let mean_arm = s_arm / n;
    let var_arm = (s_arm2 / n - mean_arm * mean_arm).max(0.0);
    let mean_reference = s_ref / n;
    let var_ref = (s_ref2 / n - mean_reference * mean_reference).max(0.0);
    let (correlation, se_correlation) = if p >= 2 {
        let mx = s_x / n;
        let my = s_y / n;
        let vx = (s_xx / n - mx * mx).max(0.0);
        let vy = (s_yy / n - my * my).max(0.0);
        let cxy = s_xy / n - mx * my;
        let r = cxy / (vx * vy).sqrt();
        (Some(r), Some((1.0 - r * r) / n.sqrt()))
    } else {
        (None, None)
    };
    Ok(PhotonNumberStats {
        samples,
        acceptance: samples as f64 / proposals as f64,
        mean_arm,
        se_arm: (var_arm / n).sqrt(),
        mean_reference,
        se_reference: (var_ref / n).sqrt(),
        correlation,
        se_correlation,
    })
}

/// Empirical covariant cost estimate.
#[derive(Copy, Clone, Debug)]
pub struct CovariantCostEstimate {
    pub cost: f64,
    pub std_error: f64,
    /// Grid resolution at which the estimate stabilized.
    pub grid: usize,
}

const COVARIANT_GRID_START: usize = 1 << 16;
const COVARIANT_GRID_LIMIT: usize = 1 << 22;

/// Samples covariant measurement outcomes x from |⟨x|Ψ_θ⟩|²/(2π) by inverse
/// CDF on a grid, and returns the mean circular squared error.
///
/// The grid resolution doubles (re-running the same sample stream) until the
/// cost estimate moves by less than 0.1 standard errors.
pub fn sample_covariant_outcome(
    state: &SinglePhaseState,
    theta: f64,
    samples: u64,
    sampler: &mut SeededSampler,
) -> Result<CovariantCostEstimate> {
    if samples == 0 {
        return Err(Error::Domain("samples must be positive".into()));
    }
    let base = sampler.clone();
    let mut grid = COVARIANT_GRID_START;
    let mut prev: Option<(f64, f64)> = None;
    while grid <= COVARIANT_GRID_LIMIT {
        let (cost, se) = covariant_run(state, theta, samples, &mut base.clone(), grid);
        if let Some((prev_cost, _)) = prev {
            if (cost - prev_cost).abs() < 0.1 * se {
                return Ok(CovariantCostEstimate {
                    cost,
                    std_error: se,
                    grid,
                });
            }
        }
        prev = Some((cost, se));
        grid *= 2;
    }
    Err(Error::NonConvergence(format!(
        "covariant outcome grid exceeded {COVARIANT_GRID_LIMIT} without stabilizing"
    )))
}

fn covariant_run(
    state: &SinglePhaseState,
    theta: f64,
    samples: u64,
    sampler: &mut SeededSampler,
    grid: usize,
) -> (f64, f64) {
    let coeffs = state.coefficients();
    let dx = 2.0 * PI / grid as f64;
    // cell-midpoint density table and its cumulative masses
    let mut cumulative = Vec::with_capacity(grid + 1);
    cumulative.push(0.0);
    let mut total = 0.0;
    for j in 0..grid {
        let x = -PI + (j as f64 + 0.5) * dx;
        let mut re = 0.0;
        let mut im = 0.0;
        for (m, &c) in coeffs.iter().enumerate() {
            let phase = m as f64 * (theta - x);
            re += c * phase.cos();
            im += c * phase.sin();
        }
        total += (re * re + im * im) / (2.0 * PI) * dx;
        cumulative.push(total);
    }

    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for _ in 0..samples {
        let u = sampler.uniform() * total;
        let mut lo = 0usize;
        let mut hi = grid;
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if cumulative[mid] <= u {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let mass = cumulative[lo + 1] - cumulative[lo];
        let frac = if mass > 0.0 {
            (u - cumulative[lo]) / mass
        } else {
            0.5
        };
        let x = -PI + (lo as f64 + frac) * dx;
        let mut d = (x - theta).rem_euclid(2.0 * PI);
        if d > PI {
            d = 2.0 * PI - d;
        }
        let c = d * d;
        sum += c;
        sum_sq += c * c;
    }
    let n = samples as f64;
    let mean = sum / n;
    let var = (sum_sq / n - mean * mean).max(0.0);
    (mean, (var / n).sqrt())
}
