//! Finite-photon lattice model: covariant cost kernels, optimal single-phase
//! states, discretized joint ansatz costs and joint-vs-separate advantage
//! ratios.
//!
//! The covariant circular cost of a phase-encoded state reduces to a
//! quadratic form in the Toeplitz kernel `K(m, m′) = kernel_entry(m − m′)`.
//! For p phases the full lattice has C(N+p, p) points, but the per-arm cost
//! depends on the singled-out pair (m, m′) and the total `S` carried by the
//! other arms only, so the pair weights collapse to a (p−1)-fold truncated
//! convolution (`composition_weights`) and the whole cost runs in
//! O(pN² + N³).

use crate::specfun::kernel_entry;
use crate::{Error, Result};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

const PI: f64 = std::f64::consts::PI;

/// Real symmetric Toeplitz cost kernel of size (M+1)×(M+1).
#[derive(Clone, Debug)]
pub struct CovariantKernel {
    matrix: DMatrix<f64>,
}

impl CovariantKernel {
    /// Builds the kernel for photon numbers 0..=M.
    pub fn new(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::Domain("kernel size M must be >= 1".into()));
        }
        let n = m + 1;
        let matrix = DMatrix::from_fn(n, n, |i, j| kernel_entry(i as i64 - j as i64));
        Ok(CovariantKernel { matrix })
    }

    /// Maximum photon number M.
    pub fn max_photons(&self) -> usize {
        self.matrix.nrows() - 1
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.matrix[(i, j)]
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    /// Smallest eigenvalue (the kernel is positive definite).
    pub fn smallest_eigenvalue(&self) -> f64 {
        self.smallest_eigenpair().0
    }

    /// Smallest eigenvalue with its eigenvector.
    pub fn smallest_eigenpair(&self) -> (f64, DVector<f64>) {
        let eig = self.matrix.clone().symmetric_eigen();
        let mut best = 0;
        for i in 1..eig.eigenvalues.len() {
            if eig.eigenvalues[i] < eig.eigenvalues[best] {
                best = i;
            }
        }
        (eig.eigenvalues[best], eig.eigenvectors.column(best).into())
    }

    /// Quadratic form cᵀKc for a state of matching size.
    pub fn cost(&self, state: &SinglePhaseState) -> Result<f64> {
        if state.coefficients.len() != self.matrix.nrows() {
            return Err(Error::Domain(format!(
                "state has {} coefficients, kernel expects {}",
                state.coefficients.len(),
                self.matrix.nrows()
            )));
        }
        let c = DVector::from_column_slice(&state.coefficients);
        Ok((c.transpose() * &self.matrix * &c)[(0, 0)])
    }
}

/// Convenience constructor mirroring the kernel-building operation.
pub fn build_kernel(m: usize) -> Result<CovariantKernel> {
    CovariantKernel::new(m)
}

/// Real-coefficient single-phase probe state over photon numbers 0..=M.
#[derive(Clone, Debug)]
pub struct SinglePhaseState {
    coefficients: Vec<f64>,
}

impl SinglePhaseState {
    /// Requires unit Euclidean norm (within 1e-12).
    pub fn new(coefficients: Vec<f64>) -> Result<Self> {
        let norm_sq: f64 = coefficients.iter().map(|c| c * c).sum();
        if (norm_sq - 1.0).abs() > 1e-12 {
            return Err(Error::Domain(format!(
                "state must be normalized, got |c|^2 = {norm_sq}"
            )));
        }
        Ok(SinglePhaseState { coefficients })
    }

    /// Normalizes arbitrary coefficients.
    pub fn from_unnormalized(coefficients: Vec<f64>) -> Result<Self> {
        let norm_sq: f64 = coefficients.iter().map(|c| c * c).sum();
        if norm_sq <= 0.0 || !norm_sq.is_finite() {
            return Err(Error::Domain("cannot normalize a zero state".into()));
        }
        let s = norm_sq.sqrt();
        Ok(SinglePhaseState {
            coefficients: coefficients.into_iter().map(|c| c / s).collect(),
        })
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn max_photons(&self) -> usize {
        self.coefficients.len() - 1
    }
}

/// Optimal state for a completely unknown single phase:
/// c_m = √(2/(M+2)) · sin((m+1)π/(M+2)).
pub fn sine_state(m: usize) -> SinglePhaseState {
    let denom = (m + 2) as f64;
    let scale = (2.0 / denom).sqrt();
    let coefficients = (0..=m)
        .map(|i| scale * ((i + 1) as f64 * PI / denom).sin())
        .collect();
    // exactly normalized by discrete sine orthogonality
    SinglePhaseState { coefficients }
}

/// Exact covariant circular-variance cost cᵀKc of a single-phase state.
pub fn single_phase_cost(state: &SinglePhaseState) -> f64 {
    let kernel = CovariantKernel::new(state.max_photons().max(1)).expect("m >= 1");
    if state.max_photons() == 0 {
        // a single basis state measures nothing: uniform outcome, cost π²/3
        return kernel_entry(0);
    }
    kernel.cost(state).expect("sizes match by construction")
}

/// Optimal separate-strategy cost p·λ_min(K_{N/p}).
pub fn separate_optimal_cost(phases: u32, total_photons: u64) -> Result<f64> {
    if phases == 0 || total_photons == 0 {
        return Err(Error::Domain("parameters must be positive".into()));
    }
    if !total_photons.is_multiple_of(phases as u64) {
        return Err(Error::Domain(format!(
            "separate strategy needs p | N, got p = {phases}, N = {total_photons}"
        )));
    }
    let m = (total_photons / phases as u64) as usize;
    Ok(phases as f64 * CovariantKernel::new(m)?.smallest_eigenvalue())
}

fn truncated_convolution(w: &[f64], a: &[f64]) -> Vec<f64> {
    let n = w.len();
    let mut out = vec![0.0; n];
    for (s, slot) in out.iter_mut().enumerate() {
        let mut acc = 0.0;
        for j in 0..=s {
            acc += w[j] * a[s - j];
        }
        *slot = acc;
    }
    out
}

fn convolution_power(base: &[f64], folds: usize) -> Vec<f64> {
    let mut w = vec![0.0; base.len()];
    w[0] = 1.0;
    for _ in 0..folds {
        w = truncated_convolution(&w, base);
    }
    w
}

type WeightKey = (u32, u64, u64);

fn weights_cache() -> &'static RwLock<HashMap<WeightKey, Arc<Vec<f64>>>> {
    static CACHE: OnceLock<RwLock<HashMap<WeightKey, Arc<Vec<f64>>>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Marginal pair weights `W[S]` = Σ over (p−1)-tuples with Σ m_j = S of
/// Π m_j^{2·exponent}, for S = 0..=N.
///
/// Computed by (p−1)-fold truncated convolution of (m^{2·exponent})_{m=0..N}
/// and memoized; the cache takes concurrent readers and a single writer.
pub fn composition_weights(phases: u32, total_photons: u64, exponent: f64) -> Result<Arc<Vec<f64>>> {
    if phases < 2 {
        return Err(Error::Domain(
            "composition weights need p >= 2 (no other arms below that)".into(),
        ));
    }
    let key = (phases, total_photons, exponent.to_bits());
    if let Some(hit) = weights_cache().read().expect("cache lock").get(&key) {
        return Ok(Arc::clone(hit));
    }
    let n = total_photons as usize;
    let base: Vec<f64> = (0..=n)
        .map(|m| if m == 0 { 0.0 } else { (m as f64).powf(2.0 * exponent) })
        .collect();
    let w = Arc::new(convolution_power(&base, phases as usize - 1));
    weights_cache()
        .write()
        .expect("cache lock")
        .insert(key, Arc::clone(&w));
    Ok(w)
}

/// Exact covariant cost of the discretized ansatz state on the photon
/// lattice, via the convolution dynamic programme (no sampling).
pub fn joint_ansatz_cost_discrete(
    phases: u32,
    total_photons: u64,
    alpha: f64,
    beta: f64,
) -> Result<f64> {
    if phases == 0 || total_photons == 0 {
        return Err(Error::Domain("parameters must be positive".into()));
    }
    if !(alpha >= 0.5) || !(beta >= 0.5) {
        return Err(Error::Domain(format!(
            "ansatz exponents must satisfy alpha, beta >= 1/2, got ({alpha}, {beta})"
        )));
    }
    let n = total_photons as usize;
    let nf = total_photons as f64;

    // per-arm profile and boundary factor, kept O(1) in magnitude
    let arm: Vec<f64> = (0..=n)
        .map(|m| if m == 0 { 0.0 } else { (m as f64 / nf).powf(alpha) })
        .collect();
    let arm_sq: Vec<f64> = arm.iter().map(|a| a * a).collect();
    let boundary: Vec<f64> = (0..=n)
        .map(|t| {
            if t == n {
                0.0
            } else {
                (1.0 - t as f64 / nf).powf(beta)
            }
        })
        .collect();

    let other_arms = convolution_power(&arm_sq, phases as usize - 1);
    let all_arms = truncated_convolution(&other_arms, &arm_sq);

    let norm: f64 = all_arms
        .iter()
        .zip(&boundary)
        .map(|(w, b)| w * b * b)
        .sum();
    if norm <= 0.0 {
        return Err(Error::Domain(
            "discretized ansatz vanishes on this lattice (N too small for p)".into(),
        ));
    }

    let kvals: Vec<f64> = (0..=n).map(|d| kernel_entry(d as i64)).collect();
    let mut numerator = 0.0;
    for (s, &w) in other_arms.iter().enumerate() {
        if w == 0.0 {
            continue;
        }
        let len = n - s;
        let profile: Vec<f64> = (0..=len).map(|m| arm[m] * boundary[m + s]).collect();
        let mut quad = 0.0;
        for (i, &vi) in profile.iter().enumerate() {
            if vi == 0.0 {
                continue;
            }
            for (j, &vj) in profile.iter().enumerate() {
                quad += vi * vj * kvals[i.abs_diff(j)];
            }
        }
        numerator += w * quad;
    }
    Ok(phases as f64 * numerator / norm)
}

/// Joint-over-separate cost ratio at the reference exponents (3/2, √p);
/// below 1 signals a genuine joint-measurement gain.
pub fn advantage_ratio(phases: u32, total_photons: u64) -> Result<f64> {
    let joint =
        joint_ansatz_cost_discrete(phases, total_photons, 1.5, (phases as f64).sqrt())?;
    let separate = separate_optimal_cost(phases, total_photons)?;
    Ok(joint / separate)
}

/// Expected quadratic cost of the border-clamped covariant estimator.
///
/// Outcomes x outside [−d/2, d/2] are moved to the nearest border before the
/// squared error against θ is taken. Quadrature runs piecewise between the
/// estimator kinks at ±d/2 with `grid` Simpson subintervals per piece,
/// accepted only when the Richardson error estimate stays below 1e-6.
pub fn clamped_estimator_cost(
    state: &SinglePhaseState,
    d: f64,
    theta: f64,
    grid: usize,
) -> Result<f64> {
    if !(d > 0.0 && d <= 2.0 * PI) {
        return Err(Error::Domain(format!("need 0 < d <= 2π, got {d}")));
    }
    if theta.abs() > d / 2.0 {
        return Err(Error::Domain(format!(
            "true phase must satisfy |θ| <= d/2, got θ = {theta}"
        )));
    }
    if grid == 0 {
        return Err(Error::Domain("grid must be positive".into()));
    }
    let coeffs = state.coefficients();
    let density = |x: f64| -> f64 {
        let mut re = 0.0;
        let mut im = 0.0;
        for (m, &c) in coeffs.iter().enumerate() {
            let phase = m as f64 * (theta - x);
            re += c * phase.cos();
            im += c * phase.sin();
        }
        (re * re + im * im) / (2.0 * PI)
    };
    let half = d / 2.0;
    let integrand = |x: f64| {
        let est = x.clamp(-half, half);
        density(x) * (est - theta) * (est - theta)
    };
    let piecewise = |n: usize| -> f64 {
        let mut total = 0.0;
        for (a, b) in [(-PI, -half), (-half, half), (half, PI)] {
            if b > a {
                total += crate::quadrature::composite_simpson(integrand, a, b, n);
            }
        }
        total
    };
    let coarse = piecewise(grid);
    let fine = piecewise(2 * grid);
    let err = (fine - coarse).abs() / 15.0;
    if err > 1e-6 {
        return Err(Error::NonConvergence(format!(
            "grid too coarse: Richardson error estimate {err:.2e} exceeds 1e-6"
        )));
    }
    Ok(fine)
}

/// Normalized complex amplitudes over the integer simplex {m : Σ mᵢ ≤ N}.
#[derive(Clone, Debug)]
pub struct LatticeState {
    phases: u32,
    total_photons: u64,
    amplitudes: Vec<(Vec<u32>, Complex64)>,
}

impl LatticeState {
    /// Builds a normalized state from arbitrary amplitudes given by `f` on
    /// every lattice point. Intended for small (p ≤ 3-ish) lattices.
    pub fn from_fn<F: FnMut(&[u32]) -> Complex64>(
        phases: u32,
        total_photons: u64,
        mut f: F,
    ) -> Result<Self> {
        if phases == 0 {
            return Err(Error::Domain("phases must be positive".into()));
        }
        let mut amplitudes = Vec::new();
        let mut index = vec![0u32; phases as usize];
        enumerate_lattice(total_photons as u32, 0, &mut index, &mut |m| {
            let a = f(m);
            if a != Complex64::new(0.0, 0.0) {
                amplitudes.push((m.to_vec(), a));
            }
        });
        let norm_sq: f64 = amplitudes.iter().map(|(_, a)| a.norm_sqr()).sum();
        if norm_sq <= 0.0 || !norm_sq.is_finite() {
            return Err(Error::Domain("lattice state has zero norm".into()));
        }
        let s = norm_sq.sqrt();
        for (_, a) in &mut amplitudes {
            *a /= s;
        }
        Ok(LatticeState {
            phases,
            total_photons,
            amplitudes,
        })
    }

    /// Discretization of the two-parameter ansatz on the lattice.
    pub fn from_ansatz(phases: u32, total_photons: u64, alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha >= 0.5) || !(beta >= 0.5) {
            return Err(Error::Domain(
                "ansatz exponents must satisfy alpha, beta >= 1/2".into(),
            ));
        }
        let nf = total_photons as f64;
        LatticeState::from_fn(phases, total_photons, |m| {
            let sum: u32 = m.iter().sum();
            let mut v = (1.0 - sum as f64 / nf).powf(beta);
            for &mi in m {
                v *= (mi as f64 / nf).powf(alpha);
            }
            Complex64::new(v, 0.0)
        })
    }

    pub fn phases(&self) -> u32 {
        self.phases
    }

    pub fn total_photons(&self) -> u64 {
        self.total_photons
    }

    /// The nonzero amplitudes with their multi-indices.
    pub fn amplitudes(&self) -> &[(Vec<u32>, Complex64)] {
        &self.amplitudes
    }

    pub fn norm_sq(&self) -> f64 {
        self.amplitudes.iter().map(|(_, a)| a.norm_sqr()).sum()
    }
}

fn enumerate_lattice(
    budget: u32,
    dim: usize,
    index: &mut Vec<u32>,
    visit: &mut impl FnMut(&[u32]),
) {
    if dim == index.len() {
        visit(index);
        return;
    }
    let used: u32 = index[..dim].iter().sum();
    for m in 0..=(budget - used) {
        index[dim] = m;
        enumerate_lattice(budget, dim + 1, index, visit);
    }
    index[dim] = 0;
}
