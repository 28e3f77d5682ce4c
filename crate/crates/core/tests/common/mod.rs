//! Independent oracles shared by the integration suites. These deliberately
//! avoid the library's computation paths: the lattice cost is a direct
//! pair sum over the enumerated lattice, and the Airy oracle integrates the
//! modified-Bessel representation.
#![allow(dead_code)]

use phaselimit::specfun::kernel_entry;

const PI: f64 = std::f64::consts::PI;

/// All lattice points {m : Σ mᵢ ≤ n} with the discretized ansatz amplitude
/// (unnormalized).
pub fn ansatz_lattice(p: u32, n: u64, alpha: f64, beta: f64) -> Vec<(Vec<u32>, f64)> {
    let mut points = Vec::new();
    let mut m = vec![0u32; p as usize];
    fn recurse(
        budget: u32,
        dim: usize,
        m: &mut Vec<u32>,
        out: &mut Vec<(Vec<u32>, f64)>,
        nf: f64,
        alpha: f64,
        beta: f64,
    ) {
        if dim == m.len() {
            let mut amp = (1.0 - m.iter().sum::<u32>() as f64 / nf).powf(beta);
            for &mi in m.iter() {
                amp *= (mi as f64 / nf).powf(alpha);
            }
            out.push((m.clone(), amp));
            return;
        }
        let used: u32 = m[..dim].iter().sum();
        for v in 0..=(budget - used) {
            m[dim] = v;
            recurse(budget, dim + 1, m, out, nf, alpha, beta);
        }
        m[dim] = 0;
    }
    recurse(n as u32, 0, &mut m, &mut points, n as f64, alpha, beta);
    points
}

/// Per-arm covariant cost contributions of the discretized ansatz by direct
/// summation over all amplitude pairs differing in a single arm. Returns one
/// (unnormalized) quadratic form per arm plus the squared norm.
pub fn brute_force_arm_costs(p: u32, n: u64, alpha: f64, beta: f64) -> (Vec<f64>, f64) {
    let lattice = ansatz_lattice(p, n, alpha, beta);
    let norm: f64 = lattice.iter().map(|(_, a)| a * a).sum();
    use std::collections::HashMap;
    let index: HashMap<&[u32], f64> = lattice
        .iter()
        .map(|(m, a)| (m.as_slice(), *a))
        .collect();
    let mut arms = vec![0.0; p as usize];
    for (m, amp) in &lattice {
        if *amp == 0.0 {
            continue;
        }
        for arm in 0..p as usize {
            let others: u32 = m
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != arm)
                .map(|(_, &v)| v)
                .sum();
            let mut partner = m.clone();
            for v in 0..=(n as u32 - others) {
                partner[arm] = v;
                if let Some(&amp2) = index.get(partner.as_slice()) {
                    arms[arm] +=
                        amp * amp2 * kernel_entry(m[arm] as i64 - v as i64);
                }
            }
        }
    }
    (arms, norm)
}

/// Total brute-force lattice cost (sum of arms over the norm).
pub fn brute_force_joint_cost(p: u32, n: u64, alpha: f64, beta: f64) -> Option<f64> {
    let (arms, norm) = brute_force_arm_costs(p, n, alpha, beta);
    if norm <= 0.0 {
        return None;
    }
    Some(arms.iter().sum::<f64>() / norm)
}

/// Minimum of the Cramér–Rao trace-of-inverse over the one-parameter
/// optimal-state family (weight β² on the reference index, α² on each
/// single-arm index), by golden-section search.
pub fn qfi_family_minimum(p: u32, n: u64) -> f64 {
    use phaselimit::qfi::{qfi_matrix, PhotonDistribution};
    let pf = p as f64;
    let family = |alpha: f64| -> f64 {
        let beta_sq = 1.0 - pf * alpha * alpha;
        if beta_sq < 0.0 {
            return f64::INFINITY;
        }
        let mut weights = vec![(vec![0u32; p as usize], beta_sq)];
        for i in 0..p as usize {
            let mut m = vec![0u32; p as usize];
            m[i] = n as u32;
            weights.push((m, alpha * alpha));
        }
        qfi_matrix(&PhotonDistribution::new(n, p, weights).unwrap()).trace_inverse()
    };
    let (mut a, mut b) = (1e-6, (1.0 / pf).sqrt() - 1e-9);
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut x1, mut x2) = (b - phi * (b - a), a + phi * (b - a));
    let (mut f1, mut f2) = (family(x1), family(x2));
    for _ in 0..200 {
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = family(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = family(x2);
        }
    }
    f1.min(f2)
}

/// Airy function for x ≥ 1 through the modified-Bessel integral
/// Ai(x) = (1/π)·√(x/3)·K_{1/3}(ζ), K_{1/3}(ζ) = ∫₀^∞ e^{−ζ cosh t} cosh(t/3) dt,
/// by composite Simpson: an evaluation route disjoint from the library's
/// series/asymptotics.
pub fn airy_bessel_oracle(x: f64) -> f64 {
    assert!(x >= 1.0);
    let zeta = 2.0 / 3.0 * x.powf(1.5);
    let f = |t: f64| (-zeta * t.cosh()).exp() * (t / 3.0).cosh();
    let (a, b, n) = (0.0, 9.0, 40_000);
    let h: f64 = (b - a) / n as f64;
    let mut sum = f(a) + f(b);
    for i in 1..n {
        sum += if i % 2 == 1 { 4.0 } else { 2.0 } * f(a + i as f64 * h);
    }
    let k13 = sum * h / 3.0;
    (x / 3.0).sqrt() / PI * k13
}
