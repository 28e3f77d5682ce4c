//! Quantum Fisher information for the repeated-shot paradigms and the full
//! paradigm cost table.
//!
//! For pure states with commuting phase generators the QFI matrix is four
//! times the covariance of the photon-number multi-index, so everything here
//! reduces to moments of a [`PhotonDistribution`].

use crate::continuous;
use crate::{Error, Result};
use nalgebra::DMatrix;

const PI: f64 = std::f64::consts::PI;

/// Probability weights |c_m|² of an n-photon, p-arm probe state.
#[derive(Clone, Debug)]
pub struct PhotonDistribution {
    shot_photons: u64,
    phases: u32,
    weights: Vec<(Vec<u32>, f64)>,
}

impl PhotonDistribution {
    /// Requires non-negative weights summing to 1 (within 1e-12) on
    /// multi-indices with Σ mᵢ ≤ n.
    pub fn new(shot_photons: u64, phases: u32, weights: Vec<(Vec<u32>, f64)>) -> Result<Self> {
        if phases == 0 {
            return Err(Error::Domain("phases must be positive".into()));
        }
        let mut total = 0.0;
        for (m, w) in &weights {
            if m.len() != phases as usize {
                return Err(Error::Domain(format!(
                    "multi-index length {} does not match p = {phases}",
                    m.len()
                )));
            }
            if m.iter().map(|&x| x as u64).sum::<u64>() > shot_photons {
                return Err(Error::Domain(
                    "multi-index exceeds the photon budget".into(),
                ));
            }
            if *w < 0.0 {
                return Err(Error::Domain("weights must be non-negative".into()));
            }
            total += w;
        }
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::Domain(format!(
                "weights must sum to 1, got {total}"
            )));
        }
        Ok(PhotonDistribution {
            shot_photons,
            phases,
            weights,
        })
    }

    pub fn phases(&self) -> u32 {
        self.phases
    }

    pub fn shot_photons(&self) -> u64 {
        self.shot_photons
    }

    pub fn weights(&self) -> &[(Vec<u32>, f64)] {
        &self.weights
    }
}

/// Symmetric positive semi-definite QFI matrix.
#[derive(Clone, Debug)]
pub struct QfiMatrix {
    matrix: DMatrix<f64>,
}

impl QfiMatrix {
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Trace of the inverse; +∞ when the matrix is singular (a parameter
    /// with no information has unbounded Cramér–Rao cost).
    pub fn trace_inverse(&self) -> f64 {
        let eig = self.matrix.clone().symmetric_eigen();
        let max = eig
            .eigenvalues
            .iter()
            .fold(0.0f64, |acc, &l| acc.max(l.abs()));
        let floor = 1e-12 * max.max(1e-300);
        let mut trace = 0.0;
        for &l in eig.eigenvalues.iter() {
            if l <= floor {
                return f64::INFINITY;
            }
            trace += 1.0 / l;
        }
        trace
    }
}

/// QFI of a phase-encoded pure state: F = 4·Cov(m).
pub fn qfi_matrix(dist: &PhotonDistribution) -> QfiMatrix {
    let p = dist.phases as usize;
    let mut mean = vec![0.0; p];
    for (m, w) in &dist.weights {
        for (i, &mi) in m.iter().enumerate() {
            mean[i] += w * mi as f64;
        }
    }
    let mut cov = DMatrix::zeros(p, p);
    for (m, w) in &dist.weights {
        for i in 0..p {
            let di = m[i] as f64 - mean[i];
            for j in 0..p {
                let dj = m[j] as f64 - mean[j];
                cov[(i, j)] += w * di * dj;
            }
        }
    }
    QfiMatrix { matrix: 4.0 * cov }
}

/// Cramér–Rao cost of the optimal joint strategy: (1+√p)²·p/(4kn²).
pub fn cr_joint_cost(phases: u32, shot_photons: u64, repetitions: u64) -> f64 {
    let p = phases as f64;
    let n = shot_photons as f64;
    let k = repetitions as f64;
    (1.0 + p.sqrt()).powi(2) * p / (4.0 * k * n * n)
}

/// QFI-optimal joint input state: weight β² on the all-reference index and
/// α² on each single-arm index n·eᵢ, α = 1/√(p+√p), β = 1/√(1+√p).
pub fn optimal_qfi_state(phases: u32, shot_photons: u64) -> Result<PhotonDistribution> {
    if phases == 0 || shot_photons == 0 {
        return Err(Error::Domain("parameters must be positive".into()));
    }
    let p = phases as f64;
    let alpha_sq = 1.0 / (p + p.sqrt());
    let beta_sq = 1.0 / (1.0 + p.sqrt());
    let dim = phases as usize;
    let mut weights = vec![(vec![0u32; dim], beta_sq)];
    for i in 0..dim {
        let mut m = vec![0u32; dim];
        m[i] = shot_photons as u32;
        weights.push((m, alpha_sq));
    }
    // β² + p·α² = 1 algebraically; renormalize away the last few ulps
    let total: f64 = weights.iter().map(|(_, w)| w).sum();
    for (_, w) in &mut weights {
        *w /= total;
    }
    PhotonDistribution::new(shot_photons, phases, weights)
}

/// Cramér–Rao cost of p successive n00n-state protocols, k/p shots each:
/// p²/(kn²).
pub fn cr_separate_cost(phases: u32, shot_photons: u64, repetitions: u64) -> Result<f64> {
    if !repetitions.is_multiple_of(phases as u64) {
        return Err(Error::Domain(format!(
            "separate repetitions need p | k, got p = {phases}, k = {repetitions}"
        )));
    }
    let p = phases as f64;
    let n = shot_photons as f64;
    Ok(p * p / (repetitions as f64 * n * n))
}

/// Row of the paradigm table.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum TableRow {
    SinglePhase,
    JointPhases,
    SeparatePhases,
}

/// Column of the paradigm table.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum TableColumn {
    /// Independent probes, 1/N scaling.
    Sql,
    /// Total budget N used at once, 1/N² scaling.
    Hl,
    /// n photons per shot, k repetitions.
    Hs,
}

/// One cell of the paradigm cost table.
#[derive(Clone, Debug)]
pub struct TableCell {
    pub row: TableRow,
    pub column: TableColumn,
    /// Human-readable formula for the cell.
    pub formula: &'static str,
    /// None when a divisibility requirement fails for these parameters.
    pub value: Option<f64>,
    /// The joint-HL cell carries both the universally valid coefficient
    /// (≈1.89) in `value` and the asymptotically achievable one (2) here.
    pub achievable: Option<f64>,
    /// Set when the cell is unavailable, explaining why.
    pub note: Option<String>,
}

/// All cells of the paradigm cost table at the given resources.
pub fn table1(
    phases: u32,
    total_photons: u64,
    shot_photons: u64,
    repetitions: u64,
) -> Result<Vec<TableCell>> {
    if phases == 0 || total_photons == 0 || shot_photons == 0 || repetitions == 0 {
        return Err(Error::Domain("all table parameters must be positive".into()));
    }
    let p = phases as f64;
    let nt = total_photons as f64;
    let n = shot_photons as f64;
    let k = repetitions as f64;
    let c = continuous::fundamental_bound(1, 1); // 4|A0|^3/27

    let divisible_n = total_photons.is_multiple_of(phases as u64);
    let divisible_k = repetitions.is_multiple_of(phases as u64);
    let note_n = || Some(format!("requires p | N (p = {phases}, N = {total_photons})"));
    let note_k = || Some(format!("requires p | k (p = {phases}, k = {repetitions})"));

    let cell = |row, column, formula, value: Option<f64>, achievable, note| TableCell {
        row,
        column,
        formula,
        value,
        achievable,
        note,
    };

    Ok(vec![
        cell(TableRow::SinglePhase, TableColumn::Sql, "1/N", Some(1.0 / nt), None, None),
        cell(
            TableRow::SinglePhase,
            TableColumn::Hl,
            "pi^2/N^2",
            Some(PI * PI / (nt * nt)),
            None,
            None,
        ),
        cell(
            TableRow::SinglePhase,
            TableColumn::Hs,
            "1/(k n^2)",
            Some(1.0 / (k * n * n)),
            None,
            None,
        ),
        cell(
            TableRow::JointPhases,
            TableColumn::Sql,
            "p^2/(4N)",
            Some(p * p / (4.0 * nt)),
            None,
            None,
        ),
        cell(
            TableRow::JointPhases,
            TableColumn::Hl,
            "c p^3/N^2",
            Some(c * p.powi(3) / (nt * nt)),
            Some(2.0 * p.powi(3) / (nt * nt)),
            None,
        ),
        cell(
            TableRow::JointPhases,
            TableColumn::Hs,
            "p^2/(4 k n^2)",
            Some(p * p / (4.0 * k * n * n)),
            None,
            None,
        ),
        cell(
            TableRow::SeparatePhases,
            TableColumn::Sql,
            "p^2/N",
            Some(p * p / nt),
            None,
            None,
        ),
        cell(
            TableRow::SeparatePhases,
            TableColumn::Hl,
            "pi^2 p^3/N^2",
            divisible_n.then_some(PI * PI * p.powi(3) / (nt * nt)),
            None,
            if divisible_n { None } else { note_n() },
        ),
        cell(
            TableRow::SeparatePhases,
            TableColumn::Hs,
            "p^2/(k n^2)",
            divisible_k.then_some(p * p / (k * n * n)),
            None,
            if divisible_k { None } else { note_k() },
        ),
    ])
}
