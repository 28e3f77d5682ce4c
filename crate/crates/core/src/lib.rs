//! Numerical toolkit for multiple-phase interferometric estimation costs.
//!
//! The crate computes, bounds and cross-validates the total phase-estimation
//! variance in the four standard resource paradigms (all phases jointly vs.
//! each separately, total photon budget vs. repeated shots):
//!
//! * [`specfun`]: self-contained special functions (Airy Ai/Ai′, its first
//!   negative zero, log-Gamma, the covariant cost-kernel entries),
//! * [`continuous`]: continuum simplex model (two-parameter ansatz costs
//!   in closed Gamma form, the Airy single-mode profile and the fundamental
//!   `c·p³/N²` bound, photon-number statistics),
//! * [`discrete`]: finite-photon lattice model (covariant cost kernels,
//!   optimal single-phase states, joint ansatz costs via convolution dynamic
//!   programming, joint-vs-separate advantage ratios),
//! * [`simplex_well`]: finite-difference Dirichlet ground-state energies on
//!   the unit simplex with Richardson extrapolation,
//! * [`qfi`]: quantum Fisher information matrices, Cramér–Rao costs and the
//!   full paradigm cost table,
//! * [`risk_bounds`]: Kaiser-window priors, coarse-stage tail risks and the
//!   finite-region lower bound with its positivity margin,
//! * [`monte_carlo`]: seeded stochastic oracles (simplex integration,
//!   photon-number sampling, covariant outcome sampling),
//! * [`strategy`]: every paradigm cost behind a common [`strategy::CostModel`]
//!   trait, registered by name and selectable at runtime.

// `!(x >= c)` comparisons are deliberate: they reject NaN inputs, which
// `x < c` would silently accept.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod continuous;
pub mod discrete;
pub mod monte_carlo;
pub mod qfi;
pub mod quadrature;
pub mod risk_bounds;
pub mod simplex_well;
pub mod specfun;
pub mod strategy;

use std::fmt;

/// Error type shared by all modules.
///
/// The three variants map onto distinct process exit codes in the CLI
/// (bad arguments are caught by the argument parser before any computation).
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A precondition on the inputs is violated (wrong domain, divisibility,
    /// dimension mismatch).
    Domain(String),
    /// An iterative method failed to reach its stated tolerance.
    NonConvergence(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::NonConvergence(msg) => write!(f, "did not converge: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;

pub use continuous::{AiryMode, AnsatzState, ScenarioParams};
pub use discrete::{CovariantKernel, LatticeState, SinglePhaseState};
pub use monte_carlo::SeededSampler;
pub use qfi::{PhotonDistribution, QfiMatrix};
pub use risk_bounds::RiskParams;
pub use specfun::AiryZero;
