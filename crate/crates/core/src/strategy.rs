//! Estimation-cost strategies behind a common trait, registered by name.
//!
//! Every cell of the paradigm table, plus the computable refinements the
//! other modules provide, is an interchangeable model mapping a
//! [`ScenarioParams`] to a total variance. The CLI selects them by name at
//! runtime; [`CostModelRegistry::builtin`] wires up the full set.

use crate::continuous::{self, AnsatzState, ScenarioParams};
use crate::discrete;
use crate::qfi;
use crate::{Error, Result};
use std::collections::BTreeMap;

const PI: f64 = std::f64::consts::PI;

/// A named estimation-cost model over the common scenario parameters.
pub trait CostModel: Send + Sync {
    /// Registry key, e.g. `hl-joint-bound`.
    fn name(&self) -> &'static str;
    /// One-line description for listings.
    fn description(&self) -> &'static str;
    /// Total variance for the scenario, or a domain error when the model's
    /// resource-divisibility requirements fail.
    fn cost(&self, scenario: &ScenarioParams) -> Result<f64>;
}

macro_rules! cost_model {
    ($ty:ident, $name:literal, $desc:literal, |$s:ident| $body:expr) => {
        pub struct $ty;

        impl CostModel for $ty {
            fn name(&self) -> &'static str {
                $name
            }
            fn description(&self) -> &'static str {
                $desc
            }
            fn cost(&self, $s: &ScenarioParams) -> Result<f64> {
                $body
            }
        }
    };
}

fn require_separate_photons(s: &ScenarioParams) -> Result<()> {
    if !s.total_photons.is_multiple_of(s.phases as u64) {
        return Err(Error::Domain(format!(
            "separate strategy needs p | N, got p = {}, N = {}",
            s.phases, s.total_photons
        )));
    }
    Ok(())
}

cost_model!(SqlSingle, "sql-single", "single phase, independent probes: 1/N", |s| {
    Ok(1.0 / s.total_photons as f64)
});

cost_model!(HlSingle, "hl-single", "single phase, total budget: pi^2/N^2", |s| {
    let n = s.total_photons as f64;
    Ok(PI * PI / (n * n))
});

cost_model!(HsSingle, "hs-single", "single phase, repeated shots: 1/(k n^2)", |s| {
    let n = s.shot_photons as f64;
    Ok(1.0 / (s.repetitions as f64 * n * n))
});

cost_model!(SqlJoint, "sql-joint", "joint phases, independent probes: p^2/(4N)", |s| {
    let p = s.phases as f64;
    Ok(p * p / (4.0 * s.total_photons as f64))
});

cost_model!(
    HlJointBound,
    "hl-joint-bound",
    "joint phases, total budget, fundamental bound: c p^3/N^2",
    |s| Ok(continuous::fundamental_bound(s.phases, s.total_photons))
);

cost_model!(
    HlJointAnsatz,
    "hl-joint-ansatz",
    "joint phases, total budget, continuum ansatz cost at (3/2, sqrt p)",
    |s| continuous::ansatz_cost(&AnsatzState::reference(s.phases)?, s.total_photons)
);

cost_model!(
    HlJointAnsatzDiscrete,
    "hl-joint-ansatz-discrete",
    "joint phases, total budget, exact lattice ansatz cost at (3/2, sqrt p)",
    |s| discrete::joint_ansatz_cost_discrete(
        s.phases,
        s.total_photons,
        1.5,
        (s.phases as f64).sqrt()
    )
);

cost_model!(
    HsJoint,
    "hs-joint",
    "joint phases, repeated shots: (1+sqrt p)^2 p/(4 k n^2)",
    |s| Ok(qfi::cr_joint_cost(s.phases, s.shot_photons, s.repetitions))
);

cost_model!(SqlSeparate, "sql-separate", "separate phases, independent probes: p^2/N", |s| {
    let p = s.phases as f64;
    Ok(p * p / s.total_photons as f64)
});

cost_model!(
    HlSeparate,
    "hl-separate",
    "separate phases, total budget, asymptote: pi^2 p^3/N^2",
    |s| {
        require_separate_photons(s)?;
        let p = s.phases as f64;
        let n = s.total_photons as f64;
        Ok(PI * PI * p.powi(3) / (n * n))
    }
);

cost_model!(
    HlSeparateDiscrete,
    "hl-separate-discrete",
    "separate phases, total budget, exact lattice optimum: p lambda_min(K_{N/p})",
    |s| discrete::separate_optimal_cost(s.phases, s.total_photons)
);

cost_model!(
    HsSeparate,
    "hs-separate",
    "separate phases, repeated shots: p^2/(k n^2)",
    |s| qfi::cr_separate_cost(s.phases, s.shot_photons, s.repetitions)
);

/// Name-keyed collection of cost models.
#[derive(Default)]
pub struct CostModelRegistry {
    models: BTreeMap<&'static str, Box<dyn CostModel>>,
}

impl CostModelRegistry {
    pub fn new() -> Self {
        CostModelRegistry {
            models: BTreeMap::new(),
        }
    }

    /// All built-in paradigm models.
    pub fn builtin() -> Self {
        let mut reg = CostModelRegistry::new();
        reg.register(Box::new(SqlSingle));
        reg.register(Box::new(HlSingle));
        reg.register(Box::new(HsSingle));
        reg.register(Box::new(SqlJoint));
        reg.register(Box::new(HlJointBound));
        reg.register(Box::new(HlJointAnsatz));
        reg.register(Box::new(HlJointAnsatzDiscrete));
        reg.register(Box::new(HsJoint));
        reg.register(Box::new(SqlSeparate));
        reg.register(Box::new(HlSeparate));
        reg.register(Box::new(HlSeparateDiscrete));
        reg.register(Box::new(HsSeparate));
        reg
    }

    pub fn register(&mut self, model: Box<dyn CostModel>) {
        self.models.insert(model.name(), model);
    }

    pub fn get(&self, name: &str) -> Option<&dyn CostModel> {
        self.models.get(name).map(|m| m.as_ref())
    }

    /// Registered names, sorted.
    pub fn names(&self) -> Vec<&'static str> {
        self.models.keys().copied().collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &dyn CostModel> {
        self.models.values().map(|m| m.as_ref())
    }

    pub fn len(&self) -> usize {
        self.models.len()
    }

    pub fn is_empty(&self) -> bool {
        self.models.is_empty()
    }
}
