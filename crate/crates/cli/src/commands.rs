//! Dataset builders for every subcommand.

use crate::output::{Dataset, Value};
use phaselimit::continuous::{
    ansatz_cost_scaled, ansatz_energy, ansatz_norm, ansatz_optimal_params, fundamental_bound,
    photon_marginal_density, photon_statistics, AiryMode, AnsatzState, ScenarioParams,
};
use phaselimit::discrete::{
    advantage_ratio, clamped_estimator_cost, joint_ansatz_cost_discrete, separate_optimal_cost,
    sine_state, single_phase_cost,
};
use phaselimit::monte_carlo::{sample_covariant_outcome, sample_photon_numbers, SeededSampler};
use phaselimit::qfi::{table1, TableColumn, TableRow};
use phaselimit::risk_bounds::{
    finite_region_bound, positivity_margin, prior_normalization, tail_risks, total_risk_bound,
    RiskParams,
};
use phaselimit::simplex_well::{extrapolated_energy, ground_energy};
use phaselimit::strategy::CostModelRegistry;
use phaselimit::Result;

const PI: f64 = std::f64::consts::PI;

fn stamp(data: &mut Dataset, cmd: &str, seed: Option<u64>) {
    data.param("cmd", cmd);
    data.param("version", env!("CARGO_PKG_VERSION"));
    if let Some(s) = seed {
        data.param("seed", s);
    }
}

pub fn bounds(
    p: u32,
    n_total: u64,
    n_shot: u64,
    reps: u64,
    strategy: Option<&str>,
) -> Result<Dataset> {
    let scenario = ScenarioParams::new(p, n_total, n_shot, reps)?;
    let registry = CostModelRegistry::builtin();
    let mut data = Dataset::new(&["strategy", "value", "description", "note"]);
    stamp(&mut data, "bounds", None);
    data.param("p", p)
        .param("N", n_total)
        .param("n", n_shot)
        .param("k", reps);
    if let Some(name) = strategy {
        data.param("strategy", name);
    }
    let selected: Vec<&dyn phaselimit::strategy::CostModel> = match strategy {
        Some(name) => {
            let model = registry.get(name).ok_or_else(|| {
                phaselimit::Error::Domain(format!(
                    "unknown strategy '{name}'; available: {}",
                    registry.names().join(", ")
                ))
            })?;
            vec![model]
        }
        None => registry.iter().collect(),
    };
    for model in selected {
        match model.cost(&scenario) {
            Ok(v) => data.push_row(vec![
                Value::Str(model.name().into()),
                Value::Float(v),
                Value::Str(model.description().into()),
                Value::Empty,
            ]),
            Err(e) => data.push_row(vec![
                Value::Str(model.name().into()),
                Value::Empty,
                Value::Str(model.description().into()),
                Value::Str(e.to_string()),
            ]),
        }
    }
    Ok(data)
}

pub fn ansatz(p: u32, n_total: u64, alpha: Option<f64>, beta: Option<f64>) -> Result<Dataset> {
    let mut data = Dataset::new(&[
        "variant", "alpha", "beta", "norm", "energy", "cost_scaled", "cost",
    ]);
    stamp(&mut data, "ansatz", None);
    data.param("p", p).param("N", n_total);
    let mut push = |variant: &str, a: f64, b: f64| -> Result<()> {
        let state = AnsatzState::new(p, a, b)?;
        let scaled = ansatz_cost_scaled(&state)?;
        data.push_row(vec![
            Value::Str(variant.into()),
            Value::Float(a),
            Value::Float(b),
            Value::Float(ansatz_norm(&state)),
            Value::Float(ansatz_energy(&state)?),
            Value::Float(scaled),
            Value::Float(scaled / (n_total as f64).powi(2)),
        ]);
        Ok(())
    };
    if let (Some(a), Some(b)) = (alpha, beta) {
        push("custom", a, b)?;
    }
    push("reference", 1.5, (p as f64).sqrt())?;
    let (a_opt, b_opt) = ansatz_optimal_params(p)?;
    push("optimal", a_opt, b_opt)?;
    Ok(data)
}

pub fn discrete(p: u32, n_total: u64, alpha: Option<f64>, beta: Option<f64>) -> Result<Dataset> {
    let a = alpha.unwrap_or(1.5);
    let b = beta.unwrap_or((p as f64).sqrt());
    let cost = joint_ansatz_cost_discrete(p, n_total, a, b)?;
    let scaled = cost * (n_total as f64).powi(2);
    let continuum = ansatz_cost_scaled(&AnsatzState::new(p, a, b)?)?;
    let mut data = Dataset::new(&[
        "p",
        "N",
        "alpha",
        "beta",
        "cost",
        "cost_scaled",
        "continuum_scaled",
        "rel_deviation",
    ]);
    stamp(&mut data, "discrete", None);
    data.param("p", p).param("N", n_total);
    data.push_row(vec![
        Value::Int(p as i64),
        Value::Int(n_total as i64),
        Value::Float(a),
        Value::Float(b),
        Value::Float(cost),
        Value::Float(scaled),
        Value::Float(continuum),
        Value::Float((scaled - continuum) / continuum),
    ]);
    Ok(data)
}

pub fn separate(p: u32, n_total: u64) -> Result<Dataset> {
    let cost = separate_optimal_cost(p, n_total)?;
    let scaled = cost * (n_total as f64).powi(2);
    let asymptote = PI * PI * (p as f64).powi(3);
    let mut data = Dataset::new(&["p", "N", "cost", "cost_scaled", "asymptote", "ratio"]);
    stamp(&mut data, "separate", None);
    data.param("p", p).param("N", n_total);
    data.push_row(vec![
        Value::Int(p as i64),
        Value::Int(n_total as i64),
        Value::Float(cost),
        Value::Float(scaled),
        Value::Float(asymptote),
        Value::Float(scaled / asymptote),
    ]);
    Ok(data)
}

pub fn advantage(p: u32, n_total: u64) -> Result<Dataset> {
    let joint = joint_ansatz_cost_discrete(p, n_total, 1.5, (p as f64).sqrt())?;
    let sep = separate_optimal_cost(p, n_total)?;
    let mut data = Dataset::new(&["p", "N", "joint_cost", "separate_cost", "ratio"]);
    stamp(&mut data, "advantage", None);
    data.param("p", p).param("N", n_total);
    data.push_row(vec![
        Value::Int(p as i64),
        Value::Int(n_total as i64),
        Value::Float(joint),
        Value::Float(sep),
        Value::Float(joint / sep),
    ]);
    Ok(data)
}

pub fn simplex(p: u32, resolutions: &[u32]) -> Result<Dataset> {
    let mut data = Dataset::new(&["p", "resolution", "energy"]);
    stamp(&mut data, "simplex", None);
    data.param("p", p).param(
        "resolutions",
        resolutions
            .iter()
            .map(|r| r.to_string())
            .collect::<Vec<_>>()
            .join("+"),
    );
    let mut energies = Vec::new();
    for &r in resolutions {
        let e = ground_energy(p, r)?;
        energies.push(e);
        data.push_row(vec![
            Value::Int(p as i64),
            Value::Int(r as i64),
            Value::Float(e),
        ]);
    }
    if resolutions.len() >= 3 {
        let fit = extrapolated_energy(p, resolutions)?;
        data.param_float("extrapolated", fit.value);
        data.param_float("fit_residual", fit.fit_residual);
    }
    if p == 1 {
        data.param_float("reference", PI * PI);
    } else if p == 2 {
        data.param_float("reference", 5.0 * PI * PI);
    }
    Ok(data)
}

fn table_dataset(cmd: &str, p: u32, n_total: u64, n_shot: u64, reps: u64) -> Result<Dataset> {
    let cells = table1(p, n_total, n_shot, reps)?;
    let mut data = Dataset::new(&["row", "column", "formula", "value", "achievable", "note"]);
    stamp(&mut data, cmd, None);
    data.param("p", p)
        .param("N", n_total)
        .param("n", n_shot)
        .param("k", reps);
    for cell in cells {
        let row = match cell.row {
            TableRow::SinglePhase => "single-phase",
            TableRow::JointPhases => "p-phases-jointly",
            TableRow::SeparatePhases => "p-phases-separately",
        };
        let column = match cell.column {
            TableColumn::Sql => "sql",
            TableColumn::Hl => "hl",
            TableColumn::Hs => "hs",
        };
        data.push_row(vec![
            Value::Str(row.into()),
            Value::Str(column.into()),
            Value::Str(cell.formula.into()),
            cell.value.map_or(Value::Empty, Value::Float),
            cell.achievable.map_or(Value::Empty, Value::Float),
            cell.note.map_or(Value::Empty, Value::Str),
        ]);
    }
    Ok(data)
}

pub fn qfi_table(p: u32, n_total: u64, n_shot: u64, reps: u64) -> Result<Dataset> {
    table_dataset("qfi-table", p, n_total, n_shot, reps)
}

#[allow(clippy::too_many_arguments)]
pub fn risk(p: u32, delta: f64, n0: u64, n_total: Option<u64>) -> Result<Dataset> {
    let rp = RiskParams::new(p, delta, n0)?;
    let norm = prior_normalization(rp.shape, rp.bandwidth)?;
    let t = tail_risks(&rp)?;
    let r1_bound = 16.0 * norm.numeric * rp.shape;
    let r2_bound = 14.0 * norm.numeric * rp.bandwidth * (4.0 * rp.shape / rp.bandwidth).powi(3);
    let total = total_risk_bound(&rp)?;
    let mut data = Dataset::new(&[
        "shape",
        "bandwidth",
        "norm_numeric",
        "norm_bound",
        "r1",
        "r1_bound",
        "r2",
        "r2_bound",
        "total_risk_bound",
        "finite_region_bound",
        "vacuous",
    ]);
    stamp(&mut data, "risk", None);
    data.param("p", p).param("delta", delta).param("N0", n0);
    let (region, vacuous) = match n_total {
        Some(n) => {
            data.param("N", n);
            let c = fundamental_bound(1, 1);
            let b = finite_region_bound(p, n, delta, c)?;
            (
                Value::Float(b.value),
                Value::Str(b.vacuous.to_string()),
            )
        }
        None => (Value::Empty, Value::Empty),
    };
    data.push_row(vec![
        Value::Float(rp.shape),
        Value::Float(rp.bandwidth),
        Value::Float(norm.numeric),
        Value::Float(norm.analytic_bound),
        Value::Float(t.r1),
        Value::Float(r1_bound),
        Value::Float(t.r2),
        Value::Float(r2_bound),
        Value::Float(total),
        region,
        vacuous,
    ]);
    Ok(data)
}

pub fn scan_margin(ymin: f64, ymax: f64, points: usize, c: f64) -> Result<Dataset> {
    if !(ymin >= 2.0) || ymax <= ymin || points < 2 {
        return Err(phaselimit::Error::Domain(
            "scan needs 2 <= ymin < ymax and at least 2 points".into(),
        ));
    }
    let mut data = Dataset::new(&["y", "margin"]);
    stamp(&mut data, "scan-margin", None);
    data.param("ymin", ymin)
        .param("ymax", ymax)
        .param("points", points)
        .param("c", c);
    let (lo, hi) = (ymin.ln(), ymax.ln());
    let mut min_margin = f64::INFINITY;
    let mut argmin = ymin;
    for i in 0..points {
        let y = (lo + (hi - lo) * i as f64 / (points - 1) as f64).exp();
        let m = positivity_margin(y, c);
        if m < min_margin {
            min_margin = m;
            argmin = y;
        }
        data.push_row(vec![Value::Float(y), Value::Float(m)]);
    }
    data.param_float("min_margin", min_margin);
    data.param_float("argmin_y", argmin);
    Ok(data)
}

pub fn photon_stats(p: u32, n_total: u64, samples: u64, seed: u64) -> Result<Dataset> {
    let closed = photon_statistics(p, n_total)?;
    let state = AnsatzState::reference(p)?;
    let mut sampler = SeededSampler::new(seed);
    let stats = sample_photon_numbers(&state, samples, &mut sampler)?;
    let nf = n_total as f64;
    let mut data = Dataset::new(&["quantity", "closed_form", "empirical", "std_error", "z"]);
    stamp(&mut data, "photon-stats", Some(seed));
    data.param("p", p)
        .param("N", n_total)
        .param("samples", samples);
    data.param_float("acceptance", stats.acceptance);
    let mut push = |name: &str, exact: f64, emp: f64, se: f64| {
        data.push_row(vec![
            Value::Str(name.into()),
            Value::Float(exact),
            Value::Float(emp),
            Value::Float(se),
            Value::Float((emp - exact) / se),
        ]);
    };
    push(
        "mean_arm_photons",
        closed.mean_arm,
        stats.mean_arm * nf,
        stats.se_arm * nf,
    );
    push(
        "mean_reference_photons",
        closed.mean_reference,
        stats.mean_reference * nf,
        stats.se_reference * nf,
    );
    if let (Some(r), Some(se)) = (stats.correlation, stats.se_correlation) {
        push("inter_arm_correlation", closed.correlation, r, se);
    }
    Ok(data)
}

#[allow(clippy::too_many_arguments)]
pub fn simulate(
    photons: usize,
    theta: f64,
    samples: u64,
    seed: u64,
    clamp: Option<f64>,
    grid: usize,
) -> Result<Dataset> {
    let state = sine_state(photons);
    let exact = single_phase_cost(&state);
    let mut sampler = SeededSampler::new(seed);
    let est = sample_covariant_outcome(&state, theta, samples, &mut sampler)?;
    let clamped = match clamp {
        Some(d) => Value::Float(clamped_estimator_cost(&state, d, theta, grid)?),
        None => Value::Empty,
    };
    let mut data = Dataset::new(&[
        "photons",
        "theta",
        "exact_cost",
        "sampled_cost",
        "std_error",
        "z",
        "grid",
        "clamped_cost",
    ]);
    stamp(&mut data, "simulate", Some(seed));
    data.param("photons", photons)
        .param("theta", theta)
        .param("samples", samples);
    if let Some(d) = clamp {
        data.param("clamp", d).param("quad_grid", grid);
    }
    data.push_row(vec![
        Value::Int(photons as i64),
        Value::Float(theta),
        Value::Float(exact),
        Value::Float(est.cost),
        Value::Float(est.std_error),
        Value::Float((est.cost - exact) / est.std_error),
        Value::Int(est.grid as i64),
        clamped,
    ]);
    Ok(data)
}

pub fn reproduce_table1(p: u32, n_total: u64, n_shot: u64, reps: u64) -> Result<Dataset> {
    table_dataset("reproduce-table-1", p, n_total, n_shot, reps)
}

pub fn reproduce_fig_comp(pmax: u32) -> Result<Dataset> {
    let mut data = Dataset::new(&[
        "p",
        "fundamental_bound",
        "ansatz_reference",
        "ansatz_optimal",
        "separate_asymptote",
    ]);
    stamp(&mut data, "reproduce-fig-comp", None);
    data.param("pmax", pmax);
    for p in 1..=pmax {
        let bound = fundamental_bound(p, 1);
        let reference = ansatz_cost_scaled(&AnsatzState::reference(p)?)?;
        let (a, b) = ansatz_optimal_params(p)?;
        let optimal = ansatz_cost_scaled(&AnsatzState::new(p, a, b)?)?;
        data.push_row(vec![
            Value::Int(p as i64),
            Value::Float(bound),
            Value::Float(reference),
            Value::Float(optimal),
            Value::Float(PI * PI * (p as f64).powi(3)),
        ]);
    }
    Ok(data)
}

pub fn reproduce_fig_fun(grid: usize) -> Result<Dataset> {
    let ps = [10u32, 50, 250];
    let mut columns = vec!["mu".to_string()];
    for p in ps {
        columns.push(format!("airy_profile_sq_p{p}"));
        columns.push(format!("marginal_p{p}"));
    }
    let cols: Vec<&str> = columns.iter().map(|s| s.as_str()).collect();
    let mut data = Dataset::new(&cols);
    stamp(&mut data, "reproduce-fig-fun", None);
    data.param("grid", grid);
    let modes: Vec<AiryMode> = ps
        .iter()
        .map(|&p| AiryMode::new(p))
        .collect::<Result<_>>()?;
    for i in 0..=grid {
        let mu = i as f64 / grid as f64;
        let mut row = vec![Value::Float(mu)];
        for (mode, &p) in modes.iter().zip(&ps) {
            row.push(Value::Float(mode.profile(mu).powi(2)));
            row.push(Value::Float(photon_marginal_density(p, mu)?));
        }
        data.push_row(row);
    }
    Ok(data)
}

const ADVANTAGE_BUDGET_RATIOS: [u64; 3] = [4, 8, 16];

pub fn reproduce_fig_advantage_left(pmax: u32) -> Result<Dataset> {
    let mut data = Dataset::new(&["p", "scaled_4", "scaled_8", "scaled_16", "continuum"]);
    stamp(&mut data, "reproduce-fig-advantage-left", None);
    data.param("pmax", pmax).param("budget_ratios", "4+8+16");
    for p in 1..=pmax {
        let mut row = vec![Value::Int(p as i64)];
        for ratio in ADVANTAGE_BUDGET_RATIOS {
            let n = ratio * p as u64;
            let cost = joint_ansatz_cost_discrete(p, n, 1.5, (p as f64).sqrt())?;
            row.push(Value::Float(cost * (n * n) as f64 / (p as f64).powi(3)));
        }
        let continuum =
            ansatz_cost_scaled(&AnsatzState::reference(p)?)? / (p as f64).powi(3);
        row.push(Value::Float(continuum));
        data.push_row(row);
    }
    Ok(data)
}

pub fn reproduce_fig_advantage_right(pmax: u32) -> Result<Dataset> {
    let mut data = Dataset::new(&["p", "ratio_4", "ratio_8", "ratio_16", "asymptote"]);
    stamp(&mut data, "reproduce-fig-advantage-right", None);
    data.param("pmax", pmax).param("budget_ratios", "4+8+16");
    for p in 1..=pmax {
        let mut row = vec![Value::Int(p as i64)];
        for ratio in ADVANTAGE_BUDGET_RATIOS {
            row.push(Value::Float(advantage_ratio(p, ratio * p as u64)?));
        }
        let asymptote = ansatz_cost_scaled(&AnsatzState::reference(p)?)?
            / (PI * PI * (p as f64).powi(3));
        row.push(Value::Float(asymptote));
        data.push_row(row);
    }
    Ok(data)
}
