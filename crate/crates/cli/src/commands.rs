//! One function per subcommand, each producing a [`Report`].
//!
//! Sweeps run on the rayon pool; `collect` keeps input order, and box sums
//! are combined with the same pairwise reduction as the sequential code, so
//! output does not depend on the number of threads.

use bec_impurity::bogoliubov::{coupling_weight, dispersion, transform_coefficients};
use bec_impurity::kinematics::emission_window;
use bec_impurity::rates::{
    pairwise_sum, transition_rate, transition_rate_quadrature, BoxLattice, BoxOracleConfig, Method, RateResult,
};
use bec_impurity::selfenergy::{
    effective_mass_closed, effective_mass_finite_difference, effective_mass_heavy_limit, effective_mass_quadrature,
    energy_spectrum, i0, i1, MassResult,
};
use bec_impurity::{Error, SystemParams};
use rayon::prelude::*;

use crate::config::{GridConfig, RunConfig, Spacing};
use crate::table::{Cell, Report, Table};
use crate::Failure;

fn sweep<T, F>(points: &[f64], f: F) -> Result<Vec<T>, Error>
where
    T: Send,
    F: Fn(f64) -> Result<T, Error> + Sync,
{
    points.par_iter().map(|&x| f(x)).collect()
}

pub fn dispersion_table(config: &RunConfig) -> Result<Report, Failure> {
    let params = config.params.build()?;
    let grid = config.grid_or(GridConfig::linear(0.0, 5.0, 51));
    let rows = sweep(&grid, |p| {
        let eps = dispersion(p, &params)?;
        let (alpha, beta) = match transform_coefficients(p, &params) {
            Ok(c) => (Some(c.alpha), Some(c.beta)),
            Err(Error::SingularCoefficients) => (None, None),
            Err(e) => return Err(e),
        };
        Ok(vec![p.into(), eps.into(), alpha.into(), beta.into(), coupling_weight(p, &params)?.into()])
    })?;
    let mut table = Table::new(&["p", "epsilon", "alpha", "beta", "w"]);
    rows.into_iter().for_each(|r| table.push(r));
    Ok(table.into())
}

pub fn rates_table(config: &RunConfig) -> Result<Report, Failure> {
    let params = config.params.build()?;
    let q_c = params.critical_momentum();
    let grid = config.grid_or(GridConfig::linear(0.0, 4.0 * q_c, 41));
    let tol = config.tol;
    let rows = sweep(&grid, |q| {
        let window = emission_window(q, &params)?;
        let closed = transition_rate(q, &params)?;
        let quad = transition_rate_quadrature(q, &params, tol)?;
        let rel_diff = if closed.gamma_t > 0.0 { quad.gamma_t / closed.gamma_t - 1.0 } else { 0.0 };
        Ok(vec![
            q.into(),
            window.p_max.into(),
            if window.dissipative { window.theta_max_degrees().into() } else { Cell::Empty },
            window.dissipative.into(),
            closed.gamma_t.into(),
            quad.gamma_t.into(),
            closed.gamma_e.into(),
            quad.gamma_e.into(),
            rel_diff.into(),
            quad.est_error.into(),
            closed.smallness(&params).into(),
        ])
    })?;
    let mut table = Table::new(&[
        "q_i",
        "p_M",
        "theta_M_deg",
        "dissipative",
        "gamma_T_closed",
        "gamma_T_quad",
        "gamma_E",
        "gamma_E_quad",
        "quad_rel_diff",
        "quad_est_error",
        "smallness",
    ]);
    rows.into_iter().for_each(|r| table.push(r));
    Ok(table.into())
}

pub fn spectrum_table(config: &RunConfig) -> Result<Report, Failure> {
    let params = config.params.build()?;
    let q_c = params.critical_momentum();
    let grid = config.grid_or(GridConfig::linear(0.0, 0.9 * q_c, 10));
    let points = energy_spectrum(&grid, &params)?;
    let mass = effective_mass_closed(&params)?;
    let mut table = Table::new(&["q_i", "E_p", "mean_field", "fluctuation"]);
    for p in points {
        table.push(vec![p.q_i.into(), p.energy.into(), p.mean_field.into(), p.fluctuation.into()]);
    }
    Ok(Report {
        table,
        summary: vec![("M_ef", mass.effective_mass.into()), ("correction", mass.correction.into())],
    })
}

pub fn effective_mass_table(config: &RunConfig) -> Result<Report, Failure> {
    let params = config.params.build()?;
    type Route<'a> = Box<dyn Fn() -> Result<MassResult, Error> + Sync + 'a>;
    let routes: [(&str, Route); 4] = [
        ("closed", Box::new(|| effective_mass_closed(&params))),
        ("quadrature", Box::new(|| effective_mass_quadrature(&params))),
        ("finite_difference_cutoff", Box::new(|| effective_mass_finite_difference(&params, Some(config.cutoff)))),
        ("finite_difference_subtracted", Box::new(|| effective_mass_finite_difference(&params, None))),
    ];
    let results: Vec<MassResult> = routes.par_iter().map(|(_, f)| f()).collect::<Result<_, _>>()?;
    let mut table = Table::new(&["method", "effective_mass", "correction"]);
    for ((name, _), r) in routes.iter().zip(results) {
        table.push(vec![(*name).into(), r.effective_mass.into(), r.correction.into()]);
    }
    let heavy = effective_mass_heavy_limit(&params)?;
    let m_imp = params.impurity_mass();
    table.push(vec!["heavy_limit".into(), heavy.into(), (m_imp / heavy - 1.0).into()]);
    Ok(table.into())
}

pub fn fig1_table(config: &RunConfig) -> Result<Report, Failure> {
    let default = GridConfig { start: 0.01, stop: 100.0, count: 101, spacing: Spacing::Log };
    let grid = config.grid_or(default);
    let rows = sweep(&grid, |x| Ok(vec![x.into(), i0(x)?.into(), i1(x)?.into()]))?;
    let mut table = Table::new(&["x", "I0", "I1"]);
    rows.into_iter().for_each(|r| table.push(r));
    Ok(table.into())
}

/// `Gamma_T` and `Gamma_E` from the box with the slabs summed in parallel.
pub fn parallel_box_rate(q_i: f64, params: &SystemParams, cfg: &BoxOracleConfig) -> Result<RateResult, Error> {
    let lattice = BoxLattice::new(q_i, params, cfg)?;
    let (t, e): (Vec<f64>, Vec<f64>) = (0..lattice.slab_count()).into_par_iter().map(|s| lattice.rate_slab(s)).unzip();
    Ok(RateResult { q_i, gamma_t: pairwise_sum(&t), gamma_e: pairwise_sum(&e), method: Method::Box, est_error: None })
}

/// First-order survival probability with the slabs summed in parallel.
pub fn parallel_survival(q_i: f64, params: &SystemParams, cfg: &BoxOracleConfig, t: f64) -> Result<f64, Error> {
    let lattice = BoxLattice::new(q_i, params, cfg)?;
    let parts: Vec<f64> = (0..lattice.slab_count()).into_par_iter().map(|s| lattice.decay_slab(s, t)).collect();
    Ok(bec_impurity::rates::survival_from_depletion(pairwise_sum(&parts)))
}

pub fn box_oracle_table(config: &RunConfig) -> Result<Report, Failure> {
    let params = config.params.build()?;
    let q = config.box_oracle.q;
    let closed = transition_rate(q, &params)?;
    let mut table = Table::new(&[
        "L",
        "eta",
        "p_cut",
        "gamma_T_box",
        "gamma_T_closed",
        "rel_error_T",
        "gamma_E_box",
        "gamma_E_closed",
        "rel_error_E",
    ]);
    for step in config.box_oracle.steps() {
        let b = parallel_box_rate(q, &params, &step)?;
        let rel = |x: f64, y: f64| if y != 0.0 { Cell::Num(x / y - 1.0) } else { Cell::Empty };
        table.push(vec![
            step.box_length.into(),
            step.broadening.into(),
            step.momentum_cutoff.into(),
            b.gamma_t.into(),
            closed.gamma_t.into(),
            rel(b.gamma_t, closed.gamma_t),
            b.gamma_e.into(),
            closed.gamma_e.into(),
            rel(b.gamma_e, closed.gamma_e),
        ]);
    }
    Ok(Report { table, summary: vec![("q_i", q.into())] })
}
