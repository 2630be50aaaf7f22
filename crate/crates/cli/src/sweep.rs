//! Grid sweeps producing one record per `(alpha, phi, t)` point.

use anyhow::{ensure, Context};
use hyperon_qfim::dephasing::{evolve, kappa_factor, undefined_bounds};
use hyperon_qfim::qfim::{analyze_point, variance_bounds, VarianceBounds};
use hyperon_qfim::state::{parse_presets, preset_by_name, state_with_partials, Parametrization};
use hyperon_qfim::{NoiseModel, PhysicsParams};
use rayon::prelude::*;

use crate::grid::Grid;
use crate::table::{Cell, Table};

/// Output columns of a sweep, in order.
pub const COLUMNS: [&str; 16] = [
    "phi",
    "alpha_psi",
    "beta_psi",
    "gamma_psi",
    "t",
    "kappa",
    "f_aa",
    "f_ap",
    "f_pp",
    "var_sim_alpha",
    "var_sim_phi",
    "var_ind_alpha",
    "var_ind_phi",
    "gamma_ratio",
    "saturation_trace",
    "physical_flag",
];

/// Physicality tolerance used for `physical_flag`.
pub const PHYSICAL_TOL: f64 = 1e-12;

/// Everything reported at one grid point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Row {
    pub phi: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub t: f64,
    pub kappa: f64,
    pub f_aa: f64,
    pub f_ap: f64,
    pub f_pp: f64,
    pub bounds: VarianceBounds<f64>,
    pub saturation: f64,
    pub physical: bool,
}

impl Row {
    pub fn cells(&self) -> Vec<Cell> {
        let b = &self.bounds;
        vec![
            Cell::Num(self.phi),
            Cell::Num(self.alpha),
            Cell::Num(self.beta),
            Cell::Num(self.gamma),
            Cell::Num(self.t),
            Cell::Num(self.kappa),
            Cell::Num(self.f_aa),
            Cell::Num(self.f_ap),
            Cell::Num(self.f_pp),
            Cell::Num(b.var_sim_alpha),
            Cell::Num(b.var_sim_phi),
            Cell::Num(b.var_ind_alpha),
            Cell::Num(b.var_ind_phi),
            Cell::Num(b.gamma_ratio),
            Cell::Num(self.saturation),
            Cell::Int(self.physical as i64),
        ]
    }
}

/// Evaluates one point; failures are recorded as undefined values, not raised.
pub fn compute_row(params: &PhysicsParams, phi: f64, noise: Option<&NoiseModel>, t: f64) -> Row {
    let (beta, gamma) = params.beta_gamma();
    let kappa = noise.map_or(1.0, |m| kappa_factor(t, m));
    let mut row = Row {
        phi,
        alpha: params.alpha,
        beta,
        gamma,
        t,
        kappa,
        f_aa: f64::NAN,
        f_ap: f64::NAN,
        f_pp: f64::NAN,
        bounds: undefined_bounds(),
        saturation: f64::NAN,
        physical: false,
    };
    let Ok((rho0, da0, dp0)) = state_with_partials(params, phi) else {
        return row;
    };
    let (rho, da, dp) = match noise {
        Some(m) => evolve(&rho0, &da0, &dp0, t, m),
        None => (rho0, da0, dp0),
    };
    row.physical = rho.is_physical(PHYSICAL_TOL);
    if let Ok(a) = analyze_point(&rho, &da, &dp) {
        row.f_aa = a.qfim.f_aa;
        row.f_ap = a.qfim.f_ap;
        row.f_pp = a.qfim.f_pp;
        row.bounds = variance_bounds(&a.qfim);
        row.saturation = a.saturation;
    }
    row
}

/// Sweep definition.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    pub params: PhysicsParams,
    pub phi_grid: Grid,
    /// Replaces `params.alpha` point by point when set.
    pub alpha_grid: Option<Grid>,
    /// Requires `noise`; without it the state is evaluated at `t = 0`.
    pub time_grid: Option<Grid>,
    pub noise: Option<NoiseModel>,
}

impl SweepConfig {
    pub fn new(params: PhysicsParams, phi_grid: Grid) -> Self {
        Self { params, phi_grid, alpha_grid: None, time_grid: None, noise: None }
    }

    pub fn validate(&self) -> anyhow::Result<()> {
        for a in self.alphas() {
            ensure!((-1.0..=1.0).contains(&a), "alpha grid value {a} outside [-1, 1]");
        }
        for phi in self.phi_grid.values() {
            ensure!((0.0..=std::f64::consts::PI).contains(&phi), "phi grid value {phi} outside [0, pi]");
        }
        if let Some(tg) = &self.time_grid {
            ensure!(self.noise.is_some(), "--time-grid needs a noise model (--tau and --mu)");
            let ts = tg.values();
            ensure!(ts.iter().all(|&t| t >= 0.0), "times must be non-negative");
            ensure!(ts.windows(2).all(|w| w[1] > w[0]), "times must be strictly increasing");
        }
        Ok(())
    }

    fn alphas(&self) -> Vec<f64> {
        self.alpha_grid.map_or_else(|| vec![self.params.alpha], |g| g.values())
    }

    fn times(&self) -> Vec<f64> {
        self.time_grid.map_or_else(|| vec![0.0], |g| g.values())
    }

    /// `(alpha, phi, t)` in output order: alpha outermost, time innermost.
    pub fn points(&self) -> Vec<(f64, f64, f64)> {
        let (phis, ts) = (self.phi_grid.values(), self.times());
        let mut out = Vec::new();
        for a in self.alphas() {
            for &phi in &phis {
                for &t in &ts {
                    out.push((a, phi, t));
                }
            }
        }
        out
    }
}

/// Evaluates every point in parallel; rows come back in grid order.
pub fn run_rows(cfg: &SweepConfig) -> anyhow::Result<Vec<Row>> {
    cfg.validate()?;
    let params: Vec<PhysicsParams> = cfg
        .alphas()
        .into_iter()
        .map(|a| cfg.params.with_alpha(a))
        .collect::<Result<_, _>>()?;
    let points = cfg.points();
    let per_alpha = points.len() / params.len();
    Ok(points
        .par_iter()
        .enumerate()
        .map(|(k, &(_, phi, t))| compute_row(&params[k / per_alpha], phi, cfg.noise.as_ref(), t))
        .collect())
}

pub fn rows_to_table(rows: &[Row]) -> Table {
    let mut table = Table::new(COLUMNS);
    for r in rows {
        table.push(r.cells());
    }
    table
}

pub fn run_sweep(cfg: &SweepConfig) -> anyhow::Result<Table> {
    Ok(rows_to_table(&run_rows(cfg)?))
}

/// Resolves a channel name against an optional preset file, then the built-in table.
pub fn resolve_channel(name: &str, preset_text: Option<&str>) -> anyhow::Result<PhysicsParams> {
    if let Some(text) = preset_text {
        let entries = parse_presets::<f64>(text).context("reading preset file")?;
        if let Some(e) = entries.into_iter().find(|e| e.name.eq_ignore_ascii_case(name)) {
            return Ok(e.params);
        }
    }
    Ok(preset_by_name(name)?)
}

/// Human-readable description of a parametrization.
pub fn describe(params: &PhysicsParams) -> String {
    match params.mode {
        Parametrization::Constrained { delta_phi } => format!("alpha={} delta_phi={}", params.alpha, delta_phi),
        Parametrization::Free { beta, gamma } => format!("alpha={} beta={} gamma={} (free)", params.alpha, beta, gamma),
    }
}
